import numpy as np
import pytest

from fluxspec import DESIGN_PARAMS, PAPER_FIT
from fluxspec.circuit import CircuitParams


@pytest.fixture(scope="session")
def design_params():
    return DESIGN_PARAMS


@pytest.fixture(scope="session")
def paper_fit():
    return PAPER_FIT


@pytest.fixture(scope="session")
def estimated_params():
    """Device parameters inferred from room/low-temperature measurements."""
    return CircuitParams.create(jc_ua_um2=0.66, ecj_ghz=4.94, alpha=0.53,
                                csh_ff=DESIGN_PARAMS.csh_ff,
                                lr_nh=0.8986, cr_ff=742.3, lc_nh=0.74)


@pytest.fixture(scope="session")
def service_client():
    from fastapi.testclient import TestClient

    from fluxspec.service import app

    with TestClient(app) as client:
        yield client


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)
