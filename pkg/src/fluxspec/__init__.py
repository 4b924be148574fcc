"""fluxspec: spectra, coupling estimates and quantum Rabi fits for a flux
qubit galvanically coupled to a lumped-element resonator through a
superinductor."""

__version__ = "0.1.0"

from .circuit import (            # noqa: F401
    ASSUMED_CSH_FF,
    DEFAULT_JUNCTION_AREA_UM2,
    DEFAULT_TRUNCATION,
    DESIGN_PARAMS,
    CircuitParams,
    SpectrumTable,
    TruncationSpec,
    adiabatic_phi4,
    build_full_hamiltonian,
    qubit_gap_and_ip,
    qubit_hamiltonian,
    spectrum_vs_flux,
)
from .coupling import CouplingEstimate, coupling_estimate, g_simple_limit, renormalized_resonator  # noqa: F401
from .fitting import FitResult, fit_qrm  # noqa: F401
from .materials import (          # noqa: F401
    RTCurve,
    TcResult,
    WireGeometry,
    gral_calibration,
    kinetic_inductance,
    resistivity,
    sheet_inductance,
    tc_from_rt_curve,
)
from .rabi import (               # noqa: F401
    PAPER_FIT,
    QRMParams,
    bs_shift_analytic,
    bs_shift_numeric,
    epsilon,
    g_from_bs_shift,
    jc_hamiltonian,
    qrm_hamiltonian,
)
from .specmap import S21Map, normalize_map  # noqa: F401
from .ridges import TransitionPoint, extract_ridges, label_transitions  # noqa: F401
from .overlay import overlay_export  # noqa: F401
