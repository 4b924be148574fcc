"""Four-mode circuit model of a 3-junction flux qubit galvanically coupled
to a lumped-element resonator through a shared inductor.

Mode layout (tensor order 1, 3, 4, 6):
    1, 3 -- large-junction phases, charge basis
    4    -- coupler branch, oscillator basis
    6    -- resonator branch, oscillator basis

The full Hamiltonian, in GHz (E/h), is

    4*E_C [ (n1+n4)^2 + (n3+n4)^2 + n4^2/alpha~ + (C_J/C_R) n6^2 ]
    - E_J cos(phi1) - E_J cos(phi3) - alpha*E_J cos(phi4 - phi1 - phi3 + 2 pi f)
    + (Phi0/2pi)^2 [ phi4^2 / 2L_c + (phi6 + phi4)^2 / 2L_R ] / h

with E_C = e^2/2C_J and alpha~ = alpha + C_sh/C_J. The paper-facing qubit
quantities (gap and persistent current) come from the two-mode reduction
in `qubit_hamiltonian`, which keeps the charge screening of the eliminated
coupler mode and the inductive well correction -(L_p/2) I_q^2.
"""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.linalg import expm

from .constants import (
    GHZ,
    H,
    PHI0,
    capacitance_from_ec,
    charging_energy_ghz,
    ghz_to_joule,
    inductive_energy_ghz,
)
from .errors import ParameterError, TruncationLimitError
from .operators import (
    DIM_CAP,
    OscillatorBasis,
    charge_number,
    charge_shift,
    eigs_hermitian,
    osc_charge,
    osc_phase,
)

# C_sh is not published for the device; this value calibrates the reduced
# two-mode qubit model to the designed 3.57 GHz gap and is reported next to
# every circuit result that depends on it.
ASSUMED_CSH_FF = 10.878

# Back-computed so that Jc = 0.66 uA/um^2 reproduces the design E_J/h
# (93.46 GHz); the physical junction area is not published.
DEFAULT_JUNCTION_AREA_UM2 = 0.2851

TRANSITION_LABELS = ("w01", "w02", "w12", "w03_half", "sideband3")


def critical_current_a(ej_ghz: float) -> float:
    """Josephson critical current I_C = 2*pi*E_J/Phi0 in amperes."""
    return 2 * math.pi * ghz_to_joule(ej_ghz) / PHI0


def ej_from_jc(jc_ua_um2: float, area_um2: float) -> float:
    """E_J/h in GHz from a critical-current density (uA/um^2) and area (um^2)."""
    ic = jc_ua_um2 * 1e-6 * area_um2
    return (PHI0 / (2 * math.pi)) * ic / H / GHZ


@dataclass(frozen=True)
class CircuitParams:
    """Lumped-element and junction parameters of the full circuit.

    Energies are frequencies (GHz = E/h); capacitances fF, inductances nH.
    C_sh has no published value and must be given explicitly.
    """

    ej_ghz: float
    cj_ff: float
    alpha: float
    csh_ff: float
    lr_nh: float
    cr_ff: float
    lc_nh: float
    jc_ua_um2: float | None = None
    junction_area_um2: float | None = None

    def __post_init__(self):
        for name in ("ej_ghz", "cj_ff", "csh_ff", "lr_nh", "cr_ff", "lc_nh"):
            if getattr(self, name) <= 0:
                raise ParameterError(f"{name} must be positive, got {getattr(self, name)}")
        if not 0 < self.alpha <= 1:
            raise ParameterError(f"alpha must be in (0, 1], got {self.alpha}")

    @classmethod
    def create(cls, *, alpha, csh_ff, lr_nh, cr_ff, lc_nh,
               ej_ghz=None, jc_ua_um2=None, junction_area_um2=None,
               cj_ff=None, ecj_ghz=None) -> "CircuitParams":
        """Build params accepting E_J directly or via (Jc, area), and C_J
        directly or via the charging energy E_C = e^2/2C_J."""
        if (cj_ff is None) == (ecj_ghz is None):
            raise ParameterError("give exactly one of cj_ff or ecj_ghz")
        if cj_ff is None:
            if ecj_ghz <= 0:
                raise ParameterError("ecj_ghz must be positive")
            cj_ff = capacitance_from_ec(ecj_ghz) * 1e15
        if ej_ghz is None and jc_ua_um2 is None:
            raise ParameterError("give ej_ghz or jc_ua_um2")
        if ej_ghz is not None and jc_ua_um2 is not None:
            raise ParameterError("give only one of ej_ghz or jc_ua_um2")
        if ej_ghz is None:
            area = junction_area_um2 if junction_area_um2 is not None else DEFAULT_JUNCTION_AREA_UM2
            ej_ghz = ej_from_jc(jc_ua_um2, area)
            return cls(ej_ghz=ej_ghz, cj_ff=cj_ff, alpha=alpha, csh_ff=csh_ff,
                       lr_nh=lr_nh, cr_ff=cr_ff, lc_nh=lc_nh,
                       jc_ua_um2=jc_ua_um2, junction_area_um2=area)
        return cls(ej_ghz=ej_ghz, cj_ff=cj_ff, alpha=alpha, csh_ff=csh_ff,
                   lr_nh=lr_nh, cr_ff=cr_ff, lc_nh=lc_nh)

    @property
    def ec_ghz(self) -> float:
        """Charging energy E_C = e^2/2C_J in GHz."""
        return charging_energy_ghz(self.cj_ff * 1e-15)

    @property
    def alpha_tilde(self) -> float:
        """alpha + C_sh/C_J; effective mass prefactor of the coupler branch."""
        return self.alpha + self.csh_ff / self.cj_ff

    @property
    def leff_nh(self) -> float:
        """Parallel combination of the resonator and coupling inductances."""
        return 1.0 / (1.0 / self.lr_nh + 1.0 / self.lc_nh)

    def describe(self) -> dict:
        return {
            "EJ_GHz": self.ej_ghz, "CJ_fF": self.cj_ff, "EC_GHz": self.ec_ghz,
            "alpha": self.alpha, "Csh_fF": self.csh_ff,
            "alpha_tilde": self.alpha_tilde,
            "LR_nH": self.lr_nh, "CR_fF": self.cr_ff, "Lc_nH": self.lc_nh,
        }


#: design-table parameters; C_sh is the documented assumption
DESIGN_PARAMS = CircuitParams.create(
    ej_ghz=93.46, ecj_ghz=4.94, alpha=0.58, csh_ff=ASSUMED_CSH_FF,
    lr_nh=0.8986, cr_ff=742.3, lc_nh=0.5,
)


@dataclass(frozen=True)
class TruncationSpec:
    """Charge cutoffs for modes 1/3 and oscillator levels for modes 4/6."""

    ncut1: int = 5
    ncut3: int = 5
    n4: int = 10
    n6: int = 8

    def __post_init__(self):
        if self.ncut1 < 4 or self.ncut3 < 4:
            raise ParameterError("charge cutoffs must be >= 4")
        if self.n4 < 4 or self.n6 < 4:
            raise ParameterError("oscillator levels must be >= 4")
        if self.dim > DIM_CAP:
            raise TruncationLimitError(
                f"total dimension {self.dim} exceeds cap {DIM_CAP}")

    @property
    def dim(self) -> int:
        return (2 * self.ncut1 + 1) * (2 * self.ncut3 + 1) * self.n4 * self.n6

    def doubled(self) -> "TruncationSpec":
        return TruncationSpec(2 * self.ncut1, 2 * self.ncut3, 2 * self.n4, 2 * self.n6)


DEFAULT_TRUNCATION = TruncationSpec()


def mode_bases(params: CircuitParams, trunc: TruncationSpec):
    """Oscillator bases for the coupler branch (4) and resonator branch (6).

    Both are the self-consistent quadratic modes of the full Hamiltonian:
    mode 4 sees L_eff = L_R || L_c and capacitance C_J/(2 + 1/alpha~) (the
    full n4^2 coefficient including the kinetic cross terms), mode 6 sees
    L_R + L_c and C_R.
    """
    leff = params.leff_nh * 1e-9
    c4 = params.cj_ff * 1e-15 / (2.0 + 1.0 / params.alpha_tilde)
    z4 = math.sqrt(leff / c4)
    f4 = 1.0 / (2 * math.pi * math.sqrt(leff * c4)) / GHZ
    l6 = (params.lr_nh + params.lc_nh) * 1e-9
    c6 = params.cr_ff * 1e-15
    z6 = math.sqrt(l6 / c6)
    f6 = 1.0 / (2 * math.pi * math.sqrt(l6 * c6)) / GHZ
    return (OscillatorBasis(trunc.n4, f4, z4), OscillatorBasis(trunc.n6, f6, z6))


def build_full_hamiltonian(params: CircuitParams, trunc: TruncationSpec,
                           f: float) -> sp.csr_matrix:
    """Assemble the four-mode circuit Hamiltonian at flux fraction f (GHz).

    The operator is Hermitian by construction; dimension is
    (2 ncut1+1)(2 ncut3+1) n4 n6.
    """
    if not 0.0 <= f <= 1.0:
        raise ParameterError(f"flux fraction must lie in [0, 1], got {f}")
    ec = params.ec_ghz
    ej = params.ej_ghz
    at = params.alpha_tilde
    basis4, basis6 = mode_bases(params, trunc)

    d1, d3 = 2 * trunc.ncut1 + 1, 2 * trunc.ncut3 + 1
    eye1, eye3 = np.eye(d1), np.eye(d3)
    eye4, eye6 = np.eye(trunc.n4), np.eye(trunc.n6)

    def kron4(a, b, c, d):
        out = sp.kron(sp.csr_matrix(a), sp.csr_matrix(b), format="csr")
        out = sp.kron(out, sp.csr_matrix(c), format="csr")
        return sp.kron(out, sp.csr_matrix(d), format="csr")

    n1 = kron4(charge_number(trunc.ncut1), eye3, eye4, eye6)
    n3 = kron4(eye1, charge_number(trunc.ncut3), eye4, eye6)
    n4 = kron4(eye1, eye3, osc_charge(basis4), eye6)
    n6 = kron4(eye1, eye3, eye4, osc_charge(basis6))
    phi4 = kron4(eye1, eye3, osc_phase(basis4), eye6)
    phi6 = kron4(eye1, eye3, eye4, osc_phase(basis6))

    kinetic = 4.0 * ec * (
        (n1 + n4) @ (n1 + n4)
        + (n3 + n4) @ (n3 + n4)
        + (n4 @ n4) / at
        + (params.cj_ff / params.cr_ff) * (n6 @ n6)
    )

    down1 = charge_shift(trunc.ncut1, -1)   # exp(-i phi1)
    down3 = charge_shift(trunc.ncut3, -1)
    cos1 = cos3 = None
    cos1 = 0.5 * (down1 + down1.T)
    cos3 = 0.5 * (down3 + down3.T)
    josephson = -ej * (kron4(cos1, eye3, eye4, eye6) + kron4(eye1, cos3, eye4, eye6))
    # exp(i(phi4 - phi1 - phi3 + 2 pi f)) as a product of single-mode shifts
    disp4 = expm(1j * osc_phase(basis4))
    shift = kron4(down1, down3, disp4, eye6) * np.exp(2j * math.pi * f)
    josephson = josephson - params.alpha * ej * 0.5 * (shift + shift.conj().T)

    el_c = inductive_energy_ghz(params.lc_nh * 1e-9)
    el_r = inductive_energy_ghz(params.lr_nh * 1e-9)
    inductive = 0.5 * el_c * (phi4 @ phi4) + 0.5 * el_r * ((phi6 + phi4) @ (phi6 + phi4))

    return (kinetic + josephson + inductive).tocsr()


@dataclass
class SpectrumTable:
    """Flux sweep with eigenlevels and the labeled transition set (GHz)."""

    flux: np.ndarray
    levels_ghz: np.ndarray            # shape (nflux, k), ascending rows
    transitions_ghz: dict[str, np.ndarray] = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    @staticmethod
    def transition_set(levels_row: np.ndarray) -> dict[str, float]:
        e = levels_row
        return {
            "w01": e[1] - e[0],
            "w02": e[2] - e[0],
            "w12": e[2] - e[1],
            "w03_half": (e[3] - e[0]) / 2.0,
            "sideband3": ((e[3] - e[0]) + (e[1] - e[0])) / 3.0,
        }

    @classmethod
    def from_levels(cls, flux, levels, meta=None) -> "SpectrumTable":
        flux = np.asarray(flux, dtype=float)
        levels = np.asarray(levels, dtype=float)
        if levels.shape[1] < 4:
            raise ParameterError("need at least 4 levels for the labeled transitions")
        trans = {lab: np.empty(len(flux)) for lab in TRANSITION_LABELS}
        for i in range(len(flux)):
            row = cls.transition_set(levels[i])
            for lab in TRANSITION_LABELS:
                trans[lab][i] = row[lab]
        return cls(flux=flux, levels_ghz=levels, transitions_ghz=trans,
                   meta=dict(meta or {}))

    def to_csv(self) -> str:
        k = self.levels_ghz.shape[1]
        buf = io.StringIO()
        for key, val in self.meta.items():
            buf.write(f"# {key} = {val}\n")
        cols = (["flux"] + [f"E{i}_GHz" for i in range(k)]
                + [f"{lab}_GHz" for lab in TRANSITION_LABELS])
        buf.write(",".join(cols) + "\n")
        for i, f in enumerate(self.flux):
            cells = [repr(float(f))]
            cells += [repr(float(x)) for x in self.levels_ghz[i]]
            cells += [repr(float(self.transitions_ghz[lab][i])) for lab in TRANSITION_LABELS]
            buf.write(",".join(cells) + "\n")
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "SpectrumTable":
        meta = {}
        rows = []
        header = None
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                if "=" in line:
                    key, _, val = line[1:].partition("=")
                    meta[key.strip()] = val.strip()
                continue
            if header is None:
                header = line.split(",")
                continue
            rows.append([float(x) for x in line.split(",")])
        if header is None or not rows:
            raise ParameterError("empty spectrum CSV")
        data = np.array(rows)
        k = sum(1 for c in header if c.startswith("E") and c.endswith("_GHz"))
        flux = data[:, 0]
        levels = data[:, 1:1 + k]
        table = cls.from_levels(flux, levels, meta)
        return table

    def to_json_dict(self) -> dict:
        return {
            "flux": self.flux.tolist(),
            "levels_ghz": self.levels_ghz.tolist(),
            "transitions_ghz": {k: v.tolist() for k, v in self.transitions_ghz.items()},
            "meta": self.meta,
        }

    @classmethod
    def from_json_dict(cls, payload: dict) -> "SpectrumTable":
        return cls(
            flux=np.asarray(payload["flux"], dtype=float),
            levels_ghz=np.asarray(payload["levels_ghz"], dtype=float),
            transitions_ghz={k: np.asarray(v, dtype=float)
                             for k, v in payload["transitions_ghz"].items()},
            meta=dict(payload.get("meta", {})),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True)


def _embed_vector(vec, old: TruncationSpec, new: TruncationSpec):
    """Zero-pad an eigenvector from one truncation into a larger one."""
    d1o, d3o = 2 * old.ncut1 + 1, 2 * old.ncut3 + 1
    d1n, d3n = 2 * new.ncut1 + 1, 2 * new.ncut3 + 1
    v = np.asarray(vec).reshape(d1o, d3o, old.n4, old.n6)
    out = np.zeros((d1n, d3n, new.n4, new.n6), dtype=complex)
    o1, o3 = new.ncut1 - old.ncut1, new.ncut3 - old.ncut3
    out[o1:o1 + d1o, o3:o3 + d3o, :old.n4, :old.n6] = v
    return out.ravel()


def spectrum_vs_flux(params: CircuitParams, trunc: TruncationSpec,
                     flux_values, k: int = 6, v0=None) -> SpectrumTable:
    """Diagonalize the full circuit over a flux list; k >= 4 lowest levels.

    Deterministic; consecutive flux points warm-start the iterative solver
    with the previous ground vector.
    """
    flux_values = np.atleast_1d(np.asarray(flux_values, dtype=float))
    if flux_values.size == 0:
        raise ParameterError("flux list must be non-empty")
    if k < 4:
        raise ParameterError("need k >= 4 for the labeled transition set")
    levels = np.empty((flux_values.size, k))
    for i, f in enumerate(flux_values):
        H = build_full_hamiltonian(params, trunc, float(f))
        try:
            vals, vecs = eigs_hermitian(H, k, v0=v0)
        except Exception as ex:
            raise type(ex)(f"flux point f={f}: {ex}") from ex
        levels[i] = vals
        v0 = vecs[:, 0]
    meta = dict(params.describe())
    meta.update({"ncut1": trunc.ncut1, "ncut3": trunc.ncut3,
                 "n4": trunc.n4, "n6": trunc.n6, "levels": k})
    # design-level qubit gap of the reduced model, reported with the C_sh
    # assumption it depends on
    gap_levels = qubit_levels(params, 0.5)
    meta["qubit_gap_GHz"] = float(gap_levels[1] - gap_levels[0])
    return SpectrumTable.from_levels(flux_values, levels, meta)


# ---------------------------------------------------------------------------
# reduced qubit-only model (modes 1 and 3)
# ---------------------------------------------------------------------------

def qubit_hamiltonian(params: CircuitParams, f: float, ncut: int = 10) -> np.ndarray:
    """Two-mode flux-qubit Hamiltonian with the coupler renormalizations (GHz).

    Eliminating the stiff coupler branch screens the charge kinetic term,
    giving 4 E_C [ (1+a~)(n1^2+n3^2) - 2 a~ n1 n3 ] / (1+2 a~), and adds the
    inductive well correction -(L_p/2) I_q^2 with L_p = L_R L_c/(L_R+L_c)
    and I_q = alpha I_C sin(-phi1 - phi3 + 2 pi f).
    """
    if not 0.0 <= f <= 1.0:
        raise ParameterError(f"flux fraction must lie in [0, 1], got {f}")
    at = params.alpha_tilde
    ec, ej = params.ec_ghz, params.ej_ghz
    dim = 2 * ncut + 1
    n = charge_number(ncut)
    n2 = n @ n
    eye = np.eye(dim)
    kin = (4.0 * ec / (1.0 + 2.0 * at)) * (
        (1.0 + at) * (np.kron(n2, eye) + np.kron(eye, n2))
        - 2.0 * at * np.kron(n, n))
    down = charge_shift(ncut, -1)
    cosm = 0.5 * (down + down.T)
    shift = np.kron(down, down) * np.exp(2j * math.pi * f)
    cos3 = 0.5 * (shift + shift.conj().T)
    sin3 = (shift - shift.conj().T) / 2j
    lp = (params.lr_nh * params.lc_nh / (params.lr_nh + params.lc_nh)) * 1e-9
    iq_amp = params.alpha * critical_current_a(ej)
    well_ghz = 0.5 * lp * iq_amp**2 / H / GHZ
    return (kin - ej * (np.kron(cosm, eye) + np.kron(eye, cosm))
            - params.alpha * ej * cos3 - well_ghz * (sin3 @ sin3))


def qubit_current_operator(params: CircuitParams, f: float, ncut: int = 10) -> np.ndarray:
    """I_q = alpha I_C sin(-phi1 - phi3 + 2 pi f) in amperes."""
    down = charge_shift(ncut, -1)
    shift = np.kron(down, down) * np.exp(2j * math.pi * f)
    sin3 = (shift - shift.conj().T) / 2j
    return params.alpha * critical_current_a(params.ej_ghz) * sin3


def qubit_levels(params: CircuitParams, f: float, ncut: int = 10, k: int = 2):
    vals, _ = eigs_hermitian(qubit_hamiltonian(params, f, ncut), k)
    return vals


def qubit_gap_and_ip(params: CircuitParams, ncut: int = 10,
                     flux_window: tuple[float, float] = (0.45, 0.55),
                     slope_step: float = 1e-4) -> tuple[float, float]:
    """Qubit gap Delta (GHz) at f = 0.5 and persistent current I_p (nA).

    Delta is the lowest splitting of the reduced qubit Hamiltonian at the
    sweet spot; I_p is h/2 times the slope of the 0-1 transition versus
    external flux, evaluated at the upper window edge.
    """
    lo, hi = flux_window
    if not lo < 0.5 < hi:
        raise ParameterError("flux window must bracket f = 0.5")
    from .errors import EstimationError
    if hi - 0.5 < 5 * slope_step:
        raise EstimationError(
            f"flux window too narrow to estimate a slope: half-width "
            f"{hi - 0.5} < 5 * step {slope_step}")
    e0 = qubit_levels(params, 0.5, ncut)
    delta = e0[1] - e0[0]
    ep = qubit_levels(params, hi + slope_step, ncut)
    em = qubit_levels(params, hi - slope_step, ncut)
    slope_ghz = ((ep[1] - ep[0]) - (em[1] - em[0])) / (2 * slope_step)
    ip_a = H * abs(slope_ghz) * GHZ / (2 * PHI0)
    return float(delta), float(ip_a * 1e9)


def ip_from_matrix_element(params: CircuitParams, f: float, ncut: int = 10) -> float:
    """|<0| I_q |1>| in nA; second, independent persistent-current estimator."""
    _, vecs = eigs_hermitian(qubit_hamiltonian(params, f, ncut), 2)
    iq = qubit_current_operator(params, f, ncut)
    return float(abs(vecs[:, 0].conj() @ (iq @ vecs[:, 1]))) * 1e9


def adiabatic_phi4(params: CircuitParams, phi1: float, phi3: float,
                   phi6: float, f: float) -> float:
    """Quasi-static coupler phase minimizing the phi4 potential.

    phi4* = (2pi/Phi0)^2 (L_R L_c/(L_R+L_c)) alpha E_J sin(-phi1-phi3+2 pi f)
            - (L_c/(L_R+L_c)) phi6,   dimensionless phases throughout.
    """
    lr, lc = params.lr_nh * 1e-9, params.lc_nh * 1e-9
    lpar = lr * lc / (lr + lc)
    ej_j = ghz_to_joule(params.ej_ghz)
    sin_term = math.sin(-phi1 - phi3 + 2 * math.pi * f)
    return ((2 * math.pi / PHI0) ** 2 * lpar * params.alpha * ej_j * sin_term
            - (lc / (lc + lr)) * phi6)
