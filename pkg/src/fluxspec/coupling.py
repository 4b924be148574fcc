"""Closed-form coupling and resonator estimates for the galvanically
coupled qubit-resonator circuit.

The coupling formula g = xi_R * L_eff * I_p * I_rms / hbar uses the bare
resonator quantities (omega_R, I_rms, Z_R from L_R and C_R alone) and a
dimensionless correction xi_R^2 = omega_R/omega_A from the adiabatic
elimination of the coupler mode. Angular frequencies stay internal; every
returned frequency is in GHz.

Note the footnote symbol collision: the quantity written Delta^2 in the
xi_R expression is a squared angular-frequency difference of the two
oscillator modes, not the qubit gap; it is named delta_mode_sq here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .constants import GHZ, HBAR
from .errors import ParameterError, RegimeError
from .circuit import CircuitParams

TWO_PI = 2.0 * math.pi


def renormalized_resonator(lr_nh: float, lc_nh: float, cr_ff: float) -> tuple[float, float]:
    """Resonator frequency and impedance renormalized by the coupler.

    omega_r/2pi = 1/(2 pi sqrt((L_R+L_c) C_R)) in GHz and
    Z' = sqrt((L_R+L_c)/C_R) in ohms.
    """
    if lr_nh <= 0 or lc_nh < 0 or cr_ff <= 0:
        raise ParameterError("inductances/capacitance must be positive (lc_nh >= 0)")
    ltot = (lr_nh + lc_nh) * 1e-9
    c = cr_ff * 1e-15
    return 1.0 / (TWO_PI * math.sqrt(ltot * c)) / GHZ, math.sqrt(ltot / c)


def g_simple_limit(lc_nh: float, ip_na: float, irms_na: float) -> float:
    """Common small-coupler limit g/2pi = L_c I_p I_rms / h, GHz."""
    return (lc_nh * 1e-9) * (ip_na * 1e-9) * (irms_na * 1e-9) / HBAR / TWO_PI / GHZ


@dataclass(frozen=True)
class CouplingEstimate:
    """Coupling estimate with every intermediate of the xi_R correction."""

    g_ghz: float
    leff_nh: float
    omega_r_bare_ghz: float
    irms_na: float
    z_r_ohm: float
    xi_r: float
    omega_a_ghz: float
    omega_4_ghz: float
    g_tilde_ghz: float
    c_tot_ff: float
    csh_ff: float
    ip_na: float
    simple_limit: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "g_GHz": self.g_ghz,
            "Leff_nH": self.leff_nh,
            "omega_R_bare_GHz": self.omega_r_bare_ghz,
            "Irms_nA": self.irms_na,
            "Z_R_ohm": self.z_r_ohm,
            "xi_R": self.xi_r,
            "omega_A_GHz": self.omega_a_ghz,
            "omega_4_GHz": self.omega_4_ghz,
            "g_tilde_GHz": self.g_tilde_ghz,
            "C_tot_fF": self.c_tot_ff,
            "Csh_fF": self.csh_ff,
            "Ip_nA": self.ip_na,
            "simple_limit": self.simple_limit,
        }


def xi_correction(omega_r_sq: float, omega4_sq: float, g_tilde_sq: float) -> tuple[float, float]:
    """(xi_R, omega_A) in rad/s from the squared mode frequencies.

    omega_A^2 = (omega_R^2 + omega_4^2)/2 - sqrt((delta_mode_sq/2)^2 + g~^4)
    with delta_mode_sq = omega_R^2 - omega_4^2; omega_A^2 <= 0 means the
    coupler mode is not fast and the adiabatic elimination is invalid.
    """
    delta_mode_sq = omega_r_sq - omega4_sq
    omega_a_sq = (0.5 * (omega_r_sq + omega4_sq)
                  - math.sqrt((0.5 * delta_mode_sq) ** 2 + g_tilde_sq**2))
    if omega_a_sq <= 0:
        raise RegimeError(
            "omega_A^2 <= 0: adiabatic elimination of the coupler mode is "
            "not valid for these parameters")
    omega_a = math.sqrt(omega_a_sq)
    return math.sqrt(math.sqrt(omega_r_sq) / omega_a), omega_a


def coupling_estimate(params: CircuitParams, ip_na: float) -> CouplingEstimate:
    """Qubit-resonator coupling from circuit parameters and I_p.

    C_sh enters through C_tot = alpha C_J + C_sh and must be an explicit
    part of `params`; results always report the value used.
    """
    if ip_na < 0:
        raise ParameterError("ip_na must be non-negative")
    lr = params.lr_nh * 1e-9
    lc = params.lc_nh * 1e-9
    cr = params.cr_ff * 1e-15
    c_tot = (params.alpha * params.cj_ff + params.csh_ff) * 1e-15
    if c_tot <= 0:
        raise ParameterError("C_tot = alpha*C_J + C_sh must be positive")

    leff = 1.0 / (1.0 / lr + 1.0 / lc)
    omega_r_bare = 1.0 / math.sqrt(cr * lr)                # rad/s
    irms = math.sqrt(HBAR * omega_r_bare / (2.0 * lr))     # A
    z_r = math.sqrt(lr / cr)

    omega4_sq = 1.0 / (leff * c_tot)
    g_tilde_sq = omega_r_bare / math.sqrt(lr * c_tot)
    xi_r, omega_a = xi_correction(omega_r_bare**2, omega4_sq, g_tilde_sq)

    g_rad = xi_r * leff * (ip_na * 1e-9) * irms / HBAR
    g_ghz = g_rad / TWO_PI / GHZ

    g_simple = g_simple_limit(params.lc_nh, ip_na, irms * 1e9)
    rel = abs(g_ghz - g_simple) / g_simple if g_simple > 0 else math.inf
    simple = {
        "g_GHz": g_simple,
        "relative_difference": rel,
        "agrees": bool(rel < 2e-3),
    }
    return CouplingEstimate(
        g_ghz=g_ghz,
        leff_nh=leff * 1e9,
        omega_r_bare_ghz=omega_r_bare / TWO_PI / GHZ,
        irms_na=irms * 1e9,
        z_r_ohm=z_r,
        xi_r=xi_r,
        omega_a_ghz=omega_a / TWO_PI / GHZ,
        omega_4_ghz=math.sqrt(omega4_sq) / TWO_PI / GHZ,
        g_tilde_ghz=math.sqrt(g_tilde_sq) / TWO_PI / GHZ,
        c_tot_ff=c_tot * 1e15,
        csh_ff=params.csh_ff,
        ip_na=ip_na,
        simple_limit=simple,
    )
