"""Physical constants and unit helpers.

All spectra and energy-like quantities in this package are ordinary
frequencies (GHz, i.e. E/h); angular frequencies (rad/s) appear only
inside closed-form impedance/coupling formulas and never leak into
returned values.
"""

from scipy import constants as _const

H = _const.h                      # Planck constant, J s
HBAR = _const.hbar                # reduced Planck constant, J s
E_CHARGE = _const.e               # elementary charge, C
KB = _const.k                     # Boltzmann constant, J/K
PHI0 = _const.h / (2 * _const.e)  # magnetic flux quantum, Wb

GHZ = 1e9

# phase prefactor (2*pi/Phi0), 1/Wb; squared it converts (Phi0/2pi)^2 phi^2 / 2L
PHASE_PER_WB = 2 * _const.pi / PHI0


def joule_to_ghz(energy: float) -> float:
    """Energy in joules -> frequency in GHz (E/h)."""
    return energy / H / GHZ


def ghz_to_joule(freq_ghz: float) -> float:
    """Frequency in GHz (E/h) -> energy in joules."""
    return freq_ghz * GHZ * H


def inductive_energy_ghz(inductance_h: float) -> float:
    """(Phi0/2pi)^2 / L expressed in GHz; multiplies phi^2/2 terms."""
    return joule_to_ghz((PHI0 / (2 * _const.pi)) ** 2 / inductance_h)


def charging_energy_ghz(capacitance_f: float) -> float:
    """E_C = e^2/2C expressed in GHz.

    This is the single-junction convention used throughout the package;
    kinetic terms read 4*E_C*n^2.
    """
    return joule_to_ghz(E_CHARGE**2 / (2 * capacitance_f))


def capacitance_from_ec(ec_ghz: float) -> float:
    """Invert E_C = e^2/2C: charging energy in GHz -> capacitance in F."""
    return E_CHARGE**2 / (2 * ghz_to_joule(ec_ghz))
