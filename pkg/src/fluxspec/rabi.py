"""Two-level effective models: quantum Rabi, Jaynes-Cummings and the
Bloch-Siegert shift between them.

All matrices are in GHz (E/h) on a (qubit ⊗ Fock) product space with the
qubit factor first. Level stacks over flux are computed with numpy's
batched eigensolver, so model evaluation over a sweep is a single call.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .constants import GHZ, H, PHI0
from .errors import EigensolverError, ParameterError

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]])
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]])
SIGMA_P = np.array([[0.0, 1.0], [0.0, 0.0]])   # |e><g| with e first
SIGMA_M = SIGMA_P.T


@dataclass(frozen=True)
class QRMParams:
    """Qubit gap, persistent current, dressed resonator frequency, coupling."""

    delta_ghz: float
    ip_na: float
    omega_r_ghz: float
    g_ghz: float
    nfock: int = 40

    def __post_init__(self):
        for name in ("delta_ghz", "ip_na", "omega_r_ghz", "g_ghz"):
            if getattr(self, name) <= 0:
                raise ParameterError(f"{name} must be positive, got {getattr(self, name)}")
        if self.nfock < 4:
            raise ParameterError(f"nfock must be >= 4, got {self.nfock}")

    def with_nfock(self, nfock: int) -> "QRMParams":
        return replace(self, nfock=nfock)


#: parameters of the published experimental fit
PAPER_FIT = QRMParams(delta_ghz=5.707, ip_na=11.619, omega_r_ghz=4.463, g_ghz=0.578)


def epsilon(ip_na: float, phi_ext: float) -> float:
    """Magnetic energy of the qubit, eps/h = 2 I_p (Phi_ext - Phi0/2)/h, GHz."""
    return 2.0 * (ip_na * 1e-9) * (phi_ext - 0.5) * PHI0 / H / GHZ


def _fock_ops(nfock: int):
    a = np.diag(np.sqrt(np.arange(1, nfock)), 1)
    return a, a.T.copy(), np.eye(nfock)


def qrm_hamiltonian(p: QRMParams, phi_ext: float) -> np.ndarray:
    """Quantum Rabi Hamiltonian in the persistent-current basis (GHz)."""
    eps = epsilon(p.ip_na, phi_ext)
    a, adag, eye_f = _fock_ops(p.nfock)
    eye2 = np.eye(2)
    return (-0.5 * (eps * np.kron(SIGMA_Z, eye_f) + p.delta_ghz * np.kron(SIGMA_X, eye_f))
            + p.omega_r_ghz * np.kron(eye2, adag @ a + 0.5 * eye_f)
            + p.g_ghz * np.kron(SIGMA_Z, a + adag))


def jc_hamiltonian(p: QRMParams, phi_ext: float) -> np.ndarray:
    """Jaynes-Cummings Hamiltonian (rotating-wave approximation, GHz).

    Written in the qubit energy basis with mixing angle
    theta = arctan(Delta/eps); theta = pi/2 at the sweet spot.
    """
    eps = epsilon(p.ip_na, phi_ext)
    wq = math.hypot(eps, p.delta_ghz)
    theta = math.atan2(p.delta_ghz, eps)
    a, adag, eye_f = _fock_ops(p.nfock)
    eye2 = np.eye(2)
    return (0.5 * wq * np.kron(SIGMA_Z, eye_f)
            + p.omega_r_ghz * np.kron(eye2, adag @ a + 0.5 * eye_f)
            - p.g_ghz * math.sin(theta) * (np.kron(SIGMA_P, a) + np.kron(SIGMA_M, adag)))


def excitation_number(nfock: int) -> np.ndarray:
    """Conserved excitation operator of the JC model, sigma+ sigma- + a†a."""
    a, adag, eye_f = _fock_ops(nfock)
    return np.kron(SIGMA_P @ SIGMA_M, eye_f) + np.kron(np.eye(2), adag @ a)


def _batched_levels(p: QRMParams, phi_ext, model: str, k: int) -> np.ndarray:
    """Eigenvalue stacks over flux, shape (nflux, k); batched eigvalsh."""
    phi = np.atleast_1d(np.asarray(phi_ext, dtype=float))
    a, adag, eye_f = _fock_ops(p.nfock)
    eye2 = np.eye(2)
    if model == "qrm":
        h0 = (-0.5 * p.delta_ghz * np.kron(SIGMA_X, eye_f)
              + p.omega_r_ghz * np.kron(eye2, adag @ a + 0.5 * eye_f)
              + p.g_ghz * np.kron(SIGMA_Z, a + adag))
        hz = -0.5 * np.kron(SIGMA_Z, eye_f)
        eps = 2.0 * (p.ip_na * 1e-9) * (phi - 0.5) * PHI0 / H / GHZ
        stack = h0[None, :, :] + eps[:, None, None] * hz[None, :, :]
        vals = np.linalg.eigvalsh(stack)
    else:
        eps = 2.0 * (p.ip_na * 1e-9) * (phi - 0.5) * PHI0 / H / GHZ
        wq = np.hypot(eps, p.delta_ghz)
        sin_t = np.sin(np.arctan2(p.delta_ghz, eps))
        kz = 0.5 * np.kron(SIGMA_Z, eye_f)
        kr = p.omega_r_ghz * np.kron(eye2, adag @ a + 0.5 * eye_f)
        kpm = -p.g_ghz * (np.kron(SIGMA_P, a) + np.kron(SIGMA_M, adag))
        stack = (wq[:, None, None] * kz[None, :, :] + kr[None, :, :]
                 + sin_t[:, None, None] * kpm[None, :, :])
        vals = np.linalg.eigvalsh(stack)
    return vals[:, :k]


def qrm_levels(p: QRMParams, phi_ext, k: int = 4) -> np.ndarray:
    return _batched_levels(p, phi_ext, "qrm", k)


def jc_levels(p: QRMParams, phi_ext, k: int = 4) -> np.ndarray:
    return _batched_levels(p, phi_ext, "jc", k)


def transition_frequencies(levels: np.ndarray) -> dict[str, np.ndarray]:
    """Labeled transition set from a (nflux, >=4) level stack."""
    e = levels
    return {
        "w01": e[:, 1] - e[:, 0],
        "w02": e[:, 2] - e[:, 0],
        "w12": e[:, 2] - e[:, 1],
        "w03_half": (e[:, 3] - e[:, 0]) / 2.0,
        "sideband3": ((e[:, 3] - e[:, 0]) + (e[:, 1] - e[:, 0])) / 3.0,
    }


def qrm_transitions(p: QRMParams, phi_ext) -> dict[str, np.ndarray]:
    return transition_frequencies(qrm_levels(p, phi_ext))


def jc_transitions(p: QRMParams, phi_ext) -> dict[str, np.ndarray]:
    return transition_frequencies(jc_levels(p, phi_ext))


def bs_shift_analytic(p: QRMParams, phi_ext: float) -> float:
    """Leading-order Bloch-Siegert shift g^2/(omega_r + omega_q), GHz."""
    wq = math.hypot(epsilon(p.ip_na, phi_ext), p.delta_ghz)
    return p.g_ghz**2 / (p.omega_r_ghz + wq)


def g_from_bs_shift(shift_ghz: float, omega_r_ghz: float, omega_q_ghz: float) -> float:
    """Invert the analytic shift formula for the coupling, GHz."""
    if shift_ghz < 0:
        raise ParameterError("shift must be non-negative")
    return math.sqrt(shift_ghz * (omega_r_ghz + omega_q_ghz))


def bs_shift_numeric(p: QRMParams, phi_ext: float, transition: str = "w01",
                     tol_ghz: float = 1e-6, max_nfock: int = 640) -> float:
    """QRM minus JC transition frequency by diagonalization, GHz.

    The Fock truncation is doubled until the shift changes by less than
    tol_ghz; non-convergence raises EigensolverError. The sign is kept:
    the resonator-like and qubit-like transitions shift in opposite
    directions.
    """
    if transition not in ("w01", "w02", "w12", "w03_half", "sideband3"):
        raise ParameterError(f"unknown transition label {transition!r}")

    def shift_at(nfock: int) -> float:
        pn = p.with_nfock(nfock)
        wq = qrm_transitions(pn, phi_ext)[transition][0]
        wj = jc_transitions(pn, phi_ext)[transition][0]
        return float(wq - wj)

    nfock = p.nfock
    prev = shift_at(nfock)
    while 2 * nfock <= max_nfock:
        nfock *= 2
        cur = shift_at(nfock)
        if abs(cur - prev) < tol_ghz:
            return cur
        prev = cur
    raise EigensolverError(
        f"Bloch-Siegert shift not converged below nfock={max_nfock}",
        diagnostics={"last_shift_ghz": prev, "nfock": nfock})
