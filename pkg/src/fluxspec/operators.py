"""Charge-basis and oscillator-basis operators, tensor composition and a
Hermitian eigensolver.

Operators are plain numpy arrays (dense) or scipy.sparse matrices; all are
dimensionless unless noted. Finite bases violate algebraic identities
(cos^2+sin^2=1, [a,a†]=1) on their truncation boundary rows; interior
blocks are exact.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from scipy.linalg import eigh

from .constants import E_CHARGE, HBAR, PHASE_PER_WB
from .errors import EigensolverError, HermiticityError, InvalidBasisError, TruncationLimitError

# Hard cap on composite Hilbert-space dimension; guards accidental explosions.
DIM_CAP = 2_000_000

# dense diagonalization below this dimension, iterative above
_DENSE_LIMIT = 4096
# shift-invert (sparse LU) is affordable below this dimension
_SHIFT_INVERT_LIMIT = 40_000

HERMITICITY_RTOL = 1e-12
ORTHONORMALITY_TOL = 1e-10
RESIDUAL_RTOL = 1e-8


@dataclass(frozen=True)
class ChargeBasis:
    """Charge states n in [-ncut, +ncut]; dim = 2*ncut + 1 (odd, >= 3)."""

    ncut: int

    def __post_init__(self):
        if self.ncut < 1:
            raise InvalidBasisError(f"ncut must be >= 1, got {self.ncut}")

    @property
    def dim(self) -> int:
        return 2 * self.ncut + 1


@dataclass(frozen=True)
class OscillatorBasis:
    """Truncated Fock basis of an LC mode.

    frequency (GHz) and impedance (ohm) define the zero-point amplitudes of
    the dimensionless phase and Cooper-pair-number quadratures.
    """

    nlevels: int
    frequency_ghz: float
    impedance_ohm: float

    def __post_init__(self):
        if self.nlevels < 2:
            raise InvalidBasisError(f"nlevels must be >= 2, got {self.nlevels}")
        if self.frequency_ghz <= 0 or self.impedance_ohm <= 0:
            raise InvalidBasisError("oscillator frequency and impedance must be positive")

    @property
    def phi_zpf(self) -> float:
        """Zero-point amplitude of the dimensionless phase, prop. to sqrt(Z)."""
        return PHASE_PER_WB * np.sqrt(HBAR * self.impedance_ohm / 2.0)

    @property
    def charge_zpf(self) -> float:
        """Zero-point amplitude of the Cooper-pair number."""
        return np.sqrt(HBAR / (2.0 * self.impedance_ohm)) / (2.0 * E_CHARGE)


def charge_number(ncut: int) -> np.ndarray:
    """Diagonal Cooper-pair number operator with entries -ncut ... +ncut."""
    basis = ChargeBasis(ncut)
    return np.diag(np.arange(-basis.ncut, basis.ncut + 1).astype(float))


def charge_shift(ncut: int, steps: int = 1) -> np.ndarray:
    """Unit shift operator exp(i*steps*phi): raises n by `steps` (+-1)."""
    basis = ChargeBasis(ncut)
    if steps not in (-1, 1):
        raise InvalidBasisError("charge_shift supports steps = +-1")
    # exp(+i phi)|n> = |n+1>  ->  entries at [n+1, n]
    return np.eye(basis.dim, k=-steps)


def cos_phi(ncut: int) -> np.ndarray:
    """cos(phi) = (S+ + S-)/2 in the charge basis."""
    up = charge_shift(ncut, +1)
    return 0.5 * (up + up.T)


def sin_phi(ncut: int) -> np.ndarray:
    """sin(phi) = (S+ - S-)/(2i) in the charge basis; Hermitian."""
    up = charge_shift(ncut, +1)
    return (up - up.T) / 2j


def osc_ladder(basis: OscillatorBasis) -> tuple[np.ndarray, np.ndarray]:
    """Annihilation/creation pair: a|n> = sqrt(n)|n-1>."""
    n = basis.nlevels
    a = np.diag(np.sqrt(np.arange(1, n)), 1)
    return a, a.T.copy()


def osc_phase(basis: OscillatorBasis) -> np.ndarray:
    """Dimensionless phase quadrature phi_zpf * (a + a†)."""
    a, adag = osc_ladder(basis)
    return basis.phi_zpf * (a + adag)


def osc_charge(basis: OscillatorBasis) -> np.ndarray:
    """Cooper-pair number quadrature i*n_zpf*(a† - a)."""
    a, adag = osc_ladder(basis)
    return 1j * basis.charge_zpf * (adag - a)


def tensor_embed(factors, sparse: bool | None = None):
    """Kronecker product of the factors in the declared mode order.

    Returns a dense array for small composite dimensions and a CSR matrix
    for large ones (or when any factor is already sparse); `sparse` forces
    the choice. Raises TruncationLimitError beyond DIM_CAP.
    """
    if not factors:
        raise InvalidBasisError("tensor_embed requires at least one factor")
    dims = []
    for op in factors:
        r, c = op.shape
        if r != c:
            raise InvalidBasisError(f"tensor factors must be square, got {op.shape}")
        dims.append(r)
    total = int(np.prod([np.int64(d) for d in dims]))
    if total > DIM_CAP:
        raise TruncationLimitError(
            f"composite dimension {total} exceeds cap {DIM_CAP}")
    if sparse is None:
        sparse = total > _DENSE_LIMIT or any(sp.issparse(op) for op in factors)
    if sparse:
        out = sp.csr_matrix(factors[0])
        for op in factors[1:]:
            out = sp.kron(out, sp.csr_matrix(op), format="csr")
        return out
    out = np.asarray(factors[0])
    for op in factors[1:]:
        out = np.kron(out, np.asarray(op))
    return out


def hermiticity_defect(H) -> float:
    """max|H - H†| relative to max|H| (0 for an exactly Hermitian matrix)."""
    if sp.issparse(H):
        defect = abs(H - H.conj().T).max()
        scale = abs(H).max()
    else:
        defect = np.abs(H - H.conj().T).max()
        scale = np.abs(H).max()
    return float(defect / scale) if scale > 0 else float(defect)


def require_hermitian(H, rtol: float = HERMITICITY_RTOL):
    """Raise HermiticityError when ||H - H†||_max > rtol * ||H||_max."""
    defect = hermiticity_defect(H)
    if defect > rtol:
        raise HermiticityError(
            f"matrix is not Hermitian: relative defect {defect:.3e} > {rtol:.1e}")


def _fix_gauge(vecs: np.ndarray) -> np.ndarray:
    """Rotate each column so its largest-|.| entry is real and positive."""
    for j in range(vecs.shape[1]):
        idx = int(np.argmax(np.abs(vecs[:, j])))
        pivot = vecs[idx, j]
        if pivot != 0:
            vecs[:, j] *= np.conj(pivot) / abs(pivot)
    return vecs


def _rough_ground(H, v0) -> float:
    try:
        val = spla.eigsh(H, k=1, which="SA", v0=v0, tol=1e-3,
                         maxiter=20000, return_eigenvectors=False)
        return float(val[0])
    except (spla.ArpackNoConvergence, spla.ArpackError):
        # Gershgorin lower bound; loose but safe
        d = H.diagonal().real
        absrow = np.asarray(abs(H).sum(axis=1)).ravel()
        return float(np.min(d - (absrow - np.abs(d))))


def eigs_hermitian(H, k: int, v0: np.ndarray | None = None):
    """k lowest eigenpairs of a Hermitian operator, ascending.

    Returns (values, vectors) with values.shape == (k,) and
    vectors.shape == (dim, k); columns orthonormal. Dense LAPACK is used
    for small problems, shift-invert Lanczos for medium ones and plain
    Lanczos (optionally warm-started through `v0`) for large ones. The
    start vector is deterministic, so repeated calls are bit-identical.
    """
    dim = H.shape[0]
    if not (1 <= k <= dim):
        raise InvalidBasisError(f"need 1 <= k <= dim, got k={k}, dim={dim}")
    require_hermitian(H)
    hmax = abs(H).max() if sp.issparse(H) else np.abs(H).max()

    if dim <= _DENSE_LIMIT or k > dim // 3 or dim - k < 3:
        dense = H.toarray() if sp.issparse(H) else np.asarray(H)
        vals, vecs = eigh(dense, subset_by_index=[0, k - 1])
    else:
        Hc = H.tocsc() if sp.issparse(H) else sp.csc_matrix(H)
        if v0 is None:
            v0 = np.full(dim, 1.0 / np.sqrt(dim))
        else:
            v0 = np.asarray(v0)
            if np.iscomplexobj(v0):
                # ARPACK accepts complex v0 for Hermitian problems
                v0 = v0.astype(complex)
        try:
            if dim <= _SHIFT_INVERT_LIMIT:
                rayleigh = float(np.real(np.vdot(v0, Hc @ v0) / np.vdot(v0, v0)))
                rough = min(rayleigh, _rough_ground(Hc, v0))
                vals, vecs = spla.eigsh(Hc, k=k, sigma=rough - 10.0, which="LM", v0=v0)
            else:
                vals, vecs = spla.eigsh(Hc, k=k, which="SA", v0=v0,
                                        ncv=max(40, 2 * k + 20), maxiter=200 * dim)
        except spla.ArpackNoConvergence as ex:
            raise EigensolverError(
                f"eigensolver did not converge: {len(ex.eigenvalues)}/{k} "
                f"eigenvalues at dim={dim}",
                diagnostics={"dim": dim, "k": k,
                             "converged": len(ex.eigenvalues)}) from ex
        except (spla.ArpackError, RuntimeError) as ex:
            raise EigensolverError(
                f"eigensolver failed at dim={dim}: {ex}",
                diagnostics={"dim": dim, "k": k}) from ex
        order = np.argsort(vals)
        vals, vecs = vals[order], vecs[:, order]

    vals = np.real(vals)
    vecs = _fix_gauge(np.asarray(vecs, dtype=complex))

    gram = vecs.conj().T @ vecs
    ortho_defect = np.abs(gram - np.eye(k)).max()
    if ortho_defect > ORTHONORMALITY_TOL:
        raise EigensolverError(
            f"eigenvectors not orthonormal: defect {ortho_defect:.2e}",
            diagnostics={"dim": dim, "k": k})
    resid = np.linalg.norm(H @ vecs - vecs * vals[None, :], axis=0)
    if hmax > 0 and np.any(resid > RESIDUAL_RTOL * hmax):
        raise EigensolverError(
            f"eigen-residual too large: max {resid.max():.2e} "
            f"(limit {RESIDUAL_RTOL * hmax:.2e})",
            diagnostics={"dim": dim, "k": k, "residuals": resid.tolist()})
    return vals, vecs
