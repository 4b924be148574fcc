"""Least-squares fit of the quantum Rabi model to labeled transition points.

The optimizer is a damped Levenberg-Marquardt local search from the single
provided guess: steps are accepted only when they lower the cost, so the
objective is non-increasing across accepted iterations by construction,
and the accepted-cost trace is part of the result diagnostics.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import FitConvergenceError, FitRankError, ParameterError
from .rabi import QRMParams, qrm_transitions

PARAM_NAMES = ("omega_r_ghz", "delta_ghz", "ip_na", "g_ghz")


@dataclass
class FitResult:
    """Recovered QRM parameters with uncertainties and diagnostics."""

    omega_r_ghz: float
    delta_ghz: float
    ip_na: float
    g_ghz: float
    sigma: dict[str, float]
    covariance: np.ndarray               # 4x4, fixed parameters zeroed
    residual_rms_ghz: float
    cost_history: list[float]
    n_iterations: int
    converged: bool
    n_points: int
    fixed: tuple[str, ...] = ()
    meta: dict = field(default_factory=dict)

    @property
    def params(self) -> QRMParams:
        return QRMParams(delta_ghz=self.delta_ghz, ip_na=self.ip_na,
                         omega_r_ghz=self.omega_r_ghz, g_ghz=self.g_ghz,
                         nfock=self.meta.get("nfock", 40))

    def to_dict(self) -> dict:
        return {
            "omega_r_GHz": self.omega_r_ghz,
            "Delta_GHz": self.delta_ghz,
            "Ip_nA": self.ip_na,
            "g_GHz": self.g_ghz,
            "sigma": self.sigma,
            "covariance": self.covariance.tolist(),
            "residual_rms_GHz": self.residual_rms_ghz,
            "cost_history": self.cost_history,
            "n_iterations": self.n_iterations,
            "converged": self.converged,
            "n_points": self.n_points,
            "fixed": list(self.fixed),
            "meta": self.meta,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def model_frequencies(params_vec, flux, labels, nfock: int) -> np.ndarray:
    """QRM transition frequencies for (flux, label) pairs; |Ip| is used
    since the spectrum is even in the persistent-current sign."""
    wr, delta, ip, g = params_vec
    p = QRMParams(delta_ghz=abs(delta), ip_na=max(abs(ip), 1e-12),
                  omega_r_ghz=abs(wr), g_ghz=max(abs(g), 1e-12), nfock=nfock)
    curves = qrm_transitions(p, flux)
    out = np.empty(len(flux))
    for lab in set(labels):
        mask = np.asarray(labels) == lab
        out[mask] = curves[lab][mask]
    return out


def _finite_difference_jacobian(fun, x, r0=None, central=False):
    n = len(x)
    if r0 is None:
        r0 = fun(x)
    jac = np.empty((len(r0), n))
    for j in range(n):
        step = 1e-6 * max(abs(x[j]), 1e-3)
        xp = x.copy()
        xp[j] += step
        if central:
            xm = x.copy()
            xm[j] -= step
            jac[:, j] = (fun(xp) - fun(xm)) / (2 * step)
        else:
            jac[:, j] = (fun(xp) - r0) / step
    return jac


def levenberg_marquardt(fun, x0, max_iter=200, lam0=1e-3, xtol=1e-12,
                        gtol=1e-13):
    """Damped least squares with monotone accepted steps.

    Returns (x, accepted_costs, converged). `fun` maps parameters to the
    residual vector; cost is 0.5 * ||r||^2.
    """
    x = np.array(x0, dtype=float)
    r = fun(x)
    cost = 0.5 * float(r @ r)
    lam = lam0
    history = [cost]
    converged = False
    for _ in range(max_iter):
        jac = _finite_difference_jacobian(fun, x, r)
        grad = jac.T @ r
        if np.max(np.abs(grad)) < gtol:
            converged = True
            break
        jtj = jac.T @ jac
        scale = np.diag(np.maximum(np.diag(jtj), 1e-12))
        accepted = False
        step = None
        for _ in range(60):
            try:
                step = np.linalg.solve(jtj + lam * scale, -grad)
            except np.linalg.LinAlgError:
                lam *= 10.0
                continue
            r_new = fun(x + step)
            cost_new = 0.5 * float(r_new @ r_new)
            if cost_new < cost:
                predicted = -float(grad @ step) - 0.5 * float(step @ (jtj @ step))
                rho = (cost - cost_new) / max(predicted, 1e-300)
                lam = max(lam * max(1.0 / 3.0, 1.0 - (2.0 * rho - 1.0) ** 3), 1e-14)
                x = x + step
                r, cost = r_new, cost_new
                history.append(cost)
                accepted = True
                break
            lam *= 4.0
        if not accepted:
            converged = True      # damping exhausted: local minimum
            break
        if np.max(np.abs(step) / np.maximum(np.abs(x), 1e-12)) < xtol:
            converged = True
            break
    return x, history, converged


def fit_qrm(points, guess: QRMParams, fix=(), label_weights=None,
            max_iter: int = 200) -> FitResult:
    """Fit (omega_r, Delta, Ip, g) to labeled transition points.

    Minimizes sum of weight^2 (f_obs - f_model)^2 where f_model comes from
    diagonalizing the QRM at each flux point. Parameters named in `fix`
    are held at their guess value. Deterministic: local search from the
    single provided guess, no randomness.
    """
    points = list(points)
    if any(p.label is None for p in points):
        raise ParameterError("all points must be labeled before fitting")
    flux = np.array([p.flux for p in points])
    freqs = np.array([p.freq_ghz for p in points])
    labels = np.array([p.label for p in points])
    weights = np.array([p.weight for p in points])
    if label_weights:
        for lab, w in label_weights.items():
            weights = np.where(labels == lab, weights * w, weights)

    fix = tuple(fix)
    for name in fix:
        if name not in PARAM_NAMES:
            raise ParameterError(f"unknown parameter {name!r} in fix mask")
    free_idx = [i for i, name in enumerate(PARAM_NAMES) if name not in fix]
    n_free = len(free_idx)
    if len(points) < max(4, n_free) or np.unique(flux).size < 2:
        raise FitRankError(
            f"under-determined fit: {len(points)} points on "
            f"{np.unique(flux).size} flux values for {n_free} free parameters")

    full0 = np.array([guess.omega_r_ghz, guess.delta_ghz, guess.ip_na, guess.g_ghz])
    if not np.all(np.isfinite(full0)):
        raise ParameterError("guess parameters must be finite")
    nfock = guess.nfock

    def residuals_free(x_free):
        full = full0.copy()
        full[free_idx] = x_free
        return weights * (model_frequencies(full, flux, labels, nfock) - freqs)

    x_free, history, converged = levenberg_marquardt(
        residuals_free, full0[free_idx], max_iter=max_iter)
    if not converged:
        raise FitConvergenceError(
            f"fit did not converge within {max_iter} iterations",
            cost_trace=history)

    full = full0.copy()
    full[free_idx] = x_free
    full = np.abs(full)               # spectrum is even in Ip; report magnitudes

    r = residuals_free(full[free_idx])
    jac = _finite_difference_jacobian(residuals_free, full[free_idx], central=True)
    dof = max(len(r) - n_free, 1)
    s2 = float(r @ r) / dof
    try:
        cov_free = s2 * np.linalg.inv(jac.T @ jac)
    except np.linalg.LinAlgError as ex:
        raise FitRankError(f"singular normal equations at the optimum: {ex}") from ex
    cov = np.zeros((4, 4))
    for a, ia in enumerate(free_idx):
        for b, ib in enumerate(free_idx):
            cov[ia, ib] = cov_free[a, b]
    sigma = {name: float(np.sqrt(max(cov[i, i], 0.0)))
             for i, name in enumerate(PARAM_NAMES)}
    plain_resid = model_frequencies(full, flux, labels, nfock) - freqs
    return FitResult(
        omega_r_ghz=float(full[0]), delta_ghz=float(full[1]),
        ip_na=float(full[2]), g_ghz=float(full[3]),
        sigma=sigma, covariance=cov,
        residual_rms_ghz=float(np.sqrt(np.mean(plain_resid**2))),
        cost_history=[float(c) for c in history],
        n_iterations=len(history) - 1,
        converged=converged,
        n_points=len(points),
        fixed=fix,
        meta={"nfock": nfock,
              "labels": sorted(set(labels.tolist()))},
    )
