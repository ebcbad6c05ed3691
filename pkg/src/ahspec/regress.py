"""Per-frequency trigonometric asymmetric Huber regression.

At each Fourier frequency the two-parameter convex M-estimation problem

    min_{b1,b2}  sum_t rho(y_t - mu - b1*cos(w t) - b2*sin(w t))

is solved by iteratively reweighted least squares (IRLS) with step-halving,
started from the closed-form OLS coefficients.  The centering constant mu
is the sample AHQ of the whole series, estimated once and shared across
frequencies.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .loss import AHParams, rho, sample_ahq

__all__ = ["SolverConfig", "RegressionFit", "fourier_frequencies", "fit_ahr"]

_MAX_HALVINGS = 30


@dataclass(frozen=True)
class SolverConfig:
    """IRLS stopping and safeguarding knobs."""

    tolerance: float = 1e-8
    grad_tolerance_scale: float = 1e-6  # gradient threshold is scale * n * psi
    max_iter: int = 200
    weight_floor: float = 1e-10

    def __post_init__(self):
        for name in ("tolerance", "grad_tolerance_scale", "weight_floor"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.max_iter <= 0:
            raise ValueError("max_iter must be positive")


@dataclass
class RegressionFit:
    """Solution of the trigonometric regression at one frequency."""

    beta1: float
    beta2: float
    mu: float
    omega: float
    iterations: int
    converged: bool
    final_step: float
    objective_trace: np.ndarray = field(repr=False, default=None)


def fourier_frequencies(n: int) -> np.ndarray:
    """Fourier frequencies 2*pi*k/n for k = 1, ..., ceil(n/2) - 1, all in (0, pi)."""
    if n < 4:
        raise ValueError(f"need n >= 4, got {n}")
    kmax = int(np.ceil(n / 2)) - 1
    k = np.arange(1, kmax + 1)
    return 2.0 * np.pi * k / n


def _irls_weights(r, alpha, psi, floor):
    """w(u) such that w(u)*u = rho_dot(u): the asymmetric Huber IRLS weight."""
    aw = np.where(r < 0, 1.0 - alpha, alpha)
    ar = np.abs(r)
    with np.errstate(divide="ignore"):
        tail = np.where(ar > 0, psi / np.maximum(ar, 1e-300), 1.0)
    w = aw * np.where(ar <= psi, 1.0, tail)
    return np.maximum(w, floor)


def _irls(yc, X, alpha, psi, cfg):
    """IRLS on design X (n x k).  Returns (beta, iters, converged, step, trace)."""
    n = X.shape[0]
    p = AHParams(alpha, psi)
    # OLS warm start; exact solution in the large-psi, alpha=0.5 limit.
    beta = np.linalg.lstsq(X, yc, rcond=None)[0]
    r = yc - X @ beta
    obj = float(np.sum(rho(r, p)))
    trace = [obj]
    grad_tol = cfg.grad_tolerance_scale * n * psi
    converged = False
    step = np.inf
    it = 0
    for it in range(1, cfg.max_iter + 1):
        w = _irls_weights(r, alpha, psi, cfg.weight_floor)
        A = X.T @ (w[:, None] * X)
        b = X.T @ (w * yc)
        try:
            beta_new = np.linalg.solve(A, b)
        except np.linalg.LinAlgError:
            break
        delta = beta_new - beta
        # Step-halving: the IRLS step can overshoot near the kinks.
        cand = beta + delta
        r_cand = yc - X @ cand
        obj_cand = float(np.sum(rho(r_cand, p)))
        halvings = 0
        while obj_cand > obj and halvings < _MAX_HALVINGS:
            delta = 0.5 * delta
            cand = beta + delta
            r_cand = yc - X @ cand
            obj_cand = float(np.sum(rho(r_cand, p)))
            halvings += 1
        if obj_cand > obj:
            # No descent direction left; accept current iterate as-is.
            r_fit = yc - X @ beta
            aw = np.where(r_fit < 0, 1.0 - alpha, alpha)
            grad = X.T @ (aw * np.clip(r_fit, -psi, psi))
            converged = float(np.linalg.norm(grad)) <= grad_tol
            step = float(np.max(np.abs(delta)))
            break
        beta, r, obj = cand, r_cand, obj_cand
        trace.append(obj)
        step = float(np.max(np.abs(delta)))
        if step <= cfg.tolerance:
            converged = True
            break
    else:
        it = cfg.max_iter
    if not converged:
        aw = np.where(r < 0, 1.0 - alpha, alpha)
        grad = X.T @ (aw * np.clip(r, -psi, psi))
        converged = float(np.linalg.norm(grad)) <= grad_tol
    return beta, it, converged, step, np.asarray(trace)


def _rho_colsum(r, alpha, psi):
    """Objective value per column of the residual matrix r (n x q)."""
    aw = np.where(r < 0, 1.0 - alpha, alpha)
    ar = np.abs(r)
    quad = 0.5 * r * r
    lin = psi * (ar - 0.5 * psi)
    return np.sum(aw * np.where(ar <= psi, quad, lin), axis=0)


def _irls_sweep(yc, omegas, alpha, psi, cfg):
    """IRLS for the 2-parameter fit at many frequencies simultaneously.

    Same algorithm and safeguards as the single-frequency solver, run
    column-parallel with per-column step-halving and convergence masks.
    Returns (beta (2 x q), converged (q,)).
    """
    n = yc.size
    omegas = np.asarray(omegas, dtype=float)
    q = omegas.size
    t = np.arange(1, n + 1)
    C = np.cos(np.outer(t, omegas))
    S = np.sin(np.outer(t, omegas))

    def solve_2x2(a11, a12, a22, b1, b2):
        det = a11 * a22 - a12 * a12
        det = np.where(np.abs(det) < 1e-300, 1e-300, det)
        return (a22 * b1 - a12 * b2) / det, (a11 * b2 - a12 * b1) / det

    # OLS warm start.
    b1, b2 = solve_2x2(
        np.sum(C * C, axis=0),
        np.sum(C * S, axis=0),
        np.sum(S * S, axis=0),
        C.T @ yc,
        S.T @ yc,
    )
    beta = np.vstack([b1, b2])
    r = yc[:, None] - C * beta[0] - S * beta[1]
    obj = _rho_colsum(r, alpha, psi)
    grad_tol = cfg.grad_tolerance_scale * n * psi
    converged = np.zeros(q, dtype=bool)
    stalled = np.zeros(q, dtype=bool)
    for _ in range(cfg.max_iter):
        active = ~(converged | stalled)
        if not np.any(active):
            break
        idx = np.flatnonzero(active)
        Ca, Sa = C[:, idx], S[:, idx]
        ra = r[:, idx]
        aw = np.where(ra < 0, 1.0 - alpha, alpha)
        ar = np.abs(ra)
        with np.errstate(divide="ignore"):
            w = aw * np.where(ar <= psi, 1.0, psi / np.maximum(ar, 1e-300))
        w = np.maximum(w, cfg.weight_floor)
        nb1, nb2 = solve_2x2(
            np.sum(w * Ca * Ca, axis=0),
            np.sum(w * Ca * Sa, axis=0),
            np.sum(w * Sa * Sa, axis=0),
            np.sum(w * Ca * yc[:, None], axis=0),
            np.sum(w * Sa * yc[:, None], axis=0),
        )
        delta = np.vstack([nb1, nb2]) - beta[:, idx]
        cand = beta[:, idx] + delta
        r_cand = yc[:, None] - Ca * cand[0] - Sa * cand[1]
        obj_cand = _rho_colsum(r_cand, alpha, psi)
        for _h in range(_MAX_HALVINGS):
            worse = obj_cand > obj[idx]
            if not np.any(worse):
                break
            delta[:, worse] *= 0.5
            cand = beta[:, idx] + delta
            sub = np.flatnonzero(worse)
            r_sub = yc[:, None] - Ca[:, sub] * cand[0, sub] - Sa[:, sub] * cand[1, sub]
            r_cand[:, sub] = r_sub
            obj_cand[sub] = _rho_colsum(r_sub, alpha, psi)
        worse = obj_cand > obj[idx]
        accept = ~worse
        acc = idx[accept]
        beta[:, acc] = cand[:, accept]
        r[:, acc] = r_cand[:, accept]
        obj[acc] = obj_cand[accept]
        step = np.max(np.abs(delta), axis=0)
        converged[idx[accept & (step <= cfg.tolerance)]] = True
        stalled[idx[worse]] = True
    # Columns that stalled or hit max_iter may still satisfy the gradient test.
    rest = np.flatnonzero(~converged)
    if rest.size:
        aw = np.where(r[:, rest] < 0, 1.0 - alpha, alpha)
        score = aw * np.clip(r[:, rest], -psi, psi)
        g1 = np.sum(C[:, rest] * score, axis=0)
        g2 = np.sum(S[:, rest] * score, axis=0)
        converged[rest] = np.hypot(g1, g2) <= grad_tol
    return beta, converged


def fit_ahr(
    y,
    omega: float,
    p: AHParams,
    cfg: SolverConfig | None = None,
    mu: float | None = None,
    include_intercept: bool = False,
) -> RegressionFit:
    """Solve the trigonometric asymmetric Huber regression at one frequency.

    ``mu`` defaults to the sample AHQ of ``y`` (pass it explicitly when
    sweeping frequencies so it is estimated once per series).  With
    ``include_intercept`` a per-frequency intercept is estimated jointly
    instead of relying on the fixed centering alone.
    """
    y = np.asarray(y, dtype=float)
    cfg = cfg or SolverConfig()
    p = p.resolved(y)
    if mu is None:
        mu = sample_ahq(y, p)
    n = y.size
    t = np.arange(1, n + 1)
    c, s = np.cos(omega * t), np.sin(omega * t)
    X = np.column_stack([np.ones(n), c, s]) if include_intercept else np.column_stack([c, s])
    beta, iters, converged, step, trace = _irls(y - mu, X, p.alpha, p.psi, cfg)
    b1, b2 = (beta[1], beta[2]) if include_intercept else (beta[0], beta[1])
    return RegressionFit(
        beta1=float(b1),
        beta2=float(b2),
        mu=float(mu),
        omega=float(omega),
        iterations=iters,
        converged=bool(converged),
        final_step=float(step) if np.isfinite(step) else 0.0,
        objective_trace=trace,
    )
