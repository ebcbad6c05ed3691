"""Asymmetric Huber loss family and the sample asymmetric Huber quantile.

The loss is quadratic inside the band |u| <= psi and linear outside, with
asymmetric weights: alpha on positive residuals and (1 - alpha) on negative
ones.  It interpolates between the quantile check loss (psi -> 0, up to a
factor of psi) and the asymmetric least-squares loss (psi -> infinity).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "PsiMode",
    "AHParams",
    "rho",
    "rho_dot",
    "rho_ddot",
    "sample_ahq",
]

# Golden-section constants for the 1-D AHQ solve.
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0
_AHQ_MAX_ITER = 200
_AHQ_REL_TOL = 1e-10


class PsiMode(enum.Enum):
    """How the threshold psi was specified."""

    ABSOLUTE = "absolute"
    STD_MULTIPLE = "std_multiple"


@dataclass(frozen=True)
class AHParams:
    """Loss parameters: asymmetry level alpha and threshold psi.

    When ``psi_mode`` is STD_MULTIPLE, ``psi`` is a multiplier and the
    absolute threshold for a given series is psi times its sample standard
    deviation (``resolve_psi``).
    """

    alpha: float
    psi: float
    psi_mode: PsiMode = PsiMode.ABSOLUTE

    def __post_init__(self):
        if not (0.0 < self.alpha < 1.0):
            raise ValueError(f"alpha must be in (0, 1), got {self.alpha}")
        if not (self.psi > 0.0) or not math.isfinite(self.psi):
            raise ValueError(f"psi must be a positive finite real, got {self.psi}")

    def resolve_psi(self, y) -> float:
        """Absolute threshold for the series ``y``."""
        if self.psi_mode is PsiMode.ABSOLUTE:
            return self.psi
        y = np.asarray(y, dtype=float)
        sd = float(np.std(y, ddof=1))
        if sd <= 0.0:
            raise ValueError("cannot resolve a std-multiple psi on a constant series")
        return self.psi * sd

    def resolved(self, y) -> "AHParams":
        """Copy of self with psi made absolute for the series ``y``."""
        if self.psi_mode is PsiMode.ABSOLUTE:
            return self
        return AHParams(self.alpha, self.resolve_psi(y), PsiMode.ABSOLUTE)


def _check_finite(u):
    if not np.all(np.isfinite(u)):
        raise ValueError("loss argument must be finite")


def _asym_weight(u, alpha):
    """|alpha - I(u < 0)|: alpha on u >= 0, (1 - alpha) on u < 0."""
    return np.where(u < 0, 1.0 - alpha, alpha)


def rho(u, p: AHParams):
    """Asymmetric Huber loss.

    Quadratic branch |u| <= psi: |alpha - I(u<0)| * u^2 / 2.
    Linear branch |u| > psi:     |alpha - I(u<0)| * psi * (|u| - psi/2).
    Accepts scalars or arrays.
    """
    u = np.asarray(u, dtype=float)
    _check_finite(u)
    au = np.abs(u)
    w = _asym_weight(u, p.alpha)
    quad = 0.5 * u * u
    lin = p.psi * (au - 0.5 * p.psi)
    out = w * np.where(au <= p.psi, quad, lin)
    return out if out.ndim else float(out)


def rho_dot(u, p: AHParams):
    """First derivative of the loss: the (bounded) influence function.

    Equals |alpha - I(u<0)| * u inside the band and
    |alpha - I(u<0)| * psi * sgn(u) outside; bounded by max(alpha, 1-alpha)*psi.
    """
    u = np.asarray(u, dtype=float)
    _check_finite(u)
    w = _asym_weight(u, p.alpha)
    clipped = np.clip(u, -p.psi, p.psi)
    out = w * clipped
    return out if out.ndim else float(out)


def rho_ddot(u, p: AHParams):
    """Second derivative, returned as the positive IRLS weight.

    alpha on [0, psi), (1 - alpha) on (-psi, 0), 0 for |u| >= psi
    (right-limit convention at the kinks; the magnitude |alpha - I(u<0)|
    is what enters both the IRLS weights and the scaling factor eta).
    """
    u = np.asarray(u, dtype=float)
    _check_finite(u)
    w = _asym_weight(u, p.alpha)
    inside = (u >= -p.psi) & (u < p.psi)
    out = np.where(inside, w, 0.0)
    return out if out.ndim else float(out)


def _ahq_objective(y, mu, p):
    return float(np.sum(rho(y - mu, p)))


def sample_ahq(y, p: AHParams) -> float:
    """Sample asymmetric Huber quantile: minimizer of sum_t rho(y_t - mu).

    The empirical objective is convex in mu, so a golden-section search on
    [min(y), max(y)] suffices.  At the solution the empirical normal
    equation sum_t rho_dot(y_t - mu) = 0 holds to within the search
    tolerance.
    """
    y = np.asarray(y, dtype=float)
    if y.size == 0:
        raise ValueError("sample_ahq requires a nonempty series")
    _check_finite(y)
    p = p.resolved(y) if p.psi_mode is PsiMode.STD_MULTIPLE else p
    lo, hi = float(np.min(y)), float(np.max(y))
    if lo == hi:
        return lo
    tol = _AHQ_REL_TOL * (hi - lo)
    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc = _ahq_objective(y, c, p)
    fd = _ahq_objective(y, d, p)
    for _ in range(_AHQ_MAX_ITER):
        if b - a <= tol:
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = _ahq_objective(y, c, p)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = _ahq_objective(y, d, p)
    return 0.5 * (a + b)
