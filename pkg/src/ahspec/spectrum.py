"""The asymmetric Huber spectrum: scaling factor eta, the spectrum of the
score process, and fast periodogram approximations.

The spectrum g(w) = eta^2 * h(w), where h is the ordinary power spectrum of
the score process rho_dot(y_t - mu) and eta is the reciprocal of the
expected band weight.  No closed form exists for the models of interest, so
g is estimated either by Monte Carlo averaging of smoothed periodograms or
via the ordinary periodogram of the score process.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass

import numpy as np

from ._util import atomic_write_text
from .loss import AHParams, PsiMode, rho_dot, sample_ahq
from .periodogram import PeriodogramMatrix, compute_ahp, default_smooth_bandwidth, ordinary_pg, smooth
from .regress import SolverConfig, fourier_frequencies
from .simgen import GarchConfig, gen_garch11

__all__ = [
    "AHSMethod",
    "AHSEstimate",
    "rho_dot_process",
    "eta_hat",
    "ahs_via_rho_dot",
    "ahs_via_acf",
    "ahs_theoretical_garch",
]


class AHSMethod(enum.Enum):
    MONTE_CARLO_AVERAGED = "monte_carlo_averaged"
    RHO_DOT_PERIODOGRAM = "rho_dot_periodogram"
    ACF_TRUNCATED = "acf_truncated"


@dataclass
class AHSEstimate:
    """Spectrum estimate over (frequency, alpha), with the per-alpha scaling factors."""

    freqs: np.ndarray  # angular
    alphas: np.ndarray
    values: np.ndarray  # (n_freqs, n_alphas)
    eta: np.ndarray  # per alpha
    mu_hat: np.ndarray  # per alpha
    method: AHSMethod
    n: int = 0
    psi_resolved: float = float("nan")

    def to_dict(self) -> dict:
        return {
            "n": int(self.n),
            "psi": float(self.psi_resolved),
            "alphas": [float(a) for a in self.alphas],
            "freqs": [float(f) for f in np.asarray(self.freqs) / (2 * np.pi)],
            "values": [[float(v) for v in row] for row in np.atleast_2d(self.values.T).T],
            "eta": [float(e) for e in self.eta],
            "mu_hat": [float(m) for m in self.mu_hat],
            "method": self.method.value,
        }

    def to_json(self, path):
        atomic_write_text(path, json.dumps(self.to_dict(), indent=1) + "\n")

    def to_csv(self, path):
        header = "freq," + ",".join(f"alpha_{a:g}" for a in self.alphas)
        rows = [header]
        nf = np.asarray(self.freqs) / (2 * np.pi)
        for i, f in enumerate(nf):
            rows.append(f"{f:.12g}," + ",".join(f"{v:.12g}" for v in self.values[i]))
        atomic_write_text(path, "\n".join(rows) + "\n")


def rho_dot_process(y, p: AHParams) -> np.ndarray:
    """Score series u_t = rho_dot(y_t - mu_hat), mu_hat the sample AHQ.

    Bounded by max(alpha, 1-alpha) * psi; sample mean ~ 0 by the empirical
    normal equation.
    """
    y = np.asarray(y, dtype=float)
    if y.size < 2:
        raise ValueError("need at least 2 samples")
    p = p.resolved(y)
    mu = sample_ahq(y, p)
    return rho_dot(y - mu, p)


def eta_hat(y, p: AHParams) -> float:
    """Empirical scaling factor.

    1/eta = alpha * Pr{0 < y - mu < psi} + (1 - alpha) * Pr{-psi < y - mu < 0},
    with strict inequalities and probabilities replaced by sample fractions.
    """
    y = np.asarray(y, dtype=float)
    p = p.resolved(y)
    mu = sample_ahq(y, p)
    d = y - mu
    band = np.abs(d) < p.psi
    if not np.any(band):
        raise ValueError(
            "empirical band mass Pr{|y - mu| < psi} is zero; "
            "eta is undefined without positive band mass"
        )
    frac_pos = float(np.mean((d > 0) & (d < p.psi)))
    frac_neg = float(np.mean((d > -p.psi) & (d < 0)))
    inv = p.alpha * frac_pos + (1.0 - p.alpha) * frac_neg
    if inv <= 0:
        raise ValueError("expected band weight is zero; eta is undefined")
    return 1.0 / inv


def ahs_via_rho_dot(y, p: AHParams) -> AHSEstimate:
    """Fast spectrum approximation: eta^2 times the ordinary periodogram of the score process."""
    y = np.asarray(y, dtype=float)
    p = p.resolved(y)
    mu = sample_ahq(y, p)
    u = rho_dot(y - mu, p)
    eta = eta_hat(y, p)
    pg = ordinary_pg(u)
    return AHSEstimate(
        freqs=pg.freqs,
        alphas=np.array([p.alpha]),
        values=eta ** 2 * pg.values,
        eta=np.array([eta]),
        mu_hat=np.array([mu]),
        method=AHSMethod.RHO_DOT_PERIODOGRAM,
        n=y.size,
        psi_resolved=p.psi,
    )


def ahs_via_acf(y, p: AHParams) -> AHSEstimate:
    """Truncated-ACF spectrum estimate of the score process.

    h_hat(w) = sum_{|tau| <= L} gamma_hat(tau) cos(w tau) with L = ceil(n^(1/3)),
    then g_hat = eta_hat^2 * h_hat, clipped at zero (the truncated sum can dip
    negative).  Secondary to the periodogram-based routes.
    """
    y = np.asarray(y, dtype=float)
    p = p.resolved(y)
    mu = sample_ahq(y, p)
    u = rho_dot(y - mu, p)
    n = u.size
    L = int(np.ceil(n ** (1.0 / 3.0)))
    uc = u - np.mean(u)
    gam = np.array([np.sum(uc[: n - t] * uc[t:]) / n for t in range(L + 1)])
    omegas = fourier_frequencies(n)
    taus = np.arange(1, L + 1)
    h = gam[0] + 2.0 * np.cos(np.outer(omegas, taus)) @ gam[1:]
    eta = eta_hat(y, p)
    return AHSEstimate(
        freqs=omegas,
        alphas=np.array([p.alpha]),
        values=np.clip(eta ** 2 * h, 0.0, None)[:, None],
        eta=np.array([eta]),
        mu_hat=np.array([mu]),
        method=AHSMethod.ACF_TRUNCATED,
        n=n,
        psi_resolved=p.psi,
    )


def averaged_ahp(
    series_iter,
    alphas,
    psi_mult: float,
    cfg: SolverConfig | None = None,
    smooth_bw: int | None = None,
    normalize_each: bool = False,
) -> PeriodogramMatrix:
    """Average of (optionally smoothed, optionally normalized) periodogram matrices.

    ``series_iter`` yields equal-length series; psi is resolved per series as
    ``psi_mult`` times its sample standard deviation.
    """
    from .periodogram import normalize as _normalize

    acc = None
    count = 0
    psi_sum = 0.0
    for y in series_iter:
        m = compute_ahp(y, alphas, AHParams(0.5, psi_mult, psi_mode=PsiMode.STD_MULTIPLE), cfg)
        if smooth_bw:
            m = smooth(m, smooth_bw)
        if normalize_each:
            m = _normalize(m)
        if acc is None:
            acc = m.values.copy()
            freqs, n = m.freqs, m.n
        else:
            acc += m.values
        psi_sum += m.psi_resolved
        count += 1
    if acc is None:
        raise ValueError("no series supplied")
    return PeriodogramMatrix(
        freqs=freqs,
        alphas=np.atleast_1d(np.asarray(alphas, dtype=float)),
        psi_resolved=psi_sum / count,
        values=acc / count,
        normalized=bool(normalize_each),
        n=n,
    )


def ahs_theoretical_garch(
    garch: GarchConfig,
    p: AHParams,
    reps: int,
    n: int,
    seed: int,
    smooth_bw: int | None = None,
    cfg: SolverConfig | None = None,
) -> AHSEstimate:
    """Monte Carlo spectrum of a GARCH(1,1) model: average of smoothed periodograms.

    Deterministic given the seed; replicate streams are spawned from it.
    """
    if garch.arch + garch.garch >= 1.0:
        raise ValueError("nonstationary GARCH parameters (arch + garch >= 1)")
    bw = smooth_bw or default_smooth_bandwidth(n)
    ss = np.random.SeedSequence(seed)
    children = ss.spawn(reps)

    def series():
        for child in children:
            yield gen_garch11(garch.omega0, garch.arch, garch.garch, n, seed=child)

    if p.psi_mode is not PsiMode.STD_MULTIPLE:
        raise ValueError("ahs_theoretical_garch expects a std-multiple psi")
    m = averaged_ahp(series(), [p.alpha], p.psi, cfg=cfg, smooth_bw=bw)
    return AHSEstimate(
        freqs=m.freqs,
        alphas=m.alphas,
        values=m.values,
        eta=np.array([np.nan]),
        mu_hat=np.array([np.nan]),
        method=AHSMethod.MONTE_CARLO_AVERAGED,
        n=n,
        psi_resolved=m.psi_resolved,
    )
