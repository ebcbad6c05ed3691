"""Fisher's test for periodicity and Monte Carlo power estimation.

The g statistic is the largest periodogram ordinate divided by the sum of
all ordinates.  Under the i.i.d.-exponential null its exact survival
function is the classical alternating sum

    P(G > g) = sum_{j=1}^{floor(1/g)} (-1)^(j-1) C(q, j) (1 - j g)^(q-1).

For robust-periodogram ordinates the exponential law is only asymptotic; a
Monte Carlo null that pushes Gaussian white noise through the full pipeline
is available as an alternative.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ._util import atomic_write_text
from .loss import AHParams, PsiMode
from .periodogram import QP_APPROX_MULT, compute_ahp, ordinary_pg
from .regress import SolverConfig
from .simgen import ModelSpec, OutlierSpec, generate, inject_outliers

__all__ = [
    "FisherResult",
    "EstimatorSpec",
    "PowerTable",
    "fisher_statistic",
    "fisher_pvalue",
    "fisher_test",
    "power_study",
]

# psi multiplier large enough that every residual stays in the quadratic band
EXPECTILE_PSI_MULT = 1e6


@dataclass
class FisherResult:
    g_stat: float
    p_value: float
    q: int
    argmax_freq: float
    reject: dict = field(default_factory=dict)  # level -> bool


def fisher_statistic(ordinates) -> tuple[float, int]:
    """(max/sum, argmax index); ties broken toward the smallest index."""
    x = np.asarray(ordinates, dtype=float)
    if x.size == 0:
        raise ValueError("ordinates must be nonempty")
    total = float(np.sum(x))
    if total <= 0:
        raise ValueError("ordinates must not be all zero")
    idx = int(np.argmax(x))
    return float(x[idx] / total), idx


def fisher_pvalue(g: float, q: int) -> float:
    """Exact null survival probability P(G > g) for q i.i.d. exponential ordinates."""
    if q < 1:
        raise ValueError("q must be >= 1")
    if not (1.0 / q <= g <= 1.0 + 1e-12):
        raise ValueError(f"g must lie in [1/q, 1], got {g} with q={q}")
    jmax = min(q, int(math.floor(1.0 / g)))
    terms = []
    for j in range(1, jmax + 1):
        base = 1.0 - j * g
        if base <= 0.0:
            continue
        terms.append((-1.0) ** (j - 1) * math.comb(q, j) * base ** (q - 1))
    return min(1.0, max(0.0, math.fsum(terms)))


def fisher_test(ordinates, freqs, levels=(0.05,)) -> FisherResult:
    """Run Fisher's test on a set of periodogram ordinates."""
    g, idx = fisher_statistic(ordinates)
    q = len(np.asarray(ordinates))
    p = fisher_pvalue(g, q)
    freqs = np.asarray(freqs, dtype=float)
    return FisherResult(
        g_stat=g,
        p_value=p,
        q=q,
        argmax_freq=float(freqs[idx]),
        reject={float(lv): p <= lv for lv in levels},
    )


@dataclass(frozen=True)
class EstimatorSpec:
    """A periodogram estimator: kind plus (alpha, psi-multiplier) where relevant.

    Kinds: ``ahp`` (asymmetric Huber), ``pg`` (ordinary), ``ep`` (expectile,
    psi effectively infinite), ``hp`` (Huber, alpha = 0.5), ``qp-approx``
    (tiny-band quantile approximation).
    """

    kind: str
    alpha: float = 0.5
    psi_mult: float = 1.345

    _KINDS = ("ahp", "pg", "ep", "hp", "qp-approx")

    def __post_init__(self):
        if self.kind not in self._KINDS:
            raise ValueError(f"estimator kind must be one of {self._KINDS}, got {self.kind!r}")
        if not (0 < self.alpha < 1):
            raise ValueError("alpha must be in (0, 1)")
        if self.psi_mult <= 0:
            raise ValueError("psi_mult must be positive")

    @property
    def label(self) -> str:
        if self.kind == "pg":
            return "pg"
        if self.kind == "ep":
            return f"ep_a{self.alpha:g}"
        if self.kind == "qp-approx":
            return f"qp_a{self.alpha:g}"
        return f"{self.kind}_a{self.alpha:g}_psi{self.psi_mult:g}"

    def effective_params(self) -> AHParams | None:
        """The (alpha, psi-multiplier) pair actually fitted; None for the FFT path."""
        if self.kind == "pg":
            return None
        if self.kind == "ep":
            return AHParams(self.alpha, EXPECTILE_PSI_MULT, PsiMode.STD_MULTIPLE)
        if self.kind == "qp-approx":
            return AHParams(self.alpha, QP_APPROX_MULT, PsiMode.STD_MULTIPLE)
        alpha = 0.5 if self.kind == "hp" else self.alpha
        return AHParams(alpha, self.psi_mult, PsiMode.STD_MULTIPLE)

    def ordinates(self, y, cfg: SolverConfig | None = None) -> np.ndarray:
        p = self.effective_params()
        if p is None:
            return ordinary_pg(y).values[:, 0]
        m = compute_ahp(y, [p.alpha], p, cfg)
        return m.values[:, 0]


@dataclass
class PowerTable:
    """Detection probabilities per (estimator, significance level)."""

    estimators: list  # labels
    levels: list
    pd: np.ndarray  # (n_estimators, n_levels)
    se: np.ndarray
    reps: int
    scenario: str = ""

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "reps": int(self.reps),
            "levels": [float(lv) for lv in self.levels],
            "estimators": list(self.estimators),
            "pd": [[float(v) for v in row] for row in self.pd],
            "se": [[float(v) for v in row] for row in self.se],
        }

    def to_json(self, path):
        atomic_write_text(path, json.dumps(self.to_dict(), indent=1) + "\n")

    def to_csv(self, path):
        rows = ["scenario,level," + ",".join(self.estimators)]
        for j, lv in enumerate(self.levels):
            cells = ",".join(f"{self.pd[i, j]:.4f}" for i in range(len(self.estimators)))
            rows.append(f"{self.scenario},{lv:g},{cells}")
        atomic_write_text(path, "\n".join(rows) + "\n")


def _replicate_pvalues(model, outlier, estimators, cfg, rep_seeds, threads):
    def one(child):
        series_seed, place_seed = child.spawn(2)
        spec = ModelSpec(model.kind, model.n, series_seed, model.params, model.burn_in)
        y = generate(spec)
        if outlier is not None:
            y = inject_outliers(
                y,
                OutlierSpec(outlier.kind, outlier.c, outlier.t_star, place_seed),
            )
        out = np.empty(len(estimators))
        for k, est in enumerate(estimators):
            ords = est.ordinates(y, cfg)
            g, _ = fisher_statistic(ords)
            out[k] = fisher_pvalue(g, len(ords))
        return out

    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            results = list(ex.map(one, rep_seeds))
    else:
        results = [one(c) for c in rep_seeds]
    return np.vstack(results)  # (reps, n_estimators)


def power_study(
    model: ModelSpec,
    estimators,
    reps: int,
    levels=(0.01, 0.05),
    seed: int = 0,
    outlier: OutlierSpec | None = None,
    cfg: SolverConfig | None = None,
    threads: int = 1,
    scenario: str = "",
) -> PowerTable:
    """Monte Carlo probability of detection for each estimator at each level.

    Each replicate draws a fresh series (and random outlier placement) from a
    child of the master seed, so results are reproducible and independent of
    the thread count.
    """
    if reps < 1:
        raise ValueError("reps must be >= 1")
    levels = [float(lv) for lv in levels]
    if any(not (0 < lv < 1) for lv in levels):
        raise ValueError("levels must lie in (0, 1)")
    estimators = list(estimators)
    if not estimators:
        raise ValueError("at least one estimator is required")
    rep_seeds = np.random.SeedSequence(seed).spawn(reps)
    pvals = _replicate_pvalues(model, outlier, estimators, cfg, rep_seeds, threads)
    pd = np.empty((len(estimators), len(levels)))
    for j, lv in enumerate(levels):
        pd[:, j] = np.mean(pvals <= lv, axis=0)
    se = np.sqrt(pd * (1.0 - pd) / reps)
    return PowerTable(
        estimators=[e.label for e in estimators],
        levels=levels,
        pd=pd,
        se=se,
        reps=reps,
        scenario=scenario,
    )
