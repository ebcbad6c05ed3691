"""Seeded generators for the synthetic models and contamination types.

All generators are pure functions of (parameters, seed); replicate streams
are derived by SeedSequence spawning, so parallel Monte Carlo runs are
order-independent.  Gaussian variates come from numpy's PCG64 generator
(``default_rng``), fixed here so that a given seed reproduces the same
series on any platform.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy.signal import lfilter

from ._util import sample_std

__all__ = [
    "ModelKind",
    "ModelSpec",
    "OutlierKind",
    "OutlierSpec",
    "GarchConfig",
    "gen_ar2",
    "ar2_peak_frequency",
    "gen_hidden",
    "gen_mixture",
    "gen_garch11",
    "gen_white_noise",
    "inject_outliers",
    "generate",
]

DEFAULT_BURN_IN = 500


class ModelKind(enum.Enum):
    AR2 = "ar2"
    HIDDEN_PERIODICITY = "hidden"
    MIXTURE = "mixture"
    GARCH11 = "garch11"
    WHITE_NOISE = "white_noise"


class OutlierKind(enum.Enum):
    SINGLE_POINT = "single_point"
    BURST = "burst"
    EYEBLINK = "eyeblink"


# Contamination support lengths (inclusive index ranges [t*, t* + span]).
_OUTLIER_SPAN = {
    OutlierKind.SINGLE_POINT: 0,
    OutlierKind.BURST: 5,
    OutlierKind.EYEBLINK: 50,
}


@dataclass(frozen=True)
class GarchConfig:
    """GARCH(1,1): sigma_t^2 = omega0 + arch * y_{t-1}^2 + garch * sigma_{t-1}^2."""

    omega0: float = 1e-6
    arch: float = 0.49
    garch: float = 0.49

    def __post_init__(self):
        if self.omega0 <= 0:
            raise ValueError("omega0 must be positive")
        if self.arch < 0 or self.garch < 0 or self.arch + self.garch >= 1:
            raise ValueError("GARCH stationarity requires arch, garch >= 0 and arch + garch < 1")


@dataclass(frozen=True)
class ModelSpec:
    """A named synthetic model plus its parameters, length, and seed."""

    kind: ModelKind
    n: int
    seed: int
    params: dict = None
    burn_in: int = DEFAULT_BURN_IN

    def __post_init__(self):
        if self.n < 8:
            raise ValueError("n must be >= 8")
        if self.burn_in < 0:
            raise ValueError("burn_in must be nonnegative")
        object.__setattr__(self, "params", dict(self.params or {}))


@dataclass(frozen=True)
class OutlierSpec:
    """Contamination recipe: kind, magnitude c (in sample-std units), placement."""

    kind: OutlierKind
    c: float
    t_star: int | None = None  # None -> random placement from `seed`
    seed: int = 0

    def __post_init__(self):
        if self.c <= 0:
            raise ValueError("outlier magnitude c must be positive")


def _rng(seed) -> np.random.Generator:
    return np.random.default_rng(seed)


def _check_ar2_stationary(phi1: float, phi2: float):
    # Stationarity triangle for x_t = phi1 x_{t-1} + phi2 x_{t-2} + e_t.
    if not (phi1 + phi2 < 1 and phi2 - phi1 < 1 and abs(phi2) < 1):
        raise ValueError(f"nonstationary AR(2) coefficients ({phi1}, {phi2})")


def gen_ar2(phi1: float, phi2: float, n: int, burn_in: int = DEFAULT_BURN_IN, seed=0) -> np.ndarray:
    """AR(2) path x_t = phi1*x_{t-1} + phi2*x_{t-2} + e_t with standard Gaussian e."""
    _check_ar2_stationary(phi1, phi2)
    eps = _rng(seed).standard_normal(n + burn_in)
    x = lfilter([1.0], [1.0, -phi1, -phi2], eps)
    return x[burn_in:]


def ar2_peak_frequency(phi1: float, phi2: float) -> float:
    """Angular spectral-peak location arccos(phi1 / (2*sqrt(-phi2))).

    Requires a complex conjugate root pair: phi2 < 0 and
    |phi1 / (2*sqrt(-phi2))| <= 1.
    """
    if phi2 >= 0:
        raise ValueError("peak formula needs phi2 < 0 (complex roots)")
    ratio = phi1 / (2.0 * np.sqrt(-phi2))
    if abs(ratio) > 1:
        raise ValueError("no complex root pair: |phi1 / (2*sqrt(-phi2))| > 1")
    return float(np.arccos(ratio))


def gen_hidden(
    phi1: float,
    phi2: float,
    n: int,
    seed=0,
    b0: float = 1.0,
    b1: float = 0.9,
    b2: float = 1.0,
    f0: float = 0.09,
    f1: float = 0.12,
    burn_in: int = DEFAULT_BURN_IN,
) -> np.ndarray:
    """Amplitude-modulated AR(2): (b0 + b1*cos(w0 t) + b2*sin(w1 t)) * x_t.

    The modulation frequencies are given as normalized frequencies f = w/(2*pi).
    """
    x = gen_ar2(phi1, phi2, n, burn_in=burn_in, seed=seed)
    t = np.arange(1, n + 1)
    env = b0 + b1 * np.cos(2 * np.pi * f0 * t) + b2 * np.sin(2 * np.pi * f1 * t)
    return env * x


def _mix_w1(x):
    return np.where(x < -0.8, 0.75, np.where(x > 0.8, 0.1, -13.0 / 32.0 * x + 0.425))


def _mix_w2(x):
    return np.where(x < -0.4, 0.5, np.where(x > 0.0, 0.0, -1.25 * x))


def gen_mixture(n: int, seed=0, burn_in: int = DEFAULT_BURN_IN) -> np.ndarray:
    """Nonlinear mixture of a lowpass AR(1), a highpass AR(1), and a bandpass AR(2).

    z_t = W1(x1)*x1 + (1 - W1(x1))*x2,  y_t = W2(z)*z + (1 - W2(z))*x3,
    with piecewise-linear mixing functions applied to the raw component
    values.  The three streams are independent, spawned from the master seed.
    """
    if n < 8:
        raise ValueError("n must be >= 8")
    s1, s2, s3 = np.random.SeedSequence(seed).spawn(3)
    x1 = lfilter([1.0], [1.0, -0.8], _rng(s1).standard_normal(n + burn_in))[burn_in:]
    x2 = lfilter([1.0], [1.0, 0.75], _rng(s2).standard_normal(n + burn_in))[burn_in:]
    x3 = lfilter([1.0], [1.0, 0.0, 0.81], _rng(s3).standard_normal(n + burn_in))[burn_in:]
    w1 = _mix_w1(x1)
    z = w1 * x1 + (1.0 - w1) * x2
    w2 = _mix_w2(z)
    return w2 * z + (1.0 - w2) * x3


def gen_garch11(
    omega0: float,
    arch: float,
    garch: float,
    n: int,
    burn_in: int = DEFAULT_BURN_IN,
    seed=0,
) -> np.ndarray:
    """GARCH(1,1) path, recursion started at the stationary variance."""
    GarchConfig(omega0, arch, garch)  # parameter validation
    z = _rng(seed).standard_normal(n + burn_in)
    total = n + burn_in
    y = np.empty(total)
    sigma2 = omega0 / (1.0 - arch - garch)
    y_prev = 0.0
    for t in range(total):
        sigma2 = omega0 + arch * y_prev * y_prev + garch * sigma2
        y_prev = np.sqrt(sigma2) * z[t]
        y[t] = y_prev
    return y[burn_in:]


def gen_white_noise(n: int, seed=0, sigma: float = 1.0) -> np.ndarray:
    """i.i.d. N(0, sigma^2)."""
    return sigma * _rng(seed).standard_normal(n)


def eyeblink_waveform(c: float, sigma: float = 1.0) -> np.ndarray:
    """Eyeblink artifact on 51 samples: a sharp closure lobe and a slower reopening dip.

    Two gamma-density-shaped lobes (shape 3 / scale 4 for the closure, shape
    4 / scale 5 delayed by 12 for the reopening) are combined and then
    rescaled so the maximum is exactly +c*sigma and the minimum exactly
    -0.6*c*sigma.
    """
    s = np.arange(51, dtype=float)
    pos = (s / 8.0) ** 2 * np.exp(-(s - 8.0) / 4.0)  # peak 1 at s = 8
    sd = s - 12.0
    neg = np.where(sd > 0, (sd / 15.0) ** 3 * np.exp(-(sd - 15.0) / 5.0), 0.0)  # peak 1 at s = 27
    w = pos - 0.6 * neg
    out = np.where(w > 0, w * (c * sigma / np.max(w)), w * (0.6 * c * sigma / -np.min(w)))
    return out


def inject_outliers(y, spec: OutlierSpec) -> np.ndarray:
    """Contaminated copy of ``y``; untouched samples are bit-identical.

    Magnitudes scale with c times the sample standard deviation of the input
    series.  Placement is either fixed (``t_star``, 0-based) or drawn
    uniformly from the legal range using the spec's own seed.
    """
    y = np.asarray(y, dtype=float)
    n = y.size
    span = _OUTLIER_SPAN[spec.kind]
    hi = n - 1 - span
    if hi < 0:
        raise ValueError(f"series too short for a {spec.kind.value} outlier")
    if spec.t_star is None:
        t0 = int(_rng(spec.seed).integers(0, hi + 1))
    else:
        t0 = int(spec.t_star)
        if not (0 <= t0 <= hi):
            raise ValueError(f"t_star must be in [0, {hi}] for {spec.kind.value}, got {t0}")
    sigma = sample_std(y)
    out = y.copy()
    if spec.kind is OutlierKind.SINGLE_POINT:
        out[t0] += spec.c * sigma
    elif spec.kind is OutlierKind.BURST:
        out[t0 : t0 + 6] += spec.c * sigma
    else:
        out[t0 : t0 + 51] += eyeblink_waveform(spec.c, sigma)
    return out


def generate(spec: ModelSpec) -> np.ndarray:
    """Dispatch a ModelSpec to the matching generator."""
    k, p = spec.kind, spec.params
    if k is ModelKind.AR2:
        return gen_ar2(p["phi1"], p["phi2"], spec.n, burn_in=spec.burn_in, seed=spec.seed)
    if k is ModelKind.HIDDEN_PERIODICITY:
        return gen_hidden(
            p["phi1"],
            p["phi2"],
            spec.n,
            seed=spec.seed,
            b0=p.get("b0", 1.0),
            b1=p.get("b1", 0.9),
            b2=p.get("b2", 1.0),
            f0=p.get("f0", 0.09),
            f1=p.get("f1", 0.12),
            burn_in=spec.burn_in,
        )
    if k is ModelKind.MIXTURE:
        return gen_mixture(spec.n, seed=spec.seed, burn_in=spec.burn_in)
    if k is ModelKind.GARCH11:
        return gen_garch11(
            p.get("omega0", 1e-6),
            p.get("arch", 0.49),
            p.get("garch", 0.49),
            spec.n,
            burn_in=spec.burn_in,
            seed=spec.seed,
        )
    if k is ModelKind.WHITE_NOISE:
        return gen_white_noise(spec.n, seed=spec.seed, sigma=p.get("sigma", 1.0))
    raise ValueError(f"unknown model kind {k}")
