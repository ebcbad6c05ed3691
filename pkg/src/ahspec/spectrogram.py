"""Sliding-window robust periodogram spectrogram for nonstationary series.

Each window of length ``window_len`` (advanced by ``window_len - overlap``)
is analyzed independently: the centering constant and a std-multiple psi are
re-estimated per window, and the log of the window's periodogram column is
stored.  Samples past the last full window are dropped.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from ._util import atomic_write_text
from .loss import AHParams
from .periodogram import compute_ahp, ordinary_pg
from .regress import SolverConfig, fourier_frequencies

__all__ = ["SpectrogramResult", "ahp_spectrogram"]

LOG_FLOOR_REL = 1e-12  # times the per-window mean ordinate, to keep log finite


@dataclass
class SpectrogramResult:
    window_len: int
    hop: int
    centers: np.ndarray  # window-center sample indices (0-based)
    freqs: np.ndarray  # angular
    values: np.ndarray  # (n_windows, n_freqs), log ordinates
    alpha: float
    log_applied: bool = True

    @property
    def norm_freqs(self) -> np.ndarray:
        return np.asarray(self.freqs) / (2.0 * np.pi)

    def to_csv(self, path):
        rows = ["center,freq,log_value"]
        nf = self.norm_freqs
        for i, c in enumerate(self.centers):
            for k, f in enumerate(nf):
                rows.append(f"{int(c)},{f:.12g},{self.values[i, k]:.12g}")
        atomic_write_text(path, "\n".join(rows) + "\n")

    def to_dict(self) -> dict:
        return {
            "window_len": int(self.window_len),
            "hop": int(self.hop),
            "centers": [int(c) for c in self.centers],
            "freqs": [float(f) for f in self.norm_freqs],
            "values": [[float(v) for v in row] for row in self.values],
            "alpha": float(self.alpha),
            "log_applied": bool(self.log_applied),
        }

    def to_json(self, path):
        atomic_write_text(path, json.dumps(self.to_dict(), indent=1) + "\n")


def ahp_spectrogram(
    y,
    window_len: int,
    overlap: int,
    p: AHParams | None,
    cfg: SolverConfig | None = None,
) -> SpectrogramResult:
    """Log-periodogram spectrogram; ``p = None`` computes the ordinary version.

    Windows start at 0, window_len - overlap, ...; the number of windows is
    floor((n - window_len) / hop) + 1.
    """
    y = np.asarray(y, dtype=float)
    if window_len < 16:
        raise ValueError("window_len must be >= 16")
    if not (0 <= overlap < window_len):
        raise ValueError("overlap must satisfy 0 <= overlap < window_len")
    if y.size < window_len:
        raise ValueError("series shorter than one window")
    hop = window_len - overlap
    nwin = (y.size - window_len) // hop + 1
    freqs = fourier_frequencies(window_len)
    values = np.empty((nwin, len(freqs)))
    centers = np.empty(nwin, dtype=int)
    for i in range(nwin):
        start = i * hop
        seg = y[start : start + window_len]
        centers[i] = start + window_len // 2
        if p is None:
            ords = ordinary_pg(seg).values[:, 0]
        else:
            ords = compute_ahp(seg, [p.alpha], p, cfg).values[:, 0]
        floor = LOG_FLOOR_REL * max(float(np.mean(ords)), 1e-300)
        values[i] = np.log(ords + floor)
    return SpectrogramResult(
        window_len=window_len,
        hop=hop,
        centers=centers,
        freqs=freqs,
        values=values,
        alpha=p.alpha if p is not None else 0.5,
    )
