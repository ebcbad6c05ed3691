"""Figure rendering: line plots, alpha-grid heatmaps, and spectrograms.

Figures are written as SVG next to the delimited output.  Matplotlib is
pinned to a deterministic configuration (fixed hashsalt, no timestamps) so
that re-running with the same seed reproduces the files byte for byte.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "ahspec"

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

__all__ = ["save_periodogram_lines", "save_alpha_heatmap", "save_spectrogram_heatmap"]

_SAVEKW = {"format": "svg", "metadata": {"Date": None}}


def save_periodogram_lines(matrix, path, title=""):
    """One line per alpha column against normalized frequency."""
    fig, ax = plt.subplots(figsize=(7, 4))
    f = matrix.norm_freqs
    for j, a in enumerate(matrix.alphas):
        ax.plot(f, matrix.values[:, j], lw=1.0, label=f"alpha={a:g}")
    ax.set_xlabel("frequency (cycles per unit time)")
    ax.set_ylabel("ordinate" + (" (normalized)" if matrix.normalized else ""))
    if title:
        ax.set_title(title)
    if len(matrix.alphas) <= 8:
        ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, **_SAVEKW)
    plt.close(fig)


def save_alpha_heatmap(matrix, path, title=""):
    """Frequency x alpha heatmap of the periodogram matrix."""
    fig, ax = plt.subplots(figsize=(7, 4))
    f = matrix.norm_freqs
    mesh = ax.pcolormesh(
        matrix.alphas, f, matrix.values, shading="nearest", cmap="viridis"
    )
    fig.colorbar(mesh, ax=ax, label="ordinate")
    ax.set_xlabel("alpha")
    ax.set_ylabel("frequency")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, **_SAVEKW)
    plt.close(fig)


def save_spectrogram_heatmap(result, path, title=""):
    """Time (window center) x frequency heatmap of log ordinates."""
    fig, ax = plt.subplots(figsize=(7, 4))
    mesh = ax.pcolormesh(
        np.asarray(result.centers, dtype=float),
        result.norm_freqs,
        result.values.T,
        shading="nearest",
        cmap="viridis",
    )
    fig.colorbar(mesh, ax=ax, label="log ordinate")
    ax.set_xlabel("window center (sample index)")
    ax.set_ylabel("frequency")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, **_SAVEKW)
    plt.close(fig)
