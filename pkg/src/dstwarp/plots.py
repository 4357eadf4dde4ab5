"""Static SVG figures for shift histograms and correlograms.

Output is byte-stable for identical input (fixed hash salt, no date stamp).
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

_RC = {"svg.hashsalt": "dstwarp", "svg.fonttype": "none"}


def _save(fig, path) -> None:
    fig.savefig(path, format="svg", metadata={"Date": None, "Creator": None})
    plt.close(fig)


def shift_histogram_svg(table, path, interior: bool = False) -> None:
    """One bar panel per horizon, shift on the x axis."""
    rows = list(table)
    with plt.rc_context(_RC):
        fig, axes = plt.subplots(len(rows), 1, figsize=(6, 1.6 * len(rows)), sharex=True, squeeze=False)
        for ax, row in zip(axes[:, 0], rows):
            frac = row.interior_fractions if interior else row.fractions
            ax.bar(np.arange(frac.size), frac, color="tab:blue")
            ax.set_ylim(0, 1)
            ax.set_ylabel(f"t+{row.horizon}h")
        axes[-1, 0].set_xlabel("time shift (h)")
        axes[-1, 0].set_xticks(np.arange(table.max_window + 1))
        fig.tight_layout()
        _save(fig, path)


def correlogram_svg(rows, path, title: str = "", bound: float | None = None) -> None:
    lags = np.array([r.lag for r in rows])
    vals = np.array([r.value for r in rows])
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(6, 3))
        ax.vlines(lags, 0, vals, color="tab:blue")
        ax.plot(lags, vals, "o", color="tab:blue")
        ax.axhline(0, color="black", lw=0.8)
        if bound is not None:
            ax.axhspan(-bound, bound, color="tab:gray", alpha=0.2)
        ax.set_xlabel("lag (h)")
        ax.set_ylim(-1.05, 1.05)
        if title:
            ax.set_title(title)
        fig.tight_layout()
        _save(fig, path)


def lag_plot_svg(pairs, path, lag: int, bins: int = 60) -> None:
    pairs = np.asarray(pairs)
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(4, 4))
        if len(pairs):
            ax.hist2d(pairs[:, 0], pairs[:, 1], bins=bins, cmin=1, cmap="viridis")
        ax.set_xlabel("x(t)")
        ax.set_ylabel(f"x(t+{lag})")
        fig.tight_layout()
        _save(fig, path)
