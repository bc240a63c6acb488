"""Figure rendering for the CLI report paths.

Every report command writes its delimited output first and then, unless
figures are suppressed, renders companion PNGs next to it with matplotlib's
Agg backend (no display required).
"""

from __future__ import annotations

import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

__all__ = ["experiment_figures", "dist_figure"]


def experiment_figures(result, target, base_path) -> list:
    """ECDF-vs-target overlay and the KS trend; returns the written paths."""
    base = pathlib.Path(base_path)
    written = []

    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    lo = min(e.normalized.min() for e in result.entries)
    hi = max(e.normalized.max() for e in result.entries)
    grid = np.linspace(lo - 0.3, hi + 0.3, 400)
    for e in result.entries:
        xs = np.sort(e.normalized)
        ax.step(xs, np.arange(1, len(xs) + 1) / len(xs), where="post",
                lw=1.0, label=f"T={e.t} (KS={e.ks:.3f})")
    ax.plot(grid, target(grid), "k--", lw=1.5, label=result.target_label)
    ax.set_xlabel("normalized fluctuation")
    ax.set_ylabel("CDF")
    ax.set_title(f"{result.config.model}, {result.config.regime} regime")
    ax.legend(loc="best", fontsize=8)
    path = base.with_name(base.name + "_ecdf.png")
    fig.savefig(path, dpi=130, bbox_inches="tight")
    plt.close(fig)
    written.append(path)

    fig, ax = plt.subplots(figsize=(5.0, 4.0))
    ts = [e.t for e in result.entries]
    ax.loglog(ts, [e.ks for e in result.entries], "o-")
    ax.set_xlabel("T")
    ax.set_ylabel("KS distance")
    ax.set_title("convergence toward the limit law")
    ax.grid(True, which="both", alpha=0.3)
    path = base.with_name(base.name + "_ks.png")
    fig.savefig(path, dpi=130, bbox_inches="tight")
    plt.close(fig)
    written.append(path)
    return written


def dist_figure(s_grid, columns: dict, base_path):
    """CDF curves for the `dist` table; returns the written path."""
    base = pathlib.Path(base_path)
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    for label, vals in columns.items():
        ax.plot(s_grid, vals, lw=1.3, label=label)
    ax.set_xlabel("s")
    ax.set_ylabel("CDF")
    ax.legend(loc="best", fontsize=8)
    ax.grid(alpha=0.3)
    path = base.with_name(base.name + "_cdf.png")
    fig.savefig(path, dpi=130, bbox_inches="tight")
    plt.close(fig)
    return path
