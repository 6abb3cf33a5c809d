"""Figure rendering for the report command.

Figures are written as PNG with stripped metadata so repeated runs of
the same pipeline produce byte-identical files.
"""

from __future__ import annotations

import io
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .fileio import atomic_write_bytes

__all__ = ["save_figure", "plot_nu_sweep", "plot_scores"]


def save_figure(fig: plt.Figure, path: str | Path) -> None:
    buf = io.BytesIO()
    fig.savefig(buf, format="png", dpi=120, metadata={"Software": None})
    plt.close(fig)
    atomic_write_bytes(path, buf.getvalue())


def plot_nu_sweep(rows: list[tuple[float, float, float]], path: str | Path) -> None:
    """Worst-set accuracy and support-vector fraction against nu."""

    nus = [r[0] for r in rows]
    crit = [r[1] for r in rows]
    sv = [r[2] for r in rows]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(nus, crit, "o-", color="firebrick", label="min accuracy")
    ax.plot(nus, sv, "s--", color="gray", label="SV fraction")
    ax.set_xscale("log")
    ax.set_xlabel(r"$\nu$")
    ax.set_ylabel("fraction")
    ax.set_ylim(-0.02, 1.05)
    ax.grid(True, alpha=0.3)
    ax.legend(loc="lower left")
    fig.tight_layout()
    save_figure(fig, path)


def plot_scores(
    score_sets: dict[str, np.ndarray], path: str | Path, max_points: int = 2000
) -> None:
    """Scatter of the first two score components, one color per set."""

    fig, ax = plt.subplots(figsize=(6, 5))
    colors = plt.cm.tab10.colors
    for i, (name, scores) in enumerate(score_sets.items()):
        pts = np.atleast_2d(scores)[:max_points]
        y = pts[:, 1] if pts.shape[1] > 1 else np.zeros(len(pts))
        ax.scatter(pts[:, 0], y, s=4, alpha=0.5, label=name, color=colors[i % 10])
    ax.set_xlabel("PC1 score")
    ax.set_ylabel("PC2 score")
    ax.grid(True, alpha=0.3)
    ax.legend(markerscale=3, fontsize=8)
    fig.tight_layout()
    save_figure(fig, path)
