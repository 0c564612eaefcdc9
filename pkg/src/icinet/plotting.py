"""Figures written next to the CSV reports: traces, PR curves, edge heatmaps."""

from __future__ import annotations

from pathlib import Path
from typing import Mapping, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

RC = {
    "font.size": 9,
    "axes.labelsize": 9,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "svg.fonttype": "none",
}


def _save(fig, path: Path) -> Path:
    path = Path(path)
    fig.savefig(path, bbox_inches="tight", dpi=150)
    plt.close(fig)
    return path


def plot_trace(traces: Mapping[str, Sequence[float]], path, target: float | None = None,
               n_warmup: int = 0) -> Path:
    """Average-degree trace per chain, with the ground-truth value dashed."""
    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=(5, 3))
        for label, y in traces.items():
            ax.plot(np.arange(n_warmup + 1, n_warmup + 1 + len(y)), y, lw=0.8, label=label)
        if target is not None:
            ax.axhline(target, color="k", ls="--", lw=1, label="target")
        ax.set_xlabel("iteration")
        ax.set_ylabel("average degree |E|/N")
        ax.legend(frameon=False)
        return _save(fig, path)


def plot_pr_curve(curves: Mapping[str, tuple[Sequence[float], Sequence[float], float]], path) -> Path:
    """``curves[label] = (recall, precision, best_f1)``."""
    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=(4, 3.5))
        for label, (rec, prec, best) in curves.items():
            ax.plot(rec, prec, marker=".", ms=3, lw=1, label=f"{label} (best F1 {best:.3f})")
        ax.set_xlabel("recall")
        ax.set_ylabel("precision")
        ax.set_xlim(0, 1.02)
        ax.set_ylim(0, 1.02)
        ax.legend(frameon=False, loc="lower left")
        return _save(fig, path)


def plot_heatmap(marginals: np.ndarray, path, meta=None) -> Path:
    """Grayscale edge-probability matrix with rules at block boundaries."""
    marginals = np.asarray(marginals)
    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=(4.5, 4))
        im = ax.imshow(marginals, cmap="Greys", vmin=0, vmax=1, interpolation="nearest")
        if meta is not None:
            blk = meta.block_index
            for k in np.flatnonzero(np.diff(blk)) + 0.5:
                ax.axhline(k, color="tab:red", lw=0.6)
                ax.axvline(k, color="tab:red", lw=0.6)
        ax.set_xlabel("target node")
        ax.set_ylabel("source node")
        fig.colorbar(im, ax=ax, fraction=0.046, label="edge probability")
        return _save(fig, path)


def plot_sweep(q: Sequence[float], f1: Sequence[float], runtime: Sequence[float], path) -> Path:
    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=(5, 3))
        ax.plot(q, f1, "o-", color="tab:blue")
        ax.set_xlabel("propagation probability q")
        ax.set_ylabel("best F1", color="tab:blue")
        ax2 = ax.twinx()
        ax2.plot(q, runtime, "s--", color="tab:orange")
        ax2.set_ylabel("runtime (s)", color="tab:orange")
        ax2.spines["right"].set_visible(True)
        return _save(fig, path)


def plot_bench(table: Mapping[str, Mapping[str, tuple[float, float]]], path) -> Path:
    """``table[method][experiment] = (mean_time, mean_f1)``; two bar panels."""
    methods = list(table)
    experiments = list(next(iter(table.values())))
    width = 0.8 / max(len(methods), 1)
    x = np.arange(len(experiments))
    with plt.rc_context(RC):
        fig, (ax_t, ax_f) = plt.subplots(1, 2, figsize=(8, 3))
        for k, m in enumerate(methods):
            ax_t.bar(x + k * width, [table[m][e][0] for e in experiments], width, label=m)
            ax_f.bar(x + k * width, [table[m][e][1] for e in experiments], width, label=m)
        for ax, label in ((ax_t, "time (s)"), (ax_f, "F1")):
            ax.set_xticks(x + width * (len(methods) - 1) / 2, experiments)
            ax.set_ylabel(label)
        ax_f.legend(frameon=False, fontsize=7)
        return _save(fig, path)
