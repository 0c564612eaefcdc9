"""Posterior summaries, accuracy against a ground truth, and exact small-case oracles."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .cascade import CascadeDataset
from .likelihood import CascadeLikelihood
from .network import FeasibleSet, NetworkMeta, Topology, check_constraints_full
from .prior import HsbmPrior, hsbm_log_prior
from .sampler import PosteriorSamples

DEFAULT_THRESHOLDS = np.round(np.arange(0, 101) / 100, 2)
ENUMERATION_LIMIT = 20


@dataclass
class PrPoint:
    threshold: float
    precision: float
    recall: float
    f1: float


@dataclass
class EvalReport:
    pr_curve: list[PrPoint]
    best_f1: float
    best_threshold: float
    marginals: np.ndarray = field(repr=False)


def edge_marginals(samples: PosteriorSamples) -> np.ndarray:
    """Fraction of recorded graphs containing each edge."""
    if samples.n_recorded == 0:
        raise ValueError("no recorded samples")
    return samples.edge_counts / samples.n_recorded


def f1_score(precision: float, recall: float) -> float:
    s = precision + recall
    return 2 * precision * recall / s if s > 0 else 0.0


def precision_recall_curve(marginals: np.ndarray, truth: Topology, thresholds=None,
                           mask: np.ndarray | None = None) -> EvalReport:
    """Classify pairs with ``p_ij >= threshold`` as edges and score them.

    ``mask`` restricts the pairs considered (default: every off-diagonal
    pair).  Empty predictions count as precision 1, matching the usual
    convention at the high-threshold end of a PR curve.
    """
    marginals = np.asarray(marginals, dtype=float)
    n = truth.n
    if marginals.shape != (n, n):
        raise ValueError(f"marginals shape {marginals.shape} does not match {n} nodes")
    if mask is None:
        mask = ~np.eye(n, dtype=bool)
    thresholds = DEFAULT_THRESHOLDS if thresholds is None else np.asarray(thresholds, dtype=float)
    p = marginals[mask]
    actual = truth.adj.astype(bool)[mask]
    n_true = int(actual.sum())
    curve = []
    for th in thresholds:
        pred = p >= th
        tp = int(np.sum(pred & actual))
        n_pred = int(pred.sum())
        precision = tp / n_pred if n_pred else 1.0
        recall = tp / n_true if n_true else 1.0
        curve.append(PrPoint(float(th), precision, recall, f1_score(precision, recall)))
    best = max(curve, key=lambda pt: pt.f1)
    return EvalReport(curve, best.f1, best.threshold, marginals)


def average_degree_trace(samples: PosteriorSamples) -> np.ndarray:
    """Per recorded sample ``|E| / N`` (directed edges per node)."""
    if samples.n_recorded == 0:
        raise ValueError("empty trace")
    return np.asarray(samples.avg_degree)


def exact_posterior(meta: NetworkMeta, feasible: FeasibleSet, dataset: CascadeDataset,
                    prior: HsbmPrior, q: float | None = None) -> tuple[list[Topology], np.ndarray]:
    """All constraint-valid graphs over the feasible set with normalized posterior mass.

    Brute force over ``2 ** |S|`` subsets; refuses sets larger than
    ``ENUMERATION_LIMIT`` pairs.
    """
    m = len(feasible)
    if m > ENUMERATION_LIMIT:
        raise ValueError(f"feasible set has {m} pairs; enumeration is limited to {ENUMERATION_LIMIT}")
    lik = CascadeLikelihood(dataset, q)
    graphs, logp = [], []
    pairs = feasible.pairs.tolist()
    for bits in range(2 ** m):
        edges = [pairs[k] for k in range(m) if bits >> k & 1]
        topo = Topology.from_edges(meta.n_nodes, edges, feasible.relation_matrix)
        if not check_constraints_full(topo, meta).valid:
            continue
        ll = lik.naive(topo)
        if ll == -math.inf:
            continue
        graphs.append(topo)
        logp.append(ll + hsbm_log_prior(topo, meta, prior))
    if not graphs:
        raise ValueError("no valid graph explains the data")
    logp = np.array(logp)
    w = np.exp(logp - logp.max())
    return graphs, w / w.sum()


def enumerate_exact_posterior(meta: NetworkMeta, feasible: FeasibleSet, dataset: CascadeDataset,
                              prior: HsbmPrior, q: float | None = None) -> np.ndarray:
    graphs, probs = exact_posterior(meta, feasible, dataset, prior, q)
    out = np.zeros((meta.n_nodes, meta.n_nodes))
    for g, w in zip(graphs, probs):
        out += w * g.adj
    return out


def export_heatmap(marginals: np.ndarray, path: str | Path, meta: NetworkMeta | None = None,
                   svg: bool = True) -> list[Path]:
    """Write ``marginals`` as a dense CSV and, optionally, an SVG heatmap next to it."""
    path = Path(path)
    rows = [",".join(_fmt(v) for v in row) for row in np.asarray(marginals)]
    path.write_text("\n".join(rows) + "\n")
    written = [path]
    if svg:
        from .plotting import plot_heatmap
        svg_path = path.with_name("heatmap.svg") if path.suffix == ".csv" else path.with_suffix(".svg")
        plot_heatmap(marginals, svg_path, meta)
        written.append(svg_path)
    return written


def _fmt(v: float) -> str:
    v = float(v)
    return str(int(v)) if v.is_integer() else f"{v:.6g}"
