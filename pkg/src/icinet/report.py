"""Files written by a reconstruction run: marginals, traces, PR curves, figures, JSON summary."""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .evaluation import EvalReport, edge_marginals, export_heatmap, precision_recall_curve
from .network import NetworkMeta, Topology
from .sampler import PosteriorSamples

DEGREE_CONVENTION = "avg_degree = |E| / N (directed edges per node)"


def write_csv(path: Path, header: list[str], rows, comment: str | None = None) -> Path:
    with open(path, "w", newline="") as fh:
        if comment:
            fh.write(f"# {comment}\n")
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)
    return path


def write_json(path: Path, doc: dict) -> Path:
    path.write_text(json.dumps(doc, indent=1, default=_jsonable) + "\n")
    return path


def _jsonable(obj):
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _num(v: float):
    """JSON has no infinity; map non-finite log values to strings."""
    v = float(v)
    return v if math.isfinite(v) else str(v)


def sample_indices(samples: PosteriorSamples) -> np.ndarray:
    """Chain position of each recorded sample (iteration, or accepted count in accepted_only mode)."""
    cfg = samples.config
    warmup = int(cfg.get("warmup", 0))
    thin = int(cfg.get("thinning", 1))
    return warmup + 1 + thin * np.arange(samples.n_recorded)


def write_trace(path: Path, samples: PosteriorSamples) -> Path:
    rows = zip(sample_indices(samples).tolist(), samples.avg_degree.tolist(),
               samples.log_likelihood.tolist(), samples.log_prior.tolist())
    return write_csv(path, ["sample_index", "avg_degree", "log_likelihood", "log_prior"],
                     rows, comment=DEGREE_CONVENTION)


def write_edge_marginals(path: Path, marginals: np.ndarray, mask: np.ndarray) -> Path:
    ii, jj = np.nonzero(mask)
    rows = ((int(i), int(j), f"{marginals[i, j]:.6g}") for i, j in zip(ii, jj))
    return write_csv(path, ["i", "j", "p_ij"], rows)


def write_pr_curve(path: Path, report: EvalReport) -> Path:
    rows = ((f"{p.threshold:.2f}", f"{p.precision:.6f}", f"{p.recall:.6f}", f"{p.f1:.6f}")
            for p in report.pr_curve)
    return write_csv(path, ["threshold", "precision", "recall", "f1"], rows)


def evaluate(marginals: np.ndarray, truth: Topology, pair_mask: np.ndarray) -> dict[str, EvalReport]:
    """Score against the truth over the candidate pairs and over every off-diagonal pair."""
    n = truth.n
    out = {"candidate_pairs": precision_recall_curve(marginals, truth, mask=pair_mask)}
    off_diag = ~np.eye(n, dtype=bool)
    if not np.array_equal(pair_mask, off_diag):
        out["all_pairs"] = precision_recall_curve(marginals, truth, mask=off_diag)
    return out


def write_reconstruction(outdir: Path, samples: PosteriorSamples, meta: NetworkMeta,
                         truth: Topology | None, echo: dict, figures: bool = True) -> dict:
    """Write every output of one chain into ``outdir`` and return the summary dict."""
    outdir = Path(outdir)
    marginals = edge_marginals(samples)
    export_heatmap(marginals, outdir / "marginals.csv", meta, svg=figures)
    write_edge_marginals(outdir / "edge_marginals.csv", marginals, samples.pair_mask)
    write_trace(outdir / "trace.csv", samples)

    summary: dict = {
        "runtime": samples.runtime,
        "n_recorded": samples.n_recorded,
        "n_proposals": samples.n_proposals,
        "n_accepted": samples.n_accepted,
        "n_invalid": samples.n_invalid,
        "acceptance_rate": samples.acceptance_rate,
        "final_log_likelihood": _num(samples.log_likelihood[-1]) if samples.n_recorded else None,
        "degree_convention": DEGREE_CONVENTION,
    }
    reports = evaluate(marginals, truth, samples.pair_mask) if truth is not None and truth.n_edges else {}
    if reports:
        main = reports["candidate_pairs"]
        summary["best_f1"] = main.best_f1
        summary["best_threshold"] = main.best_threshold
        summary["evaluation"] = {k: {"best_f1": r.best_f1, "best_threshold": r.best_threshold}
                                 for k, r in reports.items()}
        summary["truth_avg_degree"] = truth.average_degree()
        write_pr_curve(outdir / "pr_curve.csv", main)
        if "all_pairs" in reports:
            write_pr_curve(outdir / "pr_curve_all_pairs.csv", reports["all_pairs"])
    else:
        summary["best_f1"] = None
        summary["best_threshold"] = None
    summary["config"] = echo
    write_json(outdir / "report.json", summary)

    if figures:
        from .plotting import plot_heatmap, plot_pr_curve, plot_trace
        plot_trace({"chain": samples.avg_degree}, outdir / "trace.png",
                   target=truth.average_degree() if reports else None)
        plot_heatmap(marginals, outdir / "heatmap.png", meta)
        if reports:
            plot_pr_curve({k: ([p.recall for p in r.pr_curve], [p.precision for p in r.pr_curve], r.best_f1)
                           for k, r in reports.items()}, outdir / "pr_curve.png")
    return summary
