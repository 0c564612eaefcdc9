"""Command-line pipeline: generate networks, simulate cascades, reconstruct, sweep q, benchmark.

Exit codes: 0 success, 1 benchmark ordering check failed, 2 usage error,
3 inconsistent data or configuration, 4 internal invariant breach.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import shutil
import sys
import tempfile
import time
from contextlib import contextmanager
from pathlib import Path

import numpy as np

from . import __version__
from .cascade import CascadeError, generate_dataset, load_dataset, save_dataset
from .evaluation import edge_marginals, precision_recall_curve
from .network import (NetworkError, NetworkMeta, build_feasible_set, check_constraints_full,
                      load_network, save_network)
from .prior import HsbmPrior, PriorError
from .report import write_csv, write_json, write_reconstruction
from .sampler import (LIKELIHOODS, METHODS, PROPOSALS, RECORD_MODES, SAMPLERS, VALIDATIONS,
                      ChainError, SamplerConfig, run_chain)
from .seeding import SEED_ENV, resolve_seed, substream_seed
from .synth import STANDARD_BLOCKS, STANDARD_INTERDEPS, GenConfig, generate_icin

log = logging.getLogger("icinet")

EXIT_OK, EXIT_ORDER, EXIT_USAGE, EXIT_DATA, EXIT_INTERNAL = 0, 1, 2, 3, 4
DATA_ERRORS = (NetworkError, CascadeError, PriorError, FileNotFoundError, json.JSONDecodeError,
               ValueError, KeyError)


class UsageError(Exception):
    pass


# ----------------------------------------------------------------------------
# argument helpers
# ----------------------------------------------------------------------------


def parse_blocks(text: str, names: list[str] | None = None) -> list[tuple[str, int, int, int]]:
    """``"3x2,3,5"`` -> three blocks of (2 supply, 3 transmission, 5 demand).

    Several groups join with ``+``: ``"2,3,5+1,2,4"``.
    """
    blocks: list[tuple[int, int, int]] = []
    for group in text.split("+"):
        group = group.strip()
        reps = 1
        if "x" in group:
            head, group = group.split("x", 1)
            try:
                reps = int(head)
            except ValueError:
                raise UsageError(f"bad repeat count in --blocks {text!r}") from None
        parts = group.split(",")
        if len(parts) != 3:
            raise UsageError(f"--blocks needs supply,transmission,demand counts per block, got {group!r}")
        try:
            counts = tuple(int(p) for p in parts)
        except ValueError:
            raise UsageError(f"non-integer count in --blocks {text!r}") from None
        if reps < 1 or min(counts) < 0:
            raise UsageError(f"counts in --blocks must be non-negative, got {text!r}")
        blocks.extend([counts] * reps)
    if names is None:
        default = [b[0] for b in STANDARD_BLOCKS]
        names = [default[k] if k < len(default) else f"block{k}" for k in range(len(blocks))]
    if len(names) != len(blocks):
        raise UsageError(f"{len(names)} block names for {len(blocks)} blocks")
    return [(nm, *c) for nm, c in zip(names, blocks)]


def default_interdeps(names: list[str]) -> list[str]:
    """Water/power/gas dependencies when those blocks exist, else a demand->supply ring."""
    known = [s for s in STANDARD_INTERDEPS
             if all(part.split(":")[0] in names for part in s.split("->"))]
    if known:
        return known
    if len(names) < 2:
        return []
    ring = [(names[k], names[(k + 1) % len(names)]) for k in range(len(names))]
    if len(names) == 2:
        ring = ring[:1]
    return [f"{a}:demand->{b}:supply" for a, b in ring]


def parse_q_values(text: str) -> list[float]:
    """``"0.1:0.9:0.1"`` (inclusive range) or ``"0.2,0.4"``."""
    try:
        if ":" in text:
            lo, hi, step = (float(v) for v in text.split(":"))
            n = int(round((hi - lo) / step)) + 1
            values = [round(lo + k * step, 10) for k in range(n)]
        else:
            values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"cannot parse q values {text!r}") from None
    if not values or any(not 0 < v <= 1 for v in values):
        raise UsageError(f"q values must lie in (0, 1], got {text!r}")
    return values


def parse_int_list(text: str, flag: str) -> list[int]:
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"{flag} expects comma-separated integers, got {text!r}") from None
    if not values or min(values) < 1:
        raise UsageError(f"{flag} values must be positive")
    return values


# ----------------------------------------------------------------------------
# output helpers
# ----------------------------------------------------------------------------


def atomic_write(path: Path, write) -> Path:
    """Call ``write(tmp_path)`` and move the result into place."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    os.close(fd)
    try:
        write(Path(tmp))
        os.replace(tmp, path)
    finally:
        if os.path.exists(tmp):
            os.unlink(tmp)
    return path


@contextmanager
def atomic_dir(path: Path, overwrite: bool):
    """Yield a scratch directory that replaces ``path`` only if the block succeeds."""
    path = Path(path)
    if path.exists() and not path.is_dir():
        raise NetworkError(f"output path {path} exists and is not a directory")
    if path.exists() and any(path.iterdir()) and not overwrite:
        raise NetworkError(f"output directory {path} is not empty (use --overwrite)")
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = Path(tempfile.mkdtemp(dir=path.parent, prefix=f".{path.name}."))
    try:
        yield tmp
        if path.exists():
            shutil.rmtree(path)
        os.replace(tmp, path)
    finally:
        if tmp.exists():
            shutil.rmtree(tmp)


def _require_file(path: str | None, flag: str) -> Path | None:
    if path is None:
        return None
    p = Path(path)
    if not p.is_file():
        raise FileNotFoundError(f"{flag}: no such file {p}")
    return p


# ----------------------------------------------------------------------------
# commands
# ----------------------------------------------------------------------------


def _gen_config(args, master: int) -> GenConfig:
    names = [n.strip() for n in args.names.split(",")] if args.names else None
    blocks = parse_blocks(args.blocks, names)
    block_names = [b[0] for b in blocks]
    if args.no_interdeps:
        interdeps = []
    elif args.interdep:
        interdeps = args.interdep
    else:
        interdeps = default_interdeps(block_names)
    return GenConfig(blocks, interdeps, args.intra_density, args.interdep_density,
                     seed=substream_seed(master, "generation"))


def cmd_gen_network(args) -> int:
    master = resolve_seed(args.seed)
    config = _gen_config(args, master)
    meta, topo = generate_icin(config)
    extra = {"generator": {**config.to_dict(), "master_seed": master, "version": __version__}}
    atomic_write(Path(args.out), lambda p: save_network(p, meta, topo, extra))
    log.info("wrote %s: %d nodes, %d edges (seed %d)", args.out, meta.n_nodes, topo.n_edges, master)
    return EXIT_OK


def cmd_simulate(args) -> int:
    net = _require_file(args.network, "--network")
    meta, topo = load_network(net)
    if topo.n_edges == 0:
        raise NetworkError(f"{net} has no edges to propagate along")
    if not 0.0 <= args.q <= 1.0:
        raise UsageError(f"--q must lie in [0, 1], got {args.q}")
    if not 0.0 < args.ratio < 1.0:
        raise UsageError(f"--ratio must lie in (0, 1), got {args.ratio}")
    master = resolve_seed(args.seed)
    ds = generate_dataset(topo, meta, args.scenarios, args.min_steps, args.q, args.ratio,
                          markovian=not args.non_markovian, seed=substream_seed(master, "simulation"))
    ds.config.update(master_seed=master, network=str(net))
    atomic_write(Path(args.out), lambda p: save_dataset(p, ds))
    log.info("wrote %s: %d scenarios (seed %d)", args.out, len(ds), master)
    return EXIT_OK


def _sampler_config(args, seed: int) -> SamplerConfig:
    fields: dict = {}
    if getattr(args, "config", None):
        doc = json.loads(_require_file(args.config, "--config").read_text())
        fields.update(SamplerConfig.from_dict(doc.get("sampler", doc)).__dict__)
    if args.method:
        fields.update(METHODS[args.method])
    for name in ("proposal", "sampler", "likelihood", "validation", "record_mode"):
        if getattr(args, name, None) is not None:
            fields[name] = getattr(args, name)
    for flag, name in (("samples", "n_samples"), ("warmup", "n_warmup"), ("q", "q"),
                       ("thinning", "thinning"), ("max_proposals", "max_proposals")):
        if getattr(args, flag, None) is not None:
            fields[name] = getattr(args, flag)
    if getattr(args, "debug", False):
        fields["debug"] = True
    fields["seed"] = seed
    return SamplerConfig(**fields)


def _load_inputs(args) -> tuple[NetworkMeta, object, object, HsbmPrior]:
    net = _require_file(args.network, "--network")
    cas = _require_file(args.cascades, "--cascades")
    prior_path = _require_file(args.prior, "--prior")
    meta, truth = load_network(net)
    ds = load_dataset(cas, meta.n_nodes)
    if ds.meta_digest and ds.meta_digest != meta.digest():
        raise CascadeError(f"{cas} was simulated on a different node roster than {net}")
    prior = HsbmPrior.load(prior_path) if prior_path else HsbmPrior()
    return meta, truth, ds, prior


def cmd_reconstruct(args) -> int:
    meta, truth, ds, prior = _load_inputs(args)
    master = resolve_seed(args.seed)
    config = _sampler_config(args, substream_seed(master, "chain"))
    if args.no_eval:
        truth = None
    elif truth.n_edges and not check_constraints_full(truth, meta).valid:
        log.warning("reference topology in %s violates the constraints; scoring anyway", args.network)
    samples = run_chain(meta, build_feasible_set(meta), ds, prior, config)
    echo = {"method": args.method, "master_seed": master, "sampler": config.to_dict(),
            "network": str(args.network), "cascades": str(args.cascades),
            "data_q": ds.q, "prior": prior.to_dict(), "version": __version__}
    with atomic_dir(Path(args.out), args.overwrite) as tmp:
        summary = write_reconstruction(tmp, samples, meta, truth, echo, figures=not args.no_figures)
    f1 = summary["best_f1"]
    print(f"runtime {samples.runtime:.3f}s  acceptance {samples.acceptance_rate:.3f}"
          + (f"  best F1 {f1:.3f} at p >= {summary['best_threshold']:.2f}" if f1 is not None else ""))
    return EXIT_OK


def _stand_in(args, master: int, n_scenarios: int, realization: int = 0):
    """Network + dataset for sweeps and benchmarks: files if given, else a generated stand-in."""
    if args.network:
        meta, truth = load_network(_require_file(args.network, "--network"))
    else:
        meta, truth = generate_icin(GenConfig.standard(seed=substream_seed(master, f"generation/{realization}"),
                                                    intra_density=args.intra_density,
                                                    interdep_density=args.interdep_density))
    if truth.n_edges == 0:
        raise NetworkError("benchmarks need a reference topology with edges")
    ds = generate_dataset(truth, meta, n_scenarios, args.min_steps, args.data_q, args.ratio,
                          seed=substream_seed(master, f"simulation/{realization}/{n_scenarios}"))
    return meta, truth, ds


def _warm_up(meta, ds, methods) -> None:
    """Compile and load the numba kernels before anything is timed."""
    fs = build_feasible_set(meta)
    for m in methods:
        run_chain(meta, fs, ds, HsbmPrior(), SamplerConfig.method(m, n_samples=20, n_warmup=0))


def _score(samples, truth) -> float:
    return precision_recall_curve(edge_marginals(samples), truth, mask=samples.pair_mask).best_f1


def cmd_sweep_q(args) -> int:
    qs = parse_q_values(args.q_values)
    master = resolve_seed(args.seed)
    n_graphs = 1 if args.network else args.graphs
    if n_graphs < 1 or args.repeats < 1:
        raise UsageError("--graphs and --repeats must be positive")
    cases = [_stand_in(args, master, args.scenarios, g) for g in range(n_graphs)]
    base = _sampler_config(args, 0)
    _warm_up(cases[0][0], cases[0][2], [args.method])
    rows = []
    for q in qs:
        f1, rt, props = [], [], []
        for meta, truth, ds in cases:
            fs = build_feasible_set(meta)
            for r in range(args.repeats):
                cfg = SamplerConfig(**{**base.__dict__, "q": q, "seed": substream_seed(master, f"chain/{r}")})
                s = run_chain(meta, fs, ds, HsbmPrior(), cfg)
                f1.append(_score(s, truth) if s.n_recorded else 0.0)
                rt.append(s.runtime)
                props.append(s.n_proposals)
        rows.append((q, float(np.mean(f1)), float(np.mean(rt)), float(np.mean(props))))
        log.info("q=%.2f  F1 %.3f  runtime %.3fs", *rows[-1][:3])
    echo = {"master_seed": master, "q_values": qs, "repeats": args.repeats, "graphs": n_graphs, "scenarios": args.scenarios,
            "data_q": args.data_q, "ratio": args.ratio, "min_steps": args.min_steps,
            "intra_density": args.intra_density, "interdep_density": args.interdep_density,
            "method": args.method, "sampler": base.to_dict(), "network": args.network, "version": __version__}
    with atomic_dir(Path(args.out), args.overwrite) as tmp:
        write_csv(tmp / "sweep.csv", ["q", "best_f1", "runtime", "n_proposals"],
                  [(f"{q:g}", f"{f:.6f}", f"{t:.6f}", f"{p:.1f}") for q, f, t, p in rows])
        write_json(tmp / "sweep.json", {"rows": [dict(q=q, best_f1=f, runtime=t, n_proposals=p)
                                                 for q, f, t, p in rows], "config": echo})
        if not args.no_figures:
            from .plotting import plot_sweep
            plot_sweep([r[0] for r in rows], [r[1] for r in rows], [r[2] for r in rows], tmp / "sweep.png")
    for q, f, t, _ in rows:
        print(f"q={q:.2f}  best F1 {f:.3f}  runtime {t:.3f}s")
    return EXIT_OK


def check_order(times: dict[str, float], tolerance: float = 0.2) -> list[str]:
    """Problems with the expected speed ordering; empty when it holds."""
    problems = []
    for a, b in (("m1", "m3"), ("m3", "m4")):
        if a in times and b in times and not times[a] < times[b]:
            problems.append(f"time({a})={times[a]:.3f}s is not below time({b})={times[b]:.3f}s")
    if "m1" in times and "m2" in times:
        ratio = times["m2"] / times["m1"]
        if not 1 - tolerance <= ratio <= 1 + tolerance:
            problems.append(f"m2/m1 time ratio {ratio:.2f} outside 1 +/- {tolerance}")
    return problems


def cmd_bench(args) -> int:
    methods = [m.strip() for m in args.methods.split(",")]
    for m in methods:
        if m not in METHODS:
            raise UsageError(f"unknown method {m!r}; choose from {', '.join(METHODS)}")
    experiments = parse_int_list(args.experiments, "--experiments")
    master = resolve_seed(args.seed)
    data = {e: _stand_in(args, master, e) for e in experiments}
    meta = data[experiments[0]][0]
    fs = build_feasible_set(meta)
    _warm_up(meta, data[experiments[0]][2], methods)
    runs = []
    # repeat-major order so slow drift in machine load hits every method alike
    for r in range(args.repeats):
        for e in experiments:
            _, truth, ds = data[e]
            for m in methods:
                cfg = SamplerConfig.method(m, n_samples=args.samples, n_warmup=args.warmup,
                                           record_mode=args.record_mode,
                                           seed=substream_seed(master, f"chain/{r}"))
                s = run_chain(meta, fs, ds, HsbmPrior(), cfg)
                runs.append((m, f"E{e}", r, s.runtime, _score(s, truth), s.n_proposals))
    table: dict[str, dict[str, tuple[float, float]]] = {}
    for m in methods:
        table[m] = {}
        for e in experiments:
            sel = [x for x in runs if x[0] == m and x[1] == f"E{e}"]
            table[m][f"E{e}"] = (float(np.mean([x[3] for x in sel])), float(np.mean([x[4] for x in sel])))
    largest = f"E{max(experiments)}"
    problems = check_order({m: table[m][largest][0] for m in methods}) if args.assert_order else []
    echo = {"master_seed": master, "methods": methods, "experiments": experiments, "repeats": args.repeats,
            "samples": args.samples, "warmup": args.warmup, "record_mode": args.record_mode,
            "data_q": args.data_q, "ratio": args.ratio, "min_steps": args.min_steps,
            "intra_density": args.intra_density, "interdep_density": args.interdep_density,
            "network": args.network, "version": __version__}
    with atomic_dir(Path(args.out), args.overwrite) as tmp:
        write_csv(tmp / "bench_runs.csv", ["method", "experiment", "repeat", "runtime", "best_f1", "n_proposals"],
                  [(m, e, r, f"{t:.6f}", f"{f:.6f}", p) for m, e, r, t, f, p in runs])
        write_csv(tmp / "bench.csv", ["method", "experiment", "mean_runtime", "mean_best_f1"],
                  [(m, e, f"{t:.6f}", f"{f:.6f}") for m in table for e, (t, f) in table[m].items()])
        write_json(tmp / "bench.json", {"table": table, "order_problems": problems, "config": echo})
        if not args.no_figures:
            from .plotting import plot_bench
            plot_bench(table, tmp / "bench.png")
    header = "method " + " ".join(f"{e:>16}" for e in table[methods[0]])
    print(header)
    for m in methods:
        print(f"{m:<6} " + " ".join(f"{t:7.3f}s F1 {f:.3f}" for t, f in table[m].values()))
    if problems:
        for p in problems:
            print(f"ordering check failed: {p}", file=sys.stderr)
        return EXIT_ORDER
    return EXIT_OK


# ----------------------------------------------------------------------------
# parser
# ----------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        if "--method" in message:
            print("methods: " + ", ".join(f"{k} ({', '.join(v.values())})" for k, v in METHODS.items())
                  + "; or combine --proposal/--sampler/--likelihood/--validation", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _add_chain_flags(p, sweep: bool = False):
    p.add_argument("--method", choices=sorted(METHODS), default="m1" if sweep else None,
                   help="preset m1..m5; individual flags below override it")
    p.add_argument("--proposal", choices=PROPOSALS)
    p.add_argument("--sampler", choices=SAMPLERS)
    p.add_argument("--likelihood", choices=LIKELIHOODS)
    p.add_argument("--validation", choices=VALIDATIONS)
    p.add_argument("--record-mode", dest="record_mode", choices=RECORD_MODES,
                   default="accepted_only" if sweep else None)
    p.add_argument("--samples", type=int, default=1000 if sweep else None)
    p.add_argument("--warmup", type=int, default=200 if sweep else None)
    p.add_argument("--thinning", type=int)
    p.add_argument("--max-proposals", dest="max_proposals", type=int, default=200_000 if sweep else None)


def _add_data_flags(p, scenarios: int, density: tuple[float, float]):
    p.add_argument("--network", help="network JSON with reference edges (default: generated stand-in)")
    p.add_argument("--intra-density", dest="intra_density", type=float, default=density[0],
                   help="extra intra-block edges in the stand-in")
    p.add_argument("--interdep-density", dest="interdep_density", type=float, default=density[1],
                   help="extra interdependency edges in the stand-in")
    p.add_argument("--data-q", dest="data_q", type=float, default=0.4, help="q used to simulate the data")
    p.add_argument("--ratio", type=float, default=0.2)
    p.add_argument("--min-steps", dest="min_steps", type=int, default=5)
    if scenarios:
        p.add_argument("--scenarios", type=int, default=scenarios)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, help=f"master seed (default: ${SEED_ENV}, else fresh entropy)")
    common.add_argument("-v", "--verbose", action="count", default=0)

    parser = _Parser(prog="icinet", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"icinet {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen-network", parents=[common], help="generate a constraint-valid ground truth")
    p.add_argument("--blocks", required=True, help='e.g. "3x2,3,5" (supply,transmission,demand per block)')
    p.add_argument("--names", help="comma-separated block names (default water,power,gas,...)")
    p.add_argument("--interdep", action="append", help='e.g. "power:demand->water:supply"; repeatable')
    p.add_argument("--no-interdeps", action="store_true")
    p.add_argument("--intra-density", dest="intra_density", type=float, default=0.15)
    p.add_argument("--interdep-density", dest="interdep_density", type=float, default=0.05)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen_network)

    p = sub.add_parser("simulate", parents=[common], help="simulate cascading-failure scenarios")
    p.add_argument("--network", required=True)
    p.add_argument("--scenarios", type=int, default=40)
    p.add_argument("--min-steps", dest="min_steps", type=int, default=5)
    p.add_argument("--q", type=float, default=0.4)
    p.add_argument("--ratio", type=float, default=0.2)
    p.add_argument("--non-markovian", dest="non_markovian", action="store_true",
                   help="every failed node keeps propagating (default: only newly failed nodes)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("reconstruct", parents=[common], help="sample the posterior over topologies")
    p.add_argument("--network", required=True, help="network JSON; its edges, if any, are the reference")
    p.add_argument("--cascades", required=True)
    p.add_argument("--prior", help="HSBM prior JSON (default flat 0.5)")
    p.add_argument("--config", help="sampler configuration JSON")
    _add_chain_flags(p)
    p.add_argument("--q", type=float, help="propagation probability for the likelihood (default: the data's)")
    p.add_argument("--debug", action="store_true", help="recheck cached values after every acceptance")
    p.add_argument("--no-eval", dest="no_eval", action="store_true")
    p.add_argument("--no-figures", dest="no_figures", action="store_true")
    p.add_argument("--overwrite", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_reconstruct, method="m1")

    p = sub.add_parser("sweep-q", parents=[common], help="F1 and runtime against the likelihood's q")
    _add_data_flags(p, scenarios=15, density=(0.15, 0.05))
    _add_chain_flags(p, sweep=True)
    p.add_argument("--q-values", dest="q_values", default="0.1:0.9:0.1")
    p.add_argument("--repeats", type=int, default=3, help="chains per network and q")
    p.add_argument("--graphs", type=int, default=3,
                   help="generated ground truths averaged over (ignored with --network)")
    p.add_argument("--no-figures", dest="no_figures", action="store_true")
    p.add_argument("--overwrite", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sweep_q)

    p = sub.add_parser("bench", parents=[common], help="time and F1 grid over methods and dataset sizes")
    _add_data_flags(p, scenarios=0, density=(0.0, 0.0))
    p.add_argument("--methods", default=",".join(METHODS))
    p.add_argument("--experiments", default="5,15,40", help="scenario counts")
    p.add_argument("--repeats", type=int, default=10)
    p.add_argument("--samples", type=int, default=3000)
    p.add_argument("--warmup", type=int, default=2000)
    p.add_argument("--record-mode", dest="record_mode", choices=RECORD_MODES, default="standard")
    p.add_argument("--assert-order", dest="assert_order", action="store_true",
                   help="exit 1 unless m1 < m3 < m4 in time and m1, m2 within 20%% on the largest dataset")
    p.add_argument("--no-figures", dest="no_figures", action="store_true")
    p.add_argument("--overwrite", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    t0 = time.perf_counter()
    try:
        code = args.func(args)
    except UsageError as exc:
        print(f"icinet {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ChainError as exc:
        print(f"icinet {args.command}: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except DATA_ERRORS as exc:
        print(f"icinet {args.command}: {exc}", file=sys.stderr)
        return EXIT_DATA
    except Exception as exc:  # noqa: BLE001
        log.debug("unhandled", exc_info=True)
        print(f"icinet {args.command}: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    log.info("%s finished in %.2fs", args.command, time.perf_counter() - t0)
    return code


if __name__ == "__main__":
    sys.exit(main())
