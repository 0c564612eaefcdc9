"""Metropolis-Hastings over network topologies.

Each step picks one node pair, toggles its edge, screens the result against
the topological constraints (infrastructure-dependent proposal only) and
accepts with the usual Hastings ratio.  Pairs come either uniformly from
the candidate set ("random") or via the tie/no-tie scheme ("tnt"), which
first flips a fair coin between the current edges and the current
non-edges.

Method presets ``m1``..``m5`` switch the proposal, the pair sampler, the
likelihood kernel and the validation path on and off.
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from .cascade import CascadeDataset, CascadeError
from .likelihood import CascadeLikelihood
from .network import (FeasibleSet, FullValidator, NetworkMeta, Topology, Toggle,
                      build_feasible_set, check_constraints_full, validate_incremental)
from .prior import HsbmPrior, hsbm_log_prior
from .synth import repair_connectivity

log = logging.getLogger(__name__)

SAMPLERS = ("tnt", "random")
PROPOSALS = ("ip", "unconstrained")
RECORD_MODES = ("standard", "accepted_only")
LIKELIHOODS = ("edgelist", "naive")
VALIDATIONS = ("incremental", "full")

METHODS = {
    "m1": dict(proposal="ip", sampler="tnt", likelihood="edgelist", validation="incremental"),
    "m2": dict(proposal="ip", sampler="tnt", likelihood="edgelist", validation="full"),
    "m3": dict(proposal="ip", sampler="tnt", likelihood="naive", validation="full"),
    "m4": dict(proposal="ip", sampler="random", likelihood="naive", validation="full"),
    "m5": dict(proposal="unconstrained", sampler="random", likelihood="naive", validation="full"),
}


class ChainError(RuntimeError):
    """Internal invariant breach inside a chain (cache corruption, NaN ratios)."""


@dataclass
class SamplerConfig:
    n_samples: int = 3000
    n_warmup: int = 2000
    sampler: str = "tnt"
    proposal: str = "ip"
    record_mode: str = "standard"
    q: float | None = None
    markovian: bool | None = None
    seed: int = 0
    thinning: int = 1
    likelihood: str = "edgelist"
    validation: str = "incremental"
    max_proposals: int | None = None
    track_states: bool = False
    debug: bool = False

    def __post_init__(self):
        for name, allowed in (("sampler", SAMPLERS), ("proposal", PROPOSALS),
                              ("record_mode", RECORD_MODES), ("likelihood", LIKELIHOODS),
                              ("validation", VALIDATIONS)):
            if getattr(self, name) not in allowed:
                raise ValueError(f"{name} must be one of {allowed}, got {getattr(self, name)!r}")
        if self.n_samples <= 0:
            raise ValueError("n_samples must be positive")
        if not 0 <= self.n_warmup < self.n_samples:
            raise ValueError("n_warmup must lie in [0, n_samples)")
        if self.thinning < 1:
            raise ValueError("thinning must be >= 1")
        if self.q is not None and not 0.0 < self.q <= 1.0:
            raise ValueError(f"q must lie in (0, 1], got {self.q}")

    @classmethod
    def method(cls, name: str, **overrides) -> "SamplerConfig":
        try:
            preset = METHODS[name.lower()]
        except KeyError:
            raise ValueError(f"unknown method {name!r}; choose from {', '.join(METHODS)}") from None
        return cls(**{**preset, **overrides})

    def to_dict(self) -> dict:
        d = asdict(self)
        d["samples"] = d.pop("n_samples")
        d["warmup"] = d.pop("n_warmup")
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "SamplerConfig":
        d = dict(d)
        if "samples" in d:
            d["n_samples"] = d.pop("samples")
        if "warmup" in d:
            d["n_warmup"] = d.pop("warmup")
        return cls(**d)


@dataclass
class ChainState:
    topology: Topology
    log_prior: float
    log_likelihood: float


@dataclass
class PosteriorSamples:
    edge_counts: np.ndarray
    n_recorded: int
    avg_degree: np.ndarray
    log_likelihood: np.ndarray
    log_prior: np.ndarray
    pair_mask: np.ndarray
    n_proposals: int = 0
    n_accepted: int = 0
    n_invalid: int = 0
    runtime: float = 0.0
    state_counts: dict[bytes, int] | None = None
    visited: set[bytes] | None = None
    config: dict = field(default_factory=dict)

    @property
    def acceptance_rate(self) -> float:
        return self.n_accepted / self.n_proposals if self.n_proposals else 0.0


class PairPartition:
    """Candidate pairs split into present edges and absent ones, O(1) updates.

    ``perm[:n_present]`` holds the ids of pairs that currently carry an edge,
    ``perm[n_present:]`` the rest; ``pos`` inverts ``perm``.
    """

    def __init__(self, pairs: FeasibleSet, topo: Topology):
        self.pairs = pairs
        self.size = len(pairs)
        present = topo.adj[pairs.pairs[:, 0], pairs.pairs[:, 1]].astype(bool)
        self.perm = np.concatenate([np.flatnonzero(present), np.flatnonzero(~present)])
        self.pos = np.empty(self.size, dtype=np.int64)
        self.pos[self.perm] = np.arange(self.size)
        self.n_present = int(present.sum())

    def flip(self, pid: int) -> None:
        p = self.pos[pid]
        if p < self.n_present:
            last = self.n_present - 1
            self.n_present -= 1
        else:
            last = self.n_present
            self.n_present += 1
        other = self.perm[last]
        self.perm[p], self.perm[last] = other, pid
        self.pos[other], self.pos[pid] = p, last


def _tnt_side(n_edges: int, size: int) -> float:
    return 0.5 if 0 < n_edges < size else 1.0


def propose(partition: PairPartition, sampler: str, rng: np.random.Generator) -> tuple[int, float, float]:
    """Pick a pair id to toggle; returns ``(pair_id, log_q_forward, log_q_backward)``.

    The backward probability is that of proposing the reverse toggle from the
    post-toggle state.
    """
    M, E = partition.size, partition.n_present
    if M == 0:
        raise ValueError("empty candidate set")
    if sampler == "random":
        lq = -math.log(M)
        return int(rng.integers(M)), lq, lq
    if E == 0:
        remove = False
    elif E == M:
        remove = True
    else:
        remove = rng.random() < 0.5
    side = _tnt_side(E, M)
    if remove:
        pid = int(partition.perm[rng.integers(E)])
        fwd = side / E
        bwd = _tnt_side(E - 1, M) / (M - E + 1)
    else:
        pid = int(partition.perm[E + rng.integers(M - E)])
        fwd = side / (M - E)
        bwd = _tnt_side(E + 1, M) / (E + 1)
    return pid, math.log(fwd), math.log(bwd)


def _log_accept(ll, lp, ll_new, lp_new, lq_fwd, lq_bwd) -> float:
    if ll_new == -math.inf:
        return -math.inf
    a = (ll_new - ll) + (lp_new - lp) + (lq_bwd - lq_fwd)
    if math.isnan(a):
        raise ChainError("NaN acceptance ratio; cached log values are corrupt")
    return min(0.0, a)


def acceptance_log_ratio(state: ChainState, candidate: ChainState,
                         log_q_fwd: float, log_q_bwd: float) -> float:
    """Log of the Metropolis-Hastings acceptance probability (always <= 0)."""
    return _log_accept(state.log_likelihood, state.log_prior, candidate.log_likelihood,
                       candidate.log_prior, log_q_fwd, log_q_bwd)


def init_topology(dataset: CascadeDataset, meta: NetworkMeta, feasible: FeasibleSet | None = None,
                  constrained: bool = True, q: float | None = None) -> Topology:
    """Starting graph for the chain.

    Links every node newly failed at ``t`` to every node newly failed at
    ``t + 1`` (feasible pairs only when constrained), makes sure every
    observed failure has a linked active predecessor, then repairs
    connectivity.  The result has a finite likelihood.
    """
    feasible = feasible if feasible is not None else build_feasible_set(meta)
    n = meta.n_nodes
    if dataset.n_nodes != n:
        raise CascadeError(f"dataset has {dataset.n_nodes} nodes, network has {n}")
    allowed = feasible.mask if constrained else ~np.eye(n, dtype=bool)
    topo = Topology(n, feasible.relation_matrix)
    for s in dataset.scenarios:
        for t in range(1, s.T):
            for a in s.newly_failed(t):
                for b in s.newly_failed(t + 1):
                    if allowed[a, b] and not topo.adj[a, b]:
                        topo.add_edge(int(a), int(b))
    for c, s in enumerate(dataset.scenarios):
        ff = s.first_failure
        for t in range(1, s.T):
            if dataset.markovian:
                active = np.flatnonzero(ff == t)
            else:
                active = np.flatnonzero((ff > 0) & (ff <= t))
            for b in s.newly_failed(t + 1):
                if topo.adj[active, b].any():
                    continue
                cands = [int(a) for a in active if allowed[a, b]]
                if not cands:
                    raise CascadeError(
                        f"scenario {c}: failure of node {int(b)} at t={t + 1} cannot be explained "
                        f"by any feasible edge from nodes active at t={t}; data are inconsistent "
                        "with the constraint system")
                topo.add_edge(min(cands), int(b))
    if constrained:
        repair_connectivity(topo, meta, min)
        report = check_constraints_full(topo, meta)
        if not report.valid:  # pragma: no cover - repair guarantees validity
            raise ChainError(f"initial topology invalid: {report}")
    ll = CascadeLikelihood(dataset, q).edgelist(topo)
    if not math.isfinite(ll):
        raise CascadeError("initial topology cannot explain the data (log-likelihood is -inf)")
    return topo


def run_chain(meta: NetworkMeta, feasible: FeasibleSet | None, dataset: CascadeDataset,
              prior: HsbmPrior, config: SamplerConfig,
              init: Topology | None = None) -> PosteriorSamples:
    """Run one Metropolis-Hastings chain and accumulate edge counts and traces.

    ``standard`` recording counts every post-warm-up iteration (rejections
    repeat the current graph).  ``accepted_only`` advances the sample counter
    only on acceptance and records accepted graphs only, bounded by
    ``max_proposals``.
    """
    t0 = time.perf_counter()
    feasible = feasible if feasible is not None else build_feasible_set(meta)
    constrained = config.proposal == "ip"
    pairs = feasible if constrained else FeasibleSet.all_pairs(meta)
    rng = np.random.default_rng(config.seed)
    lik = CascadeLikelihood(dataset, config.q, config.markovian)
    loglik = lik.edgelist if config.likelihood == "edgelist" else lik.naive
    full_check = FullValidator(meta) if (constrained and config.validation == "full") else None

    topo = init.copy() if init is not None else init_topology(dataset, meta, feasible, constrained, lik.q)
    p = prior.pair_probabilities(meta, pairs)
    log_odds = np.log(p) - np.log1p(-p)
    lp = hsbm_log_prior(topo, meta, prior, constrained)
    ll = loglik(topo)
    if not math.isfinite(ll):
        raise CascadeError("initial topology has zero likelihood")

    partition = PairPartition(pairs, topo)
    pair_i = pairs.pairs[:, 0].tolist()
    pair_j = pairs.pairs[:, 1].tolist()
    lodds = log_odds.tolist()
    n = meta.n_nodes
    counts = np.zeros((n, n), dtype=np.int64)
    deg_trace: list[float] = []
    ll_trace: list[float] = []
    lp_trace: list[float] = []
    state_counts: dict[bytes, int] | None = {} if config.track_states else None
    visited: set[bytes] | None = set() if config.track_states else None
    accepted_only = config.record_mode == "accepted_only"
    max_prop = config.max_proposals or (200 * config.n_samples if accepted_only else config.n_samples)

    n_prop = n_acc = n_invalid = 0
    progress = 0  # iterations (standard) or accepted samples (accepted_only)
    adj = topo.adj
    random = rng.random

    def record():
        counts.__iadd__(adj)
        deg_trace.append(topo.n_edges / n)
        ll_trace.append(ll)
        lp_trace.append(lp)
        if state_counts is not None:
            key = adj.tobytes()
            state_counts[key] = state_counts.get(key, 0) + 1

    if visited is not None:
        visited.add(adj.tobytes())

    while progress < config.n_samples and n_prop < max_prop:
        pid, lqf, lqb = propose(partition, config.sampler, rng)
        i, j = pair_i[pid], pair_j[pid]
        n_prop += 1
        removed = bool(adj[i, j])
        if removed:
            topo.remove_edge(i, j)
        else:
            topo.add_edge(i, j)
        accept = False
        valid = True
        if constrained:
            if full_check is not None:
                valid = full_check(topo)
            elif removed:
                valid = validate_incremental(topo, i, j, Toggle.REMOVED, meta)
        if valid:
            lp_new = lp - lodds[pid] if removed else lp + lodds[pid]
            ll_new = loglik(topo)
            a = _log_accept(ll, lp, ll_new, lp_new, lqf, lqb)
            accept = a == 0.0 or random() < math.exp(a)
        else:
            n_invalid += 1
        if accept:
            n_acc += 1
            partition.flip(pid)
            lp, ll = lp_new, ll_new
            if visited is not None:
                visited.add(adj.tobytes())
            if config.debug:
                _check_cache(topo, meta, prior, constrained, loglik, lp, ll)
        elif removed:
            topo.add_edge(i, j)
        else:
            topo.remove_edge(i, j)

        if accepted_only:
            if accept:
                progress += 1
                if progress > config.n_warmup and (progress - config.n_warmup - 1) % config.thinning == 0:
                    record()
        else:
            progress += 1
            if progress > config.n_warmup and (progress - config.n_warmup - 1) % config.thinning == 0:
                record()

    if progress < config.n_samples:
        log.warning("chain stopped after %d proposals with %d/%d samples", n_prop, progress, config.n_samples)

    return PosteriorSamples(
        edge_counts=counts,
        n_recorded=len(deg_trace),
        avg_degree=np.array(deg_trace),
        log_likelihood=np.array(ll_trace),
        log_prior=np.array(lp_trace),
        pair_mask=pairs.mask.copy(),
        n_proposals=n_prop,
        n_accepted=n_acc,
        n_invalid=n_invalid,
        runtime=time.perf_counter() - t0,
        state_counts=state_counts,
        visited=visited,
        config=config.to_dict(),
    )


def _check_cache(topo, meta, prior, constrained, loglik, lp, ll) -> None:
    lp_fresh = hsbm_log_prior(topo, meta, prior, constrained)
    ll_fresh = loglik(topo)
    if abs(lp_fresh - lp) > 1e-9 * max(1.0, abs(lp_fresh)) or abs(ll_fresh - ll) > 1e-9 * max(1.0, abs(ll_fresh)):
        raise ChainError(f"cache drift: prior {lp} vs {lp_fresh}, likelihood {ll} vs {ll_fresh}")
    if constrained and not check_constraints_full(topo, meta).valid:
        raise ChainError("accepted topology violates the constraints")


def run_method(method: str, meta: NetworkMeta, dataset: CascadeDataset, prior: HsbmPrior | None = None,
               **overrides) -> PosteriorSamples:
    """Convenience wrapper: run preset ``m1``..``m5`` with optional config overrides."""
    config = SamplerConfig.method(method, **overrides)
    return run_chain(meta, build_feasible_set(meta), dataset, prior or HsbmPrior(), config)


def with_seed(config: SamplerConfig, seed: int) -> SamplerConfig:
    return replace(config, seed=seed)
