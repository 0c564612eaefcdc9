"""SI cascading failures on a directed topology, and failure-scenario datasets.

Time is 1-indexed: seed failures happen at ``t = 1``.  A scenario is stored as
each node's first failure time (0 = never failed), which determines the
monotone state matrix.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Sequence

import numpy as np

from .network import NetworkMeta, Topology

NEVER = np.iinfo(np.int32).max // 2
MAX_REJECTIONS = 10_000


class CascadeError(ValueError):
    """Inconsistent scenario data or unattainable simulation parameters."""


@dataclass(frozen=True, eq=False)
class CascadeScenario:
    first_failure: np.ndarray
    T: int

    def __post_init__(self):
        ff = np.asarray(self.first_failure, dtype=np.int32)
        object.__setattr__(self, "first_failure", ff)
        if self.T < 1:
            raise CascadeError("scenario must span at least one step")
        if ff.min(initial=0) < 0 or ff.max(initial=0) > self.T:
            raise CascadeError(f"failure times must lie in 1..{self.T}")
        if not np.any(ff == 1):
            raise CascadeError("scenario has no failure at t=1")

    @classmethod
    def from_states(cls, states) -> "CascadeScenario":
        """Build from a ``T x N`` 0/1 matrix; rejects non-monotone rows."""
        states = np.asarray(states, dtype=np.int8)
        if np.any(np.diff(states, axis=0) < 0):
            raise CascadeError("failure states are not monotone in time")
        T = states.shape[0]
        failed = states.any(axis=0)
        ff = np.where(failed, states.argmax(axis=0) + 1, 0)
        return cls(ff, T)

    @property
    def n_nodes(self) -> int:
        return len(self.first_failure)

    @property
    def states(self) -> np.ndarray:
        t = np.arange(1, self.T + 1)[:, None]
        ff = self.first_failure[None, :]
        return ((ff > 0) & (ff <= t)).astype(np.int8)

    def newly_failed(self, t: int) -> np.ndarray:
        return np.flatnonzero(self.first_failure == t)


@dataclass(eq=False)
class CascadeDataset:
    scenarios: list[CascadeScenario]
    q: float
    meta_digest: str = ""
    markovian: bool = True
    q_overrides: dict[tuple[int, int], float] = field(default_factory=dict)
    config: dict = field(default_factory=dict)

    def __post_init__(self):
        if not 0.0 < self.q <= 1.0:
            raise CascadeError(f"q must lie in (0, 1], got {self.q}")
        sizes = {s.n_nodes for s in self.scenarios}
        if len(sizes) > 1:
            raise CascadeError(f"scenarios disagree on node count: {sorted(sizes)}")

    @property
    def n_nodes(self) -> int:
        return self.scenarios[0].n_nodes if self.scenarios else 0

    def __len__(self) -> int:
        return len(self.scenarios)

    @cached_property
    def packed(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """Arrays for the likelihood kernels.

        ``ft[c, j]`` first failure time (``NEVER`` if none), ``T[c]`` length,
        ``order[c]`` nodes sorted by failure time and ``ptr[c, t]`` the offset
        in ``order[c]`` of the first node failing at ``t`` (``ptr[c, T+1]`` is
        the number of failed nodes).
        """
        C, N = len(self.scenarios), self.n_nodes
        tmax = max((s.T for s in self.scenarios), default=1)
        ft = np.full((C, N), NEVER, dtype=np.int32)
        T = np.zeros(C, dtype=np.int32)
        order = np.zeros((C, N), dtype=np.int32)
        ptr = np.zeros((C, tmax + 2), dtype=np.int32)
        for c, s in enumerate(self.scenarios):
            f = s.first_failure
            ft[c] = np.where(f > 0, f, NEVER)
            T[c] = s.T
            order[c] = np.argsort(ft[c], kind="stable")
            counts = np.bincount(f[f > 0], minlength=tmax + 2)
            ptr[c, 1:] = np.cumsum(counts)[:-1]
            ptr[c, s.T + 1:] = ptr[c, s.T + 1]
        return ft, T, order, ptr

    def propagation_matrix(self, q: float | None = None) -> np.ndarray:
        return propagation_matrix(self.n_nodes, self.q if q is None else q, self.q_overrides)


def propagation_matrix(n: int, q: float, overrides: dict | None = None) -> np.ndarray:
    Q = np.full((n, n), float(q))
    for (i, j), v in (overrides or {}).items():
        Q[i, j] = v
    return Q


def node_failure_probability(q: float, n_active_failed_neighbors: int) -> float:
    """Chance a functional node fails given ``k`` active failed in-neighbours."""
    return 1.0 - (1.0 - q) ** n_active_failed_neighbors


def simulate_cascade(topo: Topology, q: float | np.ndarray, initial_ratio: float,
                     markovian: bool, rng: np.random.Generator,
                     seeds: Sequence[int] | None = None) -> CascadeScenario:
    """Run one SI cascade until a step produces no new failure.

    Each step draws ``rng.random(N)`` once; functional node ``j`` fails when
    its draw falls below ``1 - prod(1 - q_kj)`` over active failed
    in-neighbours ``k`` (newly failed ones only when ``markovian``).
    """
    n = topo.n
    Q = propagation_matrix(n, q) if np.isscalar(q) else np.asarray(q, dtype=float)
    if seeds is None:
        if not 0.0 < initial_ratio < 1.0:
            raise CascadeError(f"initial_ratio must lie in (0, 1), got {initial_ratio}")
        k = max(1, math.ceil(initial_ratio * n - 1e-9))
        seeds = rng.choice(n, size=k, replace=False)
    seeds = np.asarray(seeds, dtype=np.int64)
    ff = np.zeros(n, dtype=np.int32)
    ff[seeds] = 1
    spread = 1.0 - Q * topo.adj
    t = 1
    active = seeds
    while True:
        survive = np.prod(spread[active], axis=0)
        u = rng.random(n)
        new = np.flatnonzero((ff == 0) & (u < 1.0 - survive))
        if len(new) == 0:
            break
        t += 1
        ff[new] = t
        active = new if markovian else np.flatnonzero(ff > 0)
    return CascadeScenario(ff, t)


def generate_dataset(topo: Topology, meta: NetworkMeta | None, n_scenarios: int, min_steps: int,
                     q: float, initial_ratio: float, markovian: bool = True,
                     seed: int = 0) -> CascadeDataset:
    """Simulate ``n_scenarios`` cascades lasting at least ``min_steps`` each.

    Short cascades are discarded and redrawn; scenario ``k`` uses its own
    spawned generator so the dataset does not depend on evaluation order.
    """
    if n_scenarios < 1 or min_steps < 1:
        raise CascadeError("n_scenarios and min_steps must be positive")
    streams = np.random.SeedSequence(seed).spawn(n_scenarios)
    scenarios = []
    for k, ss in enumerate(streams):
        rng = np.random.default_rng(ss)
        for _ in range(MAX_REJECTIONS):
            s = simulate_cascade(topo, q, initial_ratio, markovian, rng)
            if s.T >= min_steps:
                scenarios.append(s)
                break
        else:
            raise CascadeError(
                f"scenario {k}: {MAX_REJECTIONS} consecutive cascades ended before "
                f"{min_steps} steps (q={q}, ratio={initial_ratio}); these parameters "
                "cannot sustain the requested length")
    config = dict(n_scenarios=n_scenarios, min_steps=min_steps, q=q,
                  initial_ratio=initial_ratio, markovian=markovian, seed=seed)
    return CascadeDataset(scenarios, float(q), meta.digest() if meta is not None else "",
                          markovian, config=config)


def dataset_to_dict(ds: CascadeDataset) -> dict:
    doc = {
        "q": ds.q,
        "meta_digest": ds.meta_digest,
        "markovian": ds.markovian,
        "n_nodes": ds.n_nodes,
        "scenarios": [
            {"T": s.T,
             "failures": sorted([int(s.first_failure[j]), int(j)]
                                for j in np.flatnonzero(s.first_failure))}
            for s in ds.scenarios
        ],
    }
    if ds.q_overrides:
        doc["q_overrides"] = [[i, j, v] for (i, j), v in sorted(ds.q_overrides.items())]
    if ds.config:
        doc["config"] = ds.config
    return doc


def dataset_from_dict(doc: dict, n_nodes: int | None = None) -> CascadeDataset:
    n = n_nodes if n_nodes is not None else doc.get("n_nodes")
    if n is None:
        raise CascadeError("cascade file lacks n_nodes and no network was supplied")
    if doc.get("n_nodes") is not None and n_nodes is not None and doc["n_nodes"] != n_nodes:
        raise CascadeError(f"cascade file has {doc['n_nodes']} nodes, network has {n_nodes}")
    scenarios = []
    for k, sc in enumerate(doc["scenarios"]):
        T = int(sc["T"])
        ff = np.zeros(n, dtype=np.int32)
        for t, j in sc["failures"]:
            t, j = int(t), int(j)
            if not 0 <= j < n:
                raise CascadeError(f"scenario {k}: node id {j} out of range")
            if not 1 <= t <= T:
                raise CascadeError(f"scenario {k}: failure time {t} outside 1..{T}")
            if ff[j]:
                raise CascadeError(f"scenario {k}: node {j} fails twice")
            ff[j] = t
        scenarios.append(CascadeScenario(ff, T))
    overrides = {(int(i), int(j)): float(v) for i, j, v in doc.get("q_overrides", [])}
    return CascadeDataset(scenarios, float(doc["q"]), doc.get("meta_digest", ""),
                          bool(doc.get("markovian", True)), overrides, doc.get("config", {}))


def save_dataset(path: str | Path, ds: CascadeDataset) -> None:
    Path(path).write_text(json.dumps(dataset_to_dict(ds), indent=1) + "\n")


def load_dataset(path: str | Path, n_nodes: int | None = None) -> CascadeDataset:
    return dataset_from_dict(json.loads(Path(path).read_text()), n_nodes)
