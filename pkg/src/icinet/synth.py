"""Random interdependent infrastructure networks that satisfy every topological constraint.

Ground-truth generator for experiments.  A minimal connected backbone is
laid first, then every remaining feasible pair is switched on independently
with a configured density.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .network import (FeasibleSet, InterdepSpec, Level, NetworkMeta, Topology,
                      build_feasible_set, relation_degrees_ok)

STANDARD_BLOCKS = (("water", 2, 3, 5), ("power", 2, 3, 5), ("gas", 2, 3, 5))
STANDARD_INTERDEPS = (
    "power:demand->water:supply",   # pumps draw on 12kV substations
    "water:demand->power:supply",   # gate stations need cooling water
    "power:demand->gas:supply",     # gas gates need electricity
    "gas:demand->power:supply",     # gate stations burn gas
)


@dataclass
class GenConfig:
    blocks: list[tuple[str, int, int, int]]
    interdeps: list[InterdepSpec] = field(default_factory=list)
    intra_density: float = 0.15
    interdep_density: float = 0.05
    seed: int = 0

    def __post_init__(self):
        self.blocks = [(str(b[0]), int(b[1]), int(b[2]), int(b[3])) for b in self.blocks]
        self.interdeps = [s if isinstance(s, InterdepSpec) else InterdepSpec.parse(s)
                          for s in self.interdeps]
        if not self.blocks:
            raise ValueError("at least one block is required")
        for name in ("intra_density", "interdep_density"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v}")

    @classmethod
    def standard(cls, seed: int = 0, **kw) -> "GenConfig":
        """Three 2-3-5 blocks (water, power, gas) with the four cross-network dependencies."""
        return cls(list(STANDARD_BLOCKS), list(STANDARD_INTERDEPS), seed=seed, **kw)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["blocks"] = [list(b) for b in self.blocks]
        d["interdeps"] = [s.name for s in self.interdeps]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "GenConfig":
        return cls(**d)

    @classmethod
    def load(cls, path: str | Path) -> "GenConfig":
        return cls.from_dict(json.loads(Path(path).read_text()))


Chooser = Callable[[list[int]], int]


def repair_connectivity(topo: Topology, meta: NetworkMeta, choose: Chooser) -> list[tuple[int, int]]:
    """Add edges until constraints (1)-(6) hold; returns the edges added.

    Per block, each transmission node gets a supply predecessor and a demand
    successor, each demand node without a predecessor gets one from the
    supply or transmission level, and each supply node without a successor
    gets one.  Per interdependency, each side is covered the same way.
    ``choose`` picks one node from a candidate list.
    """
    added = []

    def add(i, j):
        if not topo.adj[i, j]:
            topo.add_edge(i, j)
            added.append((i, j))

    nb = len(meta.blocks)
    for b, name in enumerate(meta.blocks):
        S = meta.members(name, Level.SUPPLY)
        T = meta.members(name, Level.TRANSMISSION)
        D = meta.members(name, Level.DEMAND)
        for t in T:
            if topo.rel_in[t, b] == 0:
                add(choose(S), t)
            if topo.rel_out[t, b] == 0:
                add(t, choose(D))
        for d in D:
            if topo.rel_in[d, b] == 0:
                add(choose(S + T), d)
        for s in S:
            if topo.rel_out[s, b] == 0:
                add(s, choose(T + D))
    for m, spec in enumerate(meta.interdeps):
        r = nb + m
        A = meta.members(spec.source_block, spec.source_level)
        B = meta.members(spec.target_block, spec.target_level)
        for a in A:
            if topo.rel_out[a, r] == 0:
                add(a, choose(B))
        for b_ in B:
            if topo.rel_in[b_, r] == 0:
                add(choose(A), b_)
    return added


def prune_to_minimal(topo: Topology, order: Sequence[tuple[int, int]]) -> None:
    """Drop every edge, in ``order``, whose removal keeps constraints (1)-(6).

    Works on the degree form: an edge is redundant when its tail keeps
    another successor and its head another predecessor in the same relation.
    Removing edges only lowers degrees, so one pass leaves every survivor
    critical.
    """
    for i, j in order:
        r = topo.relation[i, j]
        if topo.adj[i, j] and topo.rel_out[i, r] > 1 and topo.rel_in[j, r] > 1:
            topo.remove_edge(i, j)


def generate_icin(config: GenConfig) -> tuple[NetworkMeta, Topology]:
    meta = NetworkMeta.from_blocks(config.blocks, config.interdeps)
    fs = build_feasible_set(meta)
    rng = np.random.default_rng(config.seed)
    topo = Topology(meta.n_nodes, fs.relation_matrix)

    backbone = repair_connectivity(topo, meta, lambda c: c[int(rng.integers(len(c)))])
    order = [backbone[k] for k in rng.permutation(len(backbone))]
    prune_to_minimal(topo, order)

    densify(topo, fs, len(meta.blocks), config.intra_density, config.interdep_density, rng)
    if not relation_degrees_ok(topo, meta, fs):  # pragma: no cover - construction guarantees it
        raise RuntimeError("generated network violates connectivity constraints")
    return meta, topo


def densify(topo: Topology, fs: FeasibleSet, n_blocks: int, intra: float, inter: float,
            rng: np.random.Generator) -> None:
    draws = rng.random(len(fs))
    for k, (i, j) in enumerate(fs.pairs.tolist()):
        p = intra if fs.relation[k] < n_blocks else inter
        if not topo.adj[i, j] and draws[k] < p:
            topo.add_edge(i, j)
