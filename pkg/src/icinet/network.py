"""Multilayer infrastructure graphs: node roster, feasible pairs, topology, constraints.

Nodes carry a block label (one infrastructure network: water, power, ...) and
a level label (supply > transmission > demand).  Edges only run from a higher
level to a lower level inside a block, or along a declared interdependency
between two blocks.  The set of such pairs is the feasible set; every
sampled topology lives inside it.

The topology keeps a forward and a reverse adjacency list as padded integer
arrays so the numba kernels in :mod:`icinet.likelihood` can walk them
without conversion.
"""

from __future__ import annotations

import enum
import graphlib
import hashlib
import json
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

import numba
import numpy as np


class NetworkError(ValueError):
    """Malformed network description or an operation outside the feasible set."""


class Level(enum.IntEnum):
    DEMAND = 0
    TRANSMISSION = 1
    SUPPLY = 2

    @property
    def label(self) -> str:
        return self.name.lower()

    @classmethod
    def parse(cls, value: "str | Level") -> "Level":
        if isinstance(value, Level):
            return value
        try:
            return cls[str(value).strip().upper()]
        except KeyError:
            raise NetworkError(f"unknown level {value!r}; expected supply, transmission or demand") from None


class Toggle(enum.Enum):
    ADDED = "added"
    REMOVED = "removed"


@dataclass(frozen=True)
class Node:
    id: int
    block: str
    level: Level
    name: str = ""


@dataclass(frozen=True)
class InterdepSpec:
    """One interdependency: nodes of ``source`` supply nodes of ``target``."""

    source_block: str
    source_level: Level
    target_block: str
    target_level: Level

    def __post_init__(self):
        object.__setattr__(self, "source_level", Level.parse(self.source_level))
        object.__setattr__(self, "target_level", Level.parse(self.target_level))
        if self.source_block == self.target_block:
            raise NetworkError(f"interdependency must join two different blocks, got {self.source_block!r} twice")

    @property
    def name(self) -> str:
        return (f"{self.source_block}:{self.source_level.label}"
                f"->{self.target_block}:{self.target_level.label}")

    @classmethod
    def parse(cls, text: str) -> "InterdepSpec":
        """Parse ``"power:demand->water:supply"``."""
        try:
            src, dst = text.split("->")
            sb, sl = src.split(":")
            tb, tl = dst.split(":")
        except ValueError:
            raise NetworkError(f"cannot parse interdependency {text!r}; "
                               "expected BLOCK:LEVEL->BLOCK:LEVEL") from None
        return cls(sb.strip(), Level.parse(sl), tb.strip(), Level.parse(tl))


@dataclass(frozen=True)
class NetworkMeta:
    nodes: tuple[Node, ...]
    interdeps: tuple[InterdepSpec, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "interdeps", tuple(self.interdeps))
        if not self.nodes:
            raise NetworkError("network has no nodes")
        ids = [nd.id for nd in self.nodes]
        if ids != list(range(len(ids))):
            dupes = sorted({i for i in ids if ids.count(i) > 1})
            if dupes:
                raise NetworkError(f"duplicate node ids: {dupes}")
            raise NetworkError("node ids must be 0..N-1 in order without gaps")
        blocks = set(self.blocks)
        seen = set()
        for spec in self.interdeps:
            for b in (spec.source_block, spec.target_block):
                if b not in blocks:
                    raise NetworkError(f"interdependency {spec.name} references unknown block {b!r}")
            key = (spec.source_block, spec.source_level, spec.target_block, spec.target_level)
            if key in seen:
                raise NetworkError(f"duplicate interdependency {spec.name}")
            seen.add(key)
            if not self.members(spec.source_block, spec.source_level):
                raise NetworkError(f"interdependency {spec.name} has an empty supplier side")
            if not self.members(spec.target_block, spec.target_level):
                raise NetworkError(f"interdependency {spec.name} has an empty dependent side")
        for b in self.blocks:
            for lvl in (Level.SUPPLY, Level.DEMAND):
                if not self.members(b, lvl):
                    raise NetworkError(f"block {b!r} has no {lvl.label} node")

    @classmethod
    def from_blocks(cls, blocks: Sequence[tuple[str, int, int, int]],
                    interdeps: Iterable[InterdepSpec] = ()) -> "NetworkMeta":
        """Build a roster from ``(name, n_supply, n_transmission, n_demand)`` tuples."""
        nodes = []
        for name, ns, nt, nd in blocks:
            for lvl, count in ((Level.SUPPLY, ns), (Level.TRANSMISSION, nt), (Level.DEMAND, nd)):
                for k in range(count):
                    nodes.append(Node(len(nodes), name, lvl, f"{name}-{lvl.label[0]}{k}"))
        return cls(tuple(nodes), tuple(interdeps))

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @cached_property
    def blocks(self) -> list[str]:
        out: list[str] = []
        for nd in self.nodes:
            if nd.block not in out:
                out.append(nd.block)
        return out

    @cached_property
    def block_index(self) -> np.ndarray:
        lookup = {b: k for k, b in enumerate(self.blocks)}
        return np.array([lookup[nd.block] for nd in self.nodes], dtype=np.int32)

    @cached_property
    def level_array(self) -> np.ndarray:
        return np.array([int(nd.level) for nd in self.nodes], dtype=np.int32)

    def members(self, block: str, level: Level) -> list[int]:
        return [nd.id for nd in self.nodes if nd.block == block and nd.level == level]

    def digest(self) -> str:
        """Stable hash of the roster and interdependencies (edges excluded)."""
        payload = json.dumps(_meta_to_dict(self), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(payload.encode()).hexdigest()


# ----------------------------------------------------------------------------
# Feasible set
# ----------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FeasibleSet:
    """Directed node pairs that may carry an edge.

    ``relation[k]`` names the structure a pair belongs to: block ``b`` has
    relation ``b`` and interdependency ``m`` has relation ``n_blocks + m``.
    Pairs outside every structure (only present in the unconstrained set)
    carry relation ``-1``.
    """

    n_nodes: int
    pairs: np.ndarray
    relation: np.ndarray
    relation_names: tuple[str, ...]
    index: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return len(self.pairs)

    def __contains__(self, pair) -> bool:
        i, j = pair
        return 0 <= i < self.n_nodes and 0 <= j < self.n_nodes and self.index[i, j] >= 0

    def __iter__(self):
        return (tuple(p) for p in self.pairs.tolist())

    @cached_property
    def relation_matrix(self) -> np.ndarray:
        rel = np.full((self.n_nodes, self.n_nodes), -1, dtype=np.int32)
        rel[self.pairs[:, 0], self.pairs[:, 1]] = self.relation
        return rel

    @cached_property
    def mask(self) -> np.ndarray:
        return self.index >= 0

    @classmethod
    def _from_pairs(cls, n: int, pairs: list[tuple[int, int]], relation: list[int], names) -> "FeasibleSet":
        order = sorted(range(len(pairs)), key=lambda k: pairs[k])
        arr = np.array([pairs[k] for k in order], dtype=np.int32).reshape(-1, 2)
        rel = np.array([relation[k] for k in order], dtype=np.int32)
        index = np.full((n, n), -1, dtype=np.int64)
        index[arr[:, 0], arr[:, 1]] = np.arange(len(arr))
        for a in (arr, rel, index):
            a.setflags(write=False)
        return cls(n, arr, rel, tuple(names), index)

    @classmethod
    def all_pairs(cls, meta: NetworkMeta) -> "FeasibleSet":
        """Every ordered pair ``i != j``; used by the unconstrained proposal."""
        base = build_feasible_set(meta)
        n = meta.n_nodes
        rel = base.relation_matrix
        pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
        return cls._from_pairs(n, pairs, [int(rel[i, j]) for i, j in pairs], base.relation_names)


def build_feasible_set(meta: NetworkMeta) -> FeasibleSet:
    nb = len(meta.blocks)
    blk = meta.block_index
    lvl = meta.level_array
    pairs: list[tuple[int, int]] = []
    relation: list[int] = []
    for i in range(meta.n_nodes):
        for j in range(meta.n_nodes):
            if blk[i] == blk[j] and lvl[i] > lvl[j]:
                pairs.append((i, j))
                relation.append(int(blk[i]))
    for m, spec in enumerate(meta.interdeps):
        for i in meta.members(spec.source_block, spec.source_level):
            for j in meta.members(spec.target_block, spec.target_level):
                pairs.append((i, j))
                relation.append(nb + m)
    names = list(meta.blocks) + [s.name for s in meta.interdeps]
    return FeasibleSet._from_pairs(meta.n_nodes, pairs, relation, names)


# ----------------------------------------------------------------------------
# Topology
# ----------------------------------------------------------------------------


class Topology:
    """Directed graph stored as sorted forward and reverse adjacency lists.

    ``succ[i, :out_deg[i]]`` are the successors of ``i``; ``pred`` mirrors it.
    A dense boolean ``adj`` gives constant-time membership.  When built with a
    relation matrix, out/in degrees are also tracked per relation, which is
    what the incremental validator reads.
    """

    __slots__ = ("n", "succ", "out_deg", "pred", "in_deg", "adj", "relation",
                 "n_relations", "rel_out", "rel_in", "n_edges")

    def __init__(self, n: int, relation: np.ndarray | None = None):
        self.n = n
        self.succ = np.zeros((n, max(n, 1)), dtype=np.int32)
        self.pred = np.zeros((n, max(n, 1)), dtype=np.int32)
        self.out_deg = np.zeros(n, dtype=np.int32)
        self.in_deg = np.zeros(n, dtype=np.int32)
        self.adj = np.zeros((n, n), dtype=np.uint8)
        if relation is None:
            relation = np.full((n, n), -1, dtype=np.int32)
        self.n_relations = int(relation.max()) + 1 if relation.size else 0
        # relation -1 is routed to the trailing bucket
        self.relation = np.where(relation < 0, self.n_relations, relation).astype(np.int32)
        self.rel_out = np.zeros((n, self.n_relations + 1), dtype=np.int32)
        self.rel_in = np.zeros((n, self.n_relations + 1), dtype=np.int32)
        self.n_edges = 0

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]],
                   relation: np.ndarray | None = None) -> "Topology":
        topo = cls(n, relation)
        for i, j in edges:
            if not topo.adj[i, j]:
                topo.add_edge(int(i), int(j))
        return topo

    def copy(self) -> "Topology":
        out = Topology.__new__(Topology)
        out.n = self.n
        out.n_relations = self.n_relations
        out.relation = self.relation
        out.n_edges = self.n_edges
        for name in ("succ", "out_deg", "pred", "in_deg", "adj", "rel_out", "rel_in"):
            setattr(out, name, getattr(self, name).copy())
        return out

    def has_edge(self, i: int, j: int) -> bool:
        return bool(self.adj[i, j])

    def forward(self, i: int) -> np.ndarray:
        return self.succ[i, : self.out_deg[i]]

    def reverse(self, j: int) -> np.ndarray:
        return self.pred[j, : self.in_deg[j]]

    def edges(self) -> list[tuple[int, int]]:
        return [(int(i), int(j)) for i, j in zip(*np.nonzero(self.adj))]

    def add_edge(self, i: int, j: int) -> None:
        _insert_sorted(self.succ[i], self.out_deg[i], j)
        self.out_deg[i] += 1
        _insert_sorted(self.pred[j], self.in_deg[j], i)
        self.in_deg[j] += 1
        self.adj[i, j] = 1
        r = self.relation[i, j]
        self.rel_out[i, r] += 1
        self.rel_in[j, r] += 1
        self.n_edges += 1

    def remove_edge(self, i: int, j: int) -> None:
        _delete_sorted(self.succ[i], self.out_deg[i], j)
        self.out_deg[i] -= 1
        _delete_sorted(self.pred[j], self.in_deg[j], i)
        self.in_deg[j] -= 1
        self.adj[i, j] = 0
        r = self.relation[i, j]
        self.rel_out[i, r] -= 1
        self.rel_in[j, r] -= 1
        self.n_edges -= 1

    def average_degree(self) -> float:
        return self.n_edges / self.n if self.n else 0.0

    def __eq__(self, other) -> bool:
        if not isinstance(other, Topology):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.adj, other.adj)

    def __repr__(self) -> str:
        return f"Topology(n={self.n}, edges={self.n_edges})"


def _insert_sorted(row: np.ndarray, length: int, value: int) -> None:
    pos = int(np.searchsorted(row[:length], value))
    row[pos + 1 : length + 1] = row[pos:length].copy()
    row[pos] = value


def _delete_sorted(row: np.ndarray, length: int, value: int) -> None:
    pos = int(np.searchsorted(row[:length], value))
    row[pos : length - 1] = row[pos + 1 : length].copy()


def toggle_edge(topo: Topology, i: int, j: int, feasible: FeasibleSet | None = None) -> Toggle:
    """Flip the presence of edge ``(i, j)`` in place and report what happened."""
    if feasible is not None and (i, j) not in feasible:
        raise NetworkError(f"pair ({i}, {j}) is not in the feasible set")
    if i == j:
        raise NetworkError("self-loops are never toggleable")
    if topo.adj[i, j]:
        topo.remove_edge(i, j)
        return Toggle.REMOVED
    topo.add_edge(i, j)
    return Toggle.ADDED


# ----------------------------------------------------------------------------
# Constraints
# ----------------------------------------------------------------------------

CONSTRAINT_TEXT = {
    1: "every supply node reaches a demand node of its block",
    2: "every demand node is reached from a supply node of its block",
    3: "every transmission node reaches a demand node of its block",
    4: "every transmission node is reached from a supply node of its block",
    5: "every supplier-side node feeds a dependent-side node of its interdependency",
    6: "every dependent-side node is fed by a supplier-side node of its interdependency",
    7: "intra-block edges run supply->transmission, transmission->demand or supply->demand",
    8: "cross-block edges follow a declared interdependency",
    9: "no cycle inside any block or interdependency",
}


@dataclass
class ConstraintReport:
    passed: dict[int, bool]
    violations: dict[int, list]

    @property
    def valid(self) -> bool:
        return all(self.passed[k] for k in range(1, 10))

    def failed(self) -> list[int]:
        return [k for k in range(1, 10) if not self.passed[k]]

    def __str__(self) -> str:
        if self.valid:
            return "all constraints satisfied"
        return "; ".join(f"({k}) {CONSTRAINT_TEXT[k]}: {self.violations[k][:5]}" for k in self.failed())


def _reach(start: int, neighbours, allowed, targets) -> bool:
    seen = {start}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for v in neighbours(u):
            v = int(v)
            if v in seen or not allowed(v):
                continue
            if v in targets:
                return True
            seen.add(v)
            queue.append(v)
    return False


def check_constraints_full(topo: Topology, meta: NetworkMeta) -> ConstraintReport:
    """Evaluate all nine constraints by graph search; never short-circuits."""
    violations: dict[int, list] = {k: [] for k in range(1, 10)}
    blk = meta.block_index
    lvl = meta.level_array
    nb = len(meta.blocks)
    edges = topo.edges()

    for b, name in enumerate(meta.blocks):
        supply = set(meta.members(name, Level.SUPPLY))
        trans = set(meta.members(name, Level.TRANSMISSION))
        demand = set(meta.members(name, Level.DEMAND))
        in_block = lambda v, b=b: blk[v] == b  # noqa: E731
        for u in sorted(supply):
            if not _reach(u, topo.forward, in_block, demand):
                violations[1].append(u)
        for u in sorted(demand):
            if not _reach(u, topo.reverse, in_block, supply):
                violations[2].append(u)
        for u in sorted(trans):
            if not _reach(u, topo.forward, in_block, demand):
                violations[3].append(u)
            if not _reach(u, topo.reverse, in_block, supply):
                violations[4].append(u)

    sub_edges: list[list[tuple[int, int]]] = [[] for _ in range(nb + len(meta.interdeps))]
    spec_key = {(meta.blocks.index(s.source_block), int(s.source_level),
                 meta.blocks.index(s.target_block), int(s.target_level)): m
                for m, s in enumerate(meta.interdeps)}
    for i, j in edges:
        if blk[i] == blk[j]:
            if lvl[i] > lvl[j]:
                sub_edges[blk[i]].append((i, j))
            else:
                violations[7].append((i, j))
                sub_edges[blk[i]].append((i, j))
        else:
            m = spec_key.get((blk[i], lvl[i], blk[j], lvl[j]))
            if m is None:
                violations[8].append((i, j))
            else:
                sub_edges[nb + m].append((i, j))

    for m, spec in enumerate(meta.interdeps):
        sources = meta.members(spec.source_block, spec.source_level)
        targets = meta.members(spec.target_block, spec.target_level)
        fwd: dict[int, list[int]] = {}
        rev: dict[int, list[int]] = {}
        for i, j in sub_edges[nb + m]:
            fwd.setdefault(i, []).append(j)
            rev.setdefault(j, []).append(i)
        tset, sset = set(targets), set(sources)
        for u in sources:
            if not _reach(u, lambda x: fwd.get(x, ()), lambda v: True, tset):
                violations[5].append((spec.name, u))
        for u in targets:
            if not _reach(u, lambda x: rev.get(x, ()), lambda v: True, sset):
                violations[6].append((spec.name, u))

    names = list(meta.blocks) + [s.name for s in meta.interdeps]
    for r, sub in enumerate(sub_edges):
        graph: dict[int, set[int]] = {}
        for i, j in sub:
            graph.setdefault(j, set()).add(i)
        try:
            tuple(graphlib.TopologicalSorter(graph).static_order())
        except graphlib.CycleError as exc:
            violations[9].append((names[r], exc.args[1]))

    return ConstraintReport({k: not v for k, v in violations.items()}, violations)


def validate_incremental(topo_after: Topology, i: int, j: int, kind: Toggle,
                         meta: NetworkMeta | None = None) -> bool:
    """Post-toggle validity from local degrees alone.

    Assumes the pre-toggle topology satisfied every constraint and ``(i, j)``
    is feasible.  Then the result is valid iff ``i`` keeps an outgoing edge
    and ``j`` keeps an incoming edge.  Degrees are read inside the relation
    (block or interdependency) that owns ``(i, j)``: a power substation that
    supplies both the water and the gas network may lose its last water edge
    while keeping a gas edge.
    """
    if kind is Toggle.ADDED:
        return True
    r = topo_after.relation[i, j]
    return bool(topo_after.rel_out[i, r] > 0 and topo_after.rel_in[j, r] > 0)


def relation_degrees_ok(topo: Topology, meta: NetworkMeta, feasible: FeasibleSet) -> bool:
    """Degree form of constraints (1)-(6); equivalent to the path form on feasible graphs."""
    nb = len(meta.blocks)
    lvl = meta.level_array
    blk = meta.block_index
    for v in range(meta.n_nodes):
        b = blk[v]
        if lvl[v] != Level.DEMAND and topo.rel_out[v, b] == 0:
            return False
        if lvl[v] != Level.SUPPLY and topo.rel_in[v, b] == 0:
            return False
    for m, spec in enumerate(meta.interdeps):
        r = nb + m
        for v in meta.members(spec.source_block, spec.source_level):
            if topo.rel_out[v, r] == 0:
                return False
        for v in meta.members(spec.target_block, spec.target_level):
            if topo.rel_in[v, r] == 0:
                return False
    return True


class FullValidator:
    """Short-circuiting graph-search check of all nine constraints.

    This is the production "full" validation path: breadth-first searches
    over the adjacency lists, restricted to each block, plus class-membership
    and interdependency checks.  Acyclicity is implied by class membership.
    It stops at the first violation.  Compiled with numba.
    """

    def __init__(self, meta: NetworkMeta):
        fs = build_feasible_set(meta)
        nb = len(meta.blocks)
        rel = fs.relation_matrix
        # -1 infeasible, -2 intra-block, m >= 0 interdependency m
        self.pair_class = np.where(rel < 0, -1, np.where(rel < nb, -2, rel - nb)).astype(np.int32)
        self.block = meta.block_index
        self.level = meta.level_array
        self.n_specs = len(meta.interdeps)
        src = np.zeros((self.n_specs, 2), dtype=np.int32)
        dst = np.zeros((self.n_specs, 2), dtype=np.int32)
        for m, spec in enumerate(meta.interdeps):
            src[m] = (meta.blocks.index(spec.source_block), int(spec.source_level))
            dst[m] = (meta.blocks.index(spec.target_block), int(spec.target_level))
        # role[v, m]: 1 supplier side of m, 2 dependent side, 0 neither
        self.role = np.zeros((meta.n_nodes, max(self.n_specs, 1)), dtype=np.int8)
        for m in range(self.n_specs):
            for v in range(meta.n_nodes):
                key = (self.block[v], self.level[v])
                if key == tuple(src[m]):
                    self.role[v, m] = 1
                elif key == tuple(dst[m]):
                    self.role[v, m] = 2

    def __call__(self, topo: Topology) -> bool:
        return bool(_full_valid(topo.succ, topo.out_deg, topo.pred, topo.in_deg,
                                self.block, self.level, self.pair_class, self.role, self.n_specs))


@numba.njit(cache=True)
def _bfs_hits(start, nbrs, deg, block, level, target_level, queue, stamp, mark):
    b = block[start]
    head = 0
    tail = 0
    queue[tail] = start
    tail += 1
    stamp[start] = mark
    while head < tail:
        u = queue[head]
        head += 1
        for k in range(deg[u]):
            v = nbrs[u, k]
            if block[v] != b or stamp[v] == mark:
                continue
            if level[v] == target_level:
                return True
            stamp[v] = mark
            queue[tail] = v
            tail += 1
    return False


@numba.njit(cache=True)
def _full_valid(succ, out_deg, pred, in_deg, block, level, pair_class, role, n_specs):
    n = block.shape[0]
    queue = np.empty(n, dtype=np.int32)
    stamp = np.zeros(n, dtype=np.int64)
    mark = 0
    # (7)-(8): every edge belongs to a feasible class
    for u in range(n):
        for k in range(out_deg[u]):
            if pair_class[u, succ[u, k]] == -1:
                return False
    # (1)-(4): paths inside the block
    for u in range(n):
        if level[u] == 2 or level[u] == 1:
            mark += 1
            if not _bfs_hits(u, succ, out_deg, block, level, 0, queue, stamp, mark):
                return False
        if level[u] == 0 or level[u] == 1:
            mark += 1
            if not _bfs_hits(u, pred, in_deg, block, level, 2, queue, stamp, mark):
                return False
    # (5)-(6): single-hop paths along each interdependency
    for m in range(n_specs):
        for u in range(n):
            if role[u, m] == 1:
                ok = False
                for k in range(out_deg[u]):
                    if pair_class[u, succ[u, k]] == m:
                        ok = True
                        break
                if not ok:
                    return False
            elif role[u, m] == 2:
                ok = False
                for k in range(in_deg[u]):
                    if pair_class[pred[u, k], u] == m:
                        ok = True
                        break
                if not ok:
                    return False
    # (9) follows from (7)-(8): intra-block edges strictly descend a level and every
    # interdependency joins two distinct blocks, so no structure can close a loop
    return True


# ----------------------------------------------------------------------------
# JSON network files
# ----------------------------------------------------------------------------


def _meta_to_dict(meta: NetworkMeta) -> dict:
    return {
        "nodes": [{"id": nd.id, "name": nd.name, "block": nd.block, "level": nd.level.label}
                  for nd in meta.nodes],
        "interdeps": [{"source_block": s.source_block, "source_level": s.source_level.label,
                       "target_block": s.target_block, "target_level": s.target_level.label}
                      for s in meta.interdeps],
    }


def network_to_dict(meta: NetworkMeta, topo: Topology | None = None, extra: dict | None = None) -> dict:
    doc = _meta_to_dict(meta)
    doc["edges"] = [list(e) for e in sorted(topo.edges())] if topo is not None else []
    if extra:
        doc.update(extra)
    return doc


def save_network(path: str | Path, meta: NetworkMeta, topo: Topology | None = None,
                 extra: dict | None = None) -> None:
    doc = network_to_dict(meta, topo, extra)
    Path(path).write_text(json.dumps(doc, indent=1) + "\n")


def network_from_dict(doc: dict) -> tuple[NetworkMeta, Topology]:
    try:
        raw = sorted(doc["nodes"], key=lambda d: int(d["id"]))
        nodes = tuple(Node(int(d["id"]), str(d["block"]), Level.parse(d["level"]),
                           str(d.get("name", ""))) for d in raw)
        interdeps = tuple(InterdepSpec(d["source_block"], Level.parse(d["source_level"]),
                                       d["target_block"], Level.parse(d["target_level"]))
                          for d in doc.get("interdeps", []))
    except (KeyError, TypeError) as exc:
        raise NetworkError(f"malformed network document: {exc}") from None
    meta = NetworkMeta(nodes, interdeps)
    fs = build_feasible_set(meta)
    edges = []
    for e in doc.get("edges", []):
        i, j = int(e[0]), int(e[1])
        if not (0 <= i < meta.n_nodes and 0 <= j < meta.n_nodes) or i == j:
            raise NetworkError(f"edge {e} out of range")
        if (i, j) not in fs:
            raise NetworkError(f"edge {e} is not a feasible pair ({meta.nodes[i].name} -> {meta.nodes[j].name})")
        edges.append((i, j))
    return meta, Topology.from_edges(meta.n_nodes, edges, fs.relation_matrix)


def load_network(path: str | Path) -> tuple[NetworkMeta, Topology]:
    return network_from_dict(json.loads(Path(path).read_text()))
