"""Hierarchical stochastic block model prior over adjacency matrices.

Each directed pair is an independent Bernoulli edge whose probability depends
only on the (block, level) classes of its endpoints.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .network import FeasibleSet, Level, NetworkMeta, Topology, build_feasible_set

ClassKey = tuple[str, str, Level, Level]


class PriorError(ValueError):
    pass


@dataclass
class HsbmPrior:
    g: dict[ClassKey, float] = field(default_factory=dict)
    default_feasible: float = 0.5
    off_class: float = 0.5

    def pair_probabilities(self, meta: NetworkMeta, pairs: FeasibleSet) -> np.ndarray:
        """Edge probability of every pair in ``pairs``; raises on values outside (0, 1)."""
        feasible = build_feasible_set(meta)
        blocks, levels = meta.blocks, meta.level_array
        blk = meta.block_index
        out = np.empty(len(pairs))
        for k, (i, j) in enumerate(pairs.pairs.tolist()):
            if (i, j) in feasible:
                key = (blocks[blk[i]], blocks[blk[j]], Level(levels[i]), Level(levels[j]))
                p = self.g.get(key, self.default_feasible)
            else:
                p = self.off_class
            if not 0.0 < p < 1.0:
                raise PriorError(f"edge probability {p} for pair ({i}, {j}) must lie strictly inside (0, 1)")
            out[k] = p
        return out

    def to_dict(self) -> dict:
        return {
            "default_feasible": self.default_feasible,
            "off_class": self.off_class,
            "classes": [{"source_block": a, "target_block": b, "source_level": la.label,
                         "target_level": lb.label, "p": p}
                        for (a, b, la, lb), p in self.g.items()],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "HsbmPrior":
        g = {(c["source_block"], c["target_block"], Level.parse(c["source_level"]),
              Level.parse(c["target_level"])): float(c["p"]) for c in d.get("classes", [])}
        return cls(g, float(d.get("default_feasible", 0.5)), float(d.get("off_class", 0.5)))

    @classmethod
    def load(cls, path: str | Path) -> "HsbmPrior":
        return cls.from_dict(json.loads(Path(path).read_text()))


def hsbm_log_prior(topo: Topology, meta: NetworkMeta, prior: HsbmPrior,
                   constrained: bool = True) -> float:
    """``sum log p`` over present pairs plus ``sum log(1 - p)`` over absent ones.

    Constrained: only feasible pairs count (all others are structurally
    impossible).  Unconstrained: every ordered pair ``i != j`` counts, pairs
    outside the feasible classes at ``prior.off_class``.
    """
    pairs = build_feasible_set(meta) if constrained else FeasibleSet.all_pairs(meta)
    p = prior.pair_probabilities(meta, pairs)
    present = topo.adj[pairs.pairs[:, 0], pairs.pairs[:, 1]].astype(bool)
    return float(np.sum(np.where(present, np.log(p), np.log1p(-p))))
