"""Size of the topology search space with and without infrastructure constraints."""

from __future__ import annotations

import itertools
from math import comb, perm


def count_candidate_topologies(n_supply: int, n_demand: int) -> int:
    """Closed-form count of constrained two-level topologies.

    With ``m1 = max(n_supply, n_demand)``, ``m2 = min(...)`` and
    ``m3 = m1*m2 - m1`` the count is
    ``(m1 - m2) * m2 * P(m1, m2) * sum_{i=0}^{m3} P(m3, i)``.
    Evaluated verbatim; note it is zero whenever the two counts are equal.
    """
    if n_supply < 1 or n_demand < 1:
        raise ValueError("n_supply and n_demand must both be >= 1")
    m1, m2 = max(n_supply, n_demand), min(n_supply, n_demand)
    m3 = m1 * m2 - m1
    return (m1 - m2) * m2 * perm(m1, m2) * sum(perm(m3, i) for i in range(m3 + 1))


def count_unconstrained(n_nodes: int) -> int:
    """``2 ** C(n, 2)``: every unordered pair either carries an edge or not."""
    if n_nodes < 2:
        raise ValueError("need at least two nodes")
    return 2 ** comb(n_nodes, 2)


def exhaustive_count(n_supply: int, n_demand: int) -> int:
    """Brute-force count of valid supply->demand topologies.

    Enumerates every subset of the ``2 ** C(n, 2)`` node-pair patterns, keeps
    those that only use supply-demand pairs (oriented supply -> demand) and
    in which every supply node has a successor and every demand node a
    predecessor.
    """
    n = n_supply + n_demand
    pairs = list(itertools.combinations(range(n), 2))
    valid = 0
    for mask in range(2 ** len(pairs)):
        chosen = [pairs[k] for k in range(len(pairs)) if mask >> k & 1]
        if any(not (a < n_supply <= b) for a, b in chosen):
            continue
        outs = {a for a, _ in chosen}
        ins = {b for _, b in chosen}
        if len(outs) == n_supply and len(ins) == n_demand:
            valid += 1
    return valid
