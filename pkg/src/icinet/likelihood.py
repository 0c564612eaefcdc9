"""Log-likelihood of cascade data under a candidate topology.

Two kernels compute the same quantity.  The naive one loops over every node
pair at every step, ``O(sum_c T_c * N^2)``.  The edge-list one only walks the
out-neighbours of nodes that are active at each step,
``O(sum_c T_c * (N + E))``.  A failure no active in-neighbour can explain
yields ``-inf``.
"""

from __future__ import annotations

import math

import numba
import numpy as np

from .cascade import CascadeDataset, CascadeError
from .network import Topology


@numba.njit(cache=True)
def _log1mexp(x):
    # log(1 - exp(x)) for x <= 0
    if x == 0.0:
        return -np.inf
    if x > -0.6931471805599453:
        return math.log(-math.expm1(x))
    return math.log1p(-math.exp(x))


@numba.njit(cache=True)
def _loglik_naive(adj, log_surv, ft, T, markovian):
    C, N = ft.shape
    total = 0.0
    for c in range(C):
        for t in range(1, T[c]):
            for j in range(N):
                if ft[c, j] <= t:
                    continue
                s = 0.0
                for k in range(N):
                    if k == j or adj[k, j] == 0:
                        continue
                    fk = ft[c, k]
                    if fk == t or (not markovian and fk < t):
                        s += log_surv[k, j]
                if ft[c, j] == t + 1:
                    total += _log1mexp(s)
                else:
                    total += s
                if total == -np.inf:
                    return total
    return total


@numba.njit(cache=True)
def _loglik_edgelist(succ, out_deg, log_surv, ft, T, order, ptr, markovian):
    C, N = ft.shape
    acc = np.zeros(N)
    touched = np.zeros(N, dtype=np.bool_)
    tlist = np.empty(N, dtype=np.int32)
    total = 0.0
    for c in range(C):
        for t in range(1, T[c]):
            lo = ptr[c, t] if markovian else 0
            hi = ptr[c, t + 1]
            nt = 0
            for a in range(lo, hi):
                k = order[c, a]
                for e in range(out_deg[k]):
                    j = succ[k, e]
                    if ft[c, j] > t:
                        if not touched[j]:
                            touched[j] = True
                            tlist[nt] = j
                            nt += 1
                        acc[j] += log_surv[k, j]
            for a in range(ptr[c, t + 1], ptr[c, t + 2]):
                j = order[c, a]
                if not touched[j]:
                    total = -np.inf
                else:
                    total += _log1mexp(acc[j])
            for a in range(nt):
                j = tlist[a]
                if ft[c, j] > t + 1:
                    total += acc[j]
                acc[j] = 0.0
                touched[j] = False
            if total == -np.inf:
                return total
    return total


class CascadeLikelihood:
    """Cascade data bound to a propagation probability, ready for repeated evaluation."""

    def __init__(self, dataset: CascadeDataset, q: float | None = None,
                 markovian: bool | None = None):
        if len(dataset) == 0:
            raise CascadeError("dataset has no scenarios")
        self.dataset = dataset
        self.q = dataset.q if q is None else float(q)
        if not 0.0 < self.q <= 1.0:
            raise CascadeError(f"q must lie in (0, 1], got {self.q}")
        self.markovian = dataset.markovian if markovian is None else bool(markovian)
        with np.errstate(divide="ignore"):
            self.log_surv = np.log1p(-dataset.propagation_matrix(self.q))
        self.ft, self.T, self.order, self.ptr = dataset.packed

    def _check(self, topo: Topology) -> None:
        if topo.n != self.ft.shape[1]:
            raise CascadeError(f"topology has {topo.n} nodes, data has {self.ft.shape[1]}")

    def naive(self, topo: Topology) -> float:
        self._check(topo)
        return float(_loglik_naive(topo.adj, self.log_surv, self.ft, self.T, self.markovian))

    def edgelist(self, topo: Topology) -> float:
        self._check(topo)
        return float(_loglik_edgelist(topo.succ, topo.out_deg, self.log_surv, self.ft, self.T,
                                      self.order, self.ptr, self.markovian))


def log_likelihood_naive(topo: Topology, dataset: CascadeDataset, q: float | None = None,
                         markovian: bool | None = None) -> float:
    return CascadeLikelihood(dataset, q, markovian).naive(topo)


def log_likelihood_edgelist(topo: Topology, dataset: CascadeDataset, q: float | None = None,
                            markovian: bool | None = None) -> float:
    return CascadeLikelihood(dataset, q, markovian).edgelist(topo)
