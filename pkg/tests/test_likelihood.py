import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from icinet import (CascadeDataset, CascadeScenario, Topology, log_likelihood_edgelist,
                    log_likelihood_naive, simulate_cascade)
from icinet.cascade import CascadeError
from icinet.likelihood import CascadeLikelihood


def dataset(*scenarios, q=0.4, markovian=True):
    return CascadeDataset([CascadeScenario(np.array(ff), T) for ff, T in scenarios], q, markovian=markovian)


def reference_loglik(adj, ds, q):
    """Plain-Python product of per-node transition probabilities."""
    total = 0.0
    for s in ds.scenarios:
        ff = s.first_failure
        for t in range(1, s.T):
            for j in range(len(ff)):
                if 0 < ff[j] <= t:
                    continue
                if ds.markovian:
                    k = sum(1 for i in range(len(ff)) if adj[i][j] and ff[i] == t)
                else:
                    k = sum(1 for i in range(len(ff)) if adj[i][j] and 0 < ff[i] <= t)
                p_fail = 1 - (1 - q) ** k
                p = p_fail if ff[j] == t + 1 else 1 - p_fail
                if p == 0:
                    return -math.inf
                total += math.log(p)
    return total


BOTH = [log_likelihood_naive, log_likelihood_edgelist]


@pytest.mark.parametrize("f", BOTH)
def test_single_step_dataset_scores_zero(f):
    topo = Topology.from_edges(2, [(0, 1)])
    assert f(topo, dataset(([1, 0], 1))) == 0.0


@pytest.mark.parametrize("f", BOTH)
def test_one_transmission(f):
    topo = Topology.from_edges(2, [(0, 1)])
    assert f(topo, dataset(([1, 2], 2))) == pytest.approx(math.log(0.4))


@pytest.mark.parametrize("f", BOTH)
def test_one_survival_at_the_active_step_only(f):
    topo = Topology.from_edges(2, [(0, 1)])
    assert f(topo, dataset(([1, 0], 2))) == pytest.approx(math.log(0.6))
    # a longer record adds nothing: node 0 is only active at t=1
    assert f(topo, dataset(([1, 0], 3))) == pytest.approx(math.log(0.6))
    assert f(topo, dataset(([1, 0], 3), markovian=False)) == pytest.approx(2 * math.log(0.6))


@pytest.mark.parametrize("f", BOTH)
def test_three_failed_sources_into_one_target(f):
    q = 0.3
    topo = Topology.from_edges(4, [(0, 3), (1, 3), (2, 3)])
    ds = dataset(([1, 1, 1, 2], 2), q=q)
    assert f(topo, ds) == pytest.approx(math.log(1 - (1 - q) ** 3))


@pytest.mark.parametrize("f", BOTH)
def test_unexplained_failure_is_impossible(f):
    assert f(Topology(2), dataset(([1, 2], 2))) == -math.inf


@pytest.mark.parametrize("f", BOTH)
def test_certain_spread_that_did_not_happen_is_impossible(f):
    topo = Topology.from_edges(2, [(0, 1)])
    assert f(topo, dataset(([1, 0], 2), q=1.0)) == -math.inf


@pytest.mark.parametrize("f", BOTH)
def test_markovian_flag_changes_who_counts(f):
    topo = Topology.from_edges(3, [(0, 1), (0, 2), (1, 2)])
    ff = [1, 2, 3]
    markov = f(topo, dataset((ff, 3), q=0.5, markovian=True))
    cumulative = f(topo, dataset((ff, 3), q=0.5, markovian=False))
    assert markov == pytest.approx(math.log(0.5) + math.log(0.5) + math.log(0.5))
    assert cumulative == pytest.approx(math.log(0.5) + math.log(0.5) + math.log(0.75))


def test_override_q_and_dimension_check():
    topo = Topology.from_edges(2, [(0, 1)])
    ds = dataset(([1, 2], 2))
    assert log_likelihood_edgelist(topo, ds, q=0.9) == pytest.approx(math.log(0.9))
    with pytest.raises(CascadeError):
        log_likelihood_naive(Topology(3), ds)


def _random_case(rng):
    n = int(rng.integers(2, 31))
    density = rng.uniform(0.02, 0.4)
    adj = rng.random((n, n)) < density
    np.fill_diagonal(adj, False)
    topo = Topology.from_edges(n, zip(*np.nonzero(adj)))
    q = float(rng.uniform(0.05, 1.0))
    markovian = bool(rng.random() < 0.7)
    scenarios = []
    for _ in range(int(rng.integers(1, 11))):
        if rng.random() < 0.6:
            # simulated on a perturbed graph so some records are unexplained
            other = topo.copy() if rng.random() < 0.5 else Topology.from_edges(n, zip(*np.nonzero(rng.random((n, n)) < density)))
            s = simulate_cascade(other, q, 0.2, markovian, rng)
            if s.T > 10:
                s = CascadeScenario(np.where(s.first_failure > 10, 0, s.first_failure), 10)
        else:
            T = int(rng.integers(1, 11))
            ff = rng.integers(0, T + 1, size=n)
            ff[rng.integers(n)] = 1
            s = CascadeScenario(ff, T)
        scenarios.append(s)
    return topo, CascadeDataset(scenarios, q, markovian=markovian)


def test_kernels_agree_on_fuzzed_cases():
    rng = np.random.default_rng(2024)
    n_inf = 0
    for case in range(300):
        topo, ds = _random_case(rng)
        lik = CascadeLikelihood(ds)
        a, b = lik.naive(topo), lik.edgelist(topo)
        if a == -math.inf or b == -math.inf:
            assert a == b == -math.inf, case
            n_inf += 1
        else:
            assert abs(a - b) <= 1e-9 * max(1.0, abs(a)), case
    assert 0 < n_inf < 300


def test_kernels_match_plain_python_reference():
    rng = np.random.default_rng(7)
    for _ in range(60):
        topo, ds = _random_case(rng)
        want = reference_loglik(topo.adj, ds, ds.q)
        got = log_likelihood_edgelist(topo, ds)
        if want == -math.inf:
            assert got == -math.inf
        else:
            assert got == pytest.approx(want, rel=1e-9, abs=1e-9)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**31 - 1))
def test_adding_an_edge_never_creates_an_impossibility_from_a_possible_record(seed):
    # with q < 1 a survival is never impossible, so extra edges keep -inf away
    rng = np.random.default_rng(seed)
    topo, ds = _random_case(rng)
    ds = CascadeDataset(ds.scenarios, min(ds.q, 0.95), markovian=ds.markovian)
    before = log_likelihood_edgelist(topo, ds)
    i, j = rng.choice(topo.n, size=2, replace=False)
    if not topo.adj[i, j]:
        topo.add_edge(int(i), int(j))
    after = log_likelihood_edgelist(topo, ds)
    if before > -math.inf:
        assert after > -math.inf
