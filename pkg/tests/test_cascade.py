import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from icinet import (CascadeDataset, CascadeScenario, Topology, generate_dataset, load_dataset,
                    node_failure_probability, save_dataset, simulate_cascade)
from icinet.cascade import CascadeError, dataset_from_dict, dataset_to_dict


@pytest.mark.parametrize("q, k, expected", [(0.4, 1, 0.4), (0.4, 2, 0.64), (0.7, 0, 0.0), (1.0, 3, 1.0)])
def test_failure_probability(q, k, expected):
    assert node_failure_probability(q, k) == pytest.approx(expected)


def test_zero_q_never_spreads(standard_network):
    _, topo = standard_network
    rng = np.random.default_rng(0)
    for _ in range(20):
        s = simulate_cascade(topo, 0.0, 0.2, True, rng)
        assert s.T == 1
        assert np.count_nonzero(s.first_failure) == 6


def test_certain_propagation_along_a_chain():
    topo = Topology.from_edges(3, [(0, 1), (1, 2)])
    s = simulate_cascade(topo, 1.0, 0.0, True, np.random.default_rng(0), seeds=[0])
    assert s.first_failure.tolist() == [1, 2, 3]
    assert s.T == 3


def test_isolated_seed_stays_alone():
    topo = Topology.from_edges(4, [(1, 2), (2, 3)])
    s = simulate_cascade(topo, 1.0, 0.0, True, np.random.default_rng(0), seeds=[0])
    assert s.first_failure.tolist() == [1, 0, 0, 0]
    assert s.T == 1


def reference_cascade(adj: np.ndarray, q: float, ratio: float, markovian: bool, rng) -> np.ndarray:
    """Node-by-node SI simulation drawing random numbers in the same order as the library."""
    n = adj.shape[0]
    k = max(1, math.ceil(ratio * n - 1e-9))
    ff = np.zeros(n, dtype=int)
    ff[rng.choice(n, size=k, replace=False)] = 1
    t = 1
    while True:
        u = rng.random(n)
        new = []
        for j in range(n):
            if ff[j]:
                continue
            if markovian:
                sources = [i for i in range(n) if adj[i, j] and ff[i] == t]
            else:
                sources = [i for i in range(n) if adj[i, j] and 0 < ff[i] <= t]
            if u[j] < 1 - (1 - q) ** len(sources):
                new.append(j)
        if not new:
            return ff
        t += 1
        ff[new] = t


@pytest.mark.parametrize("markovian", [True, False])
def test_matches_reference_simulation(standard_network, markovian):
    _, topo = standard_network
    for seed in range(30):
        got = simulate_cascade(topo, 0.5, 0.2, markovian, np.random.default_rng(seed))
        want = reference_cascade(topo.adj, 0.5, 0.2, markovian, np.random.default_rng(seed))
        assert got.first_failure.tolist() == want.tolist()


def test_markovian_ignores_stale_failures():
    # 0 fails at t=1 and 1 at t=2; node 2 listens to both. At t=2 the Markovian rule
    # counts only node 1 (threshold q) while the cumulative rule counts both (1-(1-q)^2).
    topo = Topology.from_edges(3, [(0, 1), (0, 2), (1, 2)])
    q = 0.5
    checked = 0
    for seed in range(400):
        rng = np.random.default_rng(seed)
        u1, u2 = rng.random(3), rng.random(3)
        if not (u1[1] < q <= u1[2] and q <= u2[2] < 1 - (1 - q) ** 2):
            continue
        markov = simulate_cascade(topo, q, 0.0, True, np.random.default_rng(seed), seeds=[0])
        cumulative = simulate_cascade(topo, q, 0.0, False, np.random.default_rng(seed), seeds=[0])
        assert markov.first_failure.tolist() == [1, 2, 0]
        assert cumulative.first_failure.tolist() == [1, 2, 3]
        checked += 1
    assert checked > 5


def test_empirical_failure_rate_is_binomial():
    q, k, m, reps = 0.3, 3, 1000, 100
    n = k + m
    topo = Topology.from_edges(n, [(s, k + t) for s in range(k) for t in range(m)])
    rng = np.random.default_rng(11)
    hits = 0
    for _ in range(reps):
        s = simulate_cascade(topo, q, 0.0, True, rng, seeds=range(k))
        hits += int(np.sum(s.first_failure[k:] == 2))
    trials = m * reps
    p = node_failure_probability(q, k)
    sigma = math.sqrt(trials * p * (1 - p))
    assert abs(hits - trials * p) < 3 * sigma


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000), st.floats(0.05, 1.0), st.booleans())
def test_scenarios_are_monotone(seed, q, markovian):
    rng = np.random.default_rng(seed)
    n = 12
    adj = rng.random((n, n)) < 0.2
    np.fill_diagonal(adj, False)
    topo = Topology.from_edges(n, zip(*np.nonzero(adj)))
    s = simulate_cascade(topo, q, 0.25, markovian, rng)
    states = s.states
    assert states.shape == (s.T, n)
    assert np.all(np.diff(states, axis=0) >= 0)
    assert states[0].sum() == 3
    # every step up to T adds at least one failure
    assert all(len(s.newly_failed(t)) > 0 for t in range(1, s.T + 1))


def test_generate_dataset_respects_min_steps(standard_network):
    meta, topo = standard_network
    ds = generate_dataset(topo, meta, 5, 5, 0.4, 0.2, seed=1)
    assert len(ds) == 5
    assert all(s.T >= 5 for s in ds.scenarios)
    assert ds.q == 0.4 and ds.meta_digest == meta.digest()
    again = generate_dataset(topo, meta, 5, 5, 0.4, 0.2, seed=1)
    assert dataset_to_dict(again) == dataset_to_dict(ds)


def test_min_steps_one_accepts_everything(standard_network):
    meta, topo = standard_network
    ds = generate_dataset(topo, meta, 20, 1, 0.1, 0.2, seed=3)
    assert len(ds) == 20


def test_unsustainable_parameters_abort(standard_network):
    meta, topo = standard_network
    with pytest.raises(CascadeError, match="cannot sustain"):
        generate_dataset(topo, meta, 1, 5, 0.0, 0.2, seed=0)


def test_scenario_validation():
    with pytest.raises(CascadeError):
        CascadeScenario(np.array([0, 2]), 2)
    with pytest.raises(CascadeError):
        CascadeScenario.from_states([[1, 1], [1, 0]])
    s = CascadeScenario.from_states([[1, 0, 0], [1, 1, 0], [1, 1, 0]])
    assert s.first_failure.tolist() == [1, 2, 0] and s.T == 3
    with pytest.raises(CascadeError):
        CascadeDataset([s], 0.0)
    with pytest.raises(CascadeError):
        CascadeDataset([s, CascadeScenario(np.array([1, 0]), 1)], 0.5)


def test_file_round_trip(tmp_path, standard_network):
    meta, topo = standard_network
    ds = generate_dataset(topo, meta, 4, 3, 0.5, 0.2, seed=9)
    path = tmp_path / "c.json"
    save_dataset(path, ds)
    back = load_dataset(path, meta.n_nodes)
    assert [s.first_failure.tolist() for s in back.scenarios] == [s.first_failure.tolist() for s in ds.scenarios]
    assert [s.T for s in back.scenarios] == [s.T for s in ds.scenarios]
    assert back.q == ds.q and back.meta_digest == ds.meta_digest


@pytest.mark.parametrize("bad", [
    {"q": 0.4, "n_nodes": 3, "scenarios": [{"T": 2, "failures": [[1, 0], [3, 1]]}]},
    {"q": 0.4, "n_nodes": 3, "scenarios": [{"T": 2, "failures": [[1, 0], [2, 7]]}]},
    {"q": 0.4, "n_nodes": 3, "scenarios": [{"T": 2, "failures": [[1, 0], [2, 0]]}]},
    {"q": 0.4, "n_nodes": 3, "scenarios": [{"T": 2, "failures": [[2, 0]]}]},
])
def test_loader_rejects_inconsistent_files(bad):
    with pytest.raises(CascadeError):
        dataset_from_dict(json.loads(json.dumps(bad)))


def test_loader_checks_node_count():
    doc = {"q": 0.4, "n_nodes": 3, "scenarios": [{"T": 1, "failures": [[1, 0]]}]}
    with pytest.raises(CascadeError):
        dataset_from_dict(doc, 4)
