import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from icinet import (CascadeDataset, CascadeScenario, HsbmPrior, Topology,
                    average_degree_trace, build_feasible_set, edge_marginals,
                    enumerate_exact_posterior, export_heatmap, generate_dataset,
                    precision_recall_curve)
from icinet.evaluation import exact_posterior, f1_score
from icinet.sampler import PosteriorSamples, run_method

from .conftest import feasible_topology


def _samples(counts, n_recorded, degrees=None):
    counts = np.asarray(counts)
    n = counts.shape[0]
    degrees = np.zeros(n_recorded) if degrees is None else np.asarray(degrees, dtype=float)
    return PosteriorSamples(counts, n_recorded, degrees, np.zeros(n_recorded), np.zeros(n_recorded),
                            ~np.eye(n, dtype=bool))


def test_marginals_are_frequencies():
    m = edge_marginals(_samples([[0, 3], [0, 0]], 4))
    assert m[0, 1] == 0.75 and m[1, 0] == 0.0


def test_single_sample_marginals_equal_its_adjacency():
    adj = np.array([[0, 1, 1], [0, 0, 1], [0, 0, 0]])
    assert np.array_equal(edge_marginals(_samples(adj, 1)), adj)


def test_marginals_need_samples():
    with pytest.raises(ValueError):
        edge_marginals(_samples(np.zeros((2, 2)), 0))


def test_degree_traces():
    assert np.all(average_degree_trace(_samples(np.zeros((2, 2)), 5, [1.5] * 5)) == 1.5)
    assert np.all(average_degree_trace(_samples(np.zeros((2, 2)), 3)) == 0.0)
    with pytest.raises(ValueError):
        average_degree_trace(_samples(np.zeros((2, 2)), 0))


def test_perfect_marginals_score_one(standard_network):
    meta, truth = standard_network
    fs = build_feasible_set(meta)
    report = precision_recall_curve(truth.adj.astype(float), truth, mask=fs.mask)
    for point in report.pr_curve:
        if point.threshold > 0:
            assert point.precision == point.recall == point.f1 == 1.0
    assert report.best_f1 == 1.0


def test_zero_threshold_predicts_every_candidate(standard_network):
    meta, truth = standard_network
    fs = build_feasible_set(meta)
    report = precision_recall_curve(np.zeros((meta.n_nodes, meta.n_nodes)), truth, mask=fs.mask)
    first = report.pr_curve[0]
    assert first.threshold == 0.0
    assert first.recall == 1.0
    assert first.precision == pytest.approx(truth.n_edges / len(fs))


def test_ties_count_as_positive():
    truth = Topology.from_edges(2, [(0, 1)])
    report = precision_recall_curve(np.array([[0, 0.5], [0, 0]]), truth, thresholds=[0.5])
    assert report.pr_curve[0].recall == 1.0


def test_default_thresholds_and_dimension_check():
    truth = Topology.from_edges(2, [(0, 1)])
    report = precision_recall_curve(np.array([[0, 0.3], [0, 0]]), truth)
    assert len(report.pr_curve) == 101
    assert report.pr_curve[-1].threshold == 1.0
    with pytest.raises(ValueError):
        precision_recall_curve(np.zeros((3, 3)), truth)


@settings(max_examples=100, deadline=None)
@given(arrays(np.float64, (6, 6), elements=st.floats(0, 1)), arrays(np.bool_, (6, 6)))
def test_pr_curve_properties(marg, truth_adj):
    np.fill_diagonal(truth_adj, False)
    truth = Topology.from_edges(6, zip(*np.nonzero(truth_adj)))
    report = precision_recall_curve(marg, truth)
    recalls = [p.recall for p in report.pr_curve]
    assert all(a >= b for a, b in zip(recalls, recalls[1:]))
    for p in report.pr_curve:
        assert 0 <= p.precision <= 1 and 0 <= p.recall <= 1
        assert p.f1 == pytest.approx(f1_score(p.precision, p.recall))
    assert report.best_f1 == max(p.f1 for p in report.pr_curve)


def test_f1_edge_case():
    assert f1_score(0.0, 0.0) == 0.0
    assert f1_score(1.0, 0.5) == pytest.approx(2 / 3)


# --- exact oracle -------------------------------------------------------------


def _quiet(n):
    return CascadeDataset([CascadeScenario(np.eye(1, n, 0, dtype=int)[0], 1)], 0.4)


def test_oracle_without_data_is_prior_over_valid_graphs(chain_meta):
    # valid graphs: s->t and t->d are forced, s->d is free
    fs = build_feasible_set(chain_meta)
    exact = enumerate_exact_posterior(chain_meta, fs, _quiet(3), HsbmPrior(), 0.4)
    assert exact[0, 1] == pytest.approx(1.0)
    assert exact[1, 2] == pytest.approx(1.0)
    assert exact[0, 2] == pytest.approx(0.5)
    skewed = enumerate_exact_posterior(chain_meta, fs, _quiet(3), HsbmPrior(default_feasible=0.2), 0.4)
    assert skewed[0, 2] == pytest.approx(0.2)


def test_oracle_probabilities_sum_to_one(tiny_meta):
    fs = build_feasible_set(tiny_meta)
    truth = feasible_topology(tiny_meta, [(0, 1), (1, 2), (1, 3), (0, 3)])
    ds = generate_dataset(truth, tiny_meta, 3, 2, 0.4, 0.3, seed=0)
    graphs, probs = exact_posterior(tiny_meta, fs, ds, HsbmPrior(), 0.4)
    assert abs(probs.sum() - 1.0) < 1e-12
    assert len(graphs) <= 2 ** len(fs)


def test_forced_edge_has_marginal_one(tiny_meta):
    fs = build_feasible_set(tiny_meta)
    # demand node 2 fails right after supply node 0 while transmission 1 is fine: only 0->2 explains it
    ds = CascadeDataset([CascadeScenario(np.array([1, 0, 2, 0]), 2)], 0.4)
    exact = enumerate_exact_posterior(tiny_meta, fs, ds, HsbmPrior(), 0.4)
    assert exact[0, 2] == pytest.approx(1.0)


def test_exchangeable_nodes_get_equal_marginals(tiny_meta):
    fs = build_feasible_set(tiny_meta)
    exact = enumerate_exact_posterior(tiny_meta, fs, _quiet(4), HsbmPrior(), 0.4)
    assert exact[0, 2] == pytest.approx(exact[0, 3])
    assert exact[1, 2] == pytest.approx(exact[1, 3])
    assert np.all(exact[~fs.mask] == 0)


def test_enumeration_guard(standard_network):
    meta, truth = standard_network
    with pytest.raises(ValueError, match="limited"):
        enumerate_exact_posterior(meta, build_feasible_set(meta), _quiet(meta.n_nodes), HsbmPrior(), 0.4)


# --- heatmap ------------------------------------------------------------------


def test_heatmap_csv(tmp_path):
    written = export_heatmap(np.array([[0, 1], [0, 0]]), tmp_path / "m.csv", svg=False)
    assert written == [tmp_path / "m.csv"]
    assert (tmp_path / "m.csv").read_text() == "0,1\n0,0\n"


def test_heatmap_svg(tmp_path, two_block_meta):
    n = two_block_meta.n_nodes
    written = export_heatmap(np.random.default_rng(0).random((n, n)), tmp_path / "marginals.csv", two_block_meta)
    assert written[1].name == "heatmap.svg"
    assert written[1].read_text().lstrip().startswith("<?xml")


def test_more_data_darkens_true_edges(standard_network):
    meta, truth = standard_network
    adj = truth.adj.astype(bool)
    means = []
    for n_scenarios in (5, 40):
        ds = generate_dataset(truth, meta, n_scenarios, 5, 0.4, 0.2, seed=1)
        vals = [edge_marginals(run_method("m1", meta, ds, seed=s))[adj].mean() for s in range(3)]
        means.append(np.mean(vals))
    assert means[1] > means[0]


def test_chain_marginals_lie_in_unit_interval(standard_network):
    meta, truth = standard_network
    fs = build_feasible_set(meta)
    ds = generate_dataset(truth, meta, 5, 5, 0.4, 0.2, seed=0)
    m = edge_marginals(run_method("m1", meta, ds, n_samples=500, n_warmup=100, seed=0))
    assert m.min() >= 0 and m.max() <= 1
    assert np.all(m[~fs.mask] == 0)
