import json
import math

import numpy as np
import pytest

from icinet import HsbmPrior, Level, Topology, build_feasible_set, hsbm_log_prior
from icinet.prior import PriorError

from .conftest import feasible_topology


def test_flat_prior_on_empty_graph(chain_meta):
    assert hsbm_log_prior(Topology(3), chain_meta, HsbmPrior()) == pytest.approx(3 * math.log(0.5))


def test_flat_prior_is_the_same_for_the_complete_graph(chain_meta):
    topo = feasible_topology(chain_meta, build_feasible_set(chain_meta))
    assert hsbm_log_prior(topo, chain_meta, HsbmPrior()) == pytest.approx(3 * math.log(0.5))


def test_single_edge_with_class_probability(chain_meta):
    prior = HsbmPrior({}, default_feasible=0.3)
    topo = feasible_topology(chain_meta, [(0, 1)])
    assert hsbm_log_prior(topo, chain_meta, prior) == pytest.approx(math.log(0.3) + 2 * math.log(0.7))


def test_class_lookup_uses_block_and_level(chain_meta):
    prior = HsbmPrior({("grid", "grid", Level.SUPPLY, Level.DEMAND): 0.9})
    topo = feasible_topology(chain_meta, [(0, 2)])
    expected = math.log(0.9) + 2 * math.log(0.5)
    assert hsbm_log_prior(topo, chain_meta, prior) == pytest.approx(expected)


def test_unconstrained_prior_counts_every_ordered_pair(chain_meta):
    prior = HsbmPrior(default_feasible=0.5, off_class=0.2)
    # 3 feasible pairs at 0.5, 3 backward pairs at off_class
    value = hsbm_log_prior(Topology(3), chain_meta, prior, constrained=False)
    assert value == pytest.approx(3 * math.log(0.5) + 3 * math.log(0.8))


@pytest.mark.parametrize("p", [0.0, 1.0, 1.5])
def test_degenerate_probabilities_are_rejected(chain_meta, p):
    with pytest.raises(PriorError):
        hsbm_log_prior(Topology(3), chain_meta, HsbmPrior(default_feasible=p))


def test_round_trip(tmp_path, chain_meta):
    prior = HsbmPrior({("grid", "grid", Level.SUPPLY, Level.TRANSMISSION): 0.25}, 0.4, 0.1)
    path = tmp_path / "prior.json"
    path.write_text(json.dumps(prior.to_dict()))
    back = HsbmPrior.load(path)
    assert back == prior
    fs = build_feasible_set(chain_meta)
    assert np.allclose(back.pair_probabilities(chain_meta, fs), [0.25, 0.4, 0.4])
