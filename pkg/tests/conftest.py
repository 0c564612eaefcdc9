import sys

import numpy as np
import pytest

from icinet import (GenConfig, InterdepSpec, NetworkMeta, Topology, build_feasible_set,
                    generate_icin)


@pytest.fixture
def tiny_meta():
    """Single block, 1 supply / 1 transmission / 2 demand: five feasible pairs."""
    return NetworkMeta.from_blocks([("grid", 1, 1, 2)])


@pytest.fixture
def chain_meta():
    return NetworkMeta.from_blocks([("grid", 1, 1, 1)])


@pytest.fixture
def two_block_meta():
    return NetworkMeta.from_blocks(
        [("water", 2, 1, 3), ("power", 1, 2, 5)],
        [InterdepSpec.parse("power:demand->water:supply")],
    )


@pytest.fixture(scope="session")
def standard_network():
    return generate_icin(GenConfig.standard(seed=11))


def random_valid_topology(meta: NetworkMeta, rng: np.random.Generator, density: float = 0.3) -> Topology:
    """Constraint-valid graph: generator backbone plus random extra feasible pairs."""
    seed = int(rng.integers(2**31))
    config = GenConfig([(b, len(meta.members(b, 2)), len(meta.members(b, 1)), len(meta.members(b, 0)))
                        for b in meta.blocks], list(meta.interdeps), density, density, seed)
    _, topo = generate_icin(config)
    return topo


def feasible_topology(meta, edges):
    return Topology.from_edges(meta.n_nodes, edges, build_feasible_set(meta).relation_matrix)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("tests.test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
