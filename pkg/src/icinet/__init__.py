"""Bayesian reconstruction of interdependent infrastructure networks from cascading failures."""

from .cascade import (CascadeDataset, CascadeScenario, generate_dataset, load_dataset,
                      node_failure_probability, save_dataset, simulate_cascade)
from .counting import count_candidate_topologies, count_unconstrained
from .evaluation import (EvalReport, PrPoint, average_degree_trace, edge_marginals,
                         enumerate_exact_posterior, export_heatmap, precision_recall_curve)
from .likelihood import CascadeLikelihood, log_likelihood_edgelist, log_likelihood_naive
from .network import (ConstraintReport, FeasibleSet, InterdepSpec, Level, NetworkMeta, Node,
                      Toggle, Topology, build_feasible_set, check_constraints_full,
                      load_network, save_network, toggle_edge, validate_incremental)
from .prior import HsbmPrior, hsbm_log_prior
from .sampler import (METHODS, PosteriorSamples, SamplerConfig, acceptance_log_ratio,
                      init_topology, propose, run_chain)
from .synth import GenConfig, generate_icin

__all__ = [
    "CascadeDataset", "CascadeScenario", "generate_dataset", "load_dataset",
    "node_failure_probability", "save_dataset", "simulate_cascade", "count_candidate_topologies",
    "count_unconstrained", "EvalReport", "PrPoint", "average_degree_trace", "edge_marginals",
    "enumerate_exact_posterior", "export_heatmap", "precision_recall_curve", "CascadeLikelihood",
    "log_likelihood_edgelist", "log_likelihood_naive", "ConstraintReport", "FeasibleSet",
    "InterdepSpec", "Level", "NetworkMeta", "Node", "Toggle", "Topology", "build_feasible_set",
    "check_constraints_full", "load_network", "save_network", "toggle_edge", "validate_incremental",
    "HsbmPrior", "hsbm_log_prior", "METHODS", "PosteriorSamples", "SamplerConfig",
    "acceptance_log_ratio", "init_topology", "propose", "run_chain", "GenConfig", "generate_icin",
]

__version__ = "0.1.0"
