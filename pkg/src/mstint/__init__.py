"""Approximate MST interdiction on weighted multigraphs."""

from .graphcore import DISCONNECTED, Edge, Instance, mst_weight, val
from .levels import LevelDecomposition, Reject, preprocess, round_weights
from .pareto import extreme_supported_tuples
from .solver import SolveReport, exact_opt, solve

__all__ = [
    "DISCONNECTED",
    "Edge",
    "Instance",
    "LevelDecomposition",
    "Reject",
    "SolveReport",
    "exact_opt",
    "extreme_supported_tuples",
    "mst_weight",
    "preprocess",
    "round_weights",
    "solve",
    "val",
]
