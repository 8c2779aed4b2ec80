"""Exact tools for flexible list colouring of sparse graphs.

Graphs, list assignments, choosability, reducibility with exact LP
constants, partition and crossing-over samplers, the structural detectors
and discharging ledger, and a peeling pipeline that composes colouring
distributions and certifies them.
"""

from .graph import Graph, max_average_degree, read_graph
from .choosability import is_f_choosable, is_gallai_tree, ert_choosable, find_bad_witness
from .reducibility import find_weakly_reducible, is_weakly_reductive, optimal_alpha
from .pipeline import build_pipeline, verify_distribution
from .structure import audit_counterexample, classify_vertices, detect_violations, discharge

__all__ = [
    "Graph", "max_average_degree", "read_graph",
    "is_f_choosable", "is_gallai_tree", "ert_choosable", "find_bad_witness",
    "find_weakly_reducible", "is_weakly_reductive", "optimal_alpha",
    "build_pipeline", "verify_distribution",
    "audit_counterexample", "classify_vertices", "detect_violations", "discharge",
]
__version__ = "0.1.0"
