"""Decide geometric properties of graph-manifolds from their labeled graphs.

The library works on exact rationals throughout: labeled graphs
(:mod:`.core`), exact symmetric linear algebra (:mod:`.exactla`), the operator
invariants (:mod:`.operators`), the BKN difference equation and its
witnesses (:mod:`.bkn`), the property deciders (:mod:`.decide`) and the
three-vertex example family (:mod:`.malpha`).
"""

from __future__ import annotations

from .core import LabeledGraph, parse_labeled_graph, graph_to_json, validate
from .decide import PropertyReport, decide_all
from .malpha import GluingMatrix, build_malpha

__all__ = [
    "LabeledGraph",
    "parse_labeled_graph",
    "graph_to_json",
    "validate",
    "PropertyReport",
    "decide_all",
    "GluingMatrix",
    "build_malpha",
]
__version__ = "0.1.0"
