"""Isomorphism and ascending-ness procedures for GBS groups given by labeled graphs."""

from .decision import Decision, SearchBudget, Yes, No, Inconclusive
from .errors import GbsError
from .graph import LabeledGraph, parse_graph, serialize_graph, rose, reduce
from .ascending import is_ascending
from .smc import has_smc
from .mobility import mobile_edges
from .iso import are_isomorphic, verify_certificate

__all__ = [
    "Decision", "SearchBudget", "Yes", "No", "Inconclusive", "GbsError",
    "LabeledGraph", "parse_graph", "serialize_graph", "rose", "reduce",
    "is_ascending", "has_smc", "mobile_edges", "are_isomorphic", "verify_certificate",
]
