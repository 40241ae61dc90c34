"""Heegaard Floer invariants of link surgeries from grid diagrams, mod 2."""

from .griddiag import (
    GridDiagram, GridError, DuplicateMarking, FreeMarkingRule, NoFreeMarking,
    InconsistentMarkingSet, Marking, validate, is_sparse, sparse_double,
    destabilize_diagram, linking_matrix, marking_set, whole_sublink_markings,
)

__all__ = [
    "GridDiagram", "GridError", "DuplicateMarking", "FreeMarkingRule",
    "NoFreeMarking", "InconsistentMarkingSet", "Marking", "validate",
    "is_sparse", "sparse_double", "destabilize_diagram", "linking_matrix",
    "marking_set", "whole_sublink_markings",
]
