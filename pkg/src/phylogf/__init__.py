"""Exact and asymptotic enumeration of tree-child and normal phylogenetic networks."""

__version__ = "0.1.0"

from .algebra import MultilinearElem
from .series import TruncSeries
from .gf import (
    CATALOG,
    CORRECTED,
    AlgebraicGF,
    closed_form,
    component_T,
    count,
    counts,
    egf,
    leaf_labeled_count,
    operator_N,
    operator_T,
)
from .oracle import NetworkGraph, enumerate_count, is_normal, is_tree_child
from .asym import asym_estimate, appendix_table, leaf_asym_estimate, second_order_probe

__all__ = [
    "MultilinearElem",
    "TruncSeries",
    "AlgebraicGF",
    "CATALOG",
    "CORRECTED",
    "closed_form",
    "component_T",
    "count",
    "counts",
    "egf",
    "leaf_labeled_count",
    "operator_N",
    "operator_T",
    "NetworkGraph",
    "enumerate_count",
    "is_normal",
    "is_tree_child",
    "asym_estimate",
    "appendix_table",
    "leaf_asym_estimate",
    "second_order_probe",
]
