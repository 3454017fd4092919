"""Exact and constructive tools for triangle transversals and packings."""

from __future__ import annotations

from .graph import Graph, GraphError, Triangle, edge, enumerate_triangles
from .mis import BudgetExceeded
from .ninefifths import NineFifthsError, NineFifthsPair, k_otimes, nine_fifths_tp, verify_nine_fifths_exact
from .planar import PlanarTriangulation, TriangulationError
from .reduction import ReducingTriple, verify_reducing_triple
from .solvers import PackingCertificate, TransversalCertificate, check_ratio, nu_exact, tau_exact
from .threetrees import enumerate_3trees, generate_3tree
from .treedec import KTreeSeq, RootedTreeDecomposition, TreeDecomposition, rootify, validate

__all__ = [
    "BudgetExceeded",
    "Graph",
    "GraphError",
    "KTreeSeq",
    "NineFifthsError",
    "NineFifthsPair",
    "PackingCertificate",
    "PlanarTriangulation",
    "ReducingTriple",
    "RootedTreeDecomposition",
    "TransversalCertificate",
    "TreeDecomposition",
    "Triangle",
    "TriangulationError",
    "check_ratio",
    "edge",
    "enumerate_3trees",
    "enumerate_triangles",
    "generate_3tree",
    "k_otimes",
    "nine_fifths_tp",
    "nu_exact",
    "rootify",
    "tau_exact",
    "validate",
    "verify_nine_fifths_exact",
    "verify_reducing_triple",
]
