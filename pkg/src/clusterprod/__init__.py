"""Clustered colourings of strong products of bounded-treewidth graphs.

Graph builders, tree-decompositions and separators, constructive colourings
with bound certificates, and an exact branch-and-bound for small lower bounds.
"""
from .colouring import (BoundCertificate, ClusteringReport, Colouring, check_certificate,
                        clustering, evaluate, grid_isoperimetry_audit)
from .decomp import (SeparatorResult, TreeDecomposition, Violation, balanced_separator,
                     induced_decomposition, random_ktree, validate_decomposition)
from .families import (FamilySpec, FramedGrid, build_family, c_tower, complete, cone, cycle,
                       fan, framed_grid, g_tower, h_tower, parse_family, path)
from .graph import (Graph, VertexLabel, cartesian_product, connected_components,
                    induced_subgraph, strong_product)
from .search import SearchBudget, SearchOutcome, exists_below, hex_check, min_clustering
from .upper import (ProductInstance, bounded_degree_pipeline, c_colour_tw, clique_blowup,
                    fanfan_four_colouring, fanfan_three_colouring, product_colouring,
                    project_colouring, three_colour_product, two_colour_product)

__all__ = [
    "BoundCertificate",
    "ClusteringReport",
    "Colouring",
    "FamilySpec",
    "FramedGrid",
    "Graph",
    "ProductInstance",
    "SearchBudget",
    "SearchOutcome",
    "SeparatorResult",
    "TreeDecomposition",
    "VertexLabel",
    "Violation",
    "balanced_separator",
    "bounded_degree_pipeline",
    "build_family",
    "c_colour_tw",
    "c_tower",
    "cartesian_product",
    "check_certificate",
    "clique_blowup",
    "clustering",
    "complete",
    "cone",
    "connected_components",
    "cycle",
    "evaluate",
    "exists_below",
    "fan",
    "fanfan_four_colouring",
    "fanfan_three_colouring",
    "framed_grid",
    "g_tower",
    "grid_isoperimetry_audit",
    "h_tower",
    "hex_check",
    "induced_decomposition",
    "induced_subgraph",
    "min_clustering",
    "parse_family",
    "path",
    "product_colouring",
    "project_colouring",
    "random_ktree",
    "strong_product",
    "three_colour_product",
    "two_colour_product",
    "validate_decomposition",
]

__version__ = "0.1.0"
