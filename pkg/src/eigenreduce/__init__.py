"""Eigenfunction reduction through special pairs of graph automorphisms."""

from .errors import NumericalError, ResourceError, UsageError
from .families import build_halved_cube, build_hamming, build_johnson, delta, pi_swap, weight
from .graph import (LabeledGraph, VertexMap, cartesian_product, check_isomorphism,
                    induced_subgraph, is_automorphism, neighbors)
from .reduction import (ReductionContext, SpecialPair, check_pair_structure, fold,
                        halved_cube_context, hamming_context, johnson_context, reduce,
                        reduce_via_fold, theorem_check, theorem_check_all,
                        verify_special_pair)
from .spectral import (Spectrum, VertexFunction, adjacency_apply, eigendecompose,
                       in_eigenspace, residual, sample_eigenfunction)

__version__ = "0.1.0"

__all__ = [
    "LabeledGraph", "NumericalError", "ReductionContext", "ResourceError", "SpecialPair",
    "Spectrum", "UsageError", "VertexFunction", "VertexMap", "adjacency_apply",
    "build_halved_cube", "build_hamming", "build_johnson", "cartesian_product",
    "check_isomorphism", "check_pair_structure", "delta", "eigendecompose", "fold",
    "halved_cube_context", "hamming_context", "in_eigenspace", "induced_subgraph",
    "is_automorphism", "johnson_context", "neighbors", "pi_swap", "reduce",
    "reduce_via_fold", "residual", "sample_eigenfunction", "theorem_check",
    "theorem_check_all", "verify_special_pair", "weight",
]
