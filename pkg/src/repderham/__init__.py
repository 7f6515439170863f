"""Algebraic de Rham cohomology of character-variety fibers of small surfaces.

Exact Gröbner machinery, top-degree de Rham rewriting with certificates, the
Gauss-Manin connection of the sigma11 family and its local monodromy.
"""
from .derham import (
    CANONICAL,
    ReductionCertificate,
    reduce_top,
    singular_h2_basis,
    top_cohomology_basis,
)
from .gaussmanin import connection_matrix, partial_fractions, reference_connection_matrix, residue
from .monodromy import exact_monodromies, loop_product, monodromy_numeric
from .smoothness import is_smooth_fiber, singular_locus, singular_locus_slice
from .varieties import SURFACES, fiber_ideal, presentation, psi_eval

__version__ = "0.1.0"

__all__ = [
    "CANONICAL",
    "ReductionCertificate",
    "SURFACES",
    "connection_matrix",
    "exact_monodromies",
    "fiber_ideal",
    "is_smooth_fiber",
    "loop_product",
    "monodromy_numeric",
    "partial_fractions",
    "presentation",
    "psi_eval",
    "reduce_top",
    "reference_connection_matrix",
    "residue",
    "singular_h2_basis",
    "singular_locus",
    "singular_locus_slice",
    "top_cohomology_basis",
]
