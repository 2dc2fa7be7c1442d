"""Smooth Gorenstein lattice polytopes.

Classification through simplicial reflexive duals, the large-index families,
Ehrhart data and stringy E-polynomials of dual Gorenstein pairs.
"""
from .classify import classify, cross_validate, fano_index_table
from .construct import (cayley, cayley_of_simplices, dilate, family_specs, product, simplex,
                        theorem_family, triple_product)
from .ehrhart import hstar, is_normal
from .polytope import LatticePolytope, hull, is_isomorphic, read_polytope, write_polytope
from .stringy import dual_gorenstein, hodge_table, mirror_check, stringy_E

__version__ = "0.1.0"

__all__ = [
    "LatticePolytope", "cayley", "cayley_of_simplices", "classify", "cross_validate", "dilate",
    "dual_gorenstein", "family_specs", "fano_index_table", "hodge_table", "hstar", "hull",
    "is_isomorphic", "is_normal", "mirror_check", "product", "read_polytope", "simplex",
    "stringy_E", "theorem_family", "triple_product", "write_polytope",
]
