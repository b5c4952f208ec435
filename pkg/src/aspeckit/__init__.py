"""Exact computations with finite-dimensional modules over finitely presented algebras."""

from .scalars import GF, QQ, QQI, GaussianRational, Residue, field_from_name
from .linalg import Mat, Subspace, nullspace, rank, product_closure
from .ncalgebra import AlgHom, NcPoly, Presentation, commutative_preset, free_algebra, format_poly
from .parsing import parse_expr, parse_scalar
from .modules import (ModuleRep, companion_matrix, direct_sum, hom_space, is_isomorphic, is_simple,
                      meataxe, point_module, validate)
from .ext import ext1, quiver
from .spectrum import (Universe, closure, d_locus, generate_topology, induced_subscheme, limit, localize,
                       sections, sheaf_check, z_locus)
from .basechange import (conj_module, contract_along, extend_scalars, is_k_point, k_points_subscheme,
                         rank_stability, realify, restrict_scalars)
from .document import InputDocument, load_document, parse_document

__version__ = "0.1.0"

__all__ = [
    "GF",
    "QQ",
    "QQI",
    "GaussianRational",
    "Residue",
    "field_from_name",
    "Mat",
    "Subspace",
    "nullspace",
    "rank",
    "product_closure",
    "AlgHom",
    "NcPoly",
    "Presentation",
    "commutative_preset",
    "free_algebra",
    "format_poly",
    "parse_expr",
    "parse_scalar",
    "ModuleRep",
    "companion_matrix",
    "direct_sum",
    "hom_space",
    "is_isomorphic",
    "is_simple",
    "meataxe",
    "point_module",
    "validate",
    "ext1",
    "quiver",
    "Universe",
    "closure",
    "d_locus",
    "generate_topology",
    "induced_subscheme",
    "limit",
    "localize",
    "sections",
    "sheaf_check",
    "z_locus",
    "conj_module",
    "contract_along",
    "extend_scalars",
    "is_k_point",
    "k_points_subscheme",
    "rank_stability",
    "realify",
    "restrict_scalars",
    "InputDocument",
    "load_document",
    "parse_document",
]
