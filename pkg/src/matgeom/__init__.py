"""Rank-metric matrix graphs over finite fields and their homomorphisms."""

from .canon import CanonicalForm, Variant, eval, make_colouring, tabulate, valid_Ls
from .classify import (
    Classification,
    classify,
    is_colouring,
    is_degenerate,
    is_distance_preserving,
    is_graph_hom,
)
from .fields import FieldHom, FieldSpec, enumerate_field_homs, gf
from .geometry import Kind, MaximalSet, maximal_sets_through
from .maptable import MapTable
from .matrices import Mat, minus_le, rank
from .search import SearchProblem, sample_homs, search_hom

__version__ = "0.1.0"

__all__ = [
    "CanonicalForm", "Classification", "FieldHom", "FieldSpec", "Kind", "MapTable", "Mat", "MaximalSet",
    "SearchProblem", "Variant", "classify", "enumerate_field_homs", "eval", "gf", "is_colouring",
    "is_degenerate", "is_distance_preserving", "is_graph_hom", "make_colouring", "maximal_sets_through",
    "minus_le", "rank", "sample_homs", "search_hom", "tabulate", "valid_Ls",
]
