"""Finite residuated lattices: tables, embeddings, amalgam search and proof checking."""

__version__ = "0.1.0"

from .algebra import (
    FiniteResiduatedLattice,
    PartialAlgebraSpec,
    build_from_tables,
    check_axioms,
    predicate_profile,
)
from .completion import complete_partial_product
from .morphisms import Amalgam, Morphism, Span, check_homomorphism, is_embedding, validate_amalgam
from .search import VarietyConstraints, search_amalgam, search_amalgam_unrestricted_square
