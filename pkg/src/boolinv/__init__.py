"""Finite Boolean inverse monoids and the structures built from them.

Modules:

- ``finmon``: tabulated monoids, order, joins, meets, complements, submonoids
- ``rook``: rook matrices, symmetric inverse monoids, standard maps, normal forms
- ``structure``: atom groupoids, predicates, ideals, decompositions
- ``typemv``: type interval, invariant means, MV-algebras
- ``supernat``: supernatural numbers and division sequences
- ``colimit``: UHF towers of rook-matrix stages
"""

from .config import Config, override
from .errors import (
    BIMError,
    ConsistencyError,
    DomainError,
    ParseError,
    PreconditionError,
    ResourceLimitError,
    TableFormatError,
    ValidationError,
)
from .finmon import FinBIM, Morphism, ValidationReport, direct_product, validate_bim
from .groups import GroupTable
from .rook import RookAlgebra, RookMatrix, StandardMorphism, rook_monoid, symmetric_inverse_monoid

__all__ = [
    "BIMError",
    "Config",
    "ConsistencyError",
    "DomainError",
    "FinBIM",
    "GroupTable",
    "Morphism",
    "ParseError",
    "PreconditionError",
    "ResourceLimitError",
    "RookAlgebra",
    "RookMatrix",
    "StandardMorphism",
    "TableFormatError",
    "ValidationError",
    "ValidationReport",
    "direct_product",
    "override",
    "rook_monoid",
    "symmetric_inverse_monoid",
    "validate_bim",
]
