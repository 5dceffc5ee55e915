"""Exact order types, binary point-set predicates and ordered Ramsey constructions."""

from .errors import BudgetError, InvalidInput, OrderTypesError
from .geometry import (
    OrderTypeTable,
    Orientation,
    PointSet,
    decompose,
    deep_below,
    extreme_points,
    format_tree,
    is_splitting,
    orient,
    parse_tree,
    same_order_type,
    same_signature,
    validate,
)
from .predicates import (
    PredicateTable,
    gamma_isomorphisms,
    iota_recover,
    is_locally_consistent,
    phi_encode,
    psi_decode,
    psi_encode,
    verify_encoding,
)

__version__ = "0.1.0"

__all__ = [
    "BudgetError",
    "InvalidInput",
    "OrderTypesError",
    "OrderTypeTable",
    "Orientation",
    "PointSet",
    "PredicateTable",
    "decompose",
    "deep_below",
    "extreme_points",
    "format_tree",
    "gamma_isomorphisms",
    "iota_recover",
    "is_locally_consistent",
    "is_splitting",
    "orient",
    "parse_tree",
    "phi_encode",
    "psi_decode",
    "psi_encode",
    "same_order_type",
    "same_signature",
    "validate",
    "verify_encoding",
]
