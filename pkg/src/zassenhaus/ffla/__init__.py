"""Exact arithmetic over GF(p^m) and dense linear algebra on top of it."""

from .field import CONWAY, GF, FieldCtx, FieldError
from .matrix import (
    ContextError,
    DimensionError,
    Matrix,
    Subspace,
    lincomb,
    nullspace,
    rref_codes,
    solve,
    subspace_ops,
)

__all__ = [
    "CONWAY",
    "GF",
    "ContextError",
    "DimensionError",
    "FieldCtx",
    "FieldError",
    "Matrix",
    "Subspace",
    "lincomb",
    "nullspace",
    "rref_codes",
    "solve",
    "subspace_ops",
]
