"""Exact number-field arithmetic and the linear-algebra kernel."""

from .field import (
    NumberField,
    RATIONALS,
    ReducibleMinimalPolynomial,
    Scalar,
    check_irreducible,
    rational_roots,
)
from .matrix import (
    DimensionMismatch,
    IdempotentViolation,
    Matrix,
    invert,
    nullspace,
    rank,
    rank_factor,
    rref,
    solve_linear,
)
from .algebra import (
    NotSemisimple,
    NotSplit,
    decompose_algebra,
    primitive_idempotents,
)

__all__ = [
    "NumberField",
    "RATIONALS",
    "ReducibleMinimalPolynomial",
    "Scalar",
    "check_irreducible",
    "rational_roots",
    "DimensionMismatch",
    "IdempotentViolation",
    "Matrix",
    "invert",
    "nullspace",
    "rank",
    "rank_factor",
    "rref",
    "solve_linear",
    "NotSemisimple",
    "NotSplit",
    "decompose_algebra",
    "primitive_idempotents",
]
