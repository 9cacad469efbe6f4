"""Dense exact matrices over a number field.

Everything is immutable and deterministic: row reduction always picks the
first nonzero entry in column order as the pivot, so ranks, solution
vectors, and factorizations are reproducible bit for bit.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

from .field import NumberField, Scalar


class DimensionMismatch(ValueError):
    """Shapes of the operands do not fit the requested operation."""


class IdempotentViolation(ValueError):
    """A matrix expected to satisfy e*e = e does not.

    Carries the offending entry of e*e - e with the largest degree in the
    field generator (ties broken by row-major position).
    """

    def __init__(self, entry: Scalar, row: int, col: int):
        super().__init__(
            f"matrix is not idempotent: (e*e - e)[{row},{col}] = {entry.to_expr()}"
        )
        self.entry = entry
        self.row = row
        self.col = col


class Matrix:
    """Immutable dense matrix with :class:`Scalar` entries, row major."""

    __slots__ = ("field", "rows", "cols", "entries")

    def __init__(self, field: NumberField, rows: int, cols: int, entries: Sequence[Scalar]):
        if rows < 0 or cols < 0:
            raise DimensionMismatch("negative matrix dimensions")
        if len(entries) != rows * cols:
            raise DimensionMismatch(
                f"{rows}x{cols} matrix needs {rows * cols} entries, got {len(entries)}"
            )
        self.field = field
        self.rows = rows
        self.cols = cols
        self.entries = tuple(entries)

    # -- construction ------------------------------------------------------

    @staticmethod
    def zeros(field: NumberField, rows: int, cols: int) -> "Matrix":
        return Matrix(field, rows, cols, (field.zero,) * (rows * cols))

    @staticmethod
    def identity(field: NumberField, n: int) -> "Matrix":
        entries = [field.zero] * (n * n)
        for i in range(n):
            entries[i * n + i] = field.one
        return Matrix(field, n, n, entries)

    @staticmethod
    def from_rows(field: NumberField, rows: Sequence[Sequence]) -> "Matrix":
        nrows = len(rows)
        ncols = len(rows[0]) if nrows else 0
        entries = []
        for row in rows:
            if len(row) != ncols:
                raise DimensionMismatch("ragged rows")
            for value in row:
                if isinstance(value, Scalar):
                    entries.append(value)
                else:
                    entries.append(field.from_rational(value))
        return Matrix(field, nrows, ncols, entries)

    @staticmethod
    def from_function(field: NumberField, rows: int, cols: int, fn: Callable[[int, int], Scalar]) -> "Matrix":
        return Matrix(
            field, rows, cols, [fn(i, j) for i in range(rows) for j in range(cols)]
        )

    @staticmethod
    def column(field: NumberField, values: Sequence) -> "Matrix":
        return Matrix.from_rows(field, [[v] for v in values])

    # -- access ------------------------------------------------------------

    def at(self, i: int, j: int) -> Scalar:
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"({i},{j}) outside {self.rows}x{self.cols}")
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Tuple[Scalar, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def col(self, j: int) -> Tuple[Scalar, ...]:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def submatrix_columns(self, indices: Sequence[int]) -> "Matrix":
        entries = []
        for i in range(self.rows):
            base = i * self.cols
            for j in indices:
                entries.append(self.entries[base + j])
        return Matrix(self.field, self.rows, len(indices), entries)

    # -- arithmetic --------------------------------------------------------

    def _check_same_shape(self, other: "Matrix"):
        if self.rows != other.rows or self.cols != other.cols:
            raise DimensionMismatch(
                f"{self.rows}x{self.cols} vs {other.rows}x{other.cols}"
            )

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        return Matrix(
            self.field,
            self.rows,
            self.cols,
            [a + b for a, b in zip(self.entries, other.entries)],
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        return Matrix(
            self.field,
            self.rows,
            self.cols,
            [a - b for a, b in zip(self.entries, other.entries)],
        )

    def __neg__(self) -> "Matrix":
        return Matrix(self.field, self.rows, self.cols, [-a for a in self.entries])

    def scale(self, c) -> "Matrix":
        if not isinstance(c, Scalar):
            c = self.field.from_rational(c)
        return Matrix(self.field, self.rows, self.cols, [c * a for a in self.entries])

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise DimensionMismatch(
                f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
            )
        zero = self.field.zero
        out: List[Scalar] = [zero] * (self.rows * other.cols)
        for i in range(self.rows):
            row = self.row(i)
            for k, a in enumerate(row):
                if a.is_zero():
                    continue
                obase = k * other.cols
                rbase = i * other.cols
                for j in range(other.cols):
                    b = other.entries[obase + j]
                    if not b.is_zero():
                        out[rbase + j] = out[rbase + j] + a * b
        return Matrix(self.field, self.rows, other.cols, out)

    def transpose(self) -> "Matrix":
        return Matrix(
            self.field,
            self.cols,
            self.rows,
            [self.entries[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)],
        )

    def trace(self) -> Scalar:
        if self.rows != self.cols:
            raise DimensionMismatch("trace of a non-square matrix")
        acc = self.field.zero
        for i in range(self.rows):
            acc = acc + self.entries[i * self.cols + i]
        return acc

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.rows != other.rows:
            raise DimensionMismatch("hstack needs equal row counts")
        entries = []
        for i in range(self.rows):
            entries.extend(self.row(i))
            entries.extend(other.row(i))
        return Matrix(self.field, self.rows, self.cols + other.cols, entries)

    def vstack(self, other: "Matrix") -> "Matrix":
        if self.cols != other.cols:
            raise DimensionMismatch("vstack needs equal column counts")
        return Matrix(
            self.field, self.rows + other.rows, self.cols, self.entries + other.entries
        )

    def kron(self, other: "Matrix") -> "Matrix":
        entries = []
        for i in range(self.rows):
            for k in range(other.rows):
                for j in range(self.cols):
                    a = self.at(i, j)
                    for l in range(other.cols):
                        entries.append(a * other.at(k, l))
        return Matrix(
            self.field, self.rows * other.rows, self.cols * other.cols, entries
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.entries))

    def is_zero(self) -> bool:
        return all(a.is_zero() for a in self.entries)

    def __repr__(self) -> str:
        body = "; ".join(
            " ".join(a.to_expr() for a in self.row(i)) for i in range(self.rows)
        )
        return f"Matrix({self.rows}x{self.cols}: {body})"


def rref(matrix: Matrix) -> Tuple[Matrix, Tuple[int, ...]]:
    """Reduced row echelon form with the deterministic pivot rule.

    Returns the reduced matrix and the tuple of pivot column indices.
    """
    entries = [list(matrix.row(i)) for i in range(matrix.rows)]
    rows, cols = matrix.rows, matrix.cols
    pivots = []
    r = 0
    for c in range(cols):
        pivot_row = None
        for i in range(r, rows):
            if not entries[i][c].is_zero():
                pivot_row = i
                break
        if pivot_row is None:
            continue
        entries[r], entries[pivot_row] = entries[pivot_row], entries[r]
        inv = entries[r][c].inverse()
        entries[r] = [inv * v for v in entries[r]]
        for i in range(rows):
            if i != r and not entries[i][c].is_zero():
                factor = entries[i][c]
                entries[i] = [
                    entries[i][j] - factor * entries[r][j] for j in range(cols)
                ]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    flat = [v for row in entries for v in row]
    return Matrix(matrix.field, rows, cols, flat), tuple(pivots)


def rank(matrix: Matrix) -> int:
    return len(rref(matrix)[1])


def solve_linear(A: Matrix, b: Matrix) -> Optional[Matrix]:
    """Solve A x = b exactly; free variables are set to zero.

    Returns None when the system is inconsistent.  ``b`` may have several
    columns; the result then has the same number of columns.
    """
    if A.rows != b.rows:
        raise DimensionMismatch(
            f"A has {A.rows} rows but b has {b.rows}"
        )
    augmented = A.hstack(b)
    reduced, pivots = rref(augmented)
    # a pivot beyond A's columns means an inconsistent row
    for c in pivots:
        if c >= A.cols:
            return None
    zero = A.field.zero
    out = [[zero] * b.cols for _ in range(A.cols)]
    for r, c in enumerate(pivots):
        for j in range(b.cols):
            out[c][j] = reduced.at(r, A.cols + j)
    return Matrix(A.field, A.cols, b.cols, [v for row in out for v in row])


def nullspace(A: Matrix) -> Matrix:
    """Matrix whose columns form the canonical basis of ker(A)."""
    reduced, pivots = rref(A)
    pivot_set = set(pivots)
    free = [c for c in range(A.cols) if c not in pivot_set]
    zero, one = A.field.zero, A.field.one
    columns = []
    for f in free:
        vec = [zero] * A.cols
        vec[f] = one
        for r, c in enumerate(pivots):
            vec[c] = -reduced.at(r, f)
        columns.append(vec)
    entries = []
    for i in range(A.cols):
        for col in columns:
            entries.append(col[i])
    return Matrix(A.field, A.cols, len(columns), entries)


def invert(A: Matrix) -> Optional[Matrix]:
    """Exact inverse, or None when A is singular."""
    if A.rows != A.cols:
        raise DimensionMismatch("only square matrices can be inverted")
    x = solve_linear(A, Matrix.identity(A.field, A.rows))
    if x is None:
        return None
    if A @ x != Matrix.identity(A.field, A.rows):
        return None
    return x


def rank_factor(e: Matrix) -> Tuple[Matrix, Matrix]:
    """Split an exact idempotent: U (n x r) and V (r x n) with U V = e, V U = 1.

    The columns of U are the pivot columns of e, a basis of its image; V is
    the unique solution of U V = e.  Raises :class:`IdempotentViolation`
    when e*e differs from e, carrying the worst entry of the difference.
    """
    if e.rows != e.cols:
        raise DimensionMismatch("idempotents are square")
    diff = (e @ e) - e
    if not diff.is_zero():
        worst = None
        for i in range(diff.rows):
            for j in range(diff.cols):
                entry = diff.at(i, j)
                if entry.is_zero():
                    continue
                if worst is None or entry.poly_degree() > worst[0].poly_degree():
                    worst = (entry, i, j)
        raise IdempotentViolation(*worst)
    _, pivots = rref(e)
    U = e.submatrix_columns(pivots)
    if not pivots:
        return U, Matrix.zeros(e.field, 0, e.rows)
    V = solve_linear(U, e)
    # V U = 1 follows from e acting as identity on its image; verify anyway
    r = len(pivots)
    if V @ U != Matrix.identity(e.field, r):
        raise ArithmeticError("rank factorization failed the exactness check")
    return U, V
