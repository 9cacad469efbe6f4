"""Decomposition of finite-dimensional associative algebras into blocks.

The input is a multiplication table given as left-multiplication matrices
over a :class:`~stringnet.exactlin.field.NumberField` k.  The main entry
point, :func:`decompose_algebra`, returns the complete list of primitive
orthogonal central idempotents of a semisimple algebra, detecting and
reporting the two ways this can fail over a non-closed field:

* a nonzero Jacobson radical (found as the kernel of the trace form of
  the left regular representation, valid in characteristic zero) raises
  :class:`NotSemisimple` with a witness element;
* a simple factor whose center is larger than k, or whose dimension is
  not a perfect square, raises :class:`NotSplit` naming the factor.

Splitting the (commutative) center is done after restricting scalars to
the rationals: each field factor of the center over k is also a field
over Q, so the primitive idempotents over Q and over k coincide, and over
Q minimal polynomials can be factored.  That one factorization step is
delegated to sympy; every output derived from it (factor products, CRT
idempotents) is re-verified exactly with our own arithmetic, so no result
depends on trusting the delegate.

:func:`primitive_idempotents` refines the central decomposition to a full
set of primitive (not necessarily central) orthogonal idempotents, which
is what idempotent-splitting consumers need when a factor is a matrix
algebra of size > 1.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import sympy

from .field import (
    NumberField,
    RATIONALS,
    Scalar,
    poly_add,
    poly_divmod,
    poly_mul,
    poly_scale,
    poly_trim,
)
from .matrix import Matrix, nullspace, rank, rref, solve_linear


class NotSemisimple(Exception):
    """The algebra has a nonzero Jacobson radical."""

    def __init__(self, witness: Matrix):
        coords = ", ".join(v.to_expr() for v in witness.col(0))
        super().__init__(f"nonzero Jacobson radical; witness element ({coords})")
        self.witness = witness


class NotSplit(Exception):
    """A simple factor is not a matrix algebra over the base field."""

    def __init__(self, message: str, witness: Matrix):
        coords = ", ".join(v.to_expr() for v in witness.col(0))
        super().__init__(f"{message}; witness idempotent ({coords})")
        self.witness = witness


class _Algebra:
    """Working view of a multiplication table: products, unit, regular rep."""

    def __init__(self, mult_table: Sequence[Matrix], check: bool = True):
        if not mult_table:
            raise ValueError("empty multiplication table")
        n = len(mult_table)
        field = mult_table[0].field
        for L in mult_table:
            if L.rows != n or L.cols != n:
                raise ValueError("left-multiplication matrices must be n x n")
            if not field.same_field(L.field):
                raise ValueError("mixed fields in multiplication table")
        self.left = list(mult_table)
        self.dim = n
        self.field = field
        if check:
            self._check_associative()
        self.unit = self._find_unit()

    def mul(self, a: Matrix, b: Matrix) -> Matrix:
        # a, b are n x 1 coordinate columns; bilinear extension of the table
        out = Matrix.zeros(self.field, self.dim, 1)
        for i in range(self.dim):
            c = a.at(i, 0)
            if not c.is_zero():
                out = out + (self.left[i] @ b).scale(c)
        return out

    def left_mult_matrix(self, a: Matrix) -> Matrix:
        out = Matrix.zeros(self.field, self.dim, self.dim)
        for i in range(self.dim):
            c = a.at(i, 0)
            if not c.is_zero():
                out = out + self.left[i].scale(c)
        return out

    def right_mult_matrix(self, a: Matrix) -> Matrix:
        cols = []
        for j in range(self.dim):
            ej = Matrix.zeros(self.field, self.dim, 1)
            ej = Matrix.column(
                self.field,
                [self.field.one if i == j else self.field.zero for i in range(self.dim)],
            )
            cols.append(self.mul(ej, a))
        entries = []
        for i in range(self.dim):
            for col in cols:
                entries.append(col.at(i, 0))
        return Matrix(self.field, self.dim, self.dim, entries)

    def basis_vector(self, i: int) -> Matrix:
        return Matrix.column(
            self.field,
            [self.field.one if j == i else self.field.zero for j in range(self.dim)],
        )

    def _check_associative(self):
        for i in range(self.dim):
            for j in range(self.dim):
                prod = self.left[i] @ self.left[j]
                bij = self.left[i].col(j)  # coordinates of b_i * b_j
                expected = Matrix.zeros(self.field, self.dim, self.dim)
                for k, c in enumerate(bij):
                    if not c.is_zero():
                        expected = expected + self.left[k].scale(c)
                if prod != expected:
                    raise ValueError(
                        f"multiplication table is not associative at basis pair ({i},{j})"
                    )

    def _find_unit(self) -> Matrix:
        n = self.dim
        # solve sum_i c_i L_i = identity, columns are flattened L_i
        flat = Matrix(
            self.field,
            n * n,
            n,
            [self.left[i].entries[pos] for pos in range(n * n) for i in range(n)],
        )
        target = Matrix(self.field, n * n, 1, Matrix.identity(self.field, n).entries)
        c = solve_linear(flat, target)
        if c is None:
            raise ValueError("multiplication table has no unit element")
        u = Matrix(self.field, n, 1, c.entries)
        if self.right_mult_matrix(u) != Matrix.identity(self.field, n):
            raise ValueError("left unit is not a right unit; table is not unital")
        return u

    def radical_witness(self) -> Optional[Matrix]:
        # kernel of the trace form of the left regular representation
        n = self.dim
        gram = Matrix.from_function(
            self.field,
            n,
            n,
            lambda i, j: (self.left[i] @ self.left[j]).trace(),
        )
        ker = nullspace(gram)
        if ker.cols == 0:
            return None
        return Matrix(self.field, n, 1, ker.col(0))

    def center_basis(self) -> List[Matrix]:
        blocks = []
        for i in range(self.dim):
            blocks.append(self.left[i] - self.right_mult_matrix(self.basis_vector(i)))
        stacked = blocks[0]
        for b in blocks[1:]:
            stacked = stacked.vstack(b)
        ker = nullspace(stacked)
        return [Matrix(self.field, self.dim, 1, ker.col(j)) for j in range(ker.cols)]


def _factor_rational_poly(coeffs: Tuple[Fraction, ...]) -> List[Tuple[Tuple[Fraction, ...], int]]:
    """Monic irreducible factors (with multiplicity) of a monic rational polynomial.

    Factorization itself is delegated to sympy; the returned factorization
    is re-multiplied and compared with the input exactly before use.
    """
    T = sympy.Symbol("T")
    expr = sympy.Poly(
        [sympy.Rational(c.numerator, c.denominator) for c in reversed(coeffs)],
        T,
        domain="QQ",
    )
    lead, raw = expr.factor_list()
    factors: List[Tuple[Tuple[Fraction, ...], int]] = []
    for poly, mult in raw:
        cs = [Fraction(str(c)) for c in reversed(poly.all_coeffs())]
        top = cs[-1]
        cs = [c / top for c in cs]
        factors.append((tuple(cs), int(mult)))
    # exact re-verification with our own arithmetic
    product: Tuple[Fraction, ...] = (Fraction(1),)
    for cs, mult in factors:
        for _ in range(mult):
            product = poly_mul(product, cs)
    if poly_trim(product) != poly_trim(coeffs):
        raise ArithmeticError("polynomial factorization failed exact verification")
    return factors


def _poly_ext_gcd(a: Tuple[Fraction, ...], b: Tuple[Fraction, ...]):
    """(g, u, v) with u a + v b = g over Q[T], g monic."""
    r0, s0, t0 = poly_trim(a), (Fraction(1),), ()
    r1, s1, t1 = poly_trim(b), (), (Fraction(1),)
    while r1:
        q, r = poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, poly_add(s0, poly_scale(poly_mul(q, s1), Fraction(-1)))
        t0, t1 = t1, poly_add(t0, poly_scale(poly_mul(q, t1), Fraction(-1)))
    lead = r0[-1]
    inv = 1 / lead
    return poly_scale(r0, inv), poly_scale(s0, inv), poly_scale(t0, inv)


class _CommutativeSplitter:
    """Splits a commutative subalgebra into primitive idempotents over Q.

    The subalgebra S is given by a k-basis of ambient coordinate columns
    together with its unit.  All linear algebra for minimal polynomials is
    done over the rationals in the basis {generator^t * s_j}, which is
    exactly restriction of scalars; the resulting primitive idempotents
    are also the primitive idempotents of S over k because every field
    factor of S over k is a field over Q as well.
    """

    def __init__(self, alg: _Algebra, basis: List[Matrix], unit: Matrix):
        self.alg = alg
        self.field = alg.field
        self.basis = basis
        self.unit = unit
        self.m = len(basis)
        cols = []
        for j in range(self.m):
            cols.append(basis[j])
        entries = []
        for i in range(alg.dim):
            for col in cols:
                entries.append(col.at(i, 0))
        self.B = Matrix(self.field, alg.dim, self.m, entries)

    def k_coords(self, v: Matrix) -> Matrix:
        c = solve_linear(self.B, v)
        if c is None or self.B @ c != v:
            raise ArithmeticError("element does not lie in the declared subalgebra")
        return c

    def q_vector(self, v: Matrix) -> List[Fraction]:
        c = self.k_coords(v)
        out: List[Fraction] = []
        for j in range(self.m):
            out.extend(c.at(j, 0).coeffs)
        return out

    def q_basis_elements(self) -> List[Matrix]:
        """Deterministic Q-spanning elements: generator^t * s_j."""
        out = []
        gen = self.field.gen
        for j in range(self.m):
            power = self.field.one
            for _ in range(self.field.degree):
                out.append(self.basis[j].scale(power))
                power = power * gen
        return out

    def min_poly_q(self, e: Matrix, w: Matrix):
        """Monic minimal polynomial over Q of w inside the block with unit e.

        Returns (coeffs, powers) where powers[i] = w^i (with w^0 = e).
        """
        powers = [e]
        vectors = [self.q_vector(e)]
        while True:
            nxt = self.alg.mul(powers[-1], w)
            vec = self.q_vector(nxt)
            cols = len(vectors)
            A = Matrix(
                RATIONALS,
                len(vec),
                cols,
                [
                    RATIONALS.from_rational(vectors[j][i])
                    for i in range(len(vec))
                    for j in range(cols)
                ],
            )
            b = Matrix.column(RATIONALS, [RATIONALS.from_rational(x) for x in vec])
            sol = solve_linear(A, b)
            if sol is not None and A @ sol == b:
                coeffs = tuple(-sol.at(i, 0).coeffs[0] for i in range(cols)) + (
                    Fraction(1),
                )
                return poly_trim(coeffs), powers
            powers.append(nxt)
            vectors.append(vec)
            if len(powers) > self.m * self.field.degree + 1:
                raise ArithmeticError("minimal polynomial search failed to terminate")

    def evaluate_poly(self, coeffs: Tuple[Fraction, ...], powers: List[Matrix], w: Matrix) -> Matrix:
        while len(powers) < len(coeffs):
            powers.append(self.alg.mul(powers[-1], w))
        out = Matrix.zeros(self.field, self.alg.dim, 1)
        for i, c in enumerate(coeffs):
            if c:
                out = out + powers[i].scale(self.field.from_rational(c))
        return out

    def block_dim_q(self, e: Matrix) -> int:
        vecs = [self.q_vector(self.alg.mul(e, b)) for b in self.q_basis_elements()]
        n = len(vecs[0])
        A = Matrix(
            RATIONALS,
            n,
            len(vecs),
            [
                RATIONALS.from_rational(vecs[j][i])
                for i in range(n)
                for j in range(len(vecs))
            ],
        )
        return rank(A)

    def probe_elements(self, e: Matrix):
        """Deterministic probe schedule inside the block of e."""
        base = [self.alg.mul(e, b) for b in self.q_basis_elements()]
        for w in base:
            yield w
        for i in range(len(base)):
            for j in range(i + 1, len(base)):
                yield base[i] + base[j]
        for t in range(1, 41):
            acc = Matrix.zeros(self.field, self.alg.dim, 1)
            weight = 1
            for b in base:
                acc = acc + b.scale(Fraction(weight))
                weight *= t + 1
            yield acc

    def split(self, expect_semisimple: bool = True):
        """Primitive idempotent list, or a nilpotent witness.

        Returns ("idempotents", [e_1, ..., e_r]) on success.  When the
        subalgebra turns out to be non-semisimple (possible for probe
        subalgebras k[x] of a bigger algebra) and ``expect_semisimple`` is
        False, returns ("nilpotent", z) with z a nonzero nilpotent.
        """
        finished: List[Matrix] = []
        pending: List[Matrix] = [self.unit]
        while pending:
            e = pending.pop(0)
            dim_e = self.block_dim_q(e)
            if dim_e == 1:
                finished.append(e)
                continue
            outcome = self._split_block(e, dim_e, expect_semisimple)
            if outcome[0] == "field":
                finished.append(e)
            elif outcome[0] == "pieces":
                pending.extend(outcome[1])
            else:
                return outcome
        return ("idempotents", finished)

    def _split_block(self, e: Matrix, dim_e: int, expect_semisimple: bool):
        for w in self.probe_elements(e):
            coeffs, powers = self.min_poly_q(e, w)
            degree = len(coeffs) - 1
            if degree <= 1:
                continue
            factors = _factor_rational_poly(coeffs)
            if any(mult > 1 for _, mult in factors):
                if expect_semisimple:
                    raise ArithmeticError(
                        "repeated factor in a minimal polynomial of a semisimple block"
                    )
                # square part contributes a nilpotent: g(w) with g the radical
                radical_poly = (Fraction(1),)
                for cs, _ in factors:
                    radical_poly = poly_mul(radical_poly, cs)
                z = self.evaluate_poly(radical_poly, powers, w)
                if z.is_zero():
                    raise ArithmeticError("nilpotent witness vanished unexpectedly")
                return ("nilpotent", z)
            if len(factors) == 1:
                if degree == dim_e:
                    return ("field",)
                continue
            # CRT idempotents refine the block
            pieces = []
            for cs, _ in factors:
                others, _ = poly_divmod(coeffs, cs)
                _, u, _ = _poly_ext_gcd(others, cs)
                h = poly_divmod(poly_mul(u, others), coeffs)[1]
                piece = self.evaluate_poly(h, powers, w)
                pieces.append(piece)
            total = Matrix.zeros(self.field, self.alg.dim, 1)
            for piece in pieces:
                if self.alg.mul(piece, piece) != piece:
                    raise ArithmeticError("CRT idempotent failed exact verification")
                total = total + piece
            if total != e:
                raise ArithmeticError("CRT idempotents do not sum to the block unit")
            for a in range(len(pieces)):
                for b in range(a + 1, len(pieces)):
                    if not self.alg.mul(pieces[a], pieces[b]).is_zero():
                        raise ArithmeticError("CRT idempotents are not orthogonal")
            return ("pieces", pieces)
        raise ArithmeticError(
            "probe schedule exhausted without certifying or splitting a block"
        )


def _verify_central_family(alg: _Algebra, idems: List[Matrix]):
    total = Matrix.zeros(alg.field, alg.dim, 1)
    for i, e in enumerate(idems):
        if alg.mul(e, e) != e:
            raise ArithmeticError(f"output {i} is not idempotent")
        if alg.left_mult_matrix(e) != alg.right_mult_matrix(e):
            raise ArithmeticError(f"output {i} is not central")
        total = total + e
        for j in range(i + 1, len(idems)):
            if not alg.mul(e, idems[j]).is_zero():
                raise ArithmeticError(f"outputs {i} and {j} are not orthogonal")
    if total != alg.unit:
        raise ArithmeticError("central idempotents do not sum to the unit")


def decompose_algebra(mult_table: Sequence[Matrix], check: bool = True) -> List[Matrix]:
    """Primitive orthogonal central idempotents of a semisimple algebra.

    ``mult_table[i]`` is the matrix of left multiplication by the i-th
    basis element: b_i * b_j has coordinates ``mult_table[i].col(j)``.
    Returns the idempotents as coordinate columns, verified exactly to be
    idempotent, central, pairwise orthogonal, and to sum to the unit.

    Raises :class:`NotSemisimple` when the Jacobson radical is nonzero and
    :class:`NotSplit` when a simple factor is not recognized as a matrix
    algebra over the base field (its center exceeds the field, or its
    dimension is not a perfect square).
    """
    alg = _Algebra(mult_table, check=check)
    witness = alg.radical_witness()
    if witness is not None:
        raise NotSemisimple(witness)
    center = alg.center_basis()
    splitter = _CommutativeSplitter(alg, center, alg.unit)
    kind, idems = splitter.split(expect_semisimple=True)
    assert kind == "idempotents"
    _verify_central_family(alg, idems)
    # split-ness checks per factor
    for e in idems:
        center_rank = _k_rank(alg, [alg.mul(z, e) for z in center])
        if center_rank > 1:
            raise NotSplit(
                f"a simple factor has center of dimension {center_rank} over the base field",
                e,
            )
        factor_dim = _k_rank(alg, [alg.mul(alg.basis_vector(i), e) for i in range(alg.dim)])
        root = math.isqrt(factor_dim)
        if root * root != factor_dim:
            raise NotSplit(
                f"a simple factor has dimension {factor_dim}, not a perfect square",
                e,
            )
    return idems


def _k_rank(alg: _Algebra, vectors: List[Matrix]) -> int:
    entries = []
    for i in range(alg.dim):
        for v in vectors:
            entries.append(v.at(i, 0))
    return rank(Matrix(alg.field, alg.dim, len(vectors), entries))


def _k_basis_subset(alg: _Algebra, vectors: List[Matrix]) -> List[Matrix]:
    entries = []
    for i in range(alg.dim):
        for v in vectors:
            entries.append(v.at(i, 0))
    _, pivots = rref(Matrix(alg.field, alg.dim, len(vectors), entries))
    return [vectors[j] for j in pivots]


def primitive_idempotents(mult_table: Sequence[Matrix], check: bool = True) -> List[Matrix]:
    """A complete set of primitive orthogonal idempotents summing to the unit.

    Starts from :func:`decompose_algebra` and refines every central factor
    of dimension > 1 by locating zero divisors (through commutative probe
    subalgebras k[x], split over Q) and splitting the left ideals they
    generate.  On the shipped commutative examples the refinement step is
    a no-op.
    """
    alg = _Algebra(mult_table, check=check)
    central = decompose_algebra(mult_table, check=False)
    out: List[Matrix] = []
    for e in central:
        out.extend(_refine_factor(alg, e))
    total = Matrix.zeros(alg.field, alg.dim, 1)
    for i, e in enumerate(out):
        if alg.mul(e, e) != e:
            raise ArithmeticError("refined idempotent failed verification")
        total = total + e
        for j in range(i + 1, len(out)):
            left = alg.mul(e, out[j])
            right = alg.mul(out[j], e)
            if not (left.is_zero() and right.is_zero()):
                raise ArithmeticError("refined idempotents are not orthogonal")
    if total != alg.unit:
        raise ArithmeticError("refined idempotents do not sum to the unit")
    return out


def _block_basis(alg: _Algebra, e: Matrix) -> List[Matrix]:
    vectors = []
    for i in range(alg.dim):
        v = alg.mul(alg.mul(e, alg.basis_vector(i)), e)
        if not v.is_zero():
            vectors.append(v)
    return _k_basis_subset(alg, vectors)


def _refine_factor(alg: _Algebra, e: Matrix) -> List[Matrix]:
    basis = _block_basis(alg, e)
    if len(basis) == 1:
        return [e]
    for x in _refinement_probes(alg, e, basis):
        split = _try_split_with(alg, e, x)
        if split is not None:
            h, rest = split
            return _refine_factor(alg, h) + _refine_factor(alg, rest)
    raise NotSplit(
        "no proper idempotent found in a factor of dimension "
        f"{len(basis)}; the factor is not certified as a matrix algebra",
        e,
    )


def _refinement_probes(alg: _Algebra, e: Matrix, basis: List[Matrix]):
    for x in basis:
        yield x
    for i in range(len(basis)):
        for j in range(len(basis)):
            if i != j:
                yield alg.mul(basis[i], basis[j])
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            yield basis[i] + basis[j]
            yield basis[i] - basis[j]


def _try_split_with(alg: _Algebra, e: Matrix, x: Matrix) -> Optional[Tuple[Matrix, Matrix]]:
    # build the commutative subalgebra k[x] with unit e inside the factor
    powers = [e]
    span: List[Matrix] = [e]
    current = e
    while True:
        current = alg.mul(current, x)
        if _k_rank(alg, span + [current]) == len(span):
            break
        span.append(current)
        powers.append(current)
        if len(span) > alg.dim:
            raise ArithmeticError("power closure failed to terminate")
    if len(span) == 1:
        return None
    splitter = _CommutativeSplitter(alg, span, e)
    outcome = splitter.split(expect_semisimple=False)
    if outcome[0] == "nilpotent":
        return _ideal_split(alg, e, outcome[1])
    idems = outcome[1]
    for h in idems:
        if h != e and not h.is_zero():
            rest = e - h
            if alg.mul(h, h) == h and alg.mul(h, rest).is_zero():
                return h, rest
    return None


def _ideal_split(alg: _Algebra, e: Matrix, z: Matrix) -> Optional[Tuple[Matrix, Matrix]]:
    """Split e using the left ideal (eAe) z, with z a zero divisor of the factor."""
    basis = _block_basis(alg, e)
    ideal = _k_basis_subset(alg, [v for b in basis if not (v := alg.mul(b, z)).is_zero()])
    if not ideal:
        return None
    # a right unit h of the ideal is an idempotent generator
    rows = []
    rhs = []
    for w in ideal:
        Lw = alg.left_mult_matrix(w)
        cols = []
        for g in ideal:
            cols.append(Lw @ g)
        entries = []
        for i in range(alg.dim):
            for col in cols:
                entries.append(col.at(i, 0))
        rows.append(Matrix(alg.field, alg.dim, len(ideal), entries))
        rhs.append(w)
    system = rows[0]
    for r in rows[1:]:
        system = system.vstack(r)
    target = rhs[0]
    for v in rhs[1:]:
        target = target.vstack(v)
    sol = solve_linear(system, target)
    if sol is None:
        return None
    h = Matrix.zeros(alg.field, alg.dim, 1)
    for j, g in enumerate(ideal):
        h = h + g.scale(sol.at(j, 0))
    if h.is_zero() or h == e or alg.mul(h, h) != h:
        return None
    # h lies in eAe, so e - h is automatically orthogonal to h on both sides
    rest = e - h
    if not alg.mul(h, rest).is_zero() or not alg.mul(rest, h).is_zero():
        raise ArithmeticError("ideal split produced non-orthogonal pieces")
    return h, rest
