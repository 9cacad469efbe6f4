"""Exact field arithmetic, linear kernel, and algebra decomposition."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from stringnet.exactlin import (
    IdempotentViolation,
    Matrix,
    NotSemisimple,
    NotSplit,
    NumberField,
    RATIONALS,
    ReducibleMinimalPolynomial,
    Scalar,
    check_irreducible,
    decompose_algebra,
    invert,
    nullspace,
    primitive_idempotents,
    rank,
    rank_factor,
    rational_roots,
    solve_linear,
)

Q = RATIONALS
QSQRT5 = NumberField("Q(sqrt5)", (-1, -1, 1))  # x^2 = x + 1, golden ratio
QSQRT2 = NumberField("Q(sqrt2)", (-2, 0, 1))
QOMEGA = NumberField("Q(omega)", (1, 1, 1))  # primitive cube root of unity


# -- fields ----------------------------------------------------------------


def test_rational_field_basics():
    a = Q.from_rational(Fraction(2, 3))
    b = Q.from_rational(5)
    assert (a * b).as_rational() == Fraction(10, 3)
    assert (a / b).as_rational() == Fraction(2, 15)
    assert (a - a).is_zero()


def test_golden_ratio_relation():
    phi = QSQRT5.gen
    assert phi * phi == phi + 1
    inv = phi.inverse()
    assert inv == phi - 1
    assert phi * inv == QSQRT5.one


def test_sqrt2_inverse():
    r = QSQRT2.gen
    assert r * r == QSQRT2.from_rational(2)
    assert r.inverse() == r / 2


def test_omega_relation():
    w = QOMEGA.gen
    assert w * w == -w - 1
    assert w**3 == QOMEGA.one


def test_to_expr_round_shapes():
    s = QSQRT5.scalar([Fraction(1, 2), Fraction(-3)])
    assert s.to_expr() == "1/2 - 3*x"
    assert QSQRT5.zero.to_expr() == "0"
    assert (-QSQRT5.one).to_expr() == "-1"
    assert QSQRT5.gen.to_expr() == "x"


def test_reducible_minimal_polynomial_rejected():
    with pytest.raises(ReducibleMinimalPolynomial):
        NumberField("bad", (-1, 0, 1))  # x^2 - 1
    with pytest.raises(ReducibleMinimalPolynomial):
        NumberField("bad", (1, 2, 1))  # (x+1)^2
    with pytest.raises(ReducibleMinimalPolynomial):
        NumberField("bad", (4, 0, 0, 0, 1))  # x^4 + 4 = (x^2-2x+2)(x^2+2x+2)


def test_quartic_irreducibility_cases():
    assert check_irreducible((Fraction(2), Fraction(0), Fraction(0), Fraction(0), Fraction(1)))  # x^4 + 2
    assert check_irreducible((Fraction(1), Fraction(1), Fraction(0), Fraction(0), Fraction(1)))  # x^4 + x + 1
    assert check_irreducible((Fraction(-4), Fraction(0), Fraction(0), Fraction(0), Fraction(1))) is False  # x^4 - 4
    assert check_irreducible((Fraction(1), Fraction(0), Fraction(-3), Fraction(0), Fraction(1))) is False  # (x^2+x-1)(x^2-x-1)
    # degree 5 is out of range for the hand checks
    assert check_irreducible((Fraction(2), 0, 0, 0, 0, Fraction(1))) is None


def test_rational_roots():
    # (x - 1/2)(x + 3) = x^2 + 5/2 x - 3/2
    roots = rational_roots((Fraction(-3, 2), Fraction(5, 2), Fraction(1)))
    assert set(roots) == {Fraction(1, 2), Fraction(-3)}


def test_unverified_degree_flag():
    f = NumberField("deg5", (2, 0, 0, 0, 0, 1))
    assert not f.irreducibility_verified
    assert QSQRT5.irreducibility_verified


small_rationals = st.fractions(
    min_value=-4, max_value=4, max_denominator=6
)


def field_elements(field):
    return st.builds(
        lambda cs: field.scalar(cs),
        st.lists(small_rationals, min_size=field.degree, max_size=field.degree),
    )


@settings(max_examples=60, deadline=None, derandomize=True)
@given(field_elements(QSQRT5), field_elements(QSQRT5), field_elements(QSQRT5))
def test_field_axioms_qsqrt5(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    if not b.is_zero():
        assert (a / b) * b == a


@settings(max_examples=60, deadline=None, derandomize=True)
@given(field_elements(QOMEGA))
def test_inverse_round_trip_qomega(a):
    if not a.is_zero():
        assert a * a.inverse() == QOMEGA.one


# -- matrices --------------------------------------------------------------


def test_solve_identity():
    A = Matrix.identity(Q, 2)
    b = Matrix.column(Q, [1, 2])
    x = solve_linear(A, b)
    assert x == b


def test_solve_inconsistent():
    A = Matrix.from_rows(Q, [[1, 1], [1, 1]])
    b = Matrix.column(Q, [1, 0])
    assert solve_linear(A, b) is None


def test_solve_underdetermined_free_vars_zero():
    A = Matrix.from_rows(Q, [[1, 1]])
    b = Matrix.column(Q, [3])
    x = solve_linear(A, b)
    assert x == Matrix.column(Q, [3, 0])  # free variable set to zero


def test_solve_round_trip_qsqrt5():
    phi = QSQRT5.gen
    one = QSQRT5.one
    rows = []
    vals = [one, phi, one + phi, phi * phi, one - phi]
    k = 0
    for i in range(5):
        row = []
        for j in range(5):
            row.append(vals[(i * j + i + j) % 5] + QSQRT5.from_rational(i == j))
            k += 1
        rows.append(row)
    A = Matrix.from_rows(QSQRT5, rows)
    b = Matrix.column(QSQRT5, [phi, one, phi + one, one, phi])
    x = solve_linear(A, b)
    assert x is not None
    assert A @ x == b


def test_nullspace_and_rank():
    A = Matrix.from_rows(Q, [[1, 2, 3], [2, 4, 6]])
    assert rank(A) == 1
    ker = nullspace(A)
    assert ker.cols == 2
    assert (A @ ker).is_zero()


def test_invert():
    A = Matrix.from_rows(Q, [[1, 1], [0, 1]])
    B = invert(A)
    assert B is not None
    assert A @ B == Matrix.identity(Q, 2)
    assert invert(Matrix.from_rows(Q, [[1, 1], [1, 1]])) is None


def test_rank_factor_zero_and_identity():
    z = Matrix.zeros(Q, 3, 3)
    U, V = rank_factor(z)
    assert U.cols == 0 and V.rows == 0
    e = Matrix.identity(Q, 3)
    U, V = rank_factor(e)
    assert U == e and V == e


def test_rank_factor_half_projector():
    h = Fraction(1, 2)
    e = Matrix.from_rows(Q, [[h, h], [h, h]])
    U, V = rank_factor(e)
    assert U.cols == 1
    assert U @ V == e
    assert V @ U == Matrix.identity(Q, 1)


def test_rank_factor_rejects_non_idempotent():
    m = Matrix.from_rows(Q, [[1, 1], [0, 1]])
    with pytest.raises(IdempotentViolation) as err:
        rank_factor(m)
    assert err.value.row == 0 and err.value.col == 1


@settings(max_examples=40, deadline=None, derandomize=True)
@given(
    st.lists(small_rationals, min_size=3, max_size=3),
    st.lists(small_rationals, min_size=3, max_size=3),
)
def test_rank_factor_on_random_rank_one_idempotents(us, vs):
    # e = u (v u)^{-1} v is idempotent whenever v u is invertible
    u = Matrix.column(Q, us)
    v = Matrix.from_rows(Q, [vs])
    pairing = (v @ u).at(0, 0)
    if pairing.is_zero():
        return
    e = (u @ v).scale(pairing.inverse())
    U, V = rank_factor(e)
    assert U @ V == e
    assert V @ U == Matrix.identity(Q, 1)


# -- algebra decomposition -------------------------------------------------


def left_tables_from_structure(field, structure):
    """structure[i][j] = coordinates of b_i * b_j."""
    n = len(structure)
    tables = []
    for i in range(n):
        entries = []
        for k in range(n):
            for j in range(n):
                entries.append(field.from_rational(structure[i][j][k]))
        tables.append(Matrix(field, n, n, entries))
    return tables


def group_algebra_tables(field, group_mult):
    n = len(group_mult)
    structure = [
        [[1 if group_mult[i][j] == k else 0 for k in range(n)] for j in range(n)]
        for i in range(n)
    ]
    return left_tables_from_structure(field, structure)


def test_decompose_one_dimensional():
    tables = left_tables_from_structure(Q, [[[1]]])
    idems = decompose_algebra(tables)
    assert len(idems) == 1
    assert idems[0] == Matrix.column(Q, [1])


def test_decompose_group_algebra_z2():
    mult = [[0, 1], [1, 0]]
    idems = decompose_algebra(group_algebra_tables(Q, mult))
    assert len(idems) == 2
    half = Fraction(1, 2)
    expected = {
        (half, half),
        (half, -half),
    }
    got = {tuple(e.at(i, 0).as_rational() for i in range(2)) for e in idems}
    assert got == expected


def test_decompose_commuting_pairs_algebra_z2():
    # direct sum of two copies of k[Z/2]: the 4-dimensional algebra that
    # appears as the endomorphism algebra of the two circle decorations
    mult = [
        [0, 1, None, None],
        [1, 0, None, None],
        [None, None, 2, 3],
        [None, None, 3, 2],
    ]
    structure = [
        [
            [1 if mult[i][j] == k else 0 for k in range(4)]
            if mult[i][j] is not None
            else [0, 0, 0, 0]
            for j in range(4)
        ]
        for i in range(4)
    ]
    idems = decompose_algebra(left_tables_from_structure(Q, structure))
    assert len(idems) == 4


def test_decompose_z3_over_cyclotomic_field():
    mult = [[(i + j) % 3 for j in range(3)] for i in range(3)]
    idems = decompose_algebra(group_algebra_tables(QOMEGA, mult))
    assert len(idems) == 3


def test_decompose_z3_over_rationals_not_split():
    mult = [[(i + j) % 3 for j in range(3)] for i in range(3)]
    with pytest.raises(NotSplit) as err:
        decompose_algebra(group_algebra_tables(Q, mult))
    assert "center of dimension 2" in str(err.value)


def test_decompose_dual_numbers_not_semisimple():
    # k[t]/(t^2): b_0 = 1, b_1 = t
    structure = [
        [[1, 0], [0, 1]],
        [[0, 1], [0, 0]],
    ]
    with pytest.raises(NotSemisimple):
        decompose_algebra(left_tables_from_structure(Q, structure))


def test_decompose_matrix_algebra_central_but_refinable():
    # M_2(Q) in the elementary-matrix basis e11, e12, e21, e22
    def emat(i, j):
        return [[1 if (a, b) == (i, j) else 0 for b in range(2)] for a in range(2)]

    basis = [(0, 0), (0, 1), (1, 0), (1, 1)]

    def mul(p, q):
        (a, b), (c, d) = p, q
        if b != c:
            return None
        return (a, d)

    structure = []
    for p in basis:
        row = []
        for q in basis:
            r = mul(p, q)
            row.append([1 if r == s else 0 for s in basis])
        structure.append(row)
    tables = left_tables_from_structure(Q, structure)
    central = decompose_algebra(tables)
    assert len(central) == 1  # M_2 is simple
    prims = primitive_idempotents(tables)
    assert len(prims) == 2  # two rank-one idempotents


def test_primitive_idempotents_on_sum_of_fields():
    mult = [[0, 1], [1, 0]]
    prims = primitive_idempotents(group_algebra_tables(Q, mult))
    assert len(prims) == 2


def test_quaternions_not_split_over_rationals():
    # basis 1, i, j, k with the usual relations: a 4-dimensional division
    # algebra over Q; central decomposition is trivial but refinement must
    # fail and say so
    names = ["1", "i", "j", "k"]
    table = {
        ("1", "1"): ("1", 1), ("1", "i"): ("i", 1), ("1", "j"): ("j", 1), ("1", "k"): ("k", 1),
        ("i", "1"): ("i", 1), ("i", "i"): ("1", -1), ("i", "j"): ("k", 1), ("i", "k"): ("j", -1),
        ("j", "1"): ("j", 1), ("j", "i"): ("k", -1), ("j", "j"): ("1", -1), ("j", "k"): ("i", 1),
        ("k", "1"): ("k", 1), ("k", "i"): ("j", 1), ("k", "j"): ("i", -1), ("k", "k"): ("1", -1),
    }
    structure = []
    for a in names:
        row = []
        for b in names:
            target, sign = table[(a, b)]
            row.append([sign if target == c else 0 for c in names])
        structure.append(row)
    tables = left_tables_from_structure(Q, structure)
    with pytest.raises(NotSplit):
        primitive_idempotents(tables)
