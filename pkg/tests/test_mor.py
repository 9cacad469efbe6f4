"""Morphism engine: composition, tensor, duality, rotation."""

import pytest
from hypothesis import given, settings, strategies as st

from stringnet import mor
from stringnet.fusion import hom_dimension
from stringnet.mor import (
    EMPTY,
    Obj,
    coev,
    coev_primed,
    entries_vector,
    ev,
    ev_primed,
    from_vector,
    hom_space_basis,
    hom_space_dimension,
    identity,
    rotate,
    rotate_times,
    scalar_mor,
    summand_injection,
    summand_projection,
    tensor,
    tensor_many,
    zero,
)


def test_identity_composes(fib):
    x = Obj.of(1, 1)
    i = identity(fib, x)
    assert i @ i == i
    assert i + zero(fib, x, x) == i


def test_scalar_morphisms(fib):
    phi = fib.field.gen
    s = scalar_mor(fib, phi)
    assert s.scalar() == phi
    assert (s @ s).scalar() == phi * phi
    assert tensor(s, s).scalar() == phi * phi


def test_hom_basis_matches_dimension_count(fib, ising):
    assert hom_space_dimension(fib, Obj.of(1, 1), Obj.of(1, 1)) == 2
    assert len(hom_space_basis(fib, Obj.of(1, 1), Obj.of(1, 1))) == 2
    src = Obj.of(2, 2)
    assert hom_space_dimension(ising, src, src) == hom_dimension(ising, (2, 2), (2, 2))
    # sum slots multiply out sector by sector
    b = Obj.of((0, 1), (0, 1))
    dims = hom_space_dimension(ising, b, b)
    total = sum(
        hom_dimension(ising, (x, y), (u, v))
        for x in (0, 1)
        for y in (0, 1)
        for u in (0, 1)
        for v in (0, 1)
    )
    assert dims == total


def test_vector_round_trip(fib):
    src, dst = Obj.of(1, 1), Obj.of(1, 1)
    basis = hom_space_basis(fib, src, dst)
    f = basis[0].scale(fib.field.gen) + basis[1].scale(-fib.field.one)
    coords = entries_vector(f)
    assert from_vector(fib, src, dst, coords) == f
    assert [c.to_expr() for c in coords] == ["x", "-1"]


@settings(deadline=None, derandomize=True)
@given(
    a=st.integers(-4, 4),
    b=st.integers(-4, 4),
    c=st.integers(-4, 4),
    d=st.integers(-4, 4),
)
def test_interchange_law(fib, a, b, c, d):
    basis = hom_space_basis(fib, Obj.of(1, 1), Obj.of(1, 1))
    f = basis[0].scale(a) + basis[1].scale(b)
    g = basis[0].scale(c) + basis[1].scale(d)
    lhs = tensor(g @ f, f @ g)
    rhs = tensor(g, f) @ tensor(f, g)
    assert lhs == rhs


def test_tensor_of_identities_is_identity(ising):
    x = Obj.of(2)
    y = Obj.of((0, 1), 2)
    assert tensor(identity(ising, x), identity(ising, y)) == identity(ising, x.tensor(y))


def test_tensor_associative_on_the_nose(fib):
    basis = hom_space_basis(fib, Obj.of(1), Obj.of(1, 1, 1))
    f = basis[0] + basis[1].scale(fib.field.gen)
    g = identity(fib, Obj.of(1))
    h = hom_space_basis(fib, Obj.of(1, 1), EMPTY)[0]
    lhs = tensor(tensor(f, g), h)
    rhs = tensor(f, tensor(g, h))
    assert lhs == rhs


def test_zigzags_hold_for_every_label(fib, ising, vec_z2, vec_z3):
    for cat in (fib, ising, vec_z2, vec_z3):
        for a in range(cat.label_count):
            abar = cat.dual[a]
            ia = identity(cat, Obj.of(a))
            ib = identity(cat, Obj.of(abar))
            z1 = tensor(ia, ev(cat, (a,))) @ tensor(coev(cat, (a,)), ia)
            z2 = tensor(ev(cat, (a,)), ib) @ tensor(ib, coev(cat, (a,)))
            assert z1 == ia, f"{cat.name}:{a} zig"
            assert z2 == ib, f"{cat.name}:{a} zag"
            z3 = tensor(ev_primed(cat, (a,)), ia) @ tensor(ia, coev_primed(cat, (a,)))
            z4 = tensor(ib, ev_primed(cat, (a,))) @ tensor(coev_primed(cat, (a,)), ib)
            assert z3 == ia and z4 == ib, f"{cat.name}:{a} pivotal zigzag"


def test_loop_values_are_quantum_dimensions(fib, ising):
    tau_loop = ev_primed(fib, (1,)) @ coev(fib, (1,))
    assert tau_loop.scalar() == fib.field.gen
    d = tau_loop.scalar()
    assert d * d == d + 1
    sigma_loop = ev_primed(ising, (2,)) @ coev(ising, (2,))
    assert sigma_loop.scalar() * sigma_loop.scalar() == ising.field.from_rational(2)


def test_sum_slot_evaluation(vec_z2):
    b = (0, 1)
    loop = ev_primed(vec_z2, b) @ coev(vec_z2, b)
    assert loop.scalar() == vec_z2.field.from_rational(2)


@pytest.mark.parametrize(
    "catname, legs, order",
    [
        ("fib", (1, 1, 1), 3),
        ("fib", (1, 1), 2),
        ("ising", (2, 2, 1), 3),
        ("ising", (1, 1), 2),
        ("vec_z2", (1, 1), 2),
    ],
)
def test_full_rotation_is_identity(request, catname, legs, order):
    cat = request.getfixturevalue(catname)
    for v in hom_space_basis(cat, EMPTY, Obj.of(*legs)):
        assert rotate_times(cat, v, order) == v


def test_rotation_on_sum_slots(vec_z2):
    b = (0, 1)
    target = Obj.of(b, b)
    basis = hom_space_basis(vec_z2, EMPTY, target)
    assert len(basis) == 2
    for v in basis:
        w = rotate(vec_z2, v)
        assert w.dst == target
        assert rotate(vec_z2, w) == v


def test_rotation_permutes_legs(ising):
    v = hom_space_basis(ising, EMPTY, Obj.of(2, 2, 1))[0]
    w = rotate(ising, v)
    assert w.dst == Obj.of(2, 1, 2)


def test_summand_injections_resolve_identity(vec_z2):
    slot = (0, 1)
    total = None
    for i in range(2):
        inj = summand_injection(vec_z2, slot, i)
        proj = summand_projection(vec_z2, slot, i)
        assert proj @ inj == identity(vec_z2, Obj.of(slot[i]))
        other = summand_projection(vec_z2, slot, 1 - i)
        assert (other @ inj).is_zero()
        piece = inj @ proj
        total = piece if total is None else total + piece
    assert total == identity(vec_z2, Obj(((0, 1),)))


def test_repeated_summands_stay_distinct(vec_z2):
    # the trivially graded two-copy slot needs positional sectors
    slot = (0, 0)
    p0 = summand_projection(vec_z2, slot, 0)
    p1 = summand_projection(vec_z2, slot, 1)
    i0 = summand_injection(vec_z2, slot, 0)
    assert p0 @ i0 == identity(vec_z2, Obj.of(0))
    assert (p1 @ i0).is_zero()
    dims = hom_space_dimension(vec_z2, Obj(((0, 0),)), Obj(((0, 0),)))
    assert dims == 4


def test_tensor_many(fib):
    i1 = identity(fib, Obj.of(1))
    assert tensor_many(i1, i1, i1) == identity(fib, Obj.of(1, 1, 1))
