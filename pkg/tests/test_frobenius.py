"""Algebra axioms, bimodule intertwiners, relative tensor products."""

import dataclasses

import pytest

from stringnet.frobenius import (
    AlgebraMismatch,
    algebra_from_spec,
    associator_comparison,
    averaging_idempotent,
    bimodule_from_spec,
    bimodule_hom_space,
    check_bimodule,
    check_dssfa,
    dual_bimodule,
    is_invertible,
    object_bimodule,
    regular_bimodule,
    relative_tensor,
    split_idempotent,
    trivial_algebra,
)
from stringnet.mor import Obj, hom_space_dimension, identity, tensor


@pytest.fixture(scope="module")
def z2(vec_z2_doc):
    cat = vec_z2_doc.category
    algebras = {n: algebra_from_spec(cat, s) for n, s in vec_z2_doc.algebras.items()}
    return cat, algebras, vec_z2_doc


@pytest.mark.parametrize("fixture", ["vec_z2", "vec_z3", "fib", "ising"])
def test_trivial_algebra_valid_everywhere(request, fixture):
    cat = request.getfixturevalue(fixture)
    assert check_dssfa(trivial_algebra(cat)).ok


def test_shipped_algebras_valid(z2):
    _, algebras, _ = z2
    for name in ("triv", "kz2", "kz2g"):
        report = check_dssfa(algebras[name])
        assert report.ok, str(report)


def test_unscaled_comultiplication_breaks_separability(z2):
    cat, algebras, _ = z2
    two = cat.field.from_rational(2)
    bad = dataclasses.replace(algebras["kz2"], comult=algebras["kz2"].comult.scale(two))
    report = check_dssfa(bad)
    assert not report.ok
    assert report.first("separability") is not None


def test_skewed_multiplication_breaks_associativity(z2):
    cat, _, doc = z2
    spec = doc.algebras["kz2"]
    two = cat.field.from_rational(2)
    mutated = dataclasses.replace(spec, mult={**spec.mult, (0, 1, 1): two})
    report = check_dssfa(algebra_from_spec(cat, mutated))
    assert report.first("associativity") is not None


def test_shipped_bimodules_valid(z2):
    cat, algebras, doc = z2
    assert check_bimodule(regular_bimodule(algebras["kz2"])).ok
    assert check_bimodule(regular_bimodule(algebras["kz2g"])).ok
    tw = bimodule_from_spec(cat, doc.bimodules["kz2-tw"], algebras)
    assert check_bimodule(tw).ok
    assert check_bimodule(object_bimodule(algebras["triv"], (0, 1))).ok


def test_half_twisted_action_is_not_a_module(z2):
    cat, algebras, doc = z2
    spec = doc.bimodules["kz2-tw"]
    one = cat.field.one
    # undo only one of the two signs
    mutated = dataclasses.replace(
        spec, right_action={**spec.right_action, (1, 1, 0): one}
    )
    report = check_bimodule(bimodule_from_spec(cat, mutated, algebras))
    assert report.first("right-associativity") is not None


def test_intertwiner_dimensions(z2):
    cat, algebras, doc = z2
    reg = regular_bimodule(algebras["kz2"])
    assert len(bimodule_hom_space(reg, reg)) == 2
    reg_g = regular_bimodule(algebras["kz2g"])
    assert len(bimodule_hom_space(reg_g, reg_g)) == 1
    tw = bimodule_from_spec(cat, doc.bimodules["kz2-tw"], algebras)
    assert bimodule_hom_space(reg, tw) == []


def test_intertwiners_over_trivial_are_plain_homs(z2):
    cat, algebras, _ = z2
    triv = algebras["triv"]
    for src, dst in [((0,), (1,)), ((0,), (0,)), ((0, 1), (0, 1))]:
        m, n = object_bimodule(triv, src), object_bimodule(triv, dst)
        assert len(bimodule_hom_space(m, n)) == hom_space_dimension(
            cat, Obj((src,)), Obj((dst,))
        )


def test_intertwiners_actually_intertwine(z2):
    cat, algebras, _ = z2
    A = algebras["kz2"]
    reg = regular_bimodule(A)
    ida = identity(cat, A.obj)
    for phi in bimodule_hom_space(reg, reg):
        f = phi.mor
        assert f @ reg.left_action == reg.left_action @ tensor(ida, f)
        assert f @ reg.right_action == reg.right_action @ tensor(f, ida)


def test_mismatched_algebras_raise(z2):
    _, algebras, _ = z2
    with pytest.raises(AlgebraMismatch):
        bimodule_hom_space(
            regular_bimodule(algebras["kz2"]), regular_bimodule(algebras["kz2g"])
        )
    with pytest.raises(AlgebraMismatch):
        relative_tensor(
            regular_bimodule(algebras["kz2"]), regular_bimodule(algebras["kz2g"])
        )


def test_averaging_idempotent_squares_exactly(z2):
    _, algebras, _ = z2
    reg = regular_bimodule(algebras["kz2"])
    p = averaging_idempotent(reg, reg)
    assert p @ p == p


@pytest.mark.parametrize("name", ["kz2", "kz2g"])
def test_algebra_is_its_own_relative_square(z2, name):
    cat, algebras, _ = z2
    A = algebras[name]
    rt = relative_tensor(regular_bimodule(A), regular_bimodule(A))
    assert sorted(rt.module.underlying) == sorted(A.underlying)
    assert check_bimodule(rt.module).ok
    # multiplication and comultiplication witness the isomorphism
    phi = A.mult @ rt.include
    phi_inv = rt.project @ A.comult
    assert phi @ phi_inv == identity(cat, A.obj)
    assert phi_inv @ phi == identity(cat, rt.module.obj)


def test_split_maps_compose_to_identity_and_idempotent(z2):
    _, algebras, _ = z2
    reg = regular_bimodule(algebras["kz2"])
    p = averaging_idempotent(reg, reg)
    rt = relative_tensor(reg, reg)
    assert rt.project @ rt.include == identity(reg.cat, rt.module.obj)
    assert rt.include @ rt.project == p


def test_tensor_over_trivial_is_plain_tensor(z2, fib):
    cat, algebras, _ = z2
    triv = algebras["triv"]
    m = object_bimodule(triv, (0, 1))
    n = object_bimodule(triv, (0, 1))
    rt = relative_tensor(m, n)
    assert rt.module.underlying == (0, 0, 1, 1)

    ftriv = trivial_algebra(fib)
    rt2 = relative_tensor(
        object_bimodule(ftriv, (1,)), object_bimodule(ftriv, (1, 1))
    )
    # tau (x) (tau + tau) = 2(1 + tau)
    assert rt2.module.underlying == (0, 0, 1, 1)
    assert check_bimodule(rt2.module).ok


def test_associator_comparison_invertible(z2, fib):
    _, algebras, _ = z2
    reg = regular_bimodule(algebras["kz2"])
    left, right, comp = associator_comparison(reg, reg, reg)
    assert sorted(left.module.underlying) == sorted(right.module.underlying)
    assert is_invertible(comp)

    ftriv = trivial_algebra(fib)
    a = object_bimodule(ftriv, (1,))
    b = object_bimodule(ftriv, (1, 1))
    l2, r2, c2 = associator_comparison(a, a, b)
    assert sorted(l2.module.underlying) == sorted(r2.module.underlying)
    assert is_invertible(c2)


def test_associator_on_assorted_carriers(z2):
    cat, algebras, _ = z2
    triv = algebras["triv"]
    carriers = [(0,), (1,), (0, 1), (1, 1)]
    for i, x in enumerate(carriers):
        y = carriers[(i + 1) % len(carriers)]
        z = carriers[(i + 2) % len(carriers)]
        mods = [object_bimodule(triv, c) for c in (x, y, z)]
        left, right, comp = associator_comparison(*mods)
        assert sorted(left.module.underlying) == sorted(right.module.underlying)
        assert is_invertible(comp)


def test_dual_bimodule_swaps_sides_and_is_valid(z2):
    cat, algebras, doc = z2
    tw = bimodule_from_spec(cat, doc.bimodules["kz2-tw"], algebras)
    d = dual_bimodule(tw)
    assert d.left_algebra is tw.right_algebra
    assert d.right_algebra is tw.left_algebra
    assert check_bimodule(d).ok


@pytest.mark.parametrize("name", ["kz2", "kz2g"])
def test_dual_bimodule_is_an_involution(z2, name):
    cat, algebras, doc = z2
    mods = [regular_bimodule(algebras[name])]
    if name == "kz2":
        mods.append(bimodule_from_spec(cat, doc.bimodules["kz2-tw"], algebras))
    for m in mods:
        dd = dual_bimodule(dual_bimodule(m))
        assert dd.underlying == m.underlying
        assert dd.left_action == m.left_action
        assert dd.right_action == m.right_action


def test_split_of_identity_is_the_whole_object(z2):
    cat, _, _ = z2
    obj = Obj(((0, 1, 1),))
    split = split_idempotent(identity(cat, obj))
    assert sorted(split.carrier) == [0, 1, 1]
    assert split.include @ split.project == identity(cat, obj)
    assert split.project @ split.include == identity(cat, split.obj)
