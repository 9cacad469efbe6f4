"""Category presentations: loading, validation, trees, rebracketing."""

import pytest
from hypothesis import given, settings, strategies as st

from stringnet.exactlin import invert
from stringnet.fusion import FusionCategoryData, UnknownLabel, hom_dimension, tree_count
from stringnet.shell.formats import (
    ParseError,
    builtin_category,
    builtin_names,
    parse_category_text,
    parse_scalar,
)
from stringnet.trees import (
    FusionTree,
    comb_basis,
    comb_shape,
    glue_matrix,
    move_path_matrix,
    path_to_comb,
    rebracket_matrix,
)
from stringnet.validate import validate


# -- shipped data ----------------------------------------------------------


def test_all_builtin_categories_validate():
    assert builtin_names() == ["fibonacci", "ising", "vec-z2", "vec-z3", "vec-z3-q"]
    for name in builtin_names():
        report = validate(builtin_category(name).category)
        assert report.ok, str(report)


def test_label_lookup(fib):
    assert fib.label_index("tau") == 1
    assert fib.label_name(0) == "1"
    with pytest.raises(UnknownLabel):
        fib.label_index("sigma")


def test_derived_dimensions_frozen(fib, ising, vec_z2):
    phi = fib.field.gen
    assert fib.qdim == (fib.field.one, phi)
    rt2 = ising.field.gen
    assert ising.qdim == (ising.field.one, ising.field.one, rt2)
    assert all(d == vec_z2.field.one for d in vec_z2.qdim)


# -- dimension counting ----------------------------------------------------


def test_hom_dimensions(fib, vec_z2, ising):
    tau = fib.label_index("tau")
    assert hom_dimension(fib, (tau, tau), (tau, tau)) == 2
    assert hom_dimension(fib, (tau, tau, tau), (tau,)) == 2
    g = vec_z2.label_index("g")
    assert hom_dimension(vec_z2, (g, g), ()) == 1
    assert hom_dimension(vec_z2, (g,), ()) == 0
    s = ising.label_index("sigma")
    assert tree_count(ising, (s, s, s, s), 0) == 2


def test_tree_enumeration_order(fib):
    tau = 1
    basis = comb_basis(fib, (tau, tau, tau), tau)
    assert len(basis) == 2
    # inner channel ascends in label order: unit branch first, then tau
    assert [t.channels for t in basis] == [(0,), (1,)]
    assert all(t.root == tau and t.leaves == (tau, tau, tau) for t in basis)


def test_fusion_tree_round_trip(ising):
    s = 2
    for t in comb_basis(ising, (s, s, s, 1), 0):
        assert FusionTree.from_labeled(t.labeled(), ising.unit) == t


# -- mutations get caught with witnesses -----------------------------------


def test_pentagon_mutation_reported(fib):
    key = (1, 1, 1, 1, 0, 0, 0, 0, 0, 0)
    bad = fib.with_f_entry(key, fib.field.one)
    report = validate(bad)
    assert not report.ok
    finding = report.first("pentagon")
    assert finding is not None
    assert finding.instance[:4] == (1, 1, 1, 1)


def test_unit_law_mutation_reported(fib):
    n = dict(fib.N)
    n[(0, 1, 0)] = 1
    bad = FusionCategoryData(
        "bad", fib.field, fib.labels, fib.unit, fib.dual, n, dict(fib.F), fib.pivotal
    )
    assert validate(bad).first("unit-law") is not None


def test_duality_involution_mutation_reported(vec_z3):
    bad = FusionCategoryData(
        "bad",
        vec_z3.field,
        vec_z3.labels,
        vec_z3.unit,
        (0, 2, 2),
        dict(vec_z3.N),
        dict(vec_z3.F),
        vec_z3.pivotal,
    )
    assert validate(bad).first("duality") is not None


def test_pivotal_mutation_reported(fib):
    bad = fib.with_pivotal((fib.field.one, -fib.field.one))
    report = validate(bad)
    finding = report.first("pivotal")
    assert finding is not None


def test_missing_f_entry_reported(fib):
    f = dict(fib.F)
    del f[(1, 1, 1, 1, 1, 1, 0, 0, 0, 0)]
    bad = FusionCategoryData(
        "bad", fib.field, fib.labels, fib.unit, fib.dual, dict(fib.N), f, fib.pivotal
    )
    assert validate(bad).first("f-missing") is not None


def test_extraneous_f_entry_reported(fib):
    bad = fib.with_f_entry((1, 1, 1, 0, 0, 0, 0, 0, 0, 0), fib.field.one)
    assert validate(bad).first("f-extraneous") is not None


def test_unit_leg_gauge_mismatch_reported(fib):
    bad = fib.with_f_entry((0, 1, 1, 1, 1, 1, 0, 0, 0, 0), -fib.field.one)
    assert validate(bad).first("triangle") is not None


# -- rebracketing ----------------------------------------------------------

SHAPES4 = [
    (((0, 1), 2), 3),
    ((0, (1, 2)), 3),
    ((0, 1), (2, 3)),
    (0, ((1, 2), 3)),
    (0, (1, (2, 3))),
]


def test_comb_path_terminates_at_comb():
    for shape in SHAPES4:
        moves = path_to_comb(shape)
        assert len(moves) <= 3
    assert path_to_comb(comb_shape(4)) == []


@settings(deadline=None, derandomize=True)
@given(
    src=st.sampled_from(SHAPES4),
    dst=st.sampled_from(SHAPES4),
    leaves=st.tuples(*[st.sampled_from([1, 2])] * 4),
    root=st.sampled_from([0, 1, 2]),
)
def test_rebracket_round_trip(ising, src, dst, leaves, root):
    there = rebracket_matrix(ising, leaves, root, src, dst)
    back = rebracket_matrix(ising, leaves, root, dst, src)
    assert there.rows == back.cols
    prod = there @ back
    for i in range(prod.rows):
        for j in range(prod.cols):
            want = ising.field.one if i == j else ising.field.zero
            assert prod.at(i, j) == want


def test_five_leaf_coherence(ising):
    # two unrelated move routes to the comb agree once the pentagon holds
    shape = ((0, 1), (2, (3, 4)))
    leaves = (2, 2, 2, 2, 2)
    route_a = path_to_comb(shape)
    route_b = [((1,), "unassoc")] + path_to_comb(((0, 1), ((2, 3), 4)))
    for root in range(3):
        ma, sa = move_path_matrix(ising, leaves, root, shape, route_a)
        mb, sb = move_path_matrix(ising, leaves, root, shape, route_b)
        assert sa == sb == comb_shape(5)
        assert ma == mb


def test_glue_matrices_invertible(fib):
    for root in (0, 1):
        g = glue_matrix(fib, (1, 1), (1,), root)
        assert g.rows == g.cols == tree_count(fib, (1, 1, 1), root)
        assert invert(g) is not None


# -- file format -----------------------------------------------------------


def test_scalar_expressions_round_trip(fib, ising):
    for cat in (fib, ising):
        for value in list(cat.F.values()) + list(cat.qdim):
            assert parse_scalar(cat.field, value.to_expr()) == value


@settings(deadline=None, derandomize=True)
@given(coeffs=st.tuples(st.integers(-9, 9), st.integers(-9, 9)))
def test_parser_round_trips_random_scalars(fib, coeffs):
    v = fib.field.from_rational(coeffs[0]) + fib.field.gen * coeffs[1]
    assert parse_scalar(fib.field, v.to_expr()) == v


def test_algebra_blocks_parsed(vec_z2_doc):
    assert sorted(vec_z2_doc.algebras) == ["kz2", "kz2g", "triv"]
    kz2 = vec_z2_doc.algebras["kz2"]
    assert kz2.carrier == (0, 0)
    assert kz2.mult[(1, 1, 0)] == vec_z2_doc.category.field.one
    kz2g = vec_z2_doc.algebras["kz2g"]
    assert kz2g.carrier == (0, 1)
    half = vec_z2_doc.category.field.from_rational(1) / 2
    assert kz2g.comult[(1, 0, 1)] == half


MINIMAL = """
category tiny
field Q
labels 1
unit 1
dual 1 1
"""


def test_minimal_category_parses():
    doc = parse_category_text(MINIMAL)
    assert doc.category.label_count == 1
    assert validate(doc.category).ok


@pytest.mark.parametrize(
    "mutation, fragment",
    [
        ("colour red", "unknown keyword"),
        ("fuse 1 q 1", "unknown label"),
        ("dual 1", "takes two labels"),
        ("F 1 1 1 1 : 1 1 = 1", "unit leg"),
        ("unit q", "unknown label"),
        ("field Q2 x^2 - 1", "reducible"),
        ("pivotal 1 = 1 +", "expression"),
    ],
)
def test_parse_errors_carry_position(mutation, fragment):
    text = MINIMAL.strip() + "\n" + mutation + "\n"
    bad_line = len(text.strip().splitlines())
    with pytest.raises(ParseError) as err:
        parse_category_text(text, "probe.cat")
    assert fragment in str(err.value)
    assert err.value.where == "probe.cat"
    assert err.value.line == bad_line


def test_generator_lines_parsed(vec_z2_doc):
    got = [(g.manifold, g.labels) for g in vec_z2_doc.generators]
    assert ("circle", ()) in got
    assert ("circle", (1,)) in got
    assert ("interval", (0,)) in got
    assert ("interval", (1,)) in got


@pytest.mark.parametrize(
    "mutation, fragment",
    [
        ("generator torus 1", "'circle' or 'interval'"),
        ("generator circle q", "unknown label"),
    ],
)
def test_bad_generator_lines_rejected(mutation, fragment):
    text = MINIMAL.strip() + "\n" + mutation + "\n"
    with pytest.raises(ParseError) as err:
        parse_category_text(text)
    assert fragment in str(err.value)


def test_missing_dual_line_rejected():
    text = "category c\nfield Q\nlabels 1 g\nunit 1\ndual 1 1\n"
    with pytest.raises(ParseError) as err:
        parse_category_text(text)
    assert "missing dual" in str(err.value)


def test_inconsistent_unit_fusion_rejected():
    text = MINIMAL.strip() + "\nfuse 1 1 1 2\n"
    with pytest.raises(ParseError) as err:
        parse_category_text(text)
    assert "unit" in str(err.value)
