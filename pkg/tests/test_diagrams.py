"""Rectangle diagram evaluation against direct categorical computations."""

import pytest

from stringnet.diagrams import (
    BoundaryMismatch,
    Cap,
    CapBar,
    Cup,
    CupBar,
    MalformedDiagram,
    PlanarDiagram,
    StringNetElement,
    Strand,
    Vertex,
    as_planar_map,
    beside,
    evaluate_disk,
    identity_diagram,
    stack,
)
from stringnet.mor import (
    EMPTY,
    Obj,
    hom_space_basis,
    identity,
    rotate,
    rotate_times,
    tensor,
)


def all_cats(request):
    return [request.getfixturevalue(n) for n in ("vec_z2", "fib", "ising")]


# -- rigidity and loops ----------------------------------------------------


def test_zigzags_are_identities(request):
    for cat in all_cats(request):
        for a in range(len(cat.labels)):
            ab = cat.dual[a]
            z1 = PlanarDiagram(cat, [[Cup((a,)), Strand((a,))],
                                     [Strand((a,)), Cap((a,))]])
            assert z1.evaluate() == identity(cat, Obj.of(a))
            z2 = PlanarDiagram(cat, [[Strand((ab,)), Cup((a,))],
                                     [Cap((a,)), Strand((ab,))]])
            assert z2.evaluate() == identity(cat, Obj.of(ab))
            z3 = PlanarDiagram(cat, [[Strand((a,)), CupBar((a,))],
                                     [CapBar((a,)), Strand((a,))]])
            assert z3.evaluate() == identity(cat, Obj.of(a))


def test_loops_give_quantum_dimensions(request):
    for cat in all_cats(request):
        for a in range(len(cat.labels)):
            right = PlanarDiagram(cat, [[Cup((a,))], [CapBar((a,))]])
            left = PlanarDiagram(cat, [[CupBar((a,))], [Cap((a,))]])
            rv = evaluate_disk(right).scalar()
            lv = evaluate_disk(left).scalar()
            assert rv == cat.qdim[a]
            assert lv == rv


def test_fib_loop_value_frozen(fib):
    d = PlanarDiagram(fib, [[Cup((1,))], [CapBar((1,))]])
    assert evaluate_disk(d).scalar().to_expr() == "x"


def test_sum_slot_loop_counts_summands(vec_z2):
    # a loop on the two-summand object is the sum of the two loops
    d = PlanarDiagram(vec_z2, [[Cup((0, 1))], [CapBar((0, 1))]])
    assert evaluate_disk(d).scalar() == vec_z2.field.from_rational(2)


# -- slicing invariance ----------------------------------------------------


def test_one_slice_equals_staggered_slices(fib):
    one = PlanarDiagram(fib, [[Cup((1,)), Cup((1,))]])
    two = PlanarDiagram(fib, [[Cup((1,))],
                              [Strand((1,)), Strand((1,)), Cup((1,))]])
    assert one.evaluate() == two.evaluate()
    assert one.top == two.top == ((1,), (1,), (1,), (1,))


def test_beside_pads_heights(fib):
    tall = PlanarDiagram(fib, [[Cup((1,))], [Strand((1,)), Strand((1,))]])
    short = PlanarDiagram(fib, [[Cup((1,))]])
    c = beside(tall, short)
    assert len(c.levels) == 2
    assert c.evaluate() == tensor(tall.evaluate(), short.evaluate())


def test_stack_composes(fib):
    lower = PlanarDiagram(fib, [[Cup((1,))]])
    upper = PlanarDiagram(fib, [[CapBar((1,))]])
    assert evaluate_disk(stack(lower, upper)).scalar() == fib.qdim[1]


# -- vertices --------------------------------------------------------------


def tau_vertex(fib):
    (v,) = hom_space_basis(fib, EMPTY, Obj.of(1, 1, 1))
    return v


def test_vertex_rotation_matches_explicit_surgery(fib):
    v = tau_vertex(fib)
    direct = PlanarDiagram(fib, [[Vertex(v, rotation=1)]])
    dual1 = (fib.dual[1],)
    surgery = PlanarDiagram(fib, [
        [CupBar((1,))],
        [Strand(dual1), Vertex(v), Strand((1,))],
        [Cap((1,)), Strand((1,)), Strand((1,)), Strand((1,))],
    ])
    assert direct.evaluate() == rotate(fib, v)
    assert surgery.evaluate() == rotate(fib, v)


def test_vertex_full_rotation_is_identity(fib, ising):
    v = tau_vertex(fib)
    assert rotate_times(fib, v, 3) == v
    (w,) = hom_space_basis(ising, EMPTY, Obj.of(2, 2, 1))
    assert rotate_times(ising, w, 3) == w


def test_theta_diagram_value_frozen(fib):
    # phi squared, derived by hand from the F data and checked by the
    # independent evaluator in test_oracle
    v = tau_vertex(fib)
    theta = PlanarDiagram(fib, [[Vertex(v)], [Vertex(v, n_in=3)]])
    assert evaluate_disk(theta).scalar().to_expr() == "1 + x"


def test_bent_vertex_equals_cap_surgery(ising):
    # sigma sigma psi vertex with one leg bent down, against explicit caps
    (v,) = hom_space_basis(ising, EMPTY, Obj.of(2, 2, 1))
    bent = PlanarDiagram(ising, [[Vertex(v, n_in=1)]])
    dual_sigma = (ising.dual[2],)
    explicit = PlanarDiagram(ising, [
        [Strand(dual_sigma), Vertex(v)],
        [Cap((2,)), Strand((2,)), Strand((1,))],
    ])
    assert bent.evaluate() == explicit.evaluate()
    assert bent.bottom == (dual_sigma,)
    assert bent.top == ((2,), (1,))


# -- linear combinations ---------------------------------------------------


def test_string_net_element_sums(fib):
    d = PlanarDiagram(fib, [[Cup((1,))], [CapBar((1,))]])
    e = PlanarDiagram(fib, [[Cup((0,))], [CapBar((0,))]])
    two_terms = StringNetElement(fib, [
        (fib.field.one, d),
        (fib.field.from_rational(-1), e),
    ])
    # phi - 1 = x - 1
    assert two_terms.evaluate().scalar().to_expr() == "-1 + x"


def test_string_net_element_boundary_guard(fib):
    d = PlanarDiagram(fib, [[Cup((1,))]])
    e = PlanarDiagram(fib, [[Cup((0,))]])
    with pytest.raises(BoundaryMismatch):
        StringNetElement(fib, [(fib.field.one, d), (fib.field.one, e)])


# -- malformed input -------------------------------------------------------


def test_slice_mismatch_reports_level_and_position(fib):
    with pytest.raises(MalformedDiagram) as err:
        PlanarDiagram(fib, [[Cup((1,))], [Strand((1,)), Strand((0,))]])
    assert err.value.level == 1
    assert err.value.position == 1


def test_vertex_with_inputs_in_state_rejected(fib):
    v = tau_vertex(fib)
    bent = PlanarDiagram(fib, [[Vertex(v, n_in=1)]]).evaluate()
    with pytest.raises(MalformedDiagram):
        PlanarDiagram(fib, [[Strand((1,)), Vertex(bent)]])


def test_vertex_n_in_out_of_range(fib):
    v = tau_vertex(fib)
    with pytest.raises(MalformedDiagram):
        PlanarDiagram(fib, [[Vertex(v, n_in=4)]])


def test_disk_requires_empty_bottom(fib):
    d = identity_diagram(fib, [(1,)])
    with pytest.raises(MalformedDiagram):
        evaluate_disk(d)


def test_stack_mismatch_names_first_bad_strand(fib):
    lower = identity_diagram(fib, [(1,), (1,)])
    upper = identity_diagram(fib, [(1,), (0,)])
    with pytest.raises(BoundaryMismatch) as err:
        stack(lower, upper)
    assert err.value.position == 1
    assert err.value.lower == (1,)
    assert err.value.upper == (0,)


# -- combinatorial view ----------------------------------------------------


def test_planar_map_of_free_loop(fib):
    pm = as_planar_map(PlanarDiagram(fib, [[Cup((1,))], [CapBar((1,))]]))
    assert pm.vertices == ()
    assert pm.bottom == () and pm.top == ()
    assert pm.edges == ((0, (1,)),)


def test_planar_map_of_theta(fib):
    v = tau_vertex(fib)
    pm = as_planar_map(PlanarDiagram(fib, [[Vertex(v)], [Vertex(v, n_in=3)]]))
    assert len(pm.vertices) == 2
    assert len(pm.edges) == 3
    # both coupons see all three edges, in opposite cyclic order classes
    (s1, inc1), (s2, inc2) = pm.vertices
    assert sorted(inc1) == sorted(inc2) == [0, 1, 2]


def test_planar_map_ignores_slicing(fib):
    one = PlanarDiagram(fib, [[Cup((1,)), Cup((1,))]])
    two = PlanarDiagram(fib, [[Cup((1,))],
                              [Strand((1,)), Strand((1,)), Cup((1,))]])
    assert as_planar_map(one) == as_planar_map(two)


def test_identity_diagram_boundary(fib):
    d = identity_diagram(fib, [(1,), (0, 1)])
    assert d.bottom == d.top == ((1,), (0, 1))
    assert d.evaluate() == identity(fib, Obj.of((1,), (0, 1)))
