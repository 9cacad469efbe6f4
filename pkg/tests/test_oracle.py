"""Independent evaluator against the engine, entry by entry and by rank."""

import pytest

from stringnet.diagrams import (
    Cap,
    CapBar,
    Cup,
    CupBar,
    PlanarDiagram,
    Strand,
    Vertex,
)
from stringnet.mor import EMPTY, Obj, hom_space_basis, hom_space_dimension
from stringnet.oracle import (
    BudgetExceeded,
    OracleResult,
    UnsupportedByOracle,
    empty_disk,
    loop_diagram,
    oracle_quotient,
    simple_wrap,
    vacuum_annulus,
    vertex_count,
    _tevaluate,
    _tscalar,
)
from stringnet.trees import comb_basis


def engine_as_chain_table(m):
    """Flatten an engine morphism on simple one-label slots to chains."""
    cat = m.cat
    src_word = tuple(s[0] for s in m.src.slots)
    dst_word = tuple(s[0] for s in m.dst.slots)

    def chain(tree, word):
        if len(word) == 0:
            return (cat.unit,)
        if len(word) == 1:
            return (tree.root,)
        return (tree.root,) + tree.channels + (tree.leaves[-1],)

    out = {}
    src_sector = tuple(0 for _ in m.src.slots)
    dst_sector = tuple(0 for _ in m.dst.slots)
    for s in range(len(cat.labels)):
        sb = comb_basis(cat, src_word, s)
        db = comb_basis(cat, dst_word, s)
        if not sb or not db:
            continue
        blk = m.block(src_sector, dst_sector, s)
        for j, st in enumerate(sb):
            for i, dt in enumerate(db):
                value = blk.at(i, j)
                if not value.is_zero():
                    out[(chain(st, src_word), chain(dt, dst_word))] = value
    return out


def oracle_as_table(t):
    return dict(t.table)


DIAGRAM_CASES = [
    ("loop tau", "fib", lambda cat: PlanarDiagram(cat, [[Cup((1,))], [CapBar((1,))]])),
    ("loop sigma", "ising", lambda cat: PlanarDiagram(cat, [[Cup((2,))], [CapBar((2,))]])),
    ("zigzag", "fib", lambda cat: PlanarDiagram(cat, [[Cup((1,)), Strand((1,))],
                                                      [Strand((1,)), Cap((1,))]])),
    ("primed zigzag", "ising", lambda cat: PlanarDiagram(
        cat, [[Strand((2,)), CupBar((2,))], [CapBar((2,)), Strand((2,))]])),
    ("nested cups", "fib", lambda cat: PlanarDiagram(
        cat, [[Cup((1,))], [Strand((1,)), Cup((1,)), Strand((1,))]])),
    ("vertex", "fib", lambda cat: PlanarDiagram(
        cat, [[Vertex(hom_space_basis(cat, EMPTY, Obj.of(1, 1, 1))[0])]])),
    ("rotated vertex", "fib", lambda cat: PlanarDiagram(
        cat, [[Vertex(hom_space_basis(cat, EMPTY, Obj.of(1, 1, 1))[0], rotation=2)]])),
    ("bent vertex", "ising", lambda cat: PlanarDiagram(
        cat, [[Vertex(hom_space_basis(cat, EMPTY, Obj.of(2, 2, 1))[0], n_in=1)]])),
    ("theta", "fib", lambda cat: PlanarDiagram(cat, [
        [Vertex(hom_space_basis(cat, EMPTY, Obj.of(1, 1, 1))[0])],
        [Vertex(hom_space_basis(cat, EMPTY, Obj.of(1, 1, 1))[0], n_in=3)],
    ])),
    ("psi through sigma", "ising", lambda cat: PlanarDiagram(cat, [
        [Strand((2,)), Vertex(hom_space_basis(cat, EMPTY, Obj.of(1, 2, 2))[0])],
        [Vertex(hom_space_basis(cat, EMPTY, Obj.of(1, 2, 2))[0], n_in=2),
         Strand((2,)), Strand((2,))],
    ])),
]


def test_loop_values_are_quantum_dimensions(request):
    for name in ("vec_z2", "vec_z3", "fib", "ising"):
        cat = request.getfixturevalue(name)
        for a in range(len(cat.labels)):
            got = _tscalar(_tevaluate(loop_diagram(cat, a)))
            assert got == cat.qdim[a]


@pytest.mark.parametrize("label,fixture,build", DIAGRAM_CASES,
                         ids=[c[0] for c in DIAGRAM_CASES])
def test_oracle_matches_engine_entrywise(request, label, fixture, build):
    cat = request.getfixturevalue(fixture)
    diagram = build(cat)
    engine = engine_as_chain_table(diagram.evaluate())
    oracle = oracle_as_table(_tevaluate(diagram))
    assert engine == oracle


def test_theta_value_agrees_and_is_phi_squared(fib):
    (v,) = hom_space_basis(fib, EMPTY, Obj.of(1, 1, 1))
    theta = PlanarDiagram(fib, [[Vertex(v)], [Vertex(v, n_in=3)]])
    engine = theta.evaluate().scalar()
    oracle = _tscalar(_tevaluate(theta))
    assert engine == oracle
    assert engine.to_expr() == "1 + x"


# -- quotient dimensions ---------------------------------------------------


def test_empty_disk_dimension_one(vec_z2):
    r = oracle_quotient([empty_disk(vec_z2)], carrier="disk")
    assert r == OracleResult(1, (0,), 1)


def test_vacuum_annulus_dimension_two(vec_z2):
    family = [vacuum_annulus(vec_z2)] + [simple_wrap(vec_z2, x) for x in (0, 1)]
    r = oracle_quotient(family, carrier="annulus")
    assert r.dimension == 2


def test_tau_cubed_disk_dimension_one(fib):
    (v,) = hom_space_basis(fib, EMPTY, Obj.of(1, 1, 1))
    r = oracle_quotient([PlanarDiagram(fib, [[Vertex(v)]])], carrier="disk")
    assert r.dimension == 1
    assert r.dimension == hom_space_dimension(fib, EMPTY, Obj.of(1, 1, 1))


def test_annulus_rank_is_simple_count(request):
    for name, count in [("vec_z2", 2), ("vec_z3", 3), ("fib", 2), ("ising", 3)]:
        cat = request.getfixturevalue(name)
        family = [vacuum_annulus(cat)] + [
            simple_wrap(cat, x) for x in range(len(cat.labels))
        ]
        r = oracle_quotient(family, carrier="annulus")
        assert r.dimension == count


def test_disk_family_rank_matches_hom_dimension(ising):
    # all sigma-sigma cups land in the one-dimensional unit channel
    pair = PlanarDiagram(ising, [[Cup((2,))]])
    shadowed = PlanarDiagram(ising, [
        [Cup((2,))],
        [Strand((2,)), Cup((2,)), Strand((2,))],
        [Strand((2,)), CapBar((2,)), Strand((2,))],
    ])
    r = oracle_quotient([pair, shadowed], carrier="disk")
    assert r.dimension == 1
    assert r.basis == (0,)
    assert r.dimension == hom_space_dimension(ising, EMPTY, Obj.of(2, 2))


def test_rectangle_family(fib):
    idd = PlanarDiagram(fib, [[Strand((1,))]])
    ring = PlanarDiagram(fib, [
        [Strand((1,)), Cup((1,))],
        [Strand((1,)), CapBar((1,))],
    ])
    r = oracle_quotient([idd, ring], carrier="rectangle")
    # the ring is phi times the identity strand
    assert r.dimension == 1


def test_budget_guard(fib):
    (v,) = hom_space_basis(fib, EMPTY, Obj.of(1, 1, 1))
    d = PlanarDiagram(fib, [[Vertex(v)]])
    assert vertex_count(d) == 1
    with pytest.raises(BudgetExceeded):
        oracle_quotient([d], carrier="disk", budget=0)


def test_sum_slots_rejected(vec_z2):
    d = PlanarDiagram(vec_z2, [[Strand((0, 1))]])
    with pytest.raises(UnsupportedByOracle):
        oracle_quotient([d], carrier="rectangle")


def test_mixed_boundaries_rejected(fib):
    a = PlanarDiagram(fib, [[Cup((1,))]])
    b = PlanarDiagram(fib, [[Cup((0,))]])
    with pytest.raises(UnsupportedByOracle):
        oracle_quotient([a, b], carrier="disk")


def test_empty_family():
    assert oracle_quotient([], carrier="disk") == OracleResult(0, (), 0)
