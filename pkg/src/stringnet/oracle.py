"""Brute-force cross-check evaluator for small diagram families.

This module answers one question: what is the dimension of the span of
a finite family of diagrams modulo the local relations of the
graphical calculus?  Since the local relations are exactly the kernel
of evaluation, that quotient is the rank of the family's
coordinatization, and the module computes those coordinates with its
own small evaluator rather than the main engine.

The deliberate redundancy is the point.  The engine rebrackets trees
through cached move paths and blockwise matrix algebra; the evaluator
here re-derives everything from the raw fusion data by a first-leaf
peeling recursion, solves its own cup and cap normalizations from the
straightening equations, and enumerates its own chain bases.  The two
implementations share only the stored F entries and the convention
pins (dual-basis pairing, unit legs fixed to 1, loop values from the
pivotal twist), so an error in either side's derived machinery shows
up as a rank disagreement.

Scope is desk scale on purpose: simple strand labels, multiplicity
free fusion rules, and a hard vertex budget.  Out-of-scope inputs
raise :class:`UnsupportedByOracle` rather than degrading silently.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .diagrams import Cap, CapBar, Cup, CupBar, PlanarDiagram, Strand, Vertex
from .exactlin import Matrix, Scalar, invert, rref
from .fusion import FusionCategoryData
from .mor import entries_vector

Chain = Tuple[int, ...]
Word = Tuple[int, ...]


class UnsupportedByOracle(ValueError):
    pass


class BudgetExceeded(ValueError):
    def __init__(self, count: int, budget: int):
        super().__init__(f"diagram has {count} vertices, budget is {budget}")
        self.count = count
        self.budget = budget


def _require_in_scope(cat: FusionCategoryData):
    for key, value in cat.N.items():
        if value > 1:
            raise UnsupportedByOracle(
                f"fusion multiplicity {value} at {key}; this evaluator "
                "handles multiplicity-free data only"
            )


def _simple(slot) -> int:
    if len(slot) != 1:
        raise UnsupportedByOracle(f"sum strand label {slot}; simple labels only")
    return slot[0]


def _word(slots) -> Word:
    return tuple(_simple(s) for s in slots)


# -- chain bases -----------------------------------------------------------
#
# A chain on a word (x0, ..., x_{n-1}) with a given root records the
# outputs of the right comb from the top down: chain[0] is the root,
# chain[i] the output absorbing leaves i and onward.  The last entry is
# the last leaf; the empty word has the single chain (unit,).


def _chains(cat: FusionCategoryData, word: Word, root: int) -> List[Chain]:
    cache = cat.cache("oracle_chains")
    key = (word, root)
    if key in cache:
        return cache[key]
    if not word:
        out = [(cat.unit,)] if root == cat.unit else []
    elif len(word) == 1:
        out = [(word[0],)] if root == word[0] else []
    else:
        out = []
        for c1 in range(cat.label_count):
            if not cat.n(word[0], c1, root):
                continue
            for tail in _chains(cat, word[1:], c1):
                out.append((root,) + tail)
    cache[key] = out
    return out


def _all_chains(cat: FusionCategoryData, word: Word) -> List[Chain]:
    out: List[Chain] = []
    for root in range(cat.label_count):
        out.extend(_chains(cat, word, root))
    return out


def _f_scalar(cat: FusionCategoryData, a, b, c, d, e, f) -> Scalar:
    """One F coefficient from the raw table, unit legs fixed to 1."""
    zero, one = cat.field.zero, cat.field.one
    if not (cat.n(a, b, e) and cat.n(e, c, d) and cat.n(b, c, f) and cat.n(a, f, d)):
        return zero
    if cat.unit in (a, b, c):
        return one
    return cat.F.get((a, b, c, d, e, f, 0, 0, 0, 0), zero)


def _merge(
    cat: FusionCategoryData, wa: Word, wb: Word, ca: Chain, cb: Chain, root: int
) -> Dict[Chain, Scalar]:
    """Expand the joined pair of chains into chains on the glued word.

    Peels the first leaf of the left factor: the joining vertex is
    pushed inward with one F coefficient per step, so only forward
    F lookups occur.
    """
    one = cat.field.one
    if not wa:
        return {cb: one} if root == cb[0] else {}
    if not wb:
        return {ca: one} if root == ca[0] else {}
    if len(wa) == 1:
        if cat.n(ca[0], cb[0], root):
            return {(root,) + cb: one}
        return {}
    x0, a, a_tail = wa[0], ca[0], ca[1]
    out: Dict[Chain, Scalar] = {}
    for f in range(cat.label_count):
        coeff = _f_scalar(cat, x0, a_tail, cb[0], root, a, f)
        if coeff.is_zero():
            continue
        for tail, inner in _merge(cat, wa[1:], wb, ca[1:], cb, f).items():
            combined = (root,) + tail
            prior = out.get(combined)
            total = coeff * inner if prior is None else prior + coeff * inner
            if total.is_zero():
                out.pop(combined, None)
            else:
                out[combined] = total
    return out


def _pairs(cat: FusionCategoryData, wa: Word, wb: Word, root: int) -> List[Tuple[Chain, Chain]]:
    out = []
    for s in range(cat.label_count):
        for ca in _chains(cat, wa, s):
            for t in range(cat.label_count):
                if not cat.n(s, t, root):
                    continue
                for cb in _chains(cat, wb, t):
                    out.append((ca, cb))
    return out


def _merge_matrices(
    cat: FusionCategoryData, wa: Word, wb: Word, root: int
) -> Tuple[List[Chain], List[Tuple[Chain, Chain]], Matrix, Matrix]:
    """Chain basis, pair basis, merge matrix, and its inverse."""
    cache = cat.cache("oracle_merge")
    key = (wa, wb, root)
    if key in cache:
        return cache[key]
    rows = _chains(cat, wa + wb, root)
    cols = _pairs(cat, wa, wb, root)
    if len(rows) != len(cols):
        raise AssertionError("merge matrix is not square; fusion data inconsistent")
    pos = {c: i for i, c in enumerate(rows)}
    entries = [[cat.field.zero] * len(cols) for _ in rows]
    for j, (ca, cb) in enumerate(cols):
        for chain, coeff in _merge(cat, wa, wb, ca, cb, root).items():
            entries[pos[chain]][j] = coeff
    flat = tuple(v for row in entries for v in row)
    m = Matrix(cat.field, len(rows), len(cols), flat)
    minv = invert(m)
    if minv is None:
        raise AssertionError("merge matrix is singular; fusion data inconsistent")
    result = (rows, cols, m, minv)
    cache[key] = result
    return result


# -- the evaluator's morphism representation -------------------------------


@dataclass
class _Table:
    """Morphism between words as a chain-indexed table.

    table[(src_chain, dst_chain)] holds the coefficient of the
    splitting of dst_chain composed with the projection onto
    src_chain; the two chains always share their root.
    """

    cat: FusionCategoryData
    src: Word
    dst: Word
    table: Dict[Tuple[Chain, Chain], Scalar]

    def set(self, key, value: Scalar):
        if value.is_zero():
            self.table.pop(key, None)
        else:
            self.table[key] = value

    def add(self, key, value: Scalar):
        prior = self.table.get(key)
        self.set(key, value if prior is None else prior + value)


def _tid(cat: FusionCategoryData, word: Word) -> _Table:
    t = _Table(cat, word, word, {})
    for chain in _all_chains(cat, word):
        t.table[(chain, chain)] = cat.field.one
    return t


def _tcompose(g: _Table, f: _Table) -> _Table:
    if f.dst != g.src:
        raise AssertionError("table composition mismatch")
    out = _Table(f.cat, f.src, g.dst, {})
    by_mid: Dict[Chain, List[Tuple[Chain, Scalar]]] = {}
    for (mid, dc), v in g.table.items():
        by_mid.setdefault(mid, []).append((dc, v))
    for (sc, mid), u in f.table.items():
        for dc, v in by_mid.get(mid, ()):
            out.add((sc, dc), u * v)
    return out


def _ttensor(f: _Table, g: _Table) -> _Table:
    cat = f.cat
    out = _Table(cat, f.src + g.src, f.dst + g.dst, {})
    by_roots: Dict[Tuple[int, int], List] = {}
    for (c1, c1d), u in f.table.items():
        for (c2, c2d), v in g.table.items():
            by_roots.setdefault((c1[0], c2[0]), []).append((c1, c1d, c2, c2d, u * v))
    for root in range(cat.label_count):
        src_rows, src_pairs, _, src_inv = _merge_matrices(cat, f.src, g.src, root)
        dst_rows, dst_pairs, dst_m, _ = _merge_matrices(cat, f.dst, g.dst, root)
        if not src_rows or not dst_rows:
            continue
        src_pos = {p: i for i, p in enumerate(src_pairs)}
        dst_pos = {p: i for i, p in enumerate(dst_pairs)}
        for pairs_root, quads in by_roots.items():
            if not cat.n(pairs_root[0], pairs_root[1], root):
                continue
            for c1, c1d, c2, c2d, coeff in quads:
                ps = src_pos[(c1, c2)]
                pd = dst_pos[(c1d, c2d)]
                for i, sc in enumerate(src_rows):
                    left = src_inv.at(ps, i)
                    if left.is_zero():
                        continue
                    for j, dc in enumerate(dst_rows):
                        right = dst_m.at(j, pd)
                        if right.is_zero():
                            continue
                        out.add((sc, dc), coeff * left * right)
    return out


def _tscalar(t: _Table) -> Scalar:
    if t.src or t.dst:
        raise AssertionError("not a closed table")
    return t.table.get(((t.cat.unit,), (t.cat.unit,)), t.cat.field.zero)


# -- cups, caps, vertices --------------------------------------------------


def _tcup(cat: FusionCategoryData, a: int) -> _Table:
    u = (cat.unit,)
    return _Table(cat, (), (a, cat.dual[a]), {(u, (cat.unit, cat.dual[a])): cat.field.one})


def _cap_lambda(cat: FusionCategoryData, a: int) -> Scalar:
    """Straightening normalization, solved inside this evaluator."""
    cache = cat.cache("oracle_lambda")
    if a in cache:
        return cache[a]
    ab = cat.dual[a]
    raw = _Table(cat, (ab, a), (), {((cat.unit, a), (cat.unit,)): cat.field.one})
    zig = _tcompose(
        _ttensor(_tid(cat, (a,)), raw),
        _ttensor(_tcup(cat, a), _tid(cat, (a,))),
    )
    c = zig.table.get(((a,), (a,)), cat.field.zero)
    if c.is_zero():
        raise AssertionError("straightening produced zero; fusion data inconsistent")
    lam = c.inverse()
    cache[a] = lam
    return lam


def _tcap(cat: FusionCategoryData, a: int) -> _Table:
    lam = _cap_lambda(cat, a)
    return _Table(cat, (cat.dual[a], a), (), {((cat.unit, a), (cat.unit,)): lam})


def _tcap_primed(cat: FusionCategoryData, a: int) -> _Table:
    lam = _cap_lambda(cat, cat.dual[a]) * cat.pivotal[a]
    return _Table(cat, (a, cat.dual[a]), (), {((cat.unit, cat.dual[a]), (cat.unit,)): lam})


def _tcup_primed(cat: FusionCategoryData, a: int) -> _Table:
    coeff = cat.pivotal[a].inverse()
    return _Table(cat, (), (cat.dual[a], a), {((cat.unit,), (cat.unit, a)): coeff})


def _trotate(cat: FusionCategoryData, t: _Table) -> _Table:
    y = t.dst[0]
    yb = cat.dual[y]
    m = _tcompose(
        _ttensor(_tcap(cat, y), _tid(cat, t.dst[1:])),
        _ttensor(_tid(cat, (yb,)), t),
    )
    return _tcompose(_ttensor(m, _tid(cat, (y,))), _tcup_primed(cat, y))


def _tbend(cat: FusionCategoryData, t: _Table, k: int) -> _Table:
    for _ in range(k):
        y = t.dst[0]
        yb = cat.dual[y]
        t = _tcompose(
            _ttensor(_tcap(cat, y), _tid(cat, t.dst[1:])),
            _ttensor(_tid(cat, (yb,)), t),
        )
    return t


def _tvertex(cat: FusionCategoryData, item: Vertex) -> _Table:
    if item.state.src.rank != 0:
        raise UnsupportedByOracle("vertex states must come out of the empty word")
    word = _word(item.state.dst.slots)
    chains = _chains(cat, word, cat.unit)
    vec = entries_vector(item.state)
    if len(vec) != len(chains):
        raise UnsupportedByOracle(
            "state coordinates do not match a multiplicity-free chain basis"
        )
    table = _Table(cat, (), word, {})
    for chain, coeff in zip(chains, vec):
        table.set(((cat.unit,), chain), coeff)
    r = item.rotation % len(word) if word else 0
    for _ in range(r):
        table = _trotate(cat, table)
    return _tbend(cat, table, item.n_in)


def _titem(cat: FusionCategoryData, item) -> _Table:
    if isinstance(item, Strand):
        return _tid(cat, (_simple(item.slot),))
    if isinstance(item, Cup):
        return _tcup(cat, _simple(item.slot))
    if isinstance(item, CupBar):
        return _tcup_primed(cat, _simple(item.slot))
    if isinstance(item, Cap):
        return _tcap(cat, _simple(item.slot))
    if isinstance(item, CapBar):
        return _tcap_primed(cat, _simple(item.slot))
    if isinstance(item, Vertex):
        return _tvertex(cat, item)
    raise UnsupportedByOracle(f"unknown item {item!r}")


def _tevaluate(diagram: PlanarDiagram) -> _Table:
    cat = diagram.cat
    _require_in_scope(cat)
    out = _tid(cat, _word(diagram.bottom))
    for level in diagram.levels:
        row: Optional[_Table] = None
        for item in level:
            t = _titem(cat, item)
            row = t if row is None else _ttensor(row, t)
        if row is None:
            row = _tid(cat, ())
        out = _tcompose(row, out)
    return out


def vertex_count(diagram: PlanarDiagram) -> int:
    return sum(isinstance(item, Vertex) for level in diagram.levels for item in level)


# -- coordinatization per carrier ------------------------------------------


def _disk_vector(diagram: PlanarDiagram) -> Tuple[Word, Tuple[Scalar, ...]]:
    cat = diagram.cat
    if diagram.bottom != ():
        raise UnsupportedByOracle("disk diagrams must have an empty lower boundary")
    t = _tevaluate(diagram)
    chains = _chains(cat, t.dst, cat.unit)
    zero = cat.field.zero
    vec = tuple(t.table.get(((cat.unit,), c), zero) for c in chains)
    return t.dst, vec


def _rectangle_vector(diagram: PlanarDiagram) -> Tuple[Tuple[Word, Word], Tuple[Scalar, ...]]:
    cat = diagram.cat
    t = _tevaluate(diagram)
    zero = cat.field.zero
    out: List[Scalar] = []
    for root in range(cat.label_count):
        for sc in _chains(cat, t.src, root):
            for dc in _chains(cat, t.dst, root):
                out.append(t.table.get((sc, dc), zero))
    return (t.src, t.dst), tuple(out)


def _annulus_vector(
    diagram: PlanarDiagram, seam: int
) -> Tuple[Tuple[Word, Word], Tuple[Scalar, ...]]:
    """Coordinates of a cut annulus diagram in the single-wrap spaces.

    The diagram is a rectangle whose first lower and last upper strands
    form the cut seam; resolving the seam identity into chains projects
    the class onto, for each simple x, a morphism from x then the free
    lower boundary to the free upper boundary then x.  Those components
    together are a complete cut-position-independent invariant.
    """
    cat = diagram.cat
    t = _tevaluate(diagram)
    if seam > min(len(t.src), len(t.dst)):
        raise UnsupportedByOracle("seam wider than a boundary")
    seam_bot, free_bot = t.src[:seam], t.src[seam:]
    free_top, seam_top = t.dst[: len(t.dst) - seam], t.dst[len(t.dst) - seam :]
    if seam_bot != seam_top:
        raise UnsupportedByOracle("cut seam words disagree between the two sides")
    out: List[Scalar] = []
    zero = cat.field.zero
    for x in range(cat.label_count):
        compressed = _Table(cat, (x,) + free_bot, free_top + (x,), {})
        for tree in _chains(cat, seam_bot, x):
            split = _Table(cat, (x,), seam_bot, {((x,), tree): cat.field.one})
            proj = _Table(cat, seam_top, (x,), {(tree, (x,)): cat.field.one})
            piece = _tcompose(
                _ttensor(_tid(cat, free_top), proj),
                _tcompose(t, _ttensor(split, _tid(cat, free_bot))),
            )
            for key, value in piece.table.items():
                compressed.add(key, value)
        for root in range(cat.label_count):
            for sc in _chains(cat, compressed.src, root):
                for dc in _chains(cat, compressed.dst, root):
                    out.append(compressed.table.get((sc, dc), zero))
    return (free_bot, free_top), tuple(out)


# -- the public entry point ------------------------------------------------


@dataclass(frozen=True)
class OracleResult:
    dimension: int
    basis: Tuple[int, ...]
    ambient_dimension: int


FamilyEntry = Union[
    PlanarDiagram,
    Tuple[PlanarDiagram, int],
    Sequence[Union[Tuple[Scalar, PlanarDiagram], Tuple[Scalar, PlanarDiagram, int]]],
]


def _normalize_entry(entry: FamilyEntry, budget: int):
    """One family member as weighted (coeff, diagram, seam) terms.

    Accepts a bare diagram, a (diagram, seam) pair, or a list of
    weighted terms; a weighted combination counts as a single member.
    Per-term seam widths are allowed because the annulus coordinates do
    not depend on the seam word, only on the free boundary.
    """
    if isinstance(entry, PlanarDiagram):
        terms = [(None, entry, 0)]
    elif isinstance(entry, tuple) and len(entry) == 2 and isinstance(entry[0], PlanarDiagram):
        terms = [(None, entry[0], entry[1])]
    else:
        terms = []
        for term in entry:
            if len(term) == 2:
                coeff, diagram = term
                seam = 0
            else:
                coeff, diagram, seam = term
            terms.append((coeff, diagram, seam))
        if not terms:
            raise UnsupportedByOracle("empty weighted combination")
    for _, diagram, _ in terms:
        count = vertex_count(diagram)
        if count > budget:
            raise BudgetExceeded(count, budget)
    return terms


def oracle_quotient(
    diagrams: Sequence[FamilyEntry],
    carrier: str = "disk",
    budget: int = 6,
) -> OracleResult:
    """Dimension and a spanning subfamily of a diagram family.

    The quotient of the family's span by the local relations equals the
    rank of its coordinate vectors, since the relations generate the
    kernel of evaluation; the coordinates come from this module's own
    evaluator.  Annulus diagrams are passed as (diagram, seam width)
    pairs in cut-rectangle form.  A family member may also be a list of
    (coefficient, diagram) or (coefficient, diagram, seam) terms: each
    term is still evaluated independently here, and the member's vector
    is the stated combination of the term vectors.
    """
    if not diagrams:
        return OracleResult(0, (), 0)
    normalized = [_normalize_entry(entry, budget) for entry in diagrams]
    cat = normalized[0][0][1].cat
    one = cat.field.one
    vectors: List[Tuple[Scalar, ...]] = []
    stamp = None
    for terms in normalized:
        combined: Optional[List[Scalar]] = None
        for coeff, diagram, seam in terms:
            if carrier == "disk":
                this_stamp, vec = _disk_vector(diagram)
            elif carrier == "rectangle":
                this_stamp, vec = _rectangle_vector(diagram)
            elif carrier == "annulus":
                this_stamp, vec = _annulus_vector(diagram, seam)
            else:
                raise UnsupportedByOracle(f"unknown carrier {carrier!r}")
            if stamp is None:
                stamp = this_stamp
            elif this_stamp != stamp:
                raise UnsupportedByOracle(
                    f"family boundaries disagree: {this_stamp} vs {stamp}"
                )
            c = one if coeff is None else coeff
            if combined is None:
                combined = [c * v for v in vec]
            else:
                combined = [prior + c * v for prior, v in zip(combined, vec)]
        vectors.append(tuple(combined))
    ambient = len(vectors[0])
    entries = tuple(vectors[j][i] for i in range(ambient) for j in range(len(vectors)))
    matrix = Matrix(cat.field, ambient, len(vectors), entries)
    _, pivots = rref(matrix)
    return OracleResult(len(pivots), tuple(pivots), ambient)


# -- ready-made families ---------------------------------------------------


def loop_diagram(cat: FusionCategoryData, a: int) -> PlanarDiagram:
    return PlanarDiagram(cat, [[Cup((a,))], [CapBar((a,))]])


def empty_disk(cat: FusionCategoryData) -> PlanarDiagram:
    return PlanarDiagram(cat, [[]])


def simple_wrap(cat: FusionCategoryData, x: int) -> Tuple[PlanarDiagram, int]:
    """A single strand winding once around the annulus, in cut form."""
    return PlanarDiagram(cat, [[Strand((x,))]]), 1


def vacuum_annulus(cat: FusionCategoryData) -> Tuple[PlanarDiagram, int]:
    return PlanarDiagram(cat, [[]]), 0
