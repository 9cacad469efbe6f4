"""Morphisms between tensor words of category objects.

An :class:`Obj` is a tuple of slots, each slot a formal direct sum of
simple labels; a *sector* picks one summand per slot (by position, so
repeated summands stay distinct).  A :class:`Mor` stores, per pair of
sectors, its coordinates in the fusion-tree pairing: writing ``t`` for
the comb-tree fusion maps (word -> simple) and ``tbar`` for the basis of
splitting maps dual under composition, a morphism is

    f  =  sum over s, i, j of  M_s[i, j] . tbar_dst,s,i . t_src,s,j

Dual-basis pairing makes composition a plain matrix product per simple,
with no loop coefficients; the tensor product routes both sides through
glue (rebracketing) matrices.  Cups and caps are self-normalizing: the
coevaluation is declared to be the dual-basis splitting vector, and the
evaluation coefficient is solved from the zig-zag identity instead of
being transcribed from an F-symbol formula.  Quantum dimensions are a
derived quantity: the value of the pivotal loop, not an input.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .exactlin import Matrix, Scalar, invert
from .fusion import FusionCategoryData, tree_count
from . import trees


Sector = Tuple[int, ...]


@dataclass(frozen=True)
class Obj:
    """Tensor word of formal sums of simple labels."""

    slots: Tuple[Tuple[int, ...], ...]

    @staticmethod
    def of(*slots) -> "Obj":
        """Build from slots given as label ids or tuples of label ids."""
        norm = []
        for s in slots:
            norm.append((s,) if isinstance(s, int) else tuple(s))
        return Obj(tuple(norm))

    @property
    def rank(self) -> int:
        return len(self.slots)

    def sector_indices(self) -> Iterable[Sector]:
        return itertools.product(*[range(len(s)) for s in self.slots])

    def word(self, sector: Sector) -> Tuple[int, ...]:
        return tuple(self.slots[k][i] for k, i in enumerate(sector))

    def tensor(self, other: "Obj") -> "Obj":
        return Obj(self.slots + other.slots)

    def dual_reversed(self, cat: FusionCategoryData) -> "Obj":
        """Slotwise dual in reversed order (the dual word)."""
        return Obj(tuple(tuple(cat.dual[b] for b in s) for s in reversed(self.slots)))


EMPTY = Obj(())


def _count(cat: FusionCategoryData, word, s: int) -> int:
    return tree_count(cat, word, s)


class Mor:
    """A morphism between objects, in fusion-tree coordinates."""

    __slots__ = ("cat", "src", "dst", "blocks")

    def __init__(
        self,
        cat: FusionCategoryData,
        src: Obj,
        dst: Obj,
        blocks: Dict[Tuple[Sector, Sector], Dict[int, Matrix]],
    ):
        self.cat = cat
        self.src = src
        self.dst = dst
        clean: Dict[Tuple[Sector, Sector], Dict[int, Matrix]] = {}
        for (ss, sd), per_s in blocks.items():
            kept = {}
            for s, m in per_s.items():
                rows = _count(cat, dst.word(sd), s)
                cols = _count(cat, src.word(ss), s)
                if (m.rows, m.cols) != (rows, cols):
                    raise ValueError(
                        f"block at {ss}->{sd}, simple {s}: expected "
                        f"{rows}x{cols}, got {m.rows}x{m.cols}"
                    )
                if not m.is_zero():
                    kept[s] = m
            if kept:
                clean[(ss, sd)] = kept
        self.blocks = clean

    # -- basic structure ---------------------------------------------------

    def block(self, ss: Sector, sd: Sector, s: int) -> Matrix:
        per_s = self.blocks.get((ss, sd))
        if per_s and s in per_s:
            return per_s[s]
        return Matrix.zeros(
            self.cat.field,
            _count(self.cat, self.dst.word(sd), s),
            _count(self.cat, self.src.word(ss), s),
        )

    def is_zero(self) -> bool:
        return not self.blocks

    def __eq__(self, other) -> bool:
        if not isinstance(other, Mor):
            return NotImplemented
        return (
            self.cat is other.cat
            and self.src == other.src
            and self.dst == other.dst
            and self.blocks == other.blocks
        )

    def __hash__(self):
        raise TypeError("morphisms are not hashable")

    def __add__(self, other: "Mor") -> "Mor":
        if self.src != other.src or self.dst != other.dst:
            raise ValueError("cannot add morphisms of different types")
        out: Dict[Tuple[Sector, Sector], Dict[int, Matrix]] = {}
        keys = set(self.blocks) | set(other.blocks)
        for key in keys:
            per_s: Dict[int, Matrix] = {}
            a = self.blocks.get(key, {})
            b = other.blocks.get(key, {})
            for s in set(a) | set(b):
                if s in a and s in b:
                    per_s[s] = a[s] + b[s]
                else:
                    per_s[s] = a.get(s) or b[s]
            out[key] = per_s
        return Mor(self.cat, self.src, self.dst, out)

    def __sub__(self, other: "Mor") -> "Mor":
        return self + other.scale(self.cat.field.from_rational(-1))

    def scale(self, c) -> "Mor":
        if not isinstance(c, Scalar):
            c = self.cat.field.from_rational(c)
        out = {
            key: {s: m.scale(c) for s, m in per_s.items()}
            for key, per_s in self.blocks.items()
        }
        return Mor(self.cat, self.src, self.dst, out)

    def __matmul__(self, other: "Mor") -> "Mor":
        """Composition self after other."""
        if other.dst != self.src:
            raise ValueError("composition type mismatch")
        out: Dict[Tuple[Sector, Sector], Dict[int, Matrix]] = {}
        for (sx, sy1), f_per in other.blocks.items():
            for (sy2, sz), g_per in self.blocks.items():
                if sy1 != sy2:
                    continue
                for s in f_per:
                    if s not in g_per:
                        continue
                    prod = g_per[s] @ f_per[s]
                    slot = out.setdefault((sx, sz), {})
                    slot[s] = slot[s] + prod if s in slot else prod
        return Mor(self.cat, other.src, self.dst, out)

    def scalar(self) -> Scalar:
        """Value of an endomorphism of the empty word."""
        if self.src != EMPTY or self.dst != EMPTY:
            raise ValueError("scalar() needs a closed morphism")
        m = self.block((), (), self.cat.unit)
        return m.at(0, 0)

    def __repr__(self):
        return f"Mor({self.src.slots} -> {self.dst.slots}, {len(self.blocks)} sector block(s))"


# -- constructors ----------------------------------------------------------


def identity(cat: FusionCategoryData, x: Obj) -> Mor:
    blocks: Dict[Tuple[Sector, Sector], Dict[int, Matrix]] = {}
    for sector in x.sector_indices():
        word = x.word(sector)
        per_s = {}
        for s in range(cat.label_count):
            d = _count(cat, word, s)
            if d:
                per_s[s] = Matrix.identity(cat.field, d)
        if per_s:
            blocks[(sector, sector)] = per_s
    return Mor(cat, x, x, blocks)


def zero(cat: FusionCategoryData, src: Obj, dst: Obj) -> Mor:
    return Mor(cat, src, dst, {})


def scalar_mor(cat: FusionCategoryData, value: Scalar) -> Mor:
    m = Matrix.from_rows(cat.field, [[value]])
    return Mor(cat, EMPTY, EMPTY, {((), ()): {cat.unit: m}})


def hom_space_basis(cat: FusionCategoryData, src: Obj, dst: Obj) -> List[Mor]:
    """Deterministic basis of Hom(src, dst), matching entries_vector order."""
    out = []
    for ss in src.sector_indices():
        ws = src.word(ss)
        for sd in dst.sector_indices():
            wd = dst.word(sd)
            for s in range(cat.label_count):
                rows = _count(cat, wd, s)
                cols = _count(cat, ws, s)
                for i in range(rows):
                    for j in range(cols):
                        m = Matrix.from_function(
                            cat.field,
                            rows,
                            cols,
                            lambda r, c, i=i, j=j: cat.field.one
                            if (r, c) == (i, j)
                            else cat.field.zero,
                        )
                        out.append(Mor(cat, src, dst, {(ss, sd): {s: m}}))
    return out


def hom_space_dimension(cat: FusionCategoryData, src: Obj, dst: Obj) -> int:
    total = 0
    for ss in src.sector_indices():
        ws = src.word(ss)
        for sd in dst.sector_indices():
            wd = dst.word(sd)
            for s in range(cat.label_count):
                total += _count(cat, wd, s) * _count(cat, ws, s)
    return total


def entries_vector(f: Mor) -> Tuple[Scalar, ...]:
    """Coordinates of a morphism in the hom_space_basis order."""
    cat = f.cat
    out: List[Scalar] = []
    for ss in f.src.sector_indices():
        ws = f.src.word(ss)
        for sd in f.dst.sector_indices():
            wd = f.dst.word(sd)
            for s in range(cat.label_count):
                rows = _count(cat, wd, s)
                cols = _count(cat, ws, s)
                if not rows or not cols:
                    continue
                m = f.block(ss, sd, s)
                for i in range(rows):
                    for j in range(cols):
                        out.append(m.at(i, j))
    return tuple(out)


def from_vector(
    cat: FusionCategoryData, src: Obj, dst: Obj, coords: Sequence[Scalar]
) -> Mor:
    blocks: Dict[Tuple[Sector, Sector], Dict[int, Matrix]] = {}
    pos = 0
    for ss in src.sector_indices():
        ws = src.word(ss)
        for sd in dst.sector_indices():
            wd = dst.word(sd)
            for s in range(cat.label_count):
                rows = _count(cat, wd, s)
                cols = _count(cat, ws, s)
                if not rows or not cols:
                    continue
                entries = list(coords[pos : pos + rows * cols])
                pos += rows * cols
                m = Matrix(cat.field, rows, cols, tuple(entries))
                if not m.is_zero():
                    blocks.setdefault((ss, sd), {})[s] = m
    if pos != len(coords):
        raise ValueError(f"expected {pos} coordinates, got {len(coords)}")
    return Mor(cat, src, dst, blocks)


# -- tensor product --------------------------------------------------------


def _pair_index(cat, w1, w2, u) -> List[Tuple[int, int, int, int, int]]:
    """(s, t, mult, i, j) enumeration of glued comb pairs, glue order."""
    out = []
    for s in range(cat.label_count):
        c1 = _count(cat, w1, s)
        if not c1:
            continue
        for t in range(cat.label_count):
            k = cat.n(s, t, u)
            if not k:
                continue
            c2 = _count(cat, w2, t)
            if not c2:
                continue
            for mu in range(k):
                for i in range(c1):
                    for j in range(c2):
                        out.append((s, t, mu, i, j))
    return out


def _glue(cat: FusionCategoryData, w1, w2, u: int) -> Matrix:
    """Pair-basis to comb-basis matrix; empty factors glue trivially."""
    if not w1 or not w2:
        other = w1 or w2
        n = _count(cat, other, u)
        return Matrix.identity(cat.field, n) if n else Matrix.zeros(cat.field, 0, 0)
    return trees.glue_matrix(cat, w1, w2, u)


def _glue_inverse(cat: FusionCategoryData, w1, w2, u: int) -> Matrix:
    """Inverse of the glue matrix, for the projection side.

    Splittings of glued pairs expand in comb splittings through the
    glue matrix itself; composing with the dual projections therefore
    contracts through its inverse.
    """
    cache = cat.cache("glue_inv")
    key = (tuple(w1), tuple(w2), u)
    if key in cache:
        return cache[key]
    g = _glue(cat, w1, w2, u)
    inv = invert(g)
    if inv is None:
        raise ArithmeticError("glue matrix is singular; category data is broken")
    cache[key] = inv
    return inv


def tensor(f: Mor, g: Mor) -> Mor:
    """Tensor product, glued into comb coordinates on both sides."""
    cat = f.cat
    if g.cat is not cat:
        raise ValueError("tensor of morphisms over different categories")
    src = f.src.tensor(g.src)
    dst = f.dst.tensor(g.dst)
    blocks: Dict[Tuple[Sector, Sector], Dict[int, Matrix]] = {}
    for (sx, sy), f_per in f.blocks.items():
        wx, wy = f.src.word(sx), f.dst.word(sy)
        for (su, sv), g_per in g.blocks.items():
            wu, wv = g.src.word(su), g.dst.word(sv)
            key = (sx + su, sy + sv)
            for u_root in range(cat.label_count):
                src_pairs = _pair_index(cat, wx, wu, u_root)
                if not src_pairs:
                    continue
                dst_pairs = _pair_index(cat, wy, wv, u_root)
                if not dst_pairs:
                    continue
                d_entries = []
                any_nonzero = False
                for (s_d, t_d, mu_d, i, k) in dst_pairs:
                    fm = f_per.get(s_d)
                    gm = g_per.get(t_d)
                    for (s_c, t_c, mu_c, j, l) in src_pairs:
                        if (s_d, t_d, mu_d) != (s_c, t_c, mu_c) or fm is None or gm is None:
                            d_entries.append(cat.field.zero)
                            continue
                        v = fm.at(i, j) * gm.at(k, l)
                        if not v.is_zero():
                            any_nonzero = True
                        d_entries.append(v)
                if not any_nonzero:
                    continue
                d = Matrix(cat.field, len(dst_pairs), len(src_pairs), tuple(d_entries))
                block = (
                    _glue(cat, wy, wv, u_root)
                    @ d
                    @ _glue_inverse(cat, wx, wu, u_root)
                )
                if not block.is_zero():
                    slot = blocks.setdefault(key, {})
                    slot[u_root] = (
                        slot[u_root] + block if u_root in slot else block
                    )
    return Mor(cat, src, dst, blocks)


def tensor_many(*fs: Mor) -> Mor:
    out = fs[0]
    for f in fs[1:]:
        out = tensor(out, f)
    return out


# -- summand injections and projections ------------------------------------


def summand_injection(cat: FusionCategoryData, slot: Sequence[int], index: int) -> Mor:
    """The index-th summand of a slot, as a morphism into the sum."""
    slot = tuple(slot)
    a = slot[index]
    src = Obj.of(a)
    dst = Obj((slot,))
    m = Matrix.identity(cat.field, 1)
    return Mor(cat, src, dst, {((0,), (index,)): {a: m}})


def summand_projection(cat: FusionCategoryData, slot: Sequence[int], index: int) -> Mor:
    """Projection of a sum slot onto its index-th summand."""
    slot = tuple(slot)
    a = slot[index]
    src = Obj((slot,))
    dst = Obj.of(a)
    m = Matrix.identity(cat.field, 1)
    return Mor(cat, src, dst, {((index,), (0,)): {a: m}})


# -- duality ---------------------------------------------------------------


def _dual_slot(cat: FusionCategoryData, slot) -> Tuple[int, ...]:
    return tuple(cat.dual[b] for b in slot)


def _ev_lambda(cat: FusionCategoryData, a: int) -> Scalar:
    """Normalization of the evaluation, solved from the zig-zag identity."""
    cache = cat.cache("ev_lambda")
    if a in cache:
        return cache[a]
    abar = cat.dual[a]
    raw_ev = Mor(
        cat,
        Obj.of(abar, a),
        EMPTY,
        {((0, 0), ()): {cat.unit: Matrix.identity(cat.field, 1)}},
    )
    ida = identity(cat, Obj.of(a))
    zig = tensor(ida, raw_ev) @ tensor(coev(cat, (a,)), ida)
    c = zig.block((0,), (0,), a).at(0, 0)
    if c.is_zero():
        raise ArithmeticError(f"degenerate zig-zag for label {cat.labels[a]}")
    lam = c.inverse()
    cache[a] = lam
    return lam


def ev(cat: FusionCategoryData, slot: Sequence[int]) -> Mor:
    """Evaluation (dual slot, slot) -> empty, zig-zag normalized per summand."""
    slot = tuple(slot)
    src = Obj((_dual_slot(cat, slot), slot))
    blocks: Dict[Tuple[Sector, Sector], Dict[int, Matrix]] = {}
    for i, a in enumerate(slot):
        lam = _ev_lambda(cat, a)
        m = Matrix.from_rows(cat.field, [[lam]])
        blocks[((i, i), ())] = {cat.unit: m}
    return Mor(cat, src, EMPTY, blocks)


def coev(cat: FusionCategoryData, slot: Sequence[int]) -> Mor:
    """Coevaluation empty -> (slot, dual slot), the dual-basis splitting."""
    slot = tuple(slot)
    dst = Obj((slot, _dual_slot(cat, slot)))
    blocks: Dict[Tuple[Sector, Sector], Dict[int, Matrix]] = {}
    for i in range(len(slot)):
        blocks[((), (i, i))] = {cat.unit: Matrix.identity(cat.field, 1)}
    return Mor(cat, EMPTY, dst, blocks)


def ev_primed(cat: FusionCategoryData, slot: Sequence[int]) -> Mor:
    """Pivotal evaluation (slot, dual slot) -> empty."""
    slot = tuple(slot)
    src = Obj((slot, _dual_slot(cat, slot)))
    blocks: Dict[Tuple[Sector, Sector], Dict[int, Matrix]] = {}
    for i, a in enumerate(slot):
        lam = _ev_lambda(cat, cat.dual[a]) * cat.pivotal[a]
        blocks[((i, i), ())] = {cat.unit: Matrix.from_rows(cat.field, [[lam]])}
    return Mor(cat, src, EMPTY, blocks)


def coev_primed(cat: FusionCategoryData, slot: Sequence[int]) -> Mor:
    """Pivotal coevaluation empty -> (dual slot, slot)."""
    slot = tuple(slot)
    dst = Obj((_dual_slot(cat, slot), slot))
    blocks: Dict[Tuple[Sector, Sector], Dict[int, Matrix]] = {}
    for i, a in enumerate(slot):
        lam = cat.pivotal[a].inverse()
        blocks[((), (i, i))] = {cat.unit: Matrix.from_rows(cat.field, [[lam]])}
    return Mor(cat, EMPTY, dst, blocks)


def derive_quantum_dimensions(cat: FusionCategoryData) -> Tuple[Scalar, ...]:
    """Pivotal loop values, one per label."""
    out = []
    for a in range(cat.label_count):
        loop = ev_primed(cat, (a,)) @ coev(cat, (a,))
        out.append(loop.scalar())
    return tuple(out)


# -- rotation of vertex states ---------------------------------------------


def rotate(cat: FusionCategoryData, v: Mor) -> Mor:
    """Move the first leg of a vertex state to the last position.

    The state is a morphism from the empty word; the first leg is pulled
    around counterclockwise using one evaluation and one pivotal
    coevaluation, so a full turn is the identity (checked in tests, not
    assumed).
    """
    if v.src != EMPTY:
        raise ValueError("rotate acts on states out of the empty word")
    if v.dst.rank == 0:
        return v
    first = v.dst.slots[0]
    rest = Obj(v.dst.slots[1:])
    dual_first = _dual_slot(cat, first)
    id_dual = identity(cat, Obj((dual_first,)))
    id_rest = identity(cat, rest)
    id_first = identity(cat, Obj((first,)))
    m = tensor(ev(cat, first), id_rest) @ tensor(id_dual, v)
    return tensor(m, id_first) @ coev_primed(cat, first)


def rotate_times(cat: FusionCategoryData, v: Mor, k: int) -> Mor:
    for _ in range(k):
        v = rotate(cat, v)
    return v


def bend_first_legs(cat: FusionCategoryData, v: Mor, k: int) -> Mor:
    """Bend the first k legs of a state down to the left.

    Each bend turns the current first output leg into a new leftmost
    input using a plain evaluation, so the inputs of the result read
    left to right as the duals of legs k down to 1.
    """
    f = v
    for _ in range(k):
        if f.dst.rank == 0:
            raise ValueError("not enough legs to bend")
        first = f.dst.slots[0]
        rest = Obj(f.dst.slots[1:])
        dual_first = _dual_slot(cat, first)
        step = tensor(ev(cat, first), identity(cat, rest)) @ tensor(
            identity(cat, Obj((dual_first,))), f
        )
        f = step
    return f


def fold_first_legs(cat: FusionCategoryData, f: Mor, k: int) -> Mor:
    """Raise the first k inputs back up into outputs, undoing bends.

    Inverse of :func:`bend_first_legs`: both round trips are the
    identity because the two snake identities hold exactly in the
    shipped pivotal data (checked in tests, not assumed).
    """
    for _ in range(k):
        if f.src.rank == 0:
            raise ValueError("not enough legs to fold")
        first = f.src.slots[0]
        rest = Obj(f.src.slots[1:])
        raised = _dual_slot(cat, first)
        f = tensor(identity(cat, Obj((raised,))), f) @ tensor(
            coev(cat, raised), identity(cat, rest)
        )
    return f
