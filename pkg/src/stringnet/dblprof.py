"""Finite linear categories, profunctors, and squares between them.

The kernel in this module organizes the sewing structure of the cylinder
engine: hom spaces of boundaries become one-object linear categories,
surface blocks become profunctors, and the comparison between the
decorated and completed readings of a surface becomes a square whose
axioms (horizontal functoriality over sewing plans, vertical naturality
against isotopy cells, horizontal unitality) are checked exactly.

Layout conventions, used everywhere below:

* a composition table ``table[(x, y, z)]`` has one column per basis pair
  ``(g, f)`` with ``g`` in Hom(y, z) and ``f`` in Hom(x, y), stored at
  column ``g_index * dim(x, y) + f_index`` and holding the coordinates
  of ``g o f`` over the Hom(x, z) basis;
* profunctor action tables are hom-major in the same way;
* the ambient sum of a composite profunctor runs over the middle
  category's objects in declaration order, and within the block of a
  middle object the pair ``(p, q)`` sits at ``p_index * dim_Q + q_index``.

Everything is exact: quotients are cokernels over the scalar field with
deterministic pivoting, and the projection/section maps are retained so
canonical comparison isomorphisms can be built instead of asserted.
"""

import random
from dataclasses import dataclass, field as dataclass_field, replace
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

from .cylinder import (
    CylMorphism,
    Decoration,
    compose_cyl,
    cyl_hom,
    identity_cyl,
)
from .exactlin import Matrix, NumberField, RATIONALS, Scalar, invert, rank, rref, solve_linear
from .fusion import FusionCategoryData
from .transform import SurfaceJob, field_functor_morphism, field_functor_object, ucor
from .validate import ValidationReport


class CategoryMismatch(ValueError):
    """Composition was asked across non-matching categories."""


class CompanionUnavailable(ValueError):
    """A vertical component has no companion to fold through."""


# ---------------------------------------------------------------------------
# categories and functors


def _unit_tuple(field: NumberField, n: int, index: int) -> Tuple[Scalar, ...]:
    return tuple(field.one if i == index else field.zero for i in range(n))


def _from_cols(field: NumberField, nrows: int, cols: Sequence[Sequence[Scalar]]) -> Matrix:
    entries = []
    for i in range(nrows):
        for col in cols:
            entries.append(col[i])
    return Matrix(field, nrows, len(cols), entries)


@dataclass(eq=False)
class FinLinCategory:
    """A category with finitely many objects and based hom spaces.

    ``table[(x, y, z)]`` holds the structure constants of composition
    Hom(y, z) x Hom(x, y) -> Hom(x, z); associativity and both unit laws
    are checked on construction.
    """

    field: NumberField
    objects: Tuple
    dims: Dict[Tuple, int]
    table: Dict[Tuple, Matrix]
    units: Dict[object, Tuple[Scalar, ...]]

    def __post_init__(self):
        for x in self.objects:
            for y in self.objects:
                if (x, y) not in self.dims:
                    raise ValueError(f"missing hom dimension for {(x, y)}")
        for x in self.objects:
            if len(self.units.get(x, ())) != self.dims[(x, x)]:
                raise ValueError(f"missing identity coordinates at {x}")
        for x in self.objects:
            for y in self.objects:
                for z in self.objects:
                    t = self.table.get((x, y, z))
                    want = (self.dims[(x, z)], self.dims[(y, z)] * self.dims[(x, y)])
                    if t is None or (t.rows, t.cols) != want:
                        raise ValueError(f"composition table at {(x, y, z)} is not {want}")
        self._check_units()
        self._check_associativity()

    def dim(self, x, y) -> int:
        return self.dims[(x, y)]

    def unit(self, x) -> Tuple[Scalar, ...]:
        return self.units[x]

    def compose(self, x, y, z, g: Sequence[Scalar], f: Sequence[Scalar]) -> Tuple[Scalar, ...]:
        """Coordinates of g o f for g in Hom(y, z), f in Hom(x, y)."""
        d = self.dims[(x, y)]
        vec = [self.field.zero] * (self.dims[(y, z)] * d)
        for i, gi in enumerate(g):
            if gi.is_zero():
                continue
            for j, fj in enumerate(f):
                if not fj.is_zero():
                    vec[i * d + j] = gi * fj
        out = self.table[(x, y, z)] @ Matrix.column(self.field, vec)
        return out.col(0)

    def _check_units(self) -> None:
        for x in self.objects:
            for y in self.objects:
                d = self.dims[(x, y)]
                for j in range(d):
                    e = _unit_tuple(self.field, d, j)
                    if self.compose(x, x, y, e, self.units[x]) != e:
                        raise ValueError(f"right unit law fails on Hom{(x, y)} basis {j}")
                    if self.compose(x, y, y, self.units[y], e) != e:
                        raise ValueError(f"left unit law fails on Hom{(x, y)} basis {j}")

    def _check_associativity(self) -> None:
        for w in self.objects:
            for x in self.objects:
                dwx = self.dims[(w, x)]
                if not dwx:
                    continue
                for y in self.objects:
                    dxy = self.dims[(x, y)]
                    if not dxy:
                        continue
                    for z in self.objects:
                        dyz = self.dims[(y, z)]
                        if not dyz:
                            continue
                        for i in range(dyz):
                            h = _unit_tuple(self.field, dyz, i)
                            for j in range(dxy):
                                g = _unit_tuple(self.field, dxy, j)
                                hg = self.compose(x, y, z, h, g)
                                for k in range(dwx):
                                    f = _unit_tuple(self.field, dwx, k)
                                    left = self.compose(w, x, z, hg, f)
                                    right = self.compose(w, y, z, h, self.compose(w, x, y, g, f))
                                    if left != right:
                                        raise ValueError(
                                            f"associativity fails at {(w, x, y, z)} basis {(i, j, k)}"
                                        )


def one_object_category(field: NumberField, dim: int, table: Matrix, unit: Sequence[Scalar]) -> FinLinCategory:
    return FinLinCategory(field, ("*",), {("*", "*"): dim}, {("*", "*", "*"): table}, {"*": tuple(unit)})


def trivial_category(field: NumberField = RATIONALS) -> FinLinCategory:
    return one_object_category(field, 1, Matrix.identity(field, 1), (field.one,))


@dataclass(eq=False)
class LinFunctor:
    """Object map plus a matrix per hom pair; functoriality is checked."""

    source: FinLinCategory
    target: FinLinCategory
    objects: Dict
    matrix: Dict[Tuple, Matrix]

    def __post_init__(self):
        A, B = self.source, self.target
        for x in A.objects:
            if self.objects.get(x) not in B.objects:
                raise ValueError(f"object map undefined at {x}")
        for x in A.objects:
            for y in A.objects:
                m = self.matrix.get((x, y))
                want = (B.dims[(self.objects[x], self.objects[y])], A.dims[(x, y)])
                if m is None or (m.rows, m.cols) != want:
                    raise ValueError(f"morphism matrix at {(x, y)} is not {want}")
        for x in A.objects:
            if self.apply(x, x, A.unit(x)) != B.unit(self.objects[x]):
                raise ValueError(f"identity at {x} is not preserved")
        for x in A.objects:
            for y in A.objects:
                dxy = A.dims[(x, y)]
                if not dxy:
                    continue
                for z in A.objects:
                    dyz = A.dims[(y, z)]
                    for i in range(dyz):
                        g = _unit_tuple(A.field, dyz, i)
                        fg = self.apply(y, z, g)
                        for j in range(dxy):
                            f = _unit_tuple(A.field, dxy, j)
                            lhs = self.apply(x, z, A.compose(x, y, z, g, f))
                            rhs = B.compose(
                                self.objects[x], self.objects[y], self.objects[z], fg, self.apply(x, y, f)
                            )
                            if lhs != rhs:
                                raise ValueError(f"functoriality fails at {(x, y, z)} basis {(i, j)}")

    def obj(self, x):
        return self.objects[x]

    def apply(self, x, y, coords: Sequence[Scalar]) -> Tuple[Scalar, ...]:
        out = self.matrix[(x, y)] @ Matrix.column(self.source.field, coords)
        return out.col(0)

    def matches(self, other: "LinFunctor") -> bool:
        return (
            self.source is other.source
            and self.target is other.target
            and self.objects == other.objects
            and self.matrix == other.matrix
        )


def identity_functor(A: FinLinCategory) -> LinFunctor:
    matrix = {
        (x, y): Matrix.identity(A.field, A.dims[(x, y)]) for x in A.objects for y in A.objects
    }
    return LinFunctor(A, A, {x: x for x in A.objects}, matrix)


def functor_compose(G: LinFunctor, F: LinFunctor) -> LinFunctor:
    """The composite G o F."""
    if F.target is not G.source:
        raise CategoryMismatch("functors do not chain")
    objects = {x: G.objects[F.objects[x]] for x in F.source.objects}
    matrix = {
        (x, y): G.matrix[(F.objects[x], F.objects[y])] @ F.matrix[(x, y)]
        for x in F.source.objects
        for y in F.source.objects
    }
    return LinFunctor(F.source, G.target, objects, matrix)


# ---------------------------------------------------------------------------
# profunctors


@dataclass(eq=False)
class Profunctor:
    """Based bimodule over a pair of categories.

    ``left[(a2, a, b)]`` acts by Hom_source(a2, a) on the contravariant
    slot, ``right[(a, b, b2)]`` by Hom_target(b, b2) on the covariant
    one; both unit laws, both associativities, and the commutation of
    the two actions are checked on construction.  Composites built by
    :func:`prof_compose` additionally carry the middle category and the
    projection/section maps of the quotient.
    """

    source: FinLinCategory
    target: FinLinCategory
    dims: Dict[Tuple, int]
    left: Dict[Tuple, Matrix]
    right: Dict[Tuple, Matrix]
    middle: Optional[FinLinCategory] = None
    project: Optional[Dict[Tuple, Matrix]] = None
    section: Optional[Dict[Tuple, Matrix]] = None
    offsets: Optional[Dict[Tuple, Dict]] = None

    def __post_init__(self):
        A, B = self.source, self.target
        if A.field is not B.field:
            raise CategoryMismatch("profunctor endpoints over different fields")
        for a in A.objects:
            for b in B.objects:
                if (a, b) not in self.dims:
                    raise ValueError(f"missing space dimension at {(a, b)}")
        for a2 in A.objects:
            for a in A.objects:
                for b in B.objects:
                    m = self.left.get((a2, a, b))
                    want = (self.dims[(a2, b)], A.dims[(a2, a)] * self.dims[(a, b)])
                    if m is None or (m.rows, m.cols) != want:
                        raise ValueError(f"left action at {(a2, a, b)} is not {want}")
        for a in A.objects:
            for b in B.objects:
                for b2 in B.objects:
                    m = self.right.get((a, b, b2))
                    want = (self.dims[(a, b2)], B.dims[(b, b2)] * self.dims[(a, b)])
                    if m is None or (m.rows, m.cols) != want:
                        raise ValueError(f"right action at {(a, b, b2)} is not {want}")
        self._check_actions()

    @property
    def field(self) -> NumberField:
        return self.source.field

    def dim(self, a, b) -> int:
        return self.dims[(a, b)]

    def left_matrix(self, a2, a, b, f: Sequence[Scalar]) -> Matrix:
        """Action of f in Hom_source(a2, a) as a matrix P(a, b) -> P(a2, b)."""
        d = self.dims[(a, b)]
        big = self.left[(a2, a, b)]
        out = Matrix.zeros(self.field, self.dims[(a2, b)], d)
        for i, fi in enumerate(f):
            if not fi.is_zero():
                out = out + big.submatrix_columns(range(i * d, (i + 1) * d)).scale(fi)
        return out

    def right_matrix(self, a, b, b2, g: Sequence[Scalar]) -> Matrix:
        """Action of g in Hom_target(b, b2) as a matrix P(a, b) -> P(a, b2)."""
        d = self.dims[(a, b)]
        big = self.right[(a, b, b2)]
        out = Matrix.zeros(self.field, self.dims[(a, b2)], d)
        for i, gi in enumerate(g):
            if not gi.is_zero():
                out = out + big.submatrix_columns(range(i * d, (i + 1) * d)).scale(gi)
        return out

    def matches(self, other: "Profunctor") -> bool:
        return (
            self.source is other.source
            and self.target is other.target
            and self.dims == other.dims
            and self.left == other.left
            and self.right == other.right
        )

    def _check_actions(self) -> None:
        A, B = self.source, self.target
        for a in A.objects:
            for b in B.objects:
                d = self.dims[(a, b)]
                if not d:
                    continue
                if self.right_matrix(a, b, b, B.unit(b)) != Matrix.identity(self.field, d):
                    raise ValueError(f"right unit action fails at {(a, b)}")
                if self.left_matrix(a, a, b, A.unit(a)) != Matrix.identity(self.field, d):
                    raise ValueError(f"left unit action fails at {(a, b)}")
        for a in A.objects:
            for b in B.objects:
                if not self.dims[(a, b)]:
                    continue
                for b2 in B.objects:
                    for b3 in B.objects:
                        for i in range(B.dims[(b2, b3)]):
                            g2 = _unit_tuple(self.field, B.dims[(b2, b3)], i)
                            m2 = self.right_matrix(a, b2, b3, g2)
                            for j in range(B.dims[(b, b2)]):
                                g1 = _unit_tuple(self.field, B.dims[(b, b2)], j)
                                lhs = m2 @ self.right_matrix(a, b, b2, g1)
                                rhs = self.right_matrix(a, b, b3, B.compose(b, b2, b3, g2, g1))
                                if lhs != rhs:
                                    raise ValueError(
                                        f"right action associativity fails at {(a, b, b2, b3)}"
                                    )
        for b in B.objects:
            for a in A.objects:
                if not self.dims[(a, b)]:
                    continue
                for a2 in A.objects:
                    for a3 in A.objects:
                        for i in range(A.dims[(a3, a2)]):
                            f2 = _unit_tuple(self.field, A.dims[(a3, a2)], i)
                            m2 = self.left_matrix(a3, a2, b, f2)
                            for j in range(A.dims[(a2, a)]):
                                f1 = _unit_tuple(self.field, A.dims[(a2, a)], j)
                                lhs = m2 @ self.left_matrix(a2, a, b, f1)
                                rhs = self.left_matrix(a3, a, b, A.compose(a3, a2, a, f1, f2))
                                if lhs != rhs:
                                    raise ValueError(
                                        f"left action associativity fails at {(a3, a2, a, b)}"
                                    )
        for a in A.objects:
            for b in B.objects:
                if not self.dims[(a, b)]:
                    continue
                for a2 in A.objects:
                    for b2 in B.objects:
                        for i in range(A.dims[(a2, a)]):
                            f = _unit_tuple(self.field, A.dims[(a2, a)], i)
                            for j in range(B.dims[(b, b2)]):
                                g = _unit_tuple(self.field, B.dims[(b, b2)], j)
                                lhs = self.left_matrix(a2, a, b2, f) @ self.right_matrix(a, b, b2, g)
                                rhs = self.right_matrix(a2, b, b2, g) @ self.left_matrix(a2, a, b, f)
                                if lhs != rhs:
                                    raise ValueError(
                                        f"the two actions fail to commute at {(a2, a, b, b2)}"
                                    )


def identity_profunctor(A: FinLinCategory) -> Profunctor:
    """Hom as a bimodule over itself."""
    dims = dict(A.dims)
    right = {(a, b, b2): A.table[(a, b, b2)] for a in A.objects for b in A.objects for b2 in A.objects}
    left = {}
    for a2 in A.objects:
        for a in A.objects:
            for b in A.objects:
                t = A.table[(a2, a, b)]
                dhom = A.dims[(a2, a)]
                dsp = A.dims[(a, b)]

                def entry(i, j, t=t, dhom=dhom, dsp=dsp):
                    f_index = j // dsp
                    p_index = j % dsp
                    return t.at(i, p_index * dhom + f_index)

                left[(a2, a, b)] = Matrix.from_function(
                    A.field, A.dims[(a2, b)], dhom * dsp, entry
                )
    return Profunctor(A, A, dims, left, right)


def prof_compose(P: Profunctor, Q: Profunctor) -> Profunctor:
    """Quotient of the block sum over the middle category by the
    relations that slide a middle morphism across the tensor sign.

    The result keeps the projection and section of the quotient so the
    canonical comparison maps (unit laws, associativity) can be built
    explicitly; induced actions are re-validated on construction.
    """
    if P.target is not Q.source:
        raise CategoryMismatch("middle category does not match")
    A, B, C = P.source, P.target, Q.target
    field = P.field
    dims: Dict[Tuple, int] = {}
    project: Dict[Tuple, Matrix] = {}
    section: Dict[Tuple, Matrix] = {}
    offsets: Dict[Tuple, Dict] = {}
    for a in A.objects:
        for c in C.objects:
            offs: Dict[object, int] = {}
            total = 0
            for b in B.objects:
                offs[b] = total
                total += P.dim(a, b) * Q.dim(b, c)
            rel_rows: List[List[Scalar]] = []
            for b in B.objects:
                dq_b = Q.dim(b, c)
                for b2 in B.objects:
                    dp_b = P.dim(a, b)
                    dq_b2 = Q.dim(b2, c)
                    if not dp_b or not dq_b2:
                        continue
                    for gi in range(B.dims[(b, b2)]):
                        g = _unit_tuple(field, B.dims[(b, b2)], gi)
                        right_p = P.right_matrix(a, b, b2, g)
                        left_q = Q.left_matrix(b, b2, c, g)
                        for p in range(dp_b):
                            rp = right_p.col(p)
                            for q in range(dq_b2):
                                lq = left_q.col(q)
                                row = [field.zero] * total
                                for r, v in enumerate(rp):
                                    if not v.is_zero():
                                        row[offs[b2] + r * dq_b2 + q] = row[offs[b2] + r * dq_b2 + q] + v
                                for r, v in enumerate(lq):
                                    if not v.is_zero():
                                        row[offs[b] + p * dq_b + r] = row[offs[b] + p * dq_b + r] - v
                                if any(not v.is_zero() for v in row):
                                    rel_rows.append(row)
            if rel_rows:
                reduced, pivots = rref(Matrix.from_rows(field, rel_rows))
            else:
                reduced, pivots = None, ()
            pivot_row = {p: k for k, p in enumerate(pivots)}
            nonpiv = [j for j in range(total) if j not in pivot_row]
            dims[(a, c)] = len(nonpiv)

            def proj_entry(i, j, nonpiv=nonpiv, pivot_row=pivot_row, reduced=reduced):
                if j in pivot_row:
                    return -reduced.at(pivot_row[j], nonpiv[i])
                return field.one if j == nonpiv[i] else field.zero

            project[(a, c)] = Matrix.from_function(field, len(nonpiv), total, proj_entry)
            section[(a, c)] = Matrix.from_function(
                field,
                total,
                len(nonpiv),
                lambda i, j, nonpiv=nonpiv: field.one if i == nonpiv[j] else field.zero,
            )
            offsets[(a, c)] = offs

    def ambient_action(a, c, a_out, c_out, block_maps: Dict) -> Matrix:
        # block_maps: middle object -> matrix acting P(a,b)xQ(b,c) -> P(a_out,b)xQ(b,c_out)
        rows_total = sum(P.dim(a_out, b) * Q.dim(b, c_out) for b in B.objects)
        cols_total = sum(P.dim(a, b) * Q.dim(b, c) for b in B.objects)
        entries = [[field.zero] * cols_total for _ in range(rows_total)]
        row_off = 0
        col_offs = offsets[(a, c)]
        for b in B.objects:
            blk = block_maps[b]
            for i in range(blk.rows):
                for j in range(blk.cols):
                    v = blk.at(i, j)
                    if not v.is_zero():
                        entries[row_off + i][col_offs[b] + j] = v
            row_off += P.dim(a_out, b) * Q.dim(b, c_out)
        return Matrix.from_rows(field, entries) if rows_total else Matrix.zeros(field, 0, cols_total)

    right: Dict[Tuple, Matrix] = {}
    for a in A.objects:
        for c in C.objects:
            for c2 in C.objects:
                cols: List[Tuple[Scalar, ...]] = []
                for hi in range(C.dims[(c, c2)]):
                    h = _unit_tuple(field, C.dims[(c, c2)], hi)
                    blocks = {
                        b: Matrix.identity(field, P.dim(a, b)).kron(Q.right_matrix(b, c, c2, h))
                        for b in B.objects
                    }
                    amb = ambient_action(a, c, a, c2, blocks)
                    m = project[(a, c2)] @ amb @ section[(a, c)]
                    cols.extend(m.col(j) for j in range(m.cols))
                right[(a, c, c2)] = _from_cols(field, dims[(a, c2)], cols) if cols else Matrix.zeros(
                    field, dims[(a, c2)], 0
                )
    left: Dict[Tuple, Matrix] = {}
    for a2 in A.objects:
        for a in A.objects:
            for c in C.objects:
                cols = []
                for fi in range(A.dims[(a2, a)]):
                    f = _unit_tuple(field, A.dims[(a2, a)], fi)
                    blocks = {
                        b: P.left_matrix(a2, a, b, f).kron(Matrix.identity(field, Q.dim(b, c)))
                        for b in B.objects
                    }
                    amb = ambient_action(a, c, a2, c, blocks)
                    m = project[(a2, c)] @ amb @ section[(a, c)]
                    cols.extend(m.col(j) for j in range(m.cols))
                left[(a2, a, c)] = _from_cols(field, dims[(a2, c)], cols) if cols else Matrix.zeros(
                    field, dims[(a2, c)], 0
                )
    return Profunctor(
        A, C, dims, left, right, middle=B, project=project, section=section, offsets=offsets
    )


# ---------------------------------------------------------------------------
# squares


def _square_residuals(
    top: Profunctor,
    bottom: Profunctor,
    left: LinFunctor,
    right: LinFunctor,
    comp: Mapping[Tuple, Matrix],
) -> List[Tuple[str, Matrix]]:
    """Naturality defects of a candidate square; empty means natural."""
    out = []
    A, B = top.source, top.target
    for a in A.objects:
        for b in B.objects:
            if not top.dims[(a, b)]:
                continue
            for b2 in B.objects:
                for i in range(B.dims[(b, b2)]):
                    g = _unit_tuple(top.field, B.dims[(b, b2)], i)
                    lhs = comp[(a, b2)] @ top.right_matrix(a, b, b2, g)
                    rhs = bottom.right_matrix(
                        left.obj(a), right.obj(b), right.obj(b2), right.apply(b, b2, g)
                    ) @ comp[(a, b)]
                    diff = lhs - rhs
                    if not diff.is_zero():
                        out.append((f"right action {(a, b, b2)} basis {i}", diff))
            for a2 in A.objects:
                for i in range(A.dims[(a2, a)]):
                    f = _unit_tuple(top.field, A.dims[(a2, a)], i)
                    lhs = comp[(a2, b)] @ top.left_matrix(a2, a, b, f)
                    rhs = bottom.left_matrix(
                        left.obj(a2), left.obj(a), right.obj(b), left.apply(a2, a, f)
                    ) @ comp[(a, b)]
                    diff = lhs - rhs
                    if not diff.is_zero():
                        out.append((f"left action {(a2, a, b)} basis {i}", diff))
    return out


@dataclass(eq=False)
class ProfSquare:
    """A component family P(a, b) -> Q(Fa, Gb); naturality in both
    variables is checked on construction."""

    top: Profunctor
    bottom: Profunctor
    left: LinFunctor
    right: LinFunctor
    comp: Dict[Tuple, Matrix]

    def __post_init__(self):
        if self.left.source is not self.top.source or self.left.target is not self.bottom.source:
            raise CategoryMismatch("left edge does not frame the square")
        if self.right.source is not self.top.target or self.right.target is not self.bottom.target:
            raise CategoryMismatch("right edge does not frame the square")
        for a in self.top.source.objects:
            for b in self.top.target.objects:
                m = self.comp.get((a, b))
                want = (
                    self.bottom.dims[(self.left.obj(a), self.right.obj(b))],
                    self.top.dims[(a, b)],
                )
                if m is None or (m.rows, m.cols) != want:
                    raise ValueError(f"component at {(a, b)} is not {want}")
        bad = _square_residuals(self.top, self.bottom, self.left, self.right, self.comp)
        if bad:
            raise ValueError(f"square is not natural: {bad[0][0]}")

    def is_globular(self) -> bool:
        return self.left.matches(identity_functor(self.left.source)) and self.right.matches(
            identity_functor(self.right.source)
        )


def identity_square(P: Profunctor) -> ProfSquare:
    comp = {
        key: Matrix.identity(P.field, d) for key, d in P.dims.items()
    }
    return ProfSquare(P, P, identity_functor(P.source), identity_functor(P.target), comp)


def functor_square(F: LinFunctor) -> ProfSquare:
    """F viewed as a square between the identity profunctors."""
    top = identity_profunctor(F.source)
    bottom = identity_profunctor(F.target)
    comp = {(x, y): F.matrix[(x, y)] for x in F.source.objects for y in F.source.objects}
    return ProfSquare(top, bottom, F, F, comp)


def vcompose(s1: ProfSquare, s2: ProfSquare) -> ProfSquare:
    """Stack s2 under s1."""
    if not (s2.top is s1.bottom or s2.top.matches(s1.bottom)):
        raise CategoryMismatch("squares do not stack")
    comp = {}
    for (a, b), m in s1.comp.items():
        comp[(a, b)] = s2.comp[(s1.left.obj(a), s1.right.obj(b))] @ m
    return ProfSquare(
        s1.top,
        s2.bottom,
        functor_compose(s2.left, s1.left),
        functor_compose(s2.right, s1.right),
        comp,
    )


def _hcompose_raw(
    T: Profunctor,
    Bm: Profunctor,
    c1: Mapping[Tuple, Matrix],
    c2: Mapping[Tuple, Matrix],
    P1: Profunctor,
    P2: Profunctor,
    left_obj: Callable,
    mid_obj: Callable,
    right_obj: Callable,
) -> Dict[Tuple, Matrix]:
    """Descend the blockwise tensor of two component families to the
    composition quotients; T and Bm must come from prof_compose."""
    field = T.field
    mids = P1.target.objects
    out: Dict[Tuple, Matrix] = {}
    for a in P1.source.objects:
        for c in P2.target.objects:
            a_out, c_out = left_obj(a), right_obj(c)
            rows_total = Bm.section[(a_out, c_out)].rows
            cols_total = T.section[(a, c)].rows
            entries = [[field.zero] * cols_total for _ in range(rows_total)]
            for b in mids:
                k = c1[(a, b)].kron(c2[(b, c)])
                roff = Bm.offsets[(a_out, c_out)][mid_obj(b)]
                coff = T.offsets[(a, c)][b]
                for i in range(k.rows):
                    for j in range(k.cols):
                        v = k.at(i, j)
                        if not v.is_zero():
                            entries[roff + i][coff + j] = entries[roff + i][coff + j] + v
            amb = (
                Matrix.from_rows(field, entries)
                if rows_total
                else Matrix.zeros(field, 0, cols_total)
            )
            out[(a, c)] = Bm.project[(a_out, c_out)] @ amb @ T.section[(a, c)]
    return out


def hcompose(s1: ProfSquare, s2: ProfSquare) -> ProfSquare:
    """Set s2 to the right of s1, composing both rows of profunctors."""
    if not (s1.right is s2.left or s1.right.matches(s2.left)):
        raise CategoryMismatch("squares do not sit side by side")
    T = prof_compose(s1.top, s2.top)
    Bm = prof_compose(s1.bottom, s2.bottom)
    comp = _hcompose_raw(
        T,
        Bm,
        s1.comp,
        s2.comp,
        s1.top,
        s2.top,
        s1.left.obj,
        s1.right.obj,
        s2.right.obj,
    )
    return ProfSquare(T, Bm, s1.left, s2.right, comp)


# ---------------------------------------------------------------------------
# canonical comparisons


def left_unitor(P: Profunctor) -> Tuple[ProfSquare, ProfSquare]:
    """Invertible globular comparison from (Hom o P) to P, with inverse."""
    A, B = P.source, P.target
    field = P.field
    U = identity_profunctor(A)
    C = prof_compose(U, P)
    lam: Dict[Tuple, Matrix] = {}
    lam_inv: Dict[Tuple, Matrix] = {}
    for a in A.objects:
        for b in B.objects:
            cols: List[Tuple[Scalar, ...]] = []
            for a2 in A.objects:
                dhom = A.dims[(a, a2)]
                dsp = P.dim(a2, b)
                for fi in range(dhom):
                    f = _unit_tuple(field, dhom, fi)
                    act = P.left_matrix(a, a2, b, f)
                    for pj in range(dsp):
                        cols.append(act.col(pj))
            ev = _from_cols(field, P.dim(a, b), cols) if cols else Matrix.zeros(field, P.dim(a, b), 0)
            lam[(a, b)] = ev @ C.section[(a, b)]
            total = ev.cols
            inc_rows = [[field.zero] * P.dim(a, b) for _ in range(total)]
            off = C.offsets[(a, b)][a]
            unit = A.unit(a)
            d = P.dim(a, b)
            for fi, v in enumerate(unit):
                if v.is_zero():
                    continue
                for pj in range(d):
                    inc_rows[off + fi * d + pj][pj] = v
            inc = Matrix.from_rows(field, inc_rows) if total else Matrix.zeros(field, 0, d)
            lam_inv[(a, b)] = C.project[(a, b)] @ inc
            if (
                lam[(a, b)] @ lam_inv[(a, b)] != Matrix.identity(field, d)
                or lam_inv[(a, b)] @ lam[(a, b)] != Matrix.identity(field, C.dims[(a, b)])
            ):
                raise ValueError(f"unit comparison fails to invert at {(a, b)}")
    ida, idb = identity_functor(A), identity_functor(B)
    return (
        ProfSquare(C, P, ida, idb, lam),
        ProfSquare(P, C, ida, idb, lam_inv),
    )


def right_unitor(P: Profunctor) -> Tuple[ProfSquare, ProfSquare]:
    """Invertible globular comparison from (P o Hom) to P, with inverse."""
    A, B = P.source, P.target
    field = P.field
    U = identity_profunctor(B)
    C = prof_compose(P, U)
    rho: Dict[Tuple, Matrix] = {}
    rho_inv: Dict[Tuple, Matrix] = {}
    for a in A.objects:
        for b in B.objects:
            cols: List[Tuple[Scalar, ...]] = []
            for b2 in B.objects:
                dsp = P.dim(a, b2)
                dhom = B.dims[(b2, b)]
                for pi in range(dsp):
                    for gi in range(dhom):
                        g = _unit_tuple(field, dhom, gi)
                        cols.append(P.right_matrix(a, b2, b, g).col(pi))
            ev = _from_cols(field, P.dim(a, b), cols) if cols else Matrix.zeros(field, P.dim(a, b), 0)
            rho[(a, b)] = ev @ C.section[(a, b)]
            total = ev.cols
            d = P.dim(a, b)
            inc_rows = [[field.zero] * d for _ in range(total)]
            off = C.offsets[(a, b)][b]
            unit = B.unit(b)
            dhom = B.dims[(b, b)]
            for pj in range(d):
                for gi, v in enumerate(unit):
                    if not v.is_zero():
                        inc_rows[off + pj * dhom + gi][pj] = v
            inc = Matrix.from_rows(field, inc_rows) if total else Matrix.zeros(field, 0, d)
            rho_inv[(a, b)] = C.project[(a, b)] @ inc
            if (
                rho[(a, b)] @ rho_inv[(a, b)] != Matrix.identity(field, d)
                or rho_inv[(a, b)] @ rho[(a, b)] != Matrix.identity(field, C.dims[(a, b)])
            ):
                raise ValueError(f"unit comparison fails to invert at {(a, b)}")
    ida, idb = identity_functor(A), identity_functor(B)
    return (
        ProfSquare(C, P, ida, idb, rho),
        ProfSquare(P, C, ida, idb, rho_inv),
    )


def associator(P: Profunctor, Q: Profunctor, R: Profunctor) -> Tuple[ProfSquare, ProfSquare]:
    """Invertible globular comparison from (P o Q) o R to P o (Q o R)."""
    A = P.source
    B = P.target
    C = Q.target
    Dd = R.target
    field = P.field
    PQ = prof_compose(P, Q)
    QR = prof_compose(Q, R)
    Lc = prof_compose(PQ, R)
    Rc = prof_compose(P, QR)
    fwd: Dict[Tuple, Matrix] = {}
    bwd: Dict[Tuple, Matrix] = {}
    for a in A.objects:
        for d in Dd.objects:
            # expanded sum over (c outer, b inner) versus (b outer, c inner)
            x_dim = sum(
                P.dim(a, b) * Q.dim(b, c) * R.dim(c, d) for c in C.objects for b in B.objects
            )
            m1_blocks = []
            for c in C.objects:
                m1_blocks.append(PQ.section[(a, c)].kron(Matrix.identity(field, R.dim(c, d))))
            m1 = _block_diag(field, m1_blocks, Lc.section[(a, d)].rows, x_dim)
            m1_back = _block_diag(
                field,
                [PQ.project[(a, c)].kron(Matrix.identity(field, R.dim(c, d))) for c in C.objects],
                x_dim,
                Lc.section[(a, d)].rows,
            )
            perm_rows = []
            x_index: Dict[Tuple, int] = {}
            pos = 0
            for c in C.objects:
                for b in B.objects:
                    for p in range(P.dim(a, b)):
                        for q in range(Q.dim(b, c)):
                            for r in range(R.dim(c, d)):
                                x_index[(c, b, p, q, r)] = pos
                                pos += 1
            y_index: Dict[Tuple, int] = {}
            pos = 0
            for b in B.objects:
                for p in range(P.dim(a, b)):
                    for c in C.objects:
                        for q in range(Q.dim(b, c)):
                            for r in range(R.dim(c, d)):
                                y_index[(b, p, c, q, r)] = pos
                                pos += 1
            entries = [[field.zero] * x_dim for _ in range(x_dim)]
            for (c, b, p, q, r), j in x_index.items():
                entries[y_index[(b, p, c, q, r)]][j] = field.one
            perm = Matrix.from_rows(field, entries) if x_dim else Matrix.zeros(field, 0, 0)
            m2 = _block_diag(
                field,
                [Matrix.identity(field, P.dim(a, b)).kron(QR.project[(b, d)]) for b in B.objects],
                Rc.section[(a, d)].rows,
                x_dim,
            )
            m2_back = _block_diag(
                field,
                [Matrix.identity(field, P.dim(a, b)).kron(QR.section[(b, d)]) for b in B.objects],
                x_dim,
                Rc.section[(a, d)].rows,
            )
            fwd[(a, d)] = Rc.project[(a, d)] @ m2 @ perm @ m1 @ Lc.section[(a, d)]
            bwd[(a, d)] = Lc.project[(a, d)] @ m1_back @ perm.transpose() @ m2_back @ Rc.section[(a, d)]
            if (
                fwd[(a, d)] @ bwd[(a, d)] != Matrix.identity(field, Rc.dims[(a, d)])
                or bwd[(a, d)] @ fwd[(a, d)] != Matrix.identity(field, Lc.dims[(a, d)])
            ):
                raise ValueError(f"associativity comparison fails to invert at {(a, d)}")
    ida, idd = identity_functor(A), identity_functor(Dd)
    return (
        ProfSquare(Lc, Rc, ida, idd, fwd),
        ProfSquare(Rc, Lc, ida, idd, bwd),
    )


def _block_diag(field: NumberField, blocks: Sequence[Matrix], rows: int, cols: int) -> Matrix:
    entries = [[field.zero] * cols for _ in range(rows)]
    roff = coff = 0
    for blk in blocks:
        for i in range(blk.rows):
            for j in range(blk.cols):
                v = blk.at(i, j)
                if not v.is_zero():
                    entries[roff + i][coff + j] = v
        roff += blk.rows
        coff += blk.cols
    if roff != rows or coff != cols:
        raise ValueError("block sizes do not fill the matrix")
    return Matrix.from_rows(field, entries) if rows else Matrix.zeros(field, 0, cols)


# ---------------------------------------------------------------------------
# companions and conjoints


@dataclass(eq=False)
class CompanionPair:
    """A functor promoted to a horizontal morphism, with the two
    mate squares; ``kind`` records on which side the promotion runs."""

    kind: str  # "companion" | "conjoint"
    functor: LinFunctor
    prof: Profunctor
    unit: ProfSquare
    counit: ProfSquare


def companion(F: LinFunctor) -> CompanionPair:
    """Hom_target(F-, -) with its unit and counit squares."""
    A, B = F.source, F.target
    field = A.field
    dims = {(a, b): B.dims[(F.obj(a), b)] for a in A.objects for b in B.objects}
    right = {
        (a, b, b2): B.table[(F.obj(a), b, b2)]
        for a in A.objects
        for b in B.objects
        for b2 in B.objects
    }
    left: Dict[Tuple, Matrix] = {}
    for a2 in A.objects:
        for a in A.objects:
            for b in B.objects:
                dhom = A.dims[(a2, a)]
                dsp = dims[(a, b)]
                cols: List[Tuple[Scalar, ...]] = []
                for fi in range(dhom):
                    f = _unit_tuple(field, dhom, fi)
                    ff = F.apply(a2, a, f)
                    for pj in range(dsp):
                        phi = _unit_tuple(field, dsp, pj)
                        cols.append(B.compose(F.obj(a2), F.obj(a), b, phi, ff))
                left[(a2, a, b)] = (
                    _from_cols(field, dims[(a2, b)], cols)
                    if cols
                    else Matrix.zeros(field, dims[(a2, b)], 0)
                )
    prof = Profunctor(A, B, dims, left, right)
    unit = ProfSquare(
        identity_profunctor(A),
        prof,
        identity_functor(A),
        F,
        {(a, a2): F.matrix[(a, a2)] for a in A.objects for a2 in A.objects},
    )
    counit = ProfSquare(
        prof,
        identity_profunctor(B),
        F,
        identity_functor(B),
        {(a, b): Matrix.identity(field, dims[(a, b)]) for a in A.objects for b in B.objects},
    )
    return CompanionPair("companion", F, prof, unit, counit)


def conjoint(F: LinFunctor) -> CompanionPair:
    """Hom_target(-, F-) with its unit and counit squares."""
    A, B = F.source, F.target
    field = A.field
    dims = {(b, a): B.dims[(b, F.obj(a))] for b in B.objects for a in A.objects}
    right: Dict[Tuple, Matrix] = {}
    for b in B.objects:
        for a in A.objects:
            for a2 in A.objects:
                dhom = A.dims[(a, a2)]
                dsp = dims[(b, a)]
                cols: List[Tuple[Scalar, ...]] = []
                for fi in range(dhom):
                    ff = F.apply(a, a2, _unit_tuple(field, dhom, fi))
                    for pj in range(dsp):
                        phi = _unit_tuple(field, dsp, pj)
                        cols.append(B.compose(b, F.obj(a), F.obj(a2), ff, phi))
                right[(b, a, a2)] = (
                    _from_cols(field, dims[(b, a2)], cols)
                    if cols
                    else Matrix.zeros(field, dims[(b, a2)], 0)
                )
    left: Dict[Tuple, Matrix] = {}
    for b2 in B.objects:
        for b in B.objects:
            for a in A.objects:
                dhom = B.dims[(b2, b)]
                dsp = dims[(b, a)]
                cols = []
                for fi in range(dhom):
                    beta = _unit_tuple(field, dhom, fi)
                    for pj in range(dsp):
                        phi = _unit_tuple(field, dsp, pj)
                        cols.append(B.compose(b2, b, F.obj(a), phi, beta))
                left[(b2, b, a)] = (
                    _from_cols(field, dims[(b2, a)], cols)
                    if cols
                    else Matrix.zeros(field, dims[(b2, a)], 0)
                )
    prof = Profunctor(B, A, dims, left, right)
    unit = ProfSquare(
        identity_profunctor(A),
        prof,
        F,
        identity_functor(A),
        {(a, a2): F.matrix[(a, a2)] for a in A.objects for a2 in A.objects},
    )
    counit = ProfSquare(
        prof,
        identity_profunctor(B),
        identity_functor(B),
        F,
        {(b, a): Matrix.identity(field, dims[(b, a)]) for b in B.objects for a in A.objects},
    )
    return CompanionPair("conjoint", F, prof, unit, counit)


def _squares_equal(s1: ProfSquare, s2: ProfSquare) -> bool:
    return (
        s1.top.matches(s2.top)
        and s1.bottom.matches(s2.bottom)
        and s1.left.matches(s2.left)
        and s1.right.matches(s2.right)
        and s1.comp == s2.comp
    )


def check_yanking(pair: CompanionPair) -> ValidationReport:
    """Both zigzag laws for a companion or conjoint pair.

    The straight law stacks unit under counit and compares against the
    functor's own square; the bent law slides them side by side and
    strips the hom units off both rows.
    """
    report = ValidationReport(f"{pair.kind} zigzags for a functor")
    straight = vcompose(pair.unit, pair.counit)
    if not _squares_equal(straight, functor_square(pair.functor)):
        report.add("vertical", pair.kind, "stacked unit and counit miss the functor square")
    if pair.kind == "companion":
        bent = hcompose(pair.unit, pair.counit)
        lam, lam_inv = left_unitor(pair.prof)
        rho, rho_inv = right_unitor(pair.prof)
        chain = vcompose(vcompose(lam_inv, bent), rho)
    else:
        bent = hcompose(pair.counit, pair.unit)
        rho, rho_inv = right_unitor(pair.prof)
        lam, lam_inv = left_unitor(pair.prof)
        chain = vcompose(vcompose(rho_inv, bent), lam)
    if not _squares_equal(chain, identity_square(pair.prof)):
        report.add("horizontal", pair.kind, "bent composite is not the identity of the promotion")
    return report


# ---------------------------------------------------------------------------
# linear solving over square components


def _flatten(mats: Sequence[Matrix]) -> List[Scalar]:
    out: List[Scalar] = []
    for m in mats:
        out.extend(m.entries)
    return out


def _probe_solve(
    field: NumberField,
    shapes: Sequence[Tuple[object, int, int]],
    conditions: Callable[[Dict], List[Matrix]],
    target: Optional[Sequence[Matrix]] = None,
):
    """Solve the linear (or affine) system conditions(X) == target for a
    keyed family of matrices X, by probing unit entries.

    Returns (solution dict or None, nullity of the homogeneous part).
    """
    zero = {key: Matrix.zeros(field, r, c) for key, r, c in shapes}
    base = _flatten(conditions(zero))
    columns: List[List[Scalar]] = []
    slots: List[Tuple[object, int, int]] = []
    for key, r, c in shapes:
        for i in range(r):
            for j in range(c):
                probe = dict(zero)
                probe[key] = Matrix.from_function(
                    field, r, c, lambda ii, jj, i=i, j=j: field.one if (ii, jj) == (i, j) else field.zero
                )
                col = _flatten(conditions(probe))
                columns.append([a - b for a, b in zip(col, base)])
                slots.append((key, i, j))
    nrows = len(base)
    system = _from_cols(field, nrows, columns) if columns else Matrix.zeros(field, nrows, 0)
    if target is None:
        rhs = [field.zero] * nrows
    else:
        rhs = [t - b for t, b in zip(_flatten(target), base)]
    solution = solve_linear(system, Matrix.column(field, rhs))
    nullity = system.cols - rank(system)
    if solution is None:
        return None, nullity
    values = {key: [[field.zero] * c for _ in range(r)] for key, r, c in shapes}
    for idx, (key, i, j) in enumerate(slots):
        values[key][i][j] = solution.at(idx, 0)
    out = {key: Matrix.from_rows(field, rows) for key, rows in values.items()}
    for key, r, c in shapes:
        if r == 0:
            out[key] = Matrix.zeros(field, 0, c)
    return out, nullity


@dataclass(eq=False)
class CompanionComparison:
    components: Optional[Dict[Tuple, Matrix]]
    unique: bool
    invertible: bool


def compare_companions(p1: CompanionPair, p2: CompanionPair) -> CompanionComparison:
    """Globular cell carrying one promotion of a functor to another,
    found by solving the compatibility equations against both mates."""
    if p1.kind != p2.kind or not p1.functor.matches(p2.functor):
        raise CategoryMismatch("promotions of different functors")
    field = p1.prof.field
    keys = sorted(p1.prof.dims.keys(), key=repr)
    shapes = [(k, p2.prof.dims[k], p1.prof.dims[k]) for k in keys]
    idl = identity_functor(p1.prof.source)
    idr = identity_functor(p1.prof.target)

    def conditions(cand: Dict) -> List[Matrix]:
        out = [diff for _, diff in _square_residuals(p1.prof, p2.prof, idl, idr, cand)]
        # compatibility with the unit mates
        for (a, a2), m in p1.unit.comp.items():
            key = (p1.unit.left.obj(a), p1.unit.right.obj(a2))
            out.append(cand[key] @ m - p2.unit.comp[(a, a2)])
        # compatibility with the counit mates
        for key, m in p1.counit.comp.items():
            out.append(p2.counit.comp[key] @ cand[key] - m)
        return out

    sol, nullity = _probe_solve(field, shapes, conditions)
    if sol is None:
        return CompanionComparison(None, nullity == 0, False)
    invertible = all(
        sol[k].rows == sol[k].cols and invert(sol[k]) is not None for k in keys if sol[k].rows
    )
    return CompanionComparison(sol, nullity == 0, invertible)


# ---------------------------------------------------------------------------
# adjunctions and the transported conjoint


@dataclass(eq=False)
class Adjunction:
    """F left adjoint to G, presented by unit and counit components;
    naturality of both families is checked, the triangle laws are left
    to the zigzag verdicts of the pairs built from the data."""

    F: LinFunctor
    G: LinFunctor
    unit: Dict[object, Tuple[Scalar, ...]]  # a -> Hom_source(a, GFa)
    counit: Dict[object, Tuple[Scalar, ...]]  # b -> Hom_target(FGb, b)

    def __post_init__(self):
        A, B = self.F.source, self.F.target
        if self.G.source is not B or self.G.target is not A:
            raise CategoryMismatch("adjoint does not run back")
        for a in A.objects:
            gfa = self.G.obj(self.F.obj(a))
            if len(self.unit.get(a, ())) != A.dims[(a, gfa)]:
                raise ValueError(f"unit component at {a} has wrong length")
        for b in B.objects:
            fgb = self.F.obj(self.G.obj(b))
            if len(self.counit.get(b, ())) != B.dims[(fgb, b)]:
                raise ValueError(f"counit component at {b} has wrong length")
        for a in A.objects:
            for a2 in A.objects:
                for i in range(A.dims[(a, a2)]):
                    h = _unit_tuple(A.field, A.dims[(a, a2)], i)
                    gfh = self.G.apply(
                        self.F.obj(a), self.F.obj(a2), self.F.apply(a, a2, h)
                    )
                    gfa = self.G.obj(self.F.obj(a))
                    gfa2 = self.G.obj(self.F.obj(a2))
                    lhs = A.compose(a, gfa, gfa2, gfh, self.unit[a])
                    rhs = A.compose(a, a2, gfa2, self.unit[a2], h)
                    if lhs != rhs:
                        raise ValueError(f"unit is not natural at {(a, a2)} basis {i}")
        for b in B.objects:
            for b2 in B.objects:
                for i in range(B.dims[(b, b2)]):
                    h = _unit_tuple(B.field, B.dims[(b, b2)], i)
                    fgh = self.F.apply(
                        self.G.obj(b), self.G.obj(b2), self.G.apply(b, b2, h)
                    )
                    fgb = self.F.obj(self.G.obj(b))
                    fgb2 = self.F.obj(self.G.obj(b2))
                    lhs = B.compose(fgb, b, b2, h, self.counit[b])
                    rhs = B.compose(fgb, fgb2, b2, self.counit[b2], fgh)
                    if lhs != rhs:
                        raise ValueError(f"counit is not natural at {(b, b2)} basis {i}")


def conjoint_via_adjunction(pair: CompanionPair, adj: Adjunction) -> CompanionPair:
    """Read the companion of a left adjoint as the conjoint of its right
    adjoint, with mates rebuilt from the adjunction's unit and counit.

    The straight zigzag of the result reduces to the adjunction's
    triangle law, so the verdict of :func:`check_yanking` on the output
    certifies the triangle identities.
    """
    if pair.kind != "companion" or not pair.functor.matches(adj.F):
        raise CategoryMismatch("need the companion of the left adjoint")
    A, B = adj.F.source, adj.F.target
    field = A.field
    prof = pair.prof  # spaces Hom_B(Fa, b), read as the promotion of G
    unit_comp: Dict[Tuple, Matrix] = {}
    for b in B.objects:
        for b2 in B.objects:
            dhom = B.dims[(b, b2)]
            gb = adj.G.obj(b)
            fgb = adj.F.obj(gb)
            cols = []
            for i in range(dhom):
                psi = _unit_tuple(field, dhom, i)
                cols.append(B.compose(fgb, b, b2, psi, adj.counit[b]))
            unit_comp[(b, b2)] = (
                _from_cols(field, B.dims[(fgb, b2)], cols)
                if cols
                else Matrix.zeros(field, B.dims[(fgb, b2)], 0)
            )
    counit_comp: Dict[Tuple, Matrix] = {}
    for a in A.objects:
        for b in B.objects:
            dsp = prof.dims[(a, b)]
            gb = adj.G.obj(b)
            gfa = adj.G.obj(adj.F.obj(a))
            cols = []
            for j in range(dsp):
                phi = _unit_tuple(field, dsp, j)
                gphi = adj.G.apply(adj.F.obj(a), b, phi)
                cols.append(A.compose(a, gfa, gb, gphi, adj.unit[a]))
            counit_comp[(a, b)] = (
                _from_cols(field, A.dims[(a, gb)], cols)
                if cols
                else Matrix.zeros(field, A.dims[(a, gb)], 0)
            )
    unit = ProfSquare(identity_profunctor(B), prof, adj.G, identity_functor(B), unit_comp)
    counit = ProfSquare(prof, identity_profunctor(A), identity_functor(A), adj.G, counit_comp)
    return CompanionPair("conjoint", adj.G, prof, unit, counit)


# ---------------------------------------------------------------------------
# the vertical 2-category seen through squares


def nat_space_dimension(F: LinFunctor, G: LinFunctor) -> int:
    """Dimension of the space of natural transformations F => G."""
    if F.source is not G.source or F.target is not G.target:
        raise CategoryMismatch("parallel functors required")
    A, B = F.source, F.target
    field = A.field
    shapes = [(a, B.dims[(F.obj(a), G.obj(a))], 1) for a in A.objects]

    def conditions(cand: Dict) -> List[Matrix]:
        out = []
        for a in A.objects:
            for a2 in A.objects:
                for i in range(A.dims[(a, a2)]):
                    h = _unit_tuple(field, A.dims[(a, a2)], i)
                    lhs = B.compose(
                        F.obj(a), G.obj(a), G.obj(a2), G.apply(a, a2, h), cand[a].col(0)
                    )
                    rhs = B.compose(
                        F.obj(a), F.obj(a2), G.obj(a2), cand[a2].col(0), F.apply(a, a2, h)
                    )
                    out.append(
                        Matrix.column(field, [x - y for x, y in zip(lhs, rhs)])
                    )
        return out

    _, nullity = _probe_solve(field, shapes, conditions)
    return nullity


def square_space_dimension(
    top: Profunctor, bottom: Profunctor, left: LinFunctor, right: LinFunctor
) -> int:
    """Dimension of the space of squares with the given frame."""
    field = top.field
    keys = [(a, b) for a in top.source.objects for b in top.target.objects]
    shapes = [
        (k, bottom.dims[(left.obj(k[0]), right.obj(k[1]))], top.dims[k]) for k in keys
    ]

    def conditions(cand: Dict) -> List[Matrix]:
        return [diff for _, diff in _square_residuals(top, bottom, left, right, cand)]

    _, nullity = _probe_solve(field, shapes, conditions)
    return nullity


# ---------------------------------------------------------------------------
# weak invertibility


@dataclass(eq=False)
class EquivalenceData:
    """Quasi-inverses for the two vertical edges of a square, with the
    unit of the left adjunction and the counit of the right one, each
    presented as a square between identity profunctors."""

    left_inverse: LinFunctor
    right_inverse: LinFunctor
    left_unit: ProfSquare
    right_counit: ProfSquare


def strict_equivalence(square: ProfSquare) -> EquivalenceData:
    """Equivalence data for edges that invert on the nose."""

    def invert_functor(F: LinFunctor) -> LinFunctor:
        objects = {}
        for x, fx in F.objects.items():
            if fx in objects:
                raise ValueError("edge functor is not injective on objects")
            objects[fx] = x
        for y in F.target.objects:
            if y not in objects:
                raise ValueError("edge functor is not surjective on objects")
        matrix = {}
        for x in F.source.objects:
            for y in F.source.objects:
                m = invert(F.matrix[(x, y)])
                if m is None:
                    raise ValueError("edge functor is not invertible on homs")
                matrix[(F.objects[x], F.objects[y])] = m
        return LinFunctor(F.target, F.source, objects, matrix)

    f_inv = invert_functor(square.left)
    g_inv = invert_functor(square.right)
    A = square.left.source
    B = square.right.source
    ua, ub = identity_profunctor(A), identity_profunctor(B)
    unit = ProfSquare(
        ua,
        ua,
        identity_functor(A),
        functor_compose(f_inv, square.left),
        {k: Matrix.identity(A.field, d) for k, d in A.dims.items()},
    )
    counit = ProfSquare(
        ub,
        ub,
        functor_compose(g_inv, square.right),
        identity_functor(B),
        {k: Matrix.identity(B.field, d) for k, d in B.dims.items()},
    )
    return EquivalenceData(f_inv, g_inv, unit, counit)


def check_weak_invertibility(
    square: ProfSquare, data: Optional[EquivalenceData] = None
) -> Optional[ProfSquare]:
    """Solve for an inverse square against the equivalence data.

    The defining condition is that sliding the unit of the left edge's
    adjunction, the stacked pair, and the counit of the right edge's
    adjunction side by side collapses, after stripping hom units, to
    the identity of the top profunctor.  The candidate's components are
    the unknowns of a linear system; on success the inverse square is
    returned, otherwise None.
    """
    if data is None:
        data = strict_equivalence(square)
    P, Q = square.top, square.bottom
    A, B = P.source, P.target
    field = P.field
    f, g = square.left, square.right
    ua = data.left_unit.top
    ub = data.right_counit.top
    T1 = prof_compose(ua, P)
    T2 = prof_compose(T1, ub)
    lam, _ = left_unitor(P)
    rho_outer, _ = right_unitor(T1)
    strip = {
        key: lam.comp[key] @ rho_outer.comp[key] for key in T2.dims.keys()
    }
    u_mid = data.left_unit.right  # composite f_inv o f
    w_mid = data.right_counit.left  # composite g_inv o g
    keys = sorted(Q.dims.keys(), key=repr)
    shapes = [
        (k, P.dims[(data.left_inverse.obj(k[0]), data.right_inverse.obj(k[1]))], Q.dims[k])
        for k in keys
    ]
    identity_target = {
        (a, b): Matrix.identity(field, P.dims[(a, b)])
        for a in A.objects
        for b in B.objects
    }

    def conditions(cand: Dict) -> List[Matrix]:
        out = [
            diff
            for _, diff in _square_residuals(Q, P, data.left_inverse, data.right_inverse, cand)
        ]
        stacked = {
            (a, b): cand[(f.obj(a), g.obj(b))] @ square.comp[(a, b)]
            for a in A.objects
            for b in B.objects
        }
        h1 = _hcompose_raw(
            T1, T1, data.left_unit.comp, stacked, ua, P,
            lambda a: a, u_mid.obj, w_mid.obj,
        )
        h2 = _hcompose_raw(
            T2, T2, h1, data.right_counit.comp, T1, ub,
            lambda a: a, w_mid.obj, lambda b: b,
        )
        for key in sorted(T2.dims.keys(), key=repr):
            out.append(strip[key] @ h2[key] - strip[key] @ Matrix.identity(field, T2.dims[key]))
        return out

    sol, _ = _probe_solve(field, shapes, conditions)
    if sol is None:
        return None
    return ProfSquare(Q, P, data.left_inverse, data.right_inverse, sol)


# ---------------------------------------------------------------------------
# folding a square family into globular cells


@dataclass(eq=False)
class SquareFamily:
    """A vertical-transformation candidate presented piecewise: one
    functor per boundary, one square per surface, endpoints naming
    which boundaries each surface connects."""

    functors: Dict[str, Optional[LinFunctor]]
    squares: Dict[str, ProfSquare]
    endpoints: Dict[str, Tuple[str, str]]


@dataclass(eq=False)
class FoldResult:
    cells: Dict[str, ProfSquare]
    inverses: Dict[str, Optional[ProfSquare]]
    strong: bool
    witnesses: List[str]


def fold(family: SquareFamily) -> FoldResult:
    """Fold each square into a globular cell between composites with
    the promoted edges, and certify strength by inverting every cell.

    Each vertical edge is promoted to its companion; a missing or
    non-functorial edge raises :class:`CompanionUnavailable`.
    """
    pairs: Dict[str, CompanionPair] = {}
    for name, fun in family.functors.items():
        if fun is None:
            raise CompanionUnavailable(f"no functor component at boundary {name}")
        pairs[name] = companion(fun)
    cells: Dict[str, ProfSquare] = {}
    inverses: Dict[str, Optional[ProfSquare]] = {}
    witnesses: List[str] = []
    for job, sq in family.squares.items():
        src, dst = family.endpoints[job]
        eta = pairs[src].unit
        eps = pairs[dst].counit
        big = hcompose(hcompose(eta, sq), eps)
        lam, lam_inv = left_unitor(sq.top)
        pre = hcompose(lam_inv, identity_square(pairs[dst].prof))
        target = prof_compose(pairs[src].prof, sq.bottom)
        rho, _ = right_unitor(target)
        cell = vcompose(vcompose(pre, big), rho)
        cells[job] = cell
        inv_comp: Dict[Tuple, Matrix] = {}
        good = True
        for key, m in cell.comp.items():
            mi = invert(m) if m.rows == m.cols else None
            if mi is None:
                good = False
                witnesses.append(f"{job} at {key}")
                break
            inv_comp[key] = mi
        inverses[job] = (
            ProfSquare(cell.bottom, cell.top, cell.left, cell.right, inv_comp) if good else None
        )
    return FoldResult(cells, inverses, all(v is not None for v in inverses.values()), witnesses)


# ---------------------------------------------------------------------------
# randomized instances (block-diagonal semisimple model)


def semisimple_category(
    field: NumberField, mults: Dict[object, Tuple[int, ...]]
) -> FinLinCategory:
    """Category of formal sums of sector blocks: an object is a
    multiplicity vector, a hom is a tuple of matrices, composition is
    blockwise matrix product.  Associative by construction and then
    re-checked on load."""
    objects = tuple(mults.keys())
    sectors = len(next(iter(mults.values())))
    for m in mults.values():
        if len(m) != sectors:
            raise ValueError("inconsistent sector count")
        if not any(m):
            raise ValueError("an object needs at least one nonzero multiplicity")

    def basis(x, y):
        out = []
        mx, my = mults[x], mults[y]
        for s in range(sectors):
            for i in range(my[s]):
                for j in range(mx[s]):
                    out.append((s, i, j))
        return out

    dims = {(x, y): len(basis(x, y)) for x in objects for y in objects}
    index = {
        (x, y): {key: pos for pos, key in enumerate(basis(x, y))} for x in objects for y in objects
    }
    table: Dict[Tuple, Matrix] = {}
    for x in objects:
        for y in objects:
            for z in objects:
                bxy = basis(x, y)
                byz = basis(y, z)
                cols: List[List[Scalar]] = []
                for (s, i, j) in byz:
                    for (s2, k, l) in bxy:
                        col = [field.zero] * dims[(x, z)]
                        if s == s2 and j == k:
                            col[index[(x, z)][(s, i, l)]] = field.one
                        cols.append(col)
                table[(x, y, z)] = (
                    _from_cols(field, dims[(x, z)], cols)
                    if cols
                    else Matrix.zeros(field, dims[(x, z)], 0)
                )
    units = {}
    for x in objects:
        coords = [field.zero] * dims[(x, x)]
        for s in range(sectors):
            for i in range(mults[x][s]):
                coords[index[(x, x)][(s, i, i)]] = field.one
        units[x] = tuple(coords)
    cat = FinLinCategory(field, objects, dims, table, units)
    cat.sector_mults = dict(mults)
    return cat


def _sector_basis(mults, x, y):
    out = []
    sectors = len(mults[x])
    for s in range(sectors):
        for i in range(mults[y][s]):
            for j in range(mults[x][s]):
                out.append((s, i, j))
    return out


def semisimple_functor(
    A: FinLinCategory, B: FinLinCategory, weights: Sequence[Sequence[int]], objects: Dict
) -> LinFunctor:
    """Functor given by a sector-multiplicity matrix: sector s of the
    source is copied weights[t][s] times into sector t of the target."""
    ma, mb = A.sector_mults, B.sector_mults
    s_src = len(next(iter(ma.values())))
    s_dst = len(next(iter(mb.values())))
    for x in A.objects:
        want = tuple(
            sum(weights[t][s] * ma[x][s] for s in range(s_src)) for t in range(s_dst)
        )
        if mb[objects[x]] != want:
            raise ValueError(f"target of {x} has multiplicities {mb[objects[x]]}, need {want}")

    def offset(x, t, s, copy):
        # start of copy number `copy` of source sector s inside target sector t
        off = 0
        for s2 in range(s_src):
            if s2 < s:
                off += weights[t][s2] * ma[x][s2]
        return off + copy * ma[x][s]

    field = A.field
    matrix: Dict[Tuple, Matrix] = {}
    for x in A.objects:
        for y in A.objects:
            src_basis = _sector_basis(ma, x, y)
            dst_basis = _sector_basis(mb, objects[x], objects[y])
            dst_index = {key: pos for pos, key in enumerate(dst_basis)}
            cols: List[List[Scalar]] = []
            for (s, i, j) in src_basis:
                col = [field.zero] * len(dst_basis)
                for t in range(s_dst):
                    for copy in range(weights[t][s]):
                        col[
                            dst_index[(t, offset(y, t, s, copy) + i, offset(x, t, s, copy) + j)]
                        ] = field.one
                cols.append(col)
            matrix[(x, y)] = (
                _from_cols(field, len(dst_basis), cols)
                if cols
                else Matrix.zeros(field, len(dst_basis), 0)
            )
    return LinFunctor(A, B, dict(objects), matrix)


def semisimple_profunctor(
    A: FinLinCategory, B: FinLinCategory, pairing: Sequence[Sequence[int]]
) -> Profunctor:
    """Bimodule with one block of linear maps per sector pair (s, t)
    weighted by pairing[s][t]."""
    ma, mb = A.sector_mults, B.sector_mults
    s_src = len(next(iter(ma.values())))
    s_dst = len(next(iter(mb.values())))
    field = A.field

    def basis(a, b):
        out = []
        for s in range(s_src):
            for t in range(s_dst):
                for copy in range(pairing[s][t]):
                    for i in range(mb[b][t]):
                        for j in range(ma[a][s]):
                            out.append((s, t, copy, i, j))
        return out

    dims = {(a, b): len(basis(a, b)) for a in A.objects for b in B.objects}
    index = {
        (a, b): {key: pos for pos, key in enumerate(basis(a, b))}
        for a in A.objects
        for b in B.objects
    }
    right: Dict[Tuple, Matrix] = {}
    for a in A.objects:
        for b in B.objects:
            for b2 in B.objects:
                hom = _sector_basis(mb, b, b2)
                cols: List[List[Scalar]] = []
                for (t, i2, j2) in hom:
                    for (s, t2, copy, i, j) in basis(a, b):
                        col = [field.zero] * dims[(a, b2)]
                        if t == t2 and j2 == i:
                            col[index[(a, b2)][(s, t, copy, i2, j)]] = field.one
                        cols.append(col)
                right[(a, b, b2)] = (
                    _from_cols(field, dims[(a, b2)], cols)
                    if cols
                    else Matrix.zeros(field, dims[(a, b2)], 0)
                )
    left: Dict[Tuple, Matrix] = {}
    for a2 in A.objects:
        for a in A.objects:
            for b in B.objects:
                hom = _sector_basis(ma, a2, a)
                cols = []
                for (s, k, l) in hom:
                    for (s2, t, copy, i, j) in basis(a, b):
                        col = [field.zero] * dims[(a2, b)]
                        if s == s2 and j == k:
                            col[index[(a2, b)][(s, t, copy, i, l)]] = field.one
                        cols.append(col)
                left[(a2, a, b)] = (
                    _from_cols(field, dims[(a2, b)], cols)
                    if cols
                    else Matrix.zeros(field, dims[(a2, b)], 0)
                )
    return Profunctor(A, B, dims, left, right)


def random_semisimple_category(
    rng: random.Random,
    field: NumberField = RATIONALS,
    max_objects: int = 3,
    sectors: int = 2,
    max_mult: int = 1,
    prefix: str = "x",
) -> FinLinCategory:
    n = rng.randint(1, max_objects)
    mults = {}
    for i in range(n):
        vec = [rng.randint(0, max_mult) for _ in range(sectors)]
        if not any(vec):
            vec[rng.randrange(sectors)] = 1
        mults[f"{prefix}{i}"] = tuple(vec)
    return semisimple_category(field, mults)


def random_functor(rng: random.Random, A: FinLinCategory, prefix: str = "y") -> LinFunctor:
    s_src = len(next(iter(A.sector_mults.values())))
    s_dst = rng.randint(1, 2)
    weights = [[rng.randint(0, 2) for _ in range(s_src)] for _ in range(s_dst)]
    if not any(any(row) for row in weights):
        weights[rng.randrange(s_dst)][rng.randrange(s_src)] = 1
    mults = {}
    objects = {}
    for i, x in enumerate(A.objects):
        img = tuple(
            sum(weights[t][s] * A.sector_mults[x][s] for s in range(s_src))
            for t in range(s_dst)
        )
        name = f"{prefix}{i}"
        mults[name] = img if any(img) else tuple(1 for _ in range(s_dst))
        objects[x] = name
        if not any(img):
            # give the image a place to live without changing the functor
            raise ValueError
    B = semisimple_category(A.field, mults)
    return semisimple_functor(A, B, weights, objects)


def random_profunctor(rng: random.Random, A: FinLinCategory, B: FinLinCategory) -> Profunctor:
    s_src = len(next(iter(A.sector_mults.values())))
    s_dst = len(next(iter(B.sector_mults.values())))
    pairing = [[rng.randint(0, 1) for _ in range(s_dst)] for _ in range(s_src)]
    if not any(any(row) for row in pairing):
        pairing[rng.randrange(s_src)][rng.randrange(s_dst)] = 1
    return semisimple_profunctor(A, B, pairing)


def reflective_embedding_adjunction(field: NumberField = RATIONALS) -> Adjunction:
    """A one-sector category sitting inside a two-sector one, with the
    projection back as right adjoint; the counit is a genuine
    non-invertible inclusion, so the triangle laws carry content."""
    A = semisimple_category(field, {"a": (1,)})
    B = semisimple_category(field, {"u": (1, 0), "v": (1, 1)})
    F = semisimple_functor(A, B, [[1], [0]], {"a": "u"})
    G = semisimple_functor(B, A, [[1, 0]], {"u": "a", "v": "a"})
    unit = {"a": (field.one,)}
    counit = {"u": (field.one,), "v": (field.one,)}
    return Adjunction(F, G, unit, counit)


# ---------------------------------------------------------------------------
# the engine bridge: boundaries as one-object categories


def tube_category(cat: FusionCategoryData, a: Decoration) -> FinLinCategory:
    """Endomorphisms of a decorated boundary as a one-object category."""
    basis = cyl_hom(cat, a, a)
    n = basis.dimension
    field = cat.field
    els = [CylMorphism(basis, _unit_tuple(field, n, j)) for j in range(n)]
    cols = []
    for i in range(n):
        for j in range(n):
            cols.append(compose_cyl(els[i], els[j]).coordinates)
    table = _from_cols(field, n, cols)
    return one_object_category(field, n, table, identity_cyl(cat, a).coordinates)


def completion_hom(
    cat: FusionCategoryData, src: Decoration, dst: Decoration
) -> Tuple[List[CylMorphism], Matrix]:
    """Basis of the completion-side hom space between the images of two
    decorated boundaries, as plain morphisms, plus its coordinate
    matrix over the plain blocks."""
    fs = field_functor_object(cat, src)
    ft = field_functor_object(cat, dst)
    plain = cyl_hom(cat, fs.base, ft.base)
    field = cat.field
    projected = []
    for i in range(plain.dimension):
        b = CylMorphism(plain, _unit_tuple(field, plain.dimension, i))
        projected.append(compose_cyl(ft.idempotent, compose_cyl(b, fs.idempotent)))
    m = _from_cols(field, plain.dimension, [p.coordinates for p in projected])
    _, pivots = rref(m)
    els = [projected[i] for i in pivots]
    return els, m.submatrix_columns(pivots)


def _completion_coords(basis_matrix: Matrix, m: CylMorphism) -> Tuple[Scalar, ...]:
    sol = solve_linear(basis_matrix, Matrix.column(basis_matrix.field, m.coordinates))
    if sol is None:
        raise ValueError("morphism lies outside the completion summand")
    return sol.col(0)


def completion_tube_category(
    cat: FusionCategoryData, a: Decoration
) -> Tuple[FinLinCategory, List[CylMorphism], Matrix]:
    """One-object category on the completion image of a boundary."""
    els, B = completion_hom(cat, a, a)
    field = cat.field
    n = len(els)
    cols = []
    for i in range(n):
        for j in range(n):
            cols.append(_completion_coords(B, compose_cyl(els[i], els[j])))
    table = _from_cols(field, n, cols)
    fa = field_functor_object(cat, a)
    unit = _completion_coords(B, fa.idempotent)
    return one_object_category(field, n, table, unit), els, B


# ---------------------------------------------------------------------------
# the shipped fragment and its assembled transformation


@dataclass(eq=False)
class IsotopyCell:
    """A globular cell on the decorated side: post- and pre-compose a
    surface's blocks with endomorphisms of its boundaries."""

    name: str
    job: str
    post: Optional[CylMorphism] = None
    pre: Optional[CylMorphism] = None


@dataclass(eq=False)
class BordFragment:
    """A finite piece of the sewing structure: named boundaries, the
    surfaces that connect them, stacked-surface plans, isotopy cells,
    and the boundary pairs whose disjoint union is spot-checked."""

    name: str
    boundaries: Dict[str, Decoration]
    jobs: Dict[str, SurfaceJob]
    unit_jobs: Dict[str, str]
    plans: Tuple[Tuple[str, str, str, str], ...] = ()  # (name, first, second, composite)
    cells: Tuple[IsotopyCell, ...] = ()
    unions: Tuple[Tuple[str, str], ...] = ()

    def __post_init__(self):
        names = {}
        for bname, dec in self.boundaries.items():
            names[id(dec)] = bname
        self.endpoints: Dict[str, Tuple[str, str]] = {}
        for jname, job in self.jobs.items():
            src = self._boundary_name(job.source)
            dst = self._boundary_name(job.target)
            self.endpoints[jname] = (src, dst)
        for bname, jname in self.unit_jobs.items():
            if jname not in self.jobs:
                raise ValueError(f"unknown unit job {jname}")
            if self.endpoints[jname] != (bname, bname):
                raise ValueError(f"unit job {jname} does not sit on boundary {bname}")
        for pname, first, second, composite in self.plans:
            for j in (first, second, composite):
                if j not in self.jobs:
                    raise ValueError(f"plan {pname} names unknown job {j}")
            if self.jobs[second].source != self.jobs[first].target:
                raise ValueError(f"plan {pname} does not chain")
            if (
                self.jobs[composite].source != self.jobs[first].source
                or self.jobs[composite].target != self.jobs[second].target
            ):
                raise ValueError(f"plan {pname} composite has wrong ends")
        for cell in self.cells:
            if cell.job not in self.jobs:
                raise ValueError(f"cell {cell.name} names unknown job {cell.job}")
            job = self.jobs[cell.job]
            if cell.post is not None and (
                cell.post.source != job.target or cell.post.target != job.target
            ):
                raise ValueError(f"cell {cell.name} post factor is not an endomorphism")
            if cell.pre is not None and (
                cell.pre.source != job.source or cell.pre.target != job.source
            ):
                raise ValueError(f"cell {cell.name} pre factor is not an endomorphism")
        for b1, b2 in self.unions:
            if b1 not in self.boundaries or b2 not in self.boundaries:
                raise ValueError("union pair names unknown boundaries")

    def _boundary_name(self, dec: Decoration) -> str:
        for bname, known in self.boundaries.items():
            if known == dec:
                return bname
        raise ValueError("job endpoint is not a registered boundary")


@dataclass(eq=False)
class CorrelatorFamily:
    """The transformation candidate assembled from the engine: one-object
    categories on both sides, profunctors per surface, the comparison
    matrices, and the plan/cell/union data the axioms quantify over."""

    name: str
    field: NumberField
    fragment: BordFragment
    top_cats: Dict[str, FinLinCategory]
    bottom_cats: Dict[str, FinLinCategory]
    top_profs: Dict[str, Profunctor]
    bottom_profs: Dict[str, Profunctor]
    edge_matrices: Dict[str, Optional[Matrix]]
    square_matrices: Dict[str, Matrix]
    plan_data: Tuple[Tuple[str, str, str, str, Matrix, Matrix], ...]
    cell_data: Tuple[Tuple[str, str, Matrix, Matrix], ...]

    def rescaled(self, job: str, c: Scalar) -> "CorrelatorFamily":
        """Copy with one comparison square scaled; the axioms should
        then fail with this job as witness."""
        squares = dict(self.square_matrices)
        squares[job] = squares[job].scale(c)
        return replace(self, square_matrices=squares)

    def zeroed(self, job: str) -> "CorrelatorFamily":
        squares = dict(self.square_matrices)
        squares[job] = Matrix.zeros(self.field, squares[job].rows, squares[job].cols)
        return replace(self, square_matrices=squares)

    def without_edge(self, boundary: str) -> "CorrelatorFamily":
        edges = dict(self.edge_matrices)
        edges[boundary] = None
        return replace(self, edge_matrices=edges)


def _one_object_profunctor(
    source: FinLinCategory, target: FinLinCategory, dim: int, left_cols, right_cols
) -> Profunctor:
    field = source.field
    left = {("*", "*", "*"): _from_cols(field, dim, left_cols) if left_cols else Matrix.zeros(field, dim, 0)}
    right = {("*", "*", "*"): _from_cols(field, dim, right_cols) if right_cols else Matrix.zeros(field, dim, 0)}
    return Profunctor(source, target, {("*", "*"): dim}, left, right)


def assemble_correlator_family(
    cat: FusionCategoryData, fragment: BordFragment, name: str = "field-functor family"
) -> CorrelatorFamily:
    """Build the comparison transformation over a fragment: edges read
    each boundary's endomorphisms through the completion, squares
    compose that reading with the string-net route on each surface."""
    field = cat.field
    top_cats: Dict[str, FinLinCategory] = {}
    bottom_cats: Dict[str, FinLinCategory] = {}
    bottom_els: Dict[str, List[CylMorphism]] = {}
    bottom_mats: Dict[str, Matrix] = {}
    for bname, dec in fragment.boundaries.items():
        top_cats[bname] = tube_category(cat, dec)
        bc, els, bm = completion_tube_category(cat, dec)
        bottom_cats[bname] = bc
        bottom_els[bname] = els
        bottom_mats[bname] = bm
    top_profs: Dict[str, Profunctor] = {}
    bottom_profs: Dict[str, Profunctor] = {}
    square_matrices: Dict[str, Matrix] = {}
    hom_els: Dict[str, List[CylMorphism]] = {}
    hom_mats: Dict[str, Matrix] = {}
    for jname, job in fragment.jobs.items():
        src, dst = fragment.endpoints[jname]
        basis = cyl_hom(cat, job.source, job.target)
        n = basis.dimension
        els = [CylMorphism(basis, _unit_tuple(field, n, j)) for j in range(n)]
        src_end = cyl_hom(cat, job.source, job.source)
        dst_end = cyl_hom(cat, job.target, job.target)
        left_cols = []
        for i in range(src_end.dimension):
            f = CylMorphism(src_end, _unit_tuple(field, src_end.dimension, i))
            for p in els:
                left_cols.append(compose_cyl(p, f).coordinates)
        right_cols = []
        for i in range(dst_end.dimension):
            g = CylMorphism(dst_end, _unit_tuple(field, dst_end.dimension, i))
            for p in els:
                right_cols.append(compose_cyl(g, p).coordinates)
        top_profs[jname] = _one_object_profunctor(
            top_cats[src], top_cats[dst], n, left_cols, right_cols
        )
        kels, kmat = completion_hom(cat, job.source, job.target)
        hom_els[jname] = kels
        hom_mats[jname] = kmat
        kleft = []
        for f in bottom_els[src]:
            for p in kels:
                kleft.append(_completion_coords(kmat, compose_cyl(p, f)))
        kright = []
        for g in bottom_els[dst]:
            for p in kels:
                kright.append(_completion_coords(kmat, compose_cyl(g, p)))
        bottom_profs[jname] = _one_object_profunctor(
            bottom_cats[src], bottom_cats[dst], len(kels), kleft, kright
        )
        reading = _from_cols(
            field,
            len(kels),
            [
                _completion_coords(kmat, field_functor_morphism(cat, el))
                for el in els
            ],
        )
        square_matrices[jname] = reading @ ucor(job)
    edge_matrices: Dict[str, Optional[Matrix]] = {}
    for bname, dec in fragment.boundaries.items():
        jname = fragment.unit_jobs.get(bname)
        basis = cyl_hom(cat, dec, dec)
        cols = [
            _completion_coords(
                bottom_mats[bname],
                field_functor_morphism(
                    cat, CylMorphism(basis, _unit_tuple(field, basis.dimension, j))
                ),
            )
            for j in range(basis.dimension)
        ]
        edge_matrices[bname] = _from_cols(field, len(bottom_els[bname]), cols)
    plan_data = []
    for pname, first, second, composite in fragment.plans:
        f_els = [
            CylMorphism(
                cyl_hom(cat, fragment.jobs[first].source, fragment.jobs[first].target),
                _unit_tuple(
                    field,
                    cyl_hom(cat, fragment.jobs[first].source, fragment.jobs[first].target).dimension,
                    j,
                ),
            )
            for j in range(
                cyl_hom(cat, fragment.jobs[first].source, fragment.jobs[first].target).dimension
            )
        ]
        s_els = [
            CylMorphism(
                cyl_hom(cat, fragment.jobs[second].source, fragment.jobs[second].target),
                _unit_tuple(
                    field,
                    cyl_hom(cat, fragment.jobs[second].source, fragment.jobs[second].target).dimension,
                    j,
                ),
            )
            for j in range(
                cyl_hom(cat, fragment.jobs[second].source, fragment.jobs[second].target).dimension
            )
        ]
        comp_basis = cyl_hom(
            cat, fragment.jobs[composite].source, fragment.jobs[composite].target
        )
        top_cols = []
        for p in f_els:
            for q in s_els:
                top_cols.append(compose_cyl(q, p).coordinates)
        pairing_top = _from_cols(field, comp_basis.dimension, top_cols)
        bot_cols = []
        for p in hom_els[first]:
            for q in hom_els[second]:
                bot_cols.append(
                    _completion_coords(hom_mats[composite], compose_cyl(q, p))
                )
        pairing_bottom = _from_cols(field, len(hom_els[composite]), bot_cols)
        plan_data.append((pname, first, second, composite, pairing_top, pairing_bottom))
    cell_data = []
    for cell in fragment.cells:
        job = fragment.jobs[cell.job]
        basis = cyl_hom(cat, job.source, job.target)
        top_cols = []
        for j in range(basis.dimension):
            el = CylMorphism(basis, _unit_tuple(field, basis.dimension, j))
            if cell.pre is not None:
                el = compose_cyl(el, cell.pre)
            if cell.post is not None:
                el = compose_cyl(cell.post, el)
            top_cols.append(el.coordinates)
        top_matrix = _from_cols(field, basis.dimension, top_cols)
        post_im = (
            field_functor_morphism(cat, cell.post) if cell.post is not None else None
        )
        pre_im = field_functor_morphism(cat, cell.pre) if cell.pre is not None else None
        bot_cols = []
        for el in hom_els[cell.job]:
            m = el
            if pre_im is not None:
                m = compose_cyl(m, pre_im)
            if post_im is not None:
                m = compose_cyl(post_im, m)
            bot_cols.append(_completion_coords(hom_mats[cell.job], m))
        bottom_matrix = _from_cols(field, len(hom_els[cell.job]), bot_cols)
        cell_data.append((cell.name, cell.job, top_matrix, bottom_matrix))
    return CorrelatorFamily(
        name,
        field,
        fragment,
        top_cats,
        bottom_cats,
        top_profs,
        bottom_profs,
        edge_matrices,
        square_matrices,
        tuple(plan_data),
        tuple(cell_data),
    )


def _tensor_one_object(A: FinLinCategory, B: FinLinCategory) -> FinLinCategory:
    da = A.dims[("*", "*")]
    db = B.dims[("*", "*")]
    field = A.field
    d = da * db
    ta = A.table[("*", "*", "*")]
    tb = B.table[("*", "*", "*")]
    cols: List[List[Scalar]] = []
    for g1 in range(da):
        for g2 in range(db):
            for f1 in range(da):
                for f2 in range(db):
                    c1 = ta.col(g1 * da + f1)
                    c2 = tb.col(g2 * db + f2)
                    col = [field.zero] * d
                    for r1, v1 in enumerate(c1):
                        if v1.is_zero():
                            continue
                        for r2, v2 in enumerate(c2):
                            if not v2.is_zero():
                                col[r1 * db + r2] = v1 * v2
                    cols.append(col)
    unit = []
    ua, ub = A.units["*"], B.units["*"]
    for v1 in ua:
        for v2 in ub:
            unit.append(v1 * v2)
    return one_object_category(field, d, _from_cols(field, d, cols), unit)


def check_vertical_transformation(family: CorrelatorFamily) -> ValidationReport:
    """All axioms of the assembled transformation, with witnesses.

    Codes: ``edge`` (a boundary component fails to be a functor),
    ``naturality`` (a square fails equivariance), ``horizontal-functoriality``
    (a sewing plan where composing squares misses the composite's
    square, or a sewing comparison that fails to invert),
    ``vertical-naturality`` (an isotopy cell the squares do not
    intertwine), ``horizontal-unitality`` (a boundary whose identity
    surface square differs from its edge), ``disjoint-union`` (a pair
    whose tensored edge fails functoriality).
    """
    report = ValidationReport(family.name)
    functors: Dict[str, Optional[LinFunctor]] = {}
    for bname in family.fragment.boundaries:
        m = family.edge_matrices[bname]
        if m is None:
            report.add("edge", bname, f"boundary {bname} has no functor component")
            functors[bname] = None
            continue
        try:
            functors[bname] = LinFunctor(
                family.top_cats[bname], family.bottom_cats[bname], {"*": "*"}, {("*", "*"): m}
            )
        except ValueError as err:
            report.add("edge", bname, f"boundary {bname}: {err}")
            functors[bname] = None
    squares: Dict[str, ProfSquare] = {}
    for jname in family.fragment.jobs:
        src, dst = family.fragment.endpoints[jname]
        if functors.get(src) is None or functors.get(dst) is None:
            continue
        try:
            squares[jname] = ProfSquare(
                family.top_profs[jname],
                family.bottom_profs[jname],
                functors[src],
                functors[dst],
                {("*", "*"): family.square_matrices[jname]},
            )
        except ValueError as err:
            report.add("naturality", jname, f"surface {jname}: {err}")
    key = ("*", "*")
    for pname, first, second, composite, pairing_top, pairing_bottom in family.plan_data:
        if first not in squares or second not in squares or composite not in squares:
            continue
        T = prof_compose(family.top_profs[first], family.top_profs[second])
        Bm = prof_compose(family.bottom_profs[first], family.bottom_profs[second])
        ev_top = pairing_top @ T.section[key]
        ev_bottom = pairing_bottom @ Bm.section[key]
        if invert(ev_top) is None or invert(ev_bottom) is None:
            report.add(
                "horizontal-functoriality",
                pname,
                f"plan {pname}: sewing comparison fails to invert",
            )
            continue
        descended = Bm.project[key] @ family.square_matrices[first].kron(
            family.square_matrices[second]
        ) @ T.section[key]
        lhs = family.square_matrices[composite] @ ev_top
        rhs = ev_bottom @ descended
        if lhs != rhs:
            report.add(
                "horizontal-functoriality",
                pname,
                f"plan {pname}: squares of {first} and {second} do not compose to {composite}",
            )
    for cname, jname, top_matrix, bottom_matrix in family.cell_data:
        if jname not in squares:
            continue
        c = family.square_matrices[jname]
        if c @ top_matrix != bottom_matrix @ c:
            report.add(
                "vertical-naturality", cname, f"cell {cname} on {jname} is not intertwined"
            )
    for bname, jname in family.fragment.unit_jobs.items():
        if jname not in squares or functors.get(bname) is None:
            continue
        if family.square_matrices[jname] != family.edge_matrices[bname]:
            report.add(
                "horizontal-unitality",
                bname,
                f"identity surface on {bname} differs from the boundary component",
            )
    for b1, b2 in family.fragment.unions:
        if functors.get(b1) is None or functors.get(b2) is None:
            continue
        src = _tensor_one_object(family.top_cats[b1], family.top_cats[b2])
        dst = _tensor_one_object(family.bottom_cats[b1], family.bottom_cats[b2])
        try:
            LinFunctor(
                src,
                dst,
                {"*": "*"},
                {("*", "*"): family.edge_matrices[b1].kron(family.edge_matrices[b2])},
            )
        except ValueError as err:
            report.add("disjoint-union", (b1, b2), f"pair {(b1, b2)}: {err}")
    return report


def family_squares(family: CorrelatorFamily) -> SquareFamily:
    """Validated functors and squares of an assembled family, in the
    piecewise form the folding construction consumes."""
    functors: Dict[str, Optional[LinFunctor]] = {}
    for bname in family.fragment.boundaries:
        m = family.edge_matrices[bname]
        if m is None:
            functors[bname] = None
            continue
        functors[bname] = LinFunctor(
            family.top_cats[bname], family.bottom_cats[bname], {"*": "*"}, {("*", "*"): m}
        )
    squares: Dict[str, ProfSquare] = {}
    for jname in family.fragment.jobs:
        src, dst = family.fragment.endpoints[jname]
        if functors[src] is None or functors[dst] is None:
            raise CompanionUnavailable(f"no functor component at boundary {src if functors[src] is None else dst}")
        squares[jname] = ProfSquare(
            family.top_profs[jname],
            family.bottom_profs[jname],
            functors[src],
            functors[dst],
            {("*", "*"): family.square_matrices[jname]},
        )
    return SquareFamily(functors, squares, dict(family.fragment.endpoints))
