"""Cylinder categories over decorated circles and intervals.

Objects are decorations of a 1-manifold: oriented marked points labeled
by objects (plain mode) or by bimodules with algebra-labeled segments
between them (decorated mode).  Morphisms are string nets on the
cylinder over the manifold, stored as coordinates with respect to a
canonical basis.  For the circle that basis is built from cut-open
rectangles: a net crossing the cut is resolved into components with one
simple strand through the seam, so an element of Hom(a, b) is a family
of ordinary morphisms x (x) a -> b (x) x indexed by the simple wrap
label x.  The module also provides the idempotent completion: splitting
endomorphism algebras into simple summands, and the Dehn twist as an
explicit invertible morphism.
"""

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .exactlin import (
    IdempotentViolation,
    Matrix,
    Scalar,
    invert,
    primitive_idempotents,
    rank,
    rank_factor,
    solve_linear,
)
from .fusion import FusionCategoryData
from .frobenius import BimoduleData, FrobeniusAlgebraData, dual_bimodule, regular_bimodule
from .diagrams import BoundaryMismatch, PlanarDiagram, StringNetElement, Vertex
from .mor import (
    EMPTY,
    Mor,
    Obj,
    entries_vector,
    fold_first_legs,
    from_vector,
    hom_space_basis,
    hom_space_dimension,
    identity,
    summand_injection,
    summand_projection,
    tensor,
    tensor_many,
    zero,
)

Slot = Tuple[int, ...]

INTERVAL = "interval"
CIRCLE = "circle"


class MalformedDecoration(ValueError):
    pass


@dataclass(frozen=True)
class MarkedPoint:
    """An oriented marked point; the label is a slot in plain mode and a
    bimodule in decorated mode."""

    label: Union[Slot, BimoduleData]
    orientation: int = 1


class Decoration:
    """A decorated 1-manifold, the object type of the cylinder category.

    ``segments[i]`` labels the segment immediately before ``points[i]``;
    an interval carries one extra trailing segment.  All segments are
    None in plain mode and Frobenius algebras in decorated mode, where
    interval boundary segments must be trivial and each bimodule label
    must match its neighboring segment algebras (by object identity,
    with the sides swapped for negatively oriented points).
    """

    def __init__(
        self,
        cat: FusionCategoryData,
        manifold: str,
        points: Sequence[MarkedPoint],
        segments: Sequence[Optional[FrobeniusAlgebraData]],
    ):
        self.cat = cat
        self.manifold = manifold
        self.points = tuple(points)
        self.segments = tuple(segments)
        self._validate()

    def _validate(self) -> None:
        cat = self.cat
        if self.manifold not in (INTERVAL, CIRCLE):
            raise MalformedDecoration(f"unknown manifold {self.manifold!r}")
        n = len(self.points)
        want = n + 1 if self.manifold == INTERVAL else max(n, 1)
        if len(self.segments) != want:
            raise MalformedDecoration(
                f"{self.manifold} with {n} points needs {want} segments, got {len(self.segments)}"
            )
        plain = all(s is None for s in self.segments)
        for s in self.segments:
            if s is not None and not isinstance(s, FrobeniusAlgebraData):
                raise MalformedDecoration("segment labels must be algebras or None")
            if not plain and s is None:
                raise MalformedDecoration("mixed plain and algebra segment labels")
            if s is not None and s.cat is not cat:
                raise MalformedDecoration("segment algebra from a different category")
        for p in self.points:
            if p.orientation not in (1, -1):
                raise MalformedDecoration(f"orientation must be +1 or -1, got {p.orientation}")
            if plain:
                if not (isinstance(p.label, tuple) and p.label and
                        all(isinstance(b, int) and 0 <= b < cat.label_count for b in p.label)):
                    raise MalformedDecoration(f"bad point label {p.label!r} for plain decoration")
            else:
                if not isinstance(p.label, BimoduleData):
                    raise MalformedDecoration("points between algebra segments need bimodule labels")
                if p.label.cat is not cat:
                    raise MalformedDecoration("bimodule label from a different category")
        if not plain:
            if self.manifold == INTERVAL:
                for s in (self.segments[0], self.segments[-1]):
                    if s.underlying != (cat.unit,):
                        raise MalformedDecoration("interval boundary segments must be trivial")
            for i, p in enumerate(self.points):
                before = self.segments[i]
                if self.manifold == INTERVAL:
                    after = self.segments[i + 1]
                else:
                    after = self.segments[(i + 1) % n]
                left, right = p.label.left_algebra, p.label.right_algebra
                if p.orientation == -1:
                    left, right = right, left
                if left is not before or right is not after:
                    raise MalformedDecoration(
                        f"point {i}: bimodule sides do not match the neighboring segments"
                    )

    @property
    def is_plain(self) -> bool:
        return all(s is None for s in self.segments)

    def word(self) -> Tuple[Slot, ...]:
        """Underlying boundary word: one slot per point, dualized when the
        point is negatively oriented."""
        cat = self.cat
        out = []
        for p in self.points:
            slot = p.label if isinstance(p.label, tuple) else p.label.underlying
            if p.orientation == -1:
                slot = tuple(cat.dual[b] for b in slot)
            out.append(slot)
        return tuple(out)

    def reverse(self) -> "Decoration":
        """The decoration seen from the reversed manifold: point order and
        orientations flip, labels stay."""
        pts = tuple(
            MarkedPoint(p.label, -p.orientation) for p in reversed(self.points)
        )
        if self.manifold == INTERVAL:
            segs = tuple(reversed(self.segments))
        else:
            n = len(self.points)
            if n == 0:
                segs = self.segments
            else:
                segs = tuple(self.segments[(n - j) % n] for j in range(n))
        return Decoration(self.cat, self.manifold, pts, segs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Decoration):
            return NotImplemented
        return (
            self.cat is other.cat
            and self.manifold == other.manifold
            and self.points == other.points
            and len(self.segments) == len(other.segments)
            and all(a is b for a, b in zip(self.segments, other.segments))
        )

    def __hash__(self) -> int:
        return hash(
            (id(self.cat), self.manifold, self.points, tuple(id(s) for s in self.segments))
        )

    def __repr__(self) -> str:
        kind = "plain" if self.is_plain else "decorated"
        return f"Decoration({self.manifold}, {len(self.points)} point(s), {kind})"


def plain_decoration(
    cat: FusionCategoryData,
    manifold: str,
    labels: Sequence[Union[int, Slot]],
    orientations: Optional[Sequence[int]] = None,
) -> Decoration:
    if orientations is None:
        orientations = [1] * len(labels)
    if len(orientations) != len(labels):
        raise MalformedDecoration("one orientation per label required")
    pts = [
        MarkedPoint((l,) if isinstance(l, int) else tuple(l), o)
        for l, o in zip(labels, orientations)
    ]
    n = len(pts)
    count = n + 1 if manifold == INTERVAL else max(n, 1)
    return Decoration(cat, manifold, pts, (None,) * count)


def frob_decoration(
    cat: FusionCategoryData,
    manifold: str,
    points: Sequence[Union[MarkedPoint, BimoduleData]],
    segments: Sequence[FrobeniusAlgebraData],
) -> Decoration:
    pts = [p if isinstance(p, MarkedPoint) else MarkedPoint(p, 1) for p in points]
    return Decoration(cat, manifold, pts, tuple(segments))


# ---------------------------------------------------------------------------
# canonical bases and morphisms


@dataclass(frozen=True)
class CylBlock:
    wrap: Optional[int]  # simple seam label for the circle, None on the interval
    src: Obj
    dst: Obj
    dim: int


class CylBasis:
    """Canonical basis of a cylinder hom space.

    Plain case: one block per wrap label, each an ordinary hom space.
    Decorated case: the span of the plain blocks sandwiched between the
    boundary idempotents of the two decorations; ``include``/``project``
    translate between retained coordinates and ambient plain ones.
    """

    def __init__(
        self,
        cat: FusionCategoryData,
        source: Decoration,
        target: Decoration,
        blocks: Tuple[CylBlock, ...],
        include: Optional[Matrix] = None,
        project: Optional[Matrix] = None,
        ambient: Optional["CylBasis"] = None,
    ):
        self.cat = cat
        self.source = source
        self.target = target
        self.blocks = blocks
        self.include = include
        self.project = project
        self.ambient = ambient

    @property
    def ambient_dimension(self) -> int:
        return sum(b.dim for b in self.blocks)

    @property
    def dimension(self) -> int:
        if self.include is not None:
            return self.include.cols
        return self.ambient_dimension

    def __repr__(self) -> str:
        return f"CylBasis({self.source!r} -> {self.target!r}, dim {self.dimension})"


class CylMorphism:
    """A cylinder morphism: coordinates with respect to a canonical basis."""

    def __init__(self, basis: CylBasis, coordinates: Sequence[Scalar]):
        if len(coordinates) != basis.dimension:
            raise ValueError(
                f"expected {basis.dimension} coordinates, got {len(coordinates)}"
            )
        self.basis = basis
        self.coordinates = tuple(coordinates)

    @property
    def source(self) -> Decoration:
        return self.basis.source

    @property
    def target(self) -> Decoration:
        return self.basis.target

    def scale(self, c: Scalar) -> "CylMorphism":
        return CylMorphism(self.basis, tuple(v * c for v in self.coordinates))

    def __add__(self, other: "CylMorphism") -> "CylMorphism":
        self._align(other)
        return CylMorphism(
            self.basis, tuple(a + b for a, b in zip(self.coordinates, other.coordinates))
        )

    def __sub__(self, other: "CylMorphism") -> "CylMorphism":
        self._align(other)
        return CylMorphism(
            self.basis, tuple(a - b for a, b in zip(self.coordinates, other.coordinates))
        )

    def _align(self, other: "CylMorphism") -> None:
        if self.basis is not other.basis and (
            self.source != other.source or self.target != other.target
        ):
            raise BoundaryMismatch(-1, None, None)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coordinates)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CylMorphism):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and self.coordinates == other.coordinates
        )

    def __hash__(self) -> int:
        return hash((self.source, self.target, self.coordinates))

    def __repr__(self) -> str:
        return f"CylMorphism({self.source!r} -> {self.target!r})"


# ---------------------------------------------------------------------------
# seam resolution

def _seam_pairs(cat: FusionCategoryData, seam: Obj, x: int):
    """Basis of Hom(x, seam) together with the pairing-corrected duals, so
    that summing include-project over all x reconstructs the seam identity."""
    X = Obj(((x,),))
    f_in = hom_space_basis(cat, X, seam)
    if not f_in:
        return []
    f_out = hom_space_basis(cat, seam, X)
    k = len(f_in)
    gram = Matrix(
        cat.field,
        k,
        k,
        tuple(entries_vector(f_out[i] @ f_in[j])[0] for i in range(k) for j in range(k)),
    )
    ginv = invert(gram)
    if ginv is None:
        raise ArithmeticError("degenerate composition pairing at the seam")
    pairs = []
    for t in range(k):
        q = zero(cat, seam, X)
        for j in range(k):
            q = q + f_out[j].scale(ginv.at(t, j))
        pairs.append((f_in[t], q))
    return pairs


def _resolve_seam(cat: FusionCategoryData, m: Mor, width: int) -> Dict[int, Mor]:
    """Split a cut-open rectangle with ``width`` seam strands into its
    single-simple-wrap components."""
    seam_slots = m.src.slots[:width]
    if width and m.dst.slots[m.dst.rank - width :] != seam_slots:
        raise ValueError("seam slots disagree between the two cut edges")
    seam = Obj(seam_slots)
    src = Obj(m.src.slots[width:])
    dst = Obj(m.dst.slots[: m.dst.rank - width])
    id_src = identity(cat, src)
    id_dst = identity(cat, dst)
    out: Dict[int, Mor] = {}
    for x in range(cat.label_count):
        pairs = _seam_pairs(cat, seam, x)
        if not pairs:
            continue
        comp = None
        for g, q in pairs:
            term = tensor(id_dst, q) @ m @ tensor(g, id_src)
            comp = term if comp is None else comp + term
        if comp is not None and not comp.is_zero():
            out[x] = comp
    return out


def _block_obj(wa: Tuple[Slot, ...], wb: Tuple[Slot, ...], x: Optional[int]):
    if x is None:
        return Obj(wa), Obj(wb)
    return Obj(((x,),) + wa), Obj(wb + ((x,),))


def _coords_from_components(
    basis_blocks: Tuple[CylBlock, ...], cat: FusionCategoryData, comps: Dict[Optional[int], Mor]
) -> Tuple[Scalar, ...]:
    out: List[Scalar] = []
    z = cat.field.zero
    for b in basis_blocks:
        c = comps.get(b.wrap)
        if c is None:
            out.extend([z] * b.dim)
        else:
            out.extend(entries_vector(c))
    return tuple(out)


def _ambient_components(m: CylMorphism) -> Dict[Optional[int], Mor]:
    basis = m.basis
    cat = basis.cat
    coords = m.coordinates
    if basis.include is not None:
        col = basis.include @ Matrix.column(cat.field, coords)
        coords = tuple(col.at(i, 0) for i in range(col.rows))
    out: Dict[Optional[int], Mor] = {}
    pos = 0
    for b in basis.blocks:
        chunk = coords[pos : pos + b.dim]
        pos += b.dim
        if any(not c.is_zero() for c in chunk):
            out[b.wrap] = from_vector(cat, b.src, b.dst, chunk)
    return out


def _project_coords(basis: CylBasis, ambient: Tuple[Scalar, ...], check: bool) -> Tuple[Scalar, ...]:
    if basis.include is None:
        return ambient
    col = Matrix.column(basis.cat.field, ambient)
    retained = basis.project @ col
    if check:
        back = basis.include @ retained
        if any(not (back.at(i, 0) - ambient[i]).is_zero() for i in range(col.rows)):
            raise ValueError(
                "element is not invariant under the decoration idempotents"
            )
    return tuple(retained.at(i, 0) for i in range(retained.rows))


def ambient_coordinates(m: CylMorphism) -> Tuple[Scalar, ...]:
    """Coordinates of a morphism over the plain blocks, undoing any
    decorated-boundary compression."""
    basis = m.basis
    if basis.include is None:
        return m.coordinates
    col = basis.include @ Matrix.column(basis.cat.field, m.coordinates)
    return tuple(col.at(i, 0) for i in range(col.rows))


def ambient_components(m: CylMorphism) -> Dict[Optional[int], Mor]:
    """Nonzero plain components of a morphism, keyed by seam wrap label."""
    return _ambient_components(m)


def from_ambient(
    basis: CylBasis, ambient: Sequence[Scalar], check: bool = True
) -> CylMorphism:
    """Morphism with the given plain-block coordinates.

    With check on, coordinates that are not invariant under the
    decoration idempotents are rejected instead of silently projected.
    """
    want = basis.ambient_dimension
    if len(ambient) != want:
        raise ValueError(f"expected {want} ambient coordinates, got {len(ambient)}")
    return CylMorphism(basis, _project_coords(basis, tuple(ambient), check))


# ---------------------------------------------------------------------------
# hom spaces

def cyl_hom(cat: FusionCategoryData, source: Decoration, target: Decoration) -> CylBasis:
    """Canonical basis of the cylinder hom space between two decorations."""
    if source.cat is not cat or target.cat is not cat:
        raise MalformedDecoration("decorations from a different category")
    if source.manifold != target.manifold:
        raise MalformedDecoration("source and target live on different manifolds")
    if source.is_plain != target.is_plain:
        raise MalformedDecoration("cannot mix plain and algebra-decorated boundaries")
    cache = cat.cache("cylinder_hom")
    key = (source, target)
    if key in cache:
        return cache[key]
    if source.is_plain:
        wa, wb = source.word(), target.word()
        wraps: List[Optional[int]] = (
            list(range(cat.label_count)) if source.manifold == CIRCLE else [None]
        )
        blocks = []
        for x in wraps:
            so, do = _block_obj(wa, wb, x)
            blocks.append(CylBlock(x, so, do, hom_space_dimension(cat, so, do)))
        basis = CylBasis(cat, source, target, tuple(blocks))
    else:
        ua, ub = _underlying_plain(source), _underlying_plain(target)
        ambient = cyl_hom(cat, ua, ub)
        ea = _boundary_idempotent(cat, source)
        eb = _boundary_idempotent(cat, target)
        n = ambient.ambient_dimension
        sandwich_cols = []
        for j in range(n):
            coords = [cat.field.zero] * n
            coords[j] = cat.field.one
            h = CylMorphism(ambient, coords)
            s = compose_cyl(eb, compose_cyl(h, ea))
            sandwich_cols.append(s.coordinates)
        flat = tuple(sandwich_cols[j][i] for i in range(n) for j in range(n))
        S = Matrix(cat.field, n, n, flat)
        include, project = rank_factor(S)
        basis = CylBasis(cat, source, target, ambient.blocks, include, project, ambient)
    cache[key] = basis
    return basis


def identity_cyl(cat: FusionCategoryData, a: Decoration) -> CylMorphism:
    basis = cyl_hom(cat, a, a)
    if not a.is_plain:
        e = _boundary_idempotent(cat, a)
        amb = e.coordinates
        return CylMorphism(basis, _project_coords(basis, amb, check=False))
    m = identity(cat, Obj(a.word()))
    if a.manifold == CIRCLE:
        comps: Dict[Optional[int], Mor] = dict(_resolve_seam(cat, m, 0))
    else:
        comps = {None: m}
    return CylMorphism(basis, _coords_from_components(basis.blocks, cat, comps))


def _mismatch(wa: Tuple[Slot, ...], wb: Tuple[Slot, ...]) -> BoundaryMismatch:
    for i in range(max(len(wa), len(wb))):
        x = wa[i] if i < len(wa) else None
        y = wb[i] if i < len(wb) else None
        if x != y:
            return BoundaryMismatch(i, x, y)
    return BoundaryMismatch(-1, None, None)


def compose_cyl(g: CylMorphism, f: CylMorphism) -> CylMorphism:
    """Stack g on top of f and return the normal form of the composite."""
    if f.target != g.source:
        raise _mismatch(f.target.word(), g.source.word())
    cat = f.basis.cat
    basis = cyl_hom(cat, f.source, g.target)
    fc = _ambient_components(f)
    gc = _ambient_components(g)
    if f.source.manifold == INTERVAL:
        comps: Dict[Optional[int], Mor] = {}
        if None in fc and None in gc:
            c = gc[None] @ fc[None]
            if not c.is_zero():
                comps[None] = c
    else:
        comps = {}
        for y, gy in gc.items():
            id_y = identity(cat, Obj(((y,),)))
            for x, fx in fc.items():
                id_x = identity(cat, Obj(((x,),)))
                raw = tensor(gy, id_x) @ tensor(id_y, fx)
                for z, c in _resolve_seam(cat, raw, 2).items():
                    comps[z] = comps[z] + c if z in comps else c
        comps = {z: c for z, c in comps.items() if not c.is_zero()}
    ambient_blocks = basis.ambient.blocks if basis.ambient is not None else basis.blocks
    amb = _coords_from_components(ambient_blocks, cat, comps)
    return CylMorphism(basis, _project_coords(basis, amb, check=False))


def invert_cyl(m: CylMorphism) -> Optional[CylMorphism]:
    """Two-sided inverse, or None when the morphism is not invertible."""
    cat = m.basis.cat
    back = cyl_hom(cat, m.target, m.source)
    n = back.dimension
    ida = identity_cyl(cat, m.source)
    idb = identity_cyl(cat, m.target)
    k = len(ida.coordinates)
    cols = []
    for j in range(n):
        coords = [cat.field.zero] * n
        coords[j] = cat.field.one
        cols.append(compose_cyl(CylMorphism(back, coords), m).coordinates)
    A = Matrix(cat.field, k, n, tuple(cols[j][i] for i in range(k) for j in range(n)))
    sol = solve_linear(A, Matrix.column(cat.field, ida.coordinates))
    if sol is None:
        return None
    cand = CylMorphism(back, tuple(sol.at(i, 0) for i in range(n)))
    if compose_cyl(m, cand) != idb:
        return None
    return cand


# ---------------------------------------------------------------------------
# nets on the cut-open cylinder

def to_coordinates(element: StringNetElement, basis: CylBasis) -> Tuple[Scalar, ...]:
    """Coordinates of a string net with respect to a canonical basis.

    Each diagram is read as a cut-open rectangle: strands beyond the
    boundary word are seam strands, entering first at the bottom and
    leaving last at the top, and are resolved into simple wrap
    components.  Raises BoundaryMismatch when a diagram does not fit the
    basis boundary.
    """
    cat = basis.cat
    if element.cat is not cat:
        raise MalformedDecoration("element from a different category")
    plain = basis.ambient if basis.ambient is not None else basis
    src_word = plain.source.word()
    dst_word = plain.target.word()
    circle = plain.source.manifold == CIRCLE
    comps: Dict[Optional[int], Mor] = {}
    for coeff, diag in element.terms:
        bottom, top = diag.bottom, diag.top
        if circle:
            w = len(bottom) - len(src_word)
            if (
                w < 0
                or len(top) != len(dst_word) + w
                or bottom[w:] != src_word
                or top[: len(dst_word)] != dst_word
                or bottom[:w] != top[len(dst_word) :]
            ):
                raise _mismatch(bottom, src_word)
            pieces = _resolve_seam(cat, diag.evaluate(), w)
        else:
            if bottom != src_word or top != dst_word:
                raise _mismatch(bottom + top, src_word + dst_word)
            pieces = {None: diag.evaluate()}
        for key, c in pieces.items():
            c = c.scale(coeff)
            comps[key] = comps[key] + c if key in comps else c
    amb = _coords_from_components(plain.blocks, cat, comps)
    return _project_coords(basis, amb, check=True)


def _vertex_net(cat: FusionCategoryData, f: Mor) -> StringNetElement:
    """Single-vertex rectangle whose evaluation is exactly f."""
    k = f.src.rank
    if k == 0 and f.dst.rank == 0:
        return StringNetElement(cat, [(entries_vector(f)[0], PlanarDiagram(cat, []))])
    state = fold_first_legs(cat, f, k)
    diag = PlanarDiagram(cat, [[Vertex(state, n_in=k)]])
    return StringNetElement(cat, [(cat.field.one, diag)])


def basis_element_net(basis: CylBasis, index: int) -> StringNetElement:
    """A string-net representative of the index-th canonical basis element.

    For a decorated circle the wrap components are gathered onto one
    seam strand labeled by the sum of the wrap labels involved, so every
    term of the combination has the same boundary word.
    """
    cat = basis.cat
    if not 0 <= index < basis.dimension:
        raise IndexError(index)
    if basis.include is not None:
        plain = basis.ambient
        col = tuple(basis.include.at(i, index) for i in range(basis.include.rows))
        if basis.source.manifold == INTERVAL:
            terms = []
            for i, c in enumerate(col):
                if c.is_zero():
                    continue
                inner = basis_element_net(plain, i)
                terms.extend((c * s, d) for s, d in inner.terms)
            return StringNetElement(cat, terms)
        comps = []
        pos = 0
        for b in plain.blocks:
            chunk = col[pos : pos + b.dim]
            pos += b.dim
            if any(not c.is_zero() for c in chunk):
                comps.append((b.wrap, from_vector(cat, b.src, b.dst, chunk)))
        if not comps:
            raise ArithmeticError("basis column is zero; the retained basis is broken")
        seam = tuple(x for x, _ in comps)
        wa, wb = plain.source.word(), plain.target.word()
        total = zero(cat, Obj((seam,) + wa), Obj(wb + (seam,)))
        id_wa, id_wb = identity(cat, Obj(wa)), identity(cat, Obj(wb))
        for k, (x, fx) in enumerate(comps):
            inj = summand_injection(cat, seam, k)
            proj = summand_projection(cat, seam, k)
            total = total + tensor(id_wb, inj) @ fx @ tensor(proj, id_wa)
        return _vertex_net(cat, total)
    pos = 0
    for b in basis.blocks:
        if index < pos + b.dim:
            offset = index - pos
            coords = [cat.field.zero] * b.dim
            coords[offset] = cat.field.one
            return _vertex_net(cat, from_vector(cat, b.src, b.dst, coords))
        pos += b.dim
    raise IndexError(index)


# ---------------------------------------------------------------------------
# boundary idempotents for algebra-decorated manifolds

def _effective_bimodules(a: Decoration) -> List[BimoduleData]:
    mods = []
    for p in a.points:
        mods.append(p.label if p.orientation == 1 else dual_bimodule(p.label))
    return mods


def _underlying_plain(a: Decoration) -> Decoration:
    """Forget the algebra decoration, keeping one plain point per carrier.

    A circle without points keeps a single point carrying the segment
    algebra itself: the boundary idempotent treats it as the identity
    bimodule of that algebra, which pins down the normal form.
    """
    pts = [MarkedPoint(p.label.underlying, p.orientation) for p in a.points]
    if a.manifold == CIRCLE and not pts:
        pts = [MarkedPoint(a.segments[0].underlying, 1)]
    n = len(pts)
    count = n + 1 if a.manifold == INTERVAL else max(n, 1)
    return Decoration(a.cat, a.manifold, pts, (None,) * count)


def _averaging(cat, A: FrobeniusAlgebraData, M: BimoduleData, N: BimoduleData) -> Mor:
    # insert a separating A-edge between the M and N lines
    split = A.comult @ A.unit
    return tensor(M.right_action, N.left_action) @ tensor_many(
        identity(cat, M.obj), split, identity(cat, N.obj)
    )


def _boundary_idempotent(cat: FusionCategoryData, a: Decoration) -> CylMorphism:
    """The averaging idempotent of a decorated boundary, as an endomorphism
    of the underlying plain decoration: one separating edge per segment,
    with the edge of the cut segment crossing the seam."""
    ua = _underlying_plain(a)
    basis = cyl_hom(cat, ua, ua)
    mods = _effective_bimodules(a)
    if a.manifold == INTERVAL:
        e = identity(cat, Obj(ua.word()))
        for i in range(1, len(mods)):
            rung = _averaging(cat, a.segments[i], mods[i - 1], mods[i])
            before = [identity(cat, m.obj) for m in mods[: i - 1]]
            after = [identity(cat, m.obj) for m in mods[i + 1 :]]
            e = tensor_many(*before, rung, *after) @ e
        return CylMorphism(basis, _coords_from_components(basis.blocks, cat, {None: e}))
    A0 = a.segments[0]
    if not mods:
        mods = [regular_bimodule(A0)]
    ids = [identity(cat, m.obj) for m in mods]
    # bottom: the seam edge acts on the first line from the left
    r = tensor_many(mods[0].left_action, *ids[1:])
    # middle: one separating edge per interior segment
    for i in range(1, len(mods)):
        rung = _averaging(cat, a.segments[i], mods[i - 1], mods[i])
        r = tensor_many(*ids[: i - 1], rung, *ids[i + 1 :]) @ r
    # top: the last line emits the other end of the seam edge
    emit = tensor(mods[-1].right_action, identity(cat, A0.obj)) @ tensor(
        ids[-1], A0.comult @ A0.unit
    )
    r = tensor_many(*ids[:-1], emit) @ r
    comps = _resolve_seam(cat, r, 1)
    return CylMorphism(basis, _coords_from_components(basis.blocks, cat, dict(comps)))


# ---------------------------------------------------------------------------
# idempotent completion

@dataclass(frozen=True, eq=False)
class KarObject:
    """An object of the idempotent completion: a decoration together with
    an exactly idempotent cylinder endomorphism."""

    base: Decoration
    idempotent: CylMorphism


@dataclass(frozen=True)
class KarSplit:
    """Rank factorization of an idempotent inside its endomorphism algebra:
    include maps the abstract rank-dimensional summand into coordinates,
    project retracts onto it; project o include = 1, include o project =
    left multiplication by the idempotent."""

    rank: int
    include: Matrix
    project: Matrix


def end_table(cat: FusionCategoryData, a: Decoration):
    """Endomorphism basis of a decoration plus its left-multiplication
    matrices (composition as the product)."""
    cache = cat.cache("cylinder_end")
    if a in cache:
        return cache[a]
    basis = cyl_hom(cat, a, a)
    n = basis.dimension
    els = []
    for j in range(n):
        coords = [cat.field.zero] * n
        coords[j] = cat.field.one
        els.append(CylMorphism(basis, coords))
    table = []
    for i in range(n):
        cols = [compose_cyl(els[i], els[j]).coordinates for j in range(n)]
        table.append(Matrix(cat.field, n, n, tuple(cols[j][r] for r in range(n) for j in range(n))))
    cache[a] = (basis, els, table)
    return basis, els, table


def karoubi_split(obj: KarObject) -> KarSplit:
    """Split an idempotent by rank-factoring its left-multiplication action
    on the endomorphism algebra of the base decoration."""
    e = obj.idempotent
    cat = e.basis.cat
    square = compose_cyl(e, e)
    if square != e:
        diff = [a - b for a, b in zip(square.coordinates, e.coordinates)]
        bad = next(i for i, v in enumerate(diff) if not v.is_zero())
        raise IdempotentViolation(diff[bad], bad, 0)
    _, _, table = end_table(cat, obj.base)
    n = len(table)
    L = None
    for i, c in enumerate(e.coordinates):
        if c.is_zero():
            continue
        term = table[i].scale(c)
        L = term if L is None else L + term
    if L is None:
        L = Matrix.zeros(cat.field, n, n)
    include, project = rank_factor(L)
    return KarSplit(include.cols, include, project)


def _kar_hom_dimension(x: KarObject, y: KarObject) -> int:
    """Dimension of Hom(x, y) in the completed category."""
    if x.base.manifold != y.base.manifold:
        return 0
    cat = x.base.cat
    basis = cyl_hom(cat, x.base, y.base)
    n = basis.dimension
    cols = []
    for j in range(n):
        coords = [cat.field.zero] * n
        coords[j] = cat.field.one
        h = CylMorphism(basis, coords)
        cols.append(compose_cyl(y.idempotent, compose_cyl(h, x.idempotent)).coordinates)
    A = Matrix(cat.field, n, n, tuple(cols[j][i] for i in range(n) for j in range(n)))
    return rank(A)


def simple_objects(
    cat: FusionCategoryData, decorations: Sequence[Decoration]
) -> List[KarObject]:
    """Pairwise nonisomorphic simple objects of the completed cylinder
    category reachable from the given decorations.

    Splits every endomorphism algebra into primitive idempotents and
    deduplicates across decorations by probing for a nonzero sandwiched
    hom.  Verifies that within each decoration the squared multiplicities
    of the simples sum to the algebra dimension.  NotSemisimple and
    NotSplit from the algebra decomposition propagate.
    """
    reps: List[KarObject] = []
    for a in decorations:
        basis, _, table = end_table(cat, a)
        n = basis.dimension
        if n == 0:
            continue
        idems = primitive_idempotents(table)
        mult: Dict[int, int] = {}
        local_new: List[KarObject] = []
        for col in idems:
            obj = KarObject(a, CylMorphism(basis, tuple(col.at(i, 0) for i in range(n))))
            placed = False
            for ridx, rep in enumerate(reps):
                if _kar_hom_dimension(rep, obj) > 0:
                    mult[ridx] = mult.get(ridx, 0) + 1
                    placed = True
                    break
            if not placed:
                for ridx, rep in enumerate(local_new, start=len(reps)):
                    if _kar_hom_dimension(rep, obj) > 0:
                        mult[ridx] = mult.get(ridx, 0) + 1
                        placed = True
                        break
            if not placed:
                mult[len(reps) + len(local_new)] = 1
                local_new.append(obj)
        reps.extend(local_new)
        if sum(m * m for m in mult.values()) != n:
            raise ArithmeticError(
                "squared multiplicities do not sum to the endomorphism dimension"
            )
    return reps


# ---------------------------------------------------------------------------
# cut rotation and the Dehn twist

def rotate_cut(cat: FusionCategoryData, a: Decoration) -> Tuple[Decoration, CylMorphism]:
    """Move the marked point next to the cut across it.

    Returns the rotated decoration and the invertible morphism that
    transports the last point through the seam to the front.
    """
    if a.manifold != CIRCLE:
        raise MalformedDecoration("cut rotation only applies to circles")
    n = len(a.points)
    if n == 0:
        if a.is_plain:
            return a, identity_cyl(cat, a)
        return a, _virtual_transport(cat, a)
    pts = (a.points[-1],) + a.points[:-1]
    segs = (a.segments[-1],) + a.segments[:-1]
    rotated = Decoration(cat, a.manifold, pts, segs)
    if a.is_plain:
        w = a.word()
        m = identity(cat, Obj((w[-1],) + w))
        comps = _resolve_seam(cat, m, 1)
        basis = cyl_hom(cat, a, rotated)
        return rotated, CylMorphism(
            basis, _coords_from_components(basis.blocks, cat, dict(comps))
        )
    ua, ub = _underlying_plain(a), _underlying_plain(rotated)
    _, transport = rotate_cut(cat, ua)
    if transport.target != ub:
        raise MalformedDecoration("carrier words do not rotate consistently")
    ea = _boundary_idempotent(cat, a)
    eb = _boundary_idempotent(cat, rotated)
    amb = compose_cyl(eb, compose_cyl(transport, ea))
    basis = cyl_hom(cat, a, rotated)
    return rotated, CylMorphism(basis, _project_coords(basis, amb.coordinates, check=False))


def _virtual_transport(cat: FusionCategoryData, a: Decoration) -> CylMorphism:
    # pointless decorated circle: transport the virtual carrier point once
    ua = _underlying_plain(a)
    _, transport = rotate_cut(cat, ua)
    e = _boundary_idempotent(cat, a)
    amb = compose_cyl(e, compose_cyl(transport, e))
    basis = cyl_hom(cat, a, a)
    return CylMorphism(basis, _project_coords(basis, amb.coordinates, check=False))


def dehn_twist(cat: FusionCategoryData, a: Decoration) -> CylMorphism:
    """The Dehn twist of the cylinder over a circle decoration: every
    marked point is transported through the cut once, giving an
    invertible central endomorphism."""
    if a.manifold != CIRCLE:
        raise MalformedDecoration("the Dehn twist lives on the circle")
    if not a.points:
        if a.is_plain:
            return identity_cyl(cat, a)
        return _virtual_transport(cat, a)
    twist = identity_cyl(cat, a)
    current = a
    for _ in a.points:
        current, step = rotate_cut(cat, current)
        twist = compose_cyl(step, twist)
    if current != a:
        raise MalformedDecoration("full rotation did not return the decoration")
    return twist
