"""Comparison functors between decorated and plain cylinder boundaries.

Coloring every segment of a plain boundary with the algebra on the
monoidal unit embeds the plain cylinder category into the decorated
one; forgetting the decoration lands in the idempotent completion of
the plain category.  The two functors form an adjoint equivalence whose
counit is the boundary averaging element itself, and the induced
comparison on cylinder hom spaces is invertible block by block, with
the inverse given explicitly by counit conjugation.  This module builds
both functors, the counit with its inverse, the per-surface comparison
matrices, and the suites that re-derive the equivalence axioms.
"""

import random
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .exactlin import Matrix, Scalar, solve_linear
from .fusion import FusionCategoryData
from .frobenius import (
    FrobeniusAlgebraData,
    object_bimodule,
    regular_bimodule,
    trivial_algebra,
)
from .mor import Mor, Obj, entries_vector, from_vector, identity
from .diagrams import StringNetElement
from .validate import ValidationReport
from .cylinder import (
    CIRCLE,
    INTERVAL,
    CylBasis,
    CylMorphism,
    Decoration,
    KarObject,
    MalformedDecoration,
    MarkedPoint,
    ambient_components,
    ambient_coordinates,
    basis_element_net,
    compose_cyl,
    cyl_hom,
    dehn_twist,
    from_ambient,
    identity_cyl,
    to_coordinates,
)


def _cache(cat: FusionCategoryData) -> dict:
    return cat.cache("transform")


def _triv(cat: FusionCategoryData, triv: Optional[FrobeniusAlgebraData] = None):
    if triv is not None:
        if triv.cat is not cat:
            raise MalformedDecoration("algebra from a different category")
        return triv
    cache = _cache(cat)
    if "triv" not in cache:
        cache["triv"] = trivial_algebra(cat)
    return cache["triv"]


def _is_trivial_algebra(cat: FusionCategoryData, A: FrobeniusAlgebraData) -> bool:
    T = _triv(cat)
    if A is T:
        return True
    return (
        A.underlying == T.underlying
        and A.mult == T.mult
        and A.unit == T.unit
        and A.comult == T.comult
        and A.counit == T.counit
    )


def _is_trivial_point(cat: FusionCategoryData, p: MarkedPoint) -> bool:
    bm = p.label
    if not _is_trivial_algebra(cat, bm.left_algebra):
        return False
    if not _is_trivial_algebra(cat, bm.right_algebra):
        return False
    model = object_bimodule(_triv(cat), bm.underlying)
    return (
        bm.left_action == model.left_action
        and bm.right_action == model.right_action
    )


def is_trivially_colored(a: Decoration) -> bool:
    """True when every segment carries the unit algebra with its canonical
    structure and every point is a plain object seen as a bimodule over it."""
    if a.is_plain:
        return False
    cat = a.cat
    return all(_is_trivial_algebra(cat, s) for s in a.segments) and all(
        _is_trivial_point(cat, p) for p in a.points
    )


def _strip(a: Decoration) -> Decoration:
    # forget a trivial coloring completely; no virtual carrier point
    pts = [MarkedPoint(p.label.underlying, p.orientation) for p in a.points]
    n = len(pts)
    count = n + 1 if a.manifold == INTERVAL else max(n, 1)
    return Decoration(a.cat, a.manifold, pts, (None,) * count)


# ---------------------------------------------------------------------------
# the two functors on objects


def field_functor_object(cat: FusionCategoryData, a: Decoration) -> KarObject:
    """Image of a decorated boundary in the completed plain category.

    A uniformly trivial coloring strips to its underlying plain boundary
    with the identity idempotent, so composing with the trivial coloring
    is the identity on the nose.  Any other decoration keeps its
    underlying plain boundary (a circle without points acquires one
    point carrying the cut segment algebra) together with the boundary
    averaging idempotent; averaging that fails to be idempotent means a
    segment algebra is not separable and is reported, not repaired.
    """
    if a.cat is not cat:
        raise MalformedDecoration("decoration from a different category")
    if a.is_plain:
        raise MalformedDecoration("expected an algebra-decorated boundary")
    cache = _cache(cat)
    key = ("f", a)
    if key in cache:
        return cache[key]
    if is_trivially_colored(a):
        base = _strip(a)
        e = identity_cyl(cat, base)
    else:
        dec_id = identity_cyl(cat, a)
        plain = dec_id.basis.ambient
        base = plain.source
        e = CylMorphism(plain, ambient_coordinates(dec_id))
        if compose_cyl(e, e) != e:
            raise ValueError(
                "boundary averaging is not idempotent; a segment algebra "
                "fails separability"
            )
    obj = KarObject(base, e)
    cache[key] = obj
    return obj


def iota_object(
    cat: FusionCategoryData,
    a: Decoration,
    triv: Optional[FrobeniusAlgebraData] = None,
) -> Decoration:
    """Color a plain boundary trivially: every segment gets the algebra on
    the unit and every point keeps its slot, read as a bimodule over it.

    Repeated calls return the identical decoration, so the
    identity-sensitive decoration equality and the hom caches line up.
    """
    if a.cat is not cat:
        raise MalformedDecoration("decoration from a different category")
    if not a.is_plain:
        raise MalformedDecoration("expected a plain boundary")
    alg = _triv(cat, triv)
    cache = _cache(cat)
    key = ("iota", a, id(alg))
    if key in cache:
        return cache[key]
    pts = [
        MarkedPoint(object_bimodule(alg, p.label), p.orientation) for p in a.points
    ]
    count = len(pts) + 1 if a.manifold == INTERVAL else max(len(pts), 1)
    dec = Decoration(cat, a.manifold, pts, (alg,) * count)
    cache[key] = dec
    return dec


# ---------------------------------------------------------------------------
# moving a morphism across the virtual unit-carrier strand
#
# A circle without marked points normalizes with one virtual point, so
# the plain and colored presentations differ by a unit-carrier strand
# next to the seam.  The canonical one-dimensional hom vectors hide and
# reveal that strand; they are normalized here so both round trips are
# exact identities.


def _unit_strand(cat: FusionCategoryData, x: int):
    cache = _cache(cat)
    key = ("unit-strand", x)
    if key in cache:
        return cache[key]
    one = [cat.field.one]
    bare = Obj(((x,),))
    after = Obj(((x,), (0,)))
    before = Obj(((0,), (x,)))
    ins_r = from_vector(cat, bare, after, one)
    del_r = from_vector(cat, after, bare, one)
    del_r = del_r.scale(_ratio(del_r @ ins_r, identity(cat, bare)).inverse())
    ins_l = from_vector(cat, bare, before, one)
    del_l = from_vector(cat, before, bare, one)
    del_l = del_l.scale(_ratio(del_l @ ins_l, identity(cat, bare)).inverse())
    out = (ins_r, del_r, ins_l, del_l)
    cache[key] = out
    return out


def _ratio(f: Mor, g: Mor) -> Scalar:
    # f == c * g in a one-dimensional hom space
    fe, ge = entries_vector(f), entries_vector(g)
    c = None
    for u, v in zip(fe, ge):
        if not v.is_zero():
            c = u / v
            break
    if c is None:
        raise ArithmeticError("comparison against a zero morphism")
    if any(not (u - v * c).is_zero() for u, v in zip(fe, ge)):
        raise ArithmeticError("morphisms are not proportional")
    return c


def _block_coords(
    blocks, cat: FusionCategoryData, comps: Dict[Optional[int], Mor]
) -> Tuple[Scalar, ...]:
    out: List[Scalar] = []
    z = cat.field.zero
    seen = set()
    for b in blocks:
        c = comps.get(b.wrap)
        seen.add(b.wrap)
        if c is None:
            out.extend([z] * b.dim)
        else:
            if c.src != b.src or c.dst != b.dst:
                raise MalformedDecoration("component does not fit its block")
            out.extend(entries_vector(c))
    for w, c in comps.items():
        if w not in seen and not all(v.is_zero() for v in entries_vector(c)):
            raise MalformedDecoration(f"component on missing wrap {w}")
    return tuple(out)


def _retube(
    m: CylMorphism, out: CylBasis, add_src: bool, add_dst: bool,
    drop_src: bool, drop_dst: bool,
) -> CylMorphism:
    # rewrite over blocks that gained or lost the virtual unit strand
    cat = m.basis.cat
    comps = {}
    for x, mx in ambient_components(m).items():
        ins_r, del_r, ins_l, del_l = _unit_strand(cat, x)
        m2 = mx
        if add_src:
            m2 = m2 @ del_r
        if drop_src:
            m2 = m2 @ ins_r
        if add_dst:
            m2 = ins_l @ m2
        if drop_dst:
            m2 = del_l @ m2
        comps[x] = m2
    return CylMorphism(out, _block_coords(out.blocks, cat, comps))


# ---------------------------------------------------------------------------
# the two functors on morphisms


def iota_morphism(
    cat: FusionCategoryData,
    f: CylMorphism,
    triv: Optional[FrobeniusAlgebraData] = None,
) -> CylMorphism:
    """Trivially colored image of a plain cylinder morphism.

    With marked points present the plain blocks coincide and the
    coordinates transfer verbatim; a circle without points first hides
    its seam behind the canonical unit-carrier strand.
    """
    basis = f.basis
    if basis.include is not None:
        raise MalformedDecoration("expected a plain morphism")
    ia = iota_object(cat, basis.source, triv)
    ib = iota_object(cat, basis.target, triv)
    dec = cyl_hom(cat, ia, ib)
    plain = dec.ambient
    if plain.source == basis.source and plain.target == basis.target:
        return from_ambient(dec, f.coordinates, check=True)
    gains_src = len(plain.source.word()) != len(basis.source.word())
    gains_dst = len(plain.target.word()) != len(basis.target.word())
    lifted = _retube(f, plain, gains_src, gains_dst, False, False)
    return from_ambient(dec, lifted.coordinates, check=True)


def field_functor_morphism(cat: FusionCategoryData, f: CylMorphism) -> CylMorphism:
    """Plain representative of a decorated cylinder morphism, written
    between the images of its boundaries.

    Between uniformly trivial boundaries the representative is rewritten
    over the stripped boundaries, making the composite with the trivial
    coloring the identity; any other boundary keeps its underlying plain
    form, so the image is the averaging-invariant representative itself.
    """
    basis = f.basis
    if basis.include is None:
        raise MalformedDecoration("expected a decorated morphism")
    fs = field_functor_object(cat, basis.source)
    ft = field_functor_object(cat, basis.target)
    plain = basis.ambient
    rep = CylMorphism(plain, ambient_coordinates(f))
    if plain.source == fs.base and plain.target == ft.base:
        out = cyl_hom(cat, fs.base, ft.base)
        return CylMorphism(out, rep.coordinates)
    out = cyl_hom(cat, fs.base, ft.base)
    drop_src = plain.source != fs.base
    drop_dst = plain.target != ft.base
    return _retube(rep, out, False, False, drop_src, drop_dst)


def iota_surface(
    cat: FusionCategoryData,
    net: StringNetElement,
    source: Decoration,
    target: Decoration,
    triv: Optional[FrobeniusAlgebraData] = None,
) -> CylMorphism:
    """Read a string net over plain boundaries as a morphism between the
    trivially colored ones.  The net itself is unchanged; triviality of
    the coloring means its evaluation runs over the same blocks."""
    plain = cyl_hom(cat, source, target)
    coords = to_coordinates(net, plain)
    return iota_morphism(cat, CylMorphism(plain, coords), triv)


# ---------------------------------------------------------------------------
# the counit of the equivalence


def counit(
    cat: FusionCategoryData,
    a: Decoration,
    triv: Optional[FrobeniusAlgebraData] = None,
) -> CylMorphism:
    """Comparison from the trivially colored image back to a decorated
    boundary: the boundary averaging element, read as a morphism into
    the decoration.  Its plain representative equals that of the
    decorated identity."""
    fa = field_functor_object(cat, a)
    ia = iota_object(cat, fa.base, triv)
    basis = cyl_hom(cat, ia, a)
    amb = ambient_coordinates(identity_cyl(cat, a))
    return from_ambient(basis, amb, check=True)


def counit_inverse(
    cat: FusionCategoryData,
    a: Decoration,
    triv: Optional[FrobeniusAlgebraData] = None,
) -> CylMorphism:
    """The two-sided inverse of the counit: the same averaging element read
    in the other direction."""
    fa = field_functor_object(cat, a)
    ia = iota_object(cat, fa.base, triv)
    basis = cyl_hom(cat, a, ia)
    amb = ambient_coordinates(identity_cyl(cat, a))
    return from_ambient(basis, amb, check=True)


# ---------------------------------------------------------------------------
# refinement of the averaging spine


def refine_decoration(cat: FusionCategoryData, a: Decoration) -> Decoration:
    """Split every nontrivial segment with a point carrying the segment
    algebra acting on itself.  The completion image changes only up to
    isomorphism; ``kar_iso_witness`` finds the witness."""
    if a.cat is not cat:
        raise MalformedDecoration("decoration from a different category")
    if a.is_plain:
        raise MalformedDecoration("expected an algebra-decorated boundary")
    cache = _cache(cat)
    key = ("refine", a)
    if key in cache:
        return cache[key]
    points: List[MarkedPoint] = []
    segments: List[FrobeniusAlgebraData] = []
    n = len(a.points)
    if a.manifold == CIRCLE and n == 0:
        seg = a.segments[0]
        if _is_trivial_algebra(cat, seg):
            dec = a
        else:
            dec = Decoration(
                cat, CIRCLE, [MarkedPoint(regular_bimodule(seg), 1)], (seg,)
            )
    else:
        count = n + 1 if a.manifold == INTERVAL else n
        for i in range(count):
            seg = a.segments[i]
            if _is_trivial_algebra(cat, seg):
                segments.append(seg)
            else:
                segments.extend((seg, seg))
                points.append(MarkedPoint(regular_bimodule(seg), 1))
            if i < n:
                points.append(a.points[i])
        dec = Decoration(cat, a.manifold, points, tuple(segments))
    cache[key] = dec
    return dec


def kar_iso_witness(
    x: KarObject, y: KarObject
) -> Optional[Tuple[CylMorphism, CylMorphism]]:
    """Search a two-sided isomorphism between two completion objects.

    Candidates are small integer combinations of the sandwiched hom
    basis; for each the inverse is solved for exactly.  Returns (u, v)
    with v o u and u o v the two idempotents, or None when the bounded
    search finds nothing.
    """
    if x.base.manifold != y.base.manifold:
        return None
    cat = x.base.cat
    field = cat.field
    ex, ey = x.idempotent, y.idempotent
    fwd = cyl_hom(cat, x.base, y.base)
    bwd = cyl_hom(cat, y.base, x.base)

    def sandwiched(basis, left, right):
        out = []
        for k in range(basis.dimension):
            coords = [field.zero] * basis.dimension
            coords[k] = field.one
            s = compose_cyl(left, compose_cyl(CylMorphism(basis, coords), right))
            if not s.is_zero() and s not in out:
                out.append(s)
        return out

    fvecs = sandwiched(fwd, ey, ex)
    bvecs = sandwiched(bwd, ex, ey)
    if not fvecs or not bvecs:
        return None
    candidates = list(fvecs)
    for i in range(len(fvecs)):
        for j in range(i + 1, len(fvecs)):
            candidates.append(fvecs[i] + fvecs[j])
            candidates.append(fvecs[i] - fvecs[j])
    target = Matrix.column(field, ex.coordinates + ey.coordinates)
    for u in candidates:
        cols = []
        for m in bvecs:
            vu = compose_cyl(m, u).coordinates
            uv = compose_cyl(u, m).coordinates
            cols.append(vu + uv)
        system = _matrix_from_columns(field, len(cols[0]), cols)
        sol = solve_linear(system, target)
        if sol is None:
            continue
        v = None
        for m, coeff in zip(bvecs, (sol.at(i, 0) for i in range(sol.rows))):
            term = m.scale(coeff)
            v = term if v is None else v + term
        return u, v
    return None


def _matrix_from_columns(field, rows: int, cols: Sequence[Sequence[Scalar]]) -> Matrix:
    flat = []
    for r in range(rows):
        for c in cols:
            flat.append(c[r])
    return Matrix(field, rows, len(cols), tuple(flat))


# ---------------------------------------------------------------------------
# per-surface comparison jobs


@dataclass(frozen=True)
class SurfaceJob:
    """One correlator comparison: a decorated cylinder hom space read both
    through its string nets and through the completion.

    The carrier names the surface the blocks live on: ``disk`` and
    ``rectangle`` for interval boundaries (a disk reads from the empty
    boundary), ``annulus`` for circles.
    """

    name: str
    carrier: str
    source: Decoration
    target: Decoration

    def __post_init__(self):
        if self.carrier not in ("disk", "rectangle", "annulus"):
            raise ValueError(f"unknown carrier {self.carrier!r}")
        want = CIRCLE if self.carrier == "annulus" else INTERVAL
        if self.source.manifold != want or self.target.manifold != want:
            raise ValueError(f"a {self.carrier} job needs {want} boundaries")
        if self.source.is_plain or self.target.is_plain:
            raise ValueError("jobs compare algebra-decorated boundaries")
        if self.source.cat is not self.target.cat:
            raise ValueError("boundaries from different categories")
        if self.carrier == "disk" and self.source.points:
            raise ValueError("a disk job reads from the empty boundary")

    @property
    def cat(self) -> FusionCategoryData:
        return self.source.cat


@dataclass(frozen=True)
class SewingPlan:
    """Two jobs stacked along a shared boundary; the composite surface is
    the pair of pants collapsed to its sewing data."""

    name: str
    first: SurfaceJob
    second: SurfaceJob

    def __post_init__(self):
        if self.second.source != self.first.target:
            raise ValueError("the second job must start on the first job's target")

    def composite(self) -> SurfaceJob:
        carrier = self.first.carrier
        if carrier == "disk" and self.second.carrier == "rectangle":
            carrier = "disk"
        return SurfaceJob(
            f"{self.name}-composite", carrier, self.first.source, self.second.target
        )


def ucor(job: SurfaceJob) -> Matrix:
    """Matrix of the correlator comparison on a job's hom space.

    Column by column, the canonical decorated basis element is emitted
    as a string net, read back over the plain boundary blocks, and
    projected onto the completion summand.  Every route agreeing is
    exactly the statement that this matrix and the counit-conjugated
    inverse multiply to the identity.
    """
    cat = job.cat
    basis = cyl_hom(cat, job.source, job.target)
    cols = []
    for i in range(basis.dimension):
        net = basis_element_net(basis, i)
        amb = to_coordinates(net, basis.ambient)
        cols.append(from_ambient(basis, amb, check=True).coordinates)
    return _matrix_from_columns(cat.field, basis.dimension, cols)


def _phi_elements(
    job: SurfaceJob, triv: Optional[FrobeniusAlgebraData] = None
) -> List[CylMorphism]:
    cat = job.cat
    basis = cyl_hom(cat, job.source, job.target)
    eps_in = counit_inverse(cat, job.source, triv)
    eps_out = counit(cat, job.target, triv)
    out = []
    for j in range(basis.dimension):
        rep = field_functor_morphism(cat, _unit_vector(basis, j))
        colored = iota_morphism(cat, rep, triv)
        out.append(compose_cyl(eps_out, compose_cyl(colored, eps_in)))
    return out


def phi_inverse(
    job: SurfaceJob, triv: Optional[FrobeniusAlgebraData] = None
) -> Matrix:
    """Matrix of the explicit inverse comparison: each completion basis
    element is colored trivially and conjugated by the counit on both
    sides, landing back in the decorated hom space."""
    cat = job.cat
    basis = cyl_hom(cat, job.source, job.target)
    cols = [m.coordinates for m in _phi_elements(job, triv)]
    return _matrix_from_columns(cat.field, basis.dimension, cols)


# ---------------------------------------------------------------------------
# verification suites


def check_field_equivalence(
    cat: FusionCategoryData,
    decorations: Sequence[Decoration],
    triv: Optional[FrobeniusAlgebraData] = None,
    seed: int = 0,
    rounds: int = 3,
) -> ValidationReport:
    """Adjoint-equivalence suite over the given decorated boundaries.

    Codes: ``section`` (composing the two functors is the identity on
    the nose), ``counit`` (two-sided invertibility), ``triangle`` (both
    triangle laws), ``naturality`` (the counit square on seeded random
    morphisms, including mixed-boundary ones).
    """
    report = ValidationReport("field equivalence")
    rng = random.Random(seed)
    for idx, a in enumerate(decorations):
        tag = f"boundary {idx}"
        fa = field_functor_object(cat, a)
        ia = iota_object(cat, fa.base, triv)
        fia = field_functor_object(cat, ia)
        if fia.base != fa.base:
            report.add("section", tag, "stripped boundary drifts under recoloring")
        if fia.idempotent != identity_cyl(cat, fia.base):
            report.add("section", tag, "recolored image is not split by the identity")
        plain_end = cyl_hom(cat, fa.base, fa.base)
        for r in range(rounds):
            g = _random_element(plain_end, rng)
            back = field_functor_morphism(cat, iota_morphism(cat, g, triv))
            if back != g:
                report.add(
                    "section", tag, f"round {r}: morphism round trip is not exact"
                )
        eps = counit(cat, a, triv)
        eps_inv = counit_inverse(cat, a, triv)
        if compose_cyl(eps, eps_inv) != identity_cyl(cat, a):
            report.add("counit", tag, "counit o inverse is not the identity")
        if compose_cyl(eps_inv, eps) != iota_morphism(cat, fa.idempotent, triv):
            report.add("counit", tag, "inverse o counit is not the colored idempotent")
        if field_functor_morphism(cat, eps) != fa.idempotent:
            report.add("triangle", tag, "the functor does not flatten the counit")
        if counit(cat, ia, triv) != identity_cyl(cat, ia):
            report.add("triangle", tag, "counit of a trivial coloring is not identity")
        dec_end = cyl_hom(cat, a, a)
        for r in range(rounds):
            g = _random_element(dec_end, rng)
            lhs = compose_cyl(g, eps)
            rhs = compose_cyl(eps, iota_morphism(cat, field_functor_morphism(cat, g), triv))
            if lhs != rhs:
                report.add("naturality", tag, f"round {r}: counit square fails")
    for idx in range(len(decorations) - 1):
        a, b = decorations[idx], decorations[idx + 1]
        if a.manifold != b.manifold:
            continue
        basis = cyl_hom(cat, a, b)
        if basis.dimension == 0:
            continue
        tag = f"boundaries {idx},{idx + 1}"
        eps_a = counit(cat, a, triv)
        eps_b = counit(cat, b, triv)
        for r in range(rounds):
            g = _random_element(basis, rng)
            lhs = compose_cyl(g, eps_a)
            rhs = compose_cyl(eps_b, iota_morphism(cat, field_functor_morphism(cat, g), triv))
            if lhs != rhs:
                report.add("naturality", tag, f"round {r}: mixed counit square fails")
    return report


def _random_element(basis: CylBasis, rng: random.Random) -> CylMorphism:
    from fractions import Fraction

    f = basis.cat.field
    coords = [
        f.from_rational(Fraction(rng.randint(-4, 4), rng.randint(1, 3)))
        for _ in range(basis.dimension)
    ]
    return CylMorphism(basis, coords)


def check_ucor_iso(
    job: SurfaceJob, triv: Optional[FrobeniusAlgebraData] = None
) -> ValidationReport:
    """Isomorphism suite for one job.

    Codes: ``inverse`` (the comparison and its counit-conjugated inverse
    multiply to the identity both ways), ``absorption`` (conjugation
    leaves the plain representative of every basis element unchanged),
    ``unitality`` (on an endo job the identity is fixed).
    """
    report = ValidationReport(f"job {job.name}")
    cat = job.cat
    basis = cyl_hom(cat, job.source, job.target)
    U = ucor(job)
    P = phi_inverse(job, triv)
    eye = Matrix.identity(cat.field, basis.dimension)
    if U @ P != eye:
        report.add("inverse", job.name, "comparison o inverse is not the identity")
    if P @ U != eye:
        report.add("inverse", job.name, "inverse o comparison is not the identity")
    for j, m in enumerate(_phi_elements(job, triv)):
        expected = tuple(basis.include.at(i, j) for i in range(basis.include.rows))
        if ambient_coordinates(m) != expected:
            report.add(
                "absorption", job.name, f"element {j}: averaging is not absorbed"
            )
    if job.source == job.target:
        ident = identity_cyl(cat, job.source)
        col = Matrix.column(cat.field, ident.coordinates)
        if U @ col != col:
            report.add("unitality", job.name, "the identity element moves")
    return report


def sewing_compatible(
    plan: SewingPlan, triv: Optional[FrobeniusAlgebraData] = None
) -> ValidationReport:
    """Compatibility of the comparison with stacking two jobs along their
    shared boundary: comparing then composing equals composing then
    comparing, on every pair of basis elements."""
    report = ValidationReport(f"plan {plan.name}")
    cat = plan.first.cat
    lower = cyl_hom(cat, plan.first.source, plan.first.target)
    upper = cyl_hom(cat, plan.second.source, plan.second.target)
    comp = plan.composite()
    whole = cyl_hom(cat, comp.source, comp.target)
    U1, U2, Uc = ucor(plan.first), ucor(plan.second), ucor(comp)
    field = cat.field
    for i in range(lower.dimension):
        bi = _unit_vector(lower, i)
        for j in range(upper.dimension):
            cj = _unit_vector(upper, j)
            both = compose_cyl(cj, bi)
            lhs = Uc @ Matrix.column(field, both.coordinates)
            img_b = CylMorphism(lower, _column_tuple(U1, i))
            img_c = CylMorphism(upper, _column_tuple(U2, j))
            rhs = compose_cyl(img_c, img_b)
            if tuple(lhs.at(r, 0) for r in range(lhs.rows)) != rhs.coordinates:
                report.add(
                    "sewing", plan.name, f"pair ({i},{j}): routes disagree"
                )
    iso = check_ucor_iso(comp, triv)
    for finding in iso.findings:
        report.add(finding.code, f"{plan.name}: {finding.instance}", finding.message)
    return report


def _unit_vector(basis: CylBasis, index: int) -> CylMorphism:
    coords = [basis.cat.field.zero] * basis.dimension
    coords[index] = basis.cat.field.one
    return CylMorphism(basis, coords)


def _column_tuple(m: Matrix, j: int) -> Tuple[Scalar, ...]:
    return tuple(m.at(i, j) for i in range(m.rows))


def twist_equivariant(cat: FusionCategoryData, a: Decoration) -> ValidationReport:
    """Equivariance of the comparison under the Dehn twist of the circle:
    flattening the decorated twist equals conjugating the plain twist by
    the averaging idempotent."""
    report = ValidationReport("twist equivariance")
    if a.manifold != CIRCLE or a.is_plain:
        raise MalformedDecoration("expected an algebra-decorated circle")
    fa = field_functor_object(cat, a)
    decorated = field_functor_morphism(cat, dehn_twist(cat, a))
    plain = dehn_twist(cat, fa.base)
    conjugated = compose_cyl(fa.idempotent, compose_cyl(plain, fa.idempotent))
    if decorated != conjugated:
        report.add("twist", repr(a), "decorated and conjugated twists disagree")
    return report
