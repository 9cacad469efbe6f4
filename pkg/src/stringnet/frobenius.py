"""Separable symmetric algebra objects and their bimodules.

Algebras and bimodules arrive as raw coordinate data out of input
files, so nothing about them is trusted: every axiom is re-derived by
composing the stored morphisms and comparing results entry by entry.
Relative tensor products are computed by splitting the averaging
idempotent exactly; the split maps are kept on the result because the
downstream functors need the same choice again.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Mapping, Optional, Sequence, Tuple

from .exactlin import Matrix, Scalar, invert, nullspace, rank_factor
from .fusion import FusionCategoryData
from .mor import (
    EMPTY,
    Mor,
    Obj,
    coev,
    coev_primed,
    entries_vector,
    ev,
    ev_primed,
    from_vector,
    hom_space_basis,
    identity,
    summand_injection,
    summand_projection,
    tensor,
    tensor_many,
    zero,
)
from .validate import ValidationReport


class AlgebraMismatch(ValueError):
    """Bimodule operands whose algebras do not line up."""


# -- assembling morphisms from sparse component tables ----------------------


def _line(cat: FusionCategoryData, src: Sequence[int], dst: Sequence[int]) -> Mor:
    # canonical generator of a hom space that must be one-dimensional
    basis = hom_space_basis(cat, Obj.of(*src), Obj.of(*dst))
    if len(basis) != 1:
        raise ValueError(
            f"component hom space {src} -> {dst} has dimension {len(basis)}; "
            "sparse algebra components need a one-dimensional target"
        )
    return basis[0]


def _two_to_one(
    cat: FusionCategoryData,
    a_slot: Tuple[int, ...],
    b_slot: Tuple[int, ...],
    out_slot: Tuple[int, ...],
    comps: Mapping[Tuple[int, int, int], Scalar],
) -> Mor:
    out = zero(cat, Obj((a_slot, b_slot)), Obj((out_slot,)))
    for (i, j, k), v in sorted(comps.items()):
        piece = _line(cat, (a_slot[i], b_slot[j]), (out_slot[k],))
        wrapped = summand_injection(cat, out_slot, k) @ piece @ tensor(
            summand_projection(cat, a_slot, i),
            summand_projection(cat, b_slot, j),
        )
        out = out + wrapped.scale(v)
    return out


def _one_to_two(
    cat: FusionCategoryData,
    in_slot: Tuple[int, ...],
    a_slot: Tuple[int, ...],
    b_slot: Tuple[int, ...],
    comps: Mapping[Tuple[int, int, int], Scalar],
) -> Mor:
    out = zero(cat, Obj((in_slot,)), Obj((a_slot, b_slot)))
    for (i, j, k), v in sorted(comps.items()):
        piece = _line(cat, (in_slot[i],), (a_slot[j], b_slot[k]))
        wrapped = tensor(
            summand_injection(cat, a_slot, j),
            summand_injection(cat, b_slot, k),
        ) @ piece @ summand_projection(cat, in_slot, i)
        out = out + wrapped.scale(v)
    return out


def _from_unit(
    cat: FusionCategoryData, slot: Tuple[int, ...], comps: Mapping[int, Scalar]
) -> Mor:
    out = zero(cat, EMPTY, Obj((slot,)))
    for i, v in sorted(comps.items()):
        piece = summand_injection(cat, slot, i) @ _line(cat, (), (slot[i],))
        out = out + piece.scale(v)
    return out


def _to_unit(
    cat: FusionCategoryData, slot: Tuple[int, ...], comps: Mapping[int, Scalar]
) -> Mor:
    out = zero(cat, Obj((slot,)), EMPTY)
    for i, v in sorted(comps.items()):
        piece = _line(cat, (slot[i],), ()) @ summand_projection(cat, slot, i)
        out = out + piece.scale(v)
    return out


# -- algebras ---------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FrobeniusAlgebraData:
    """Algebra-and-coalgebra object, stored as four unchecked morphisms.

    Instances are compared by identity: the bimodule layer passes
    references around, and two structurally equal algebras still count
    as different decoration labels.
    """

    cat: FusionCategoryData
    name: str
    underlying: Tuple[int, ...]
    mult: Mor
    unit: Mor
    comult: Mor
    counit: Mor

    @property
    def obj(self) -> Obj:
        return Obj((self.underlying,))


def algebra_from_spec(cat: FusionCategoryData, spec) -> FrobeniusAlgebraData:
    """Build the morphisms of a parsed algebra block."""
    carrier = tuple(spec.carrier)
    return FrobeniusAlgebraData(
        cat,
        spec.name,
        carrier,
        mult=_two_to_one(cat, carrier, carrier, carrier, spec.mult),
        unit=_from_unit(cat, carrier, spec.unit_map),
        comult=_one_to_two(cat, carrier, carrier, carrier, spec.comult),
        counit=_to_unit(cat, carrier, spec.counit),
    )


def trivial_algebra(cat: FusionCategoryData) -> FrobeniusAlgebraData:
    """The distinguished algebra on the monoidal unit."""
    u = (cat.unit,)
    one = cat.field.one
    return FrobeniusAlgebraData(
        cat,
        "triv",
        u,
        mult=_two_to_one(cat, u, u, u, {(0, 0, 0): one}),
        unit=_from_unit(cat, u, {0: one}),
        comult=_one_to_two(cat, u, u, u, {(0, 0, 0): one}),
        counit=_to_unit(cat, u, {0: one}),
    )


def _first_difference(a: Mor, b: Mor) -> Optional[int]:
    va, vb = entries_vector(a), entries_vector(b)
    for i, (x, y) in enumerate(zip(va, vb)):
        if x != y:
            return i
    return None


def _expect_equal(report: ValidationReport, code: str, tag, a: Mor, b: Mor):
    i = _first_difference(a, b)
    if i is not None:
        report.add(code, tag, f"{code} fails at coordinate {i} ({tag})")


def check_dssfa(A: FrobeniusAlgebraData) -> ValidationReport:
    """Re-derive every axiom of the algebra from its stored morphisms.

    An empty report means valid.  Codes: associativity, unitality,
    coassociativity, counitality, frobenius, separability, symmetry.
    """
    cat = A.cat
    report = ValidationReport(A.name)
    ida = identity(cat, A.obj)
    m, u, d, e = A.mult, A.unit, A.comult, A.counit

    _expect_equal(report, "associativity", A.name,
                  m @ tensor(m, ida), m @ tensor(ida, m))
    _expect_equal(report, "unitality", "left", m @ tensor(u, ida), ida)
    _expect_equal(report, "unitality", "right", m @ tensor(ida, u), ida)
    _expect_equal(report, "coassociativity", A.name,
                  tensor(d, ida) @ d, tensor(ida, d) @ d)
    _expect_equal(report, "counitality", "left", tensor(e, ida) @ d, ida)
    _expect_equal(report, "counitality", "right", tensor(ida, e) @ d, ida)

    middle = d @ m
    _expect_equal(report, "frobenius", "left",
                  tensor(ida, m) @ tensor(d, ida), middle)
    _expect_equal(report, "frobenius", "right",
                  tensor(m, ida) @ tensor(ida, d), middle)
    _expect_equal(report, "separability", A.name, m @ d, ida)

    # the two pairing-induced maps into the dual object must agree
    carrier = A.underlying
    pairing = e @ m
    dual_id = identity(cat, Obj((tuple(cat.dual[b] for b in carrier),)))
    left_map = tensor(pairing, dual_id) @ tensor(ida, coev(cat, carrier))
    right_map = tensor(dual_id, pairing) @ tensor(coev_primed(cat, carrier), ida)
    _expect_equal(report, "symmetry", A.name, left_map, right_map)
    return report


# -- bimodules --------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class BimoduleData:
    """Object with a left and a right algebra action.

    left_action lives in Hom(A (x) M, M) with the algebra leg first;
    right_action in Hom(M (x) B, M) with the algebra leg last.
    Compared by identity, like the algebras.
    """

    left_algebra: FrobeniusAlgebraData
    right_algebra: FrobeniusAlgebraData
    underlying: Tuple[int, ...]
    left_action: Mor
    right_action: Mor

    @property
    def cat(self) -> FusionCategoryData:
        return self.left_algebra.cat

    @property
    def obj(self) -> Obj:
        return Obj((self.underlying,))


def bimodule_from_spec(
    cat: FusionCategoryData,
    spec,
    algebras: Mapping[str, FrobeniusAlgebraData],
) -> BimoduleData:
    left = algebras[spec.left]
    right = algebras[spec.right]
    carrier = tuple(spec.carrier)
    return BimoduleData(
        left,
        right,
        carrier,
        left_action=_two_to_one(cat, left.underlying, carrier, carrier,
                                spec.left_action),
        right_action=_two_to_one(cat, carrier, right.underlying, carrier,
                                 spec.right_action),
    )


def regular_bimodule(A: FrobeniusAlgebraData) -> BimoduleData:
    """The algebra acting on itself from both sides."""
    return BimoduleData(A, A, A.underlying, A.mult, A.mult)


def object_bimodule(
    triv: FrobeniusAlgebraData, carrier: Sequence[int]
) -> BimoduleData:
    """A plain object of C as a bimodule over the algebra on the unit.

    Both actions forget the algebra through its counit, which is an
    action precisely because that algebra has trivial structure.
    """
    cat = triv.cat
    carrier = tuple(carrier)
    m = identity(cat, Obj((carrier,)))
    return BimoduleData(
        triv,
        triv,
        carrier,
        left_action=tensor(triv.counit, m),
        right_action=tensor(m, triv.counit),
    )


def check_bimodule(M: BimoduleData) -> ValidationReport:
    """Module axioms and the commuting-actions axiom, re-derived."""
    cat = M.cat
    report = ValidationReport(f"bimodule over ({M.left_algebra.name}, "
                              f"{M.right_algebra.name})")
    idm = identity(cat, M.obj)
    A, B = M.left_algebra, M.right_algebra
    ida, idb = identity(cat, A.obj), identity(cat, B.obj)
    lam, rho = M.left_action, M.right_action

    _expect_equal(report, "left-associativity", A.name,
                  lam @ tensor(A.mult, idm), lam @ tensor(ida, lam))
    _expect_equal(report, "left-unitality", A.name, lam @ tensor(A.unit, idm), idm)
    _expect_equal(report, "right-associativity", B.name,
                  rho @ tensor(idm, B.mult), rho @ tensor(rho, idb))
    _expect_equal(report, "right-unitality", B.name, rho @ tensor(idm, B.unit), idm)
    _expect_equal(report, "commuting-actions", (A.name, B.name),
                  lam @ tensor(ida, rho), rho @ tensor(lam, idb))
    return report


def dual_bimodule(M: BimoduleData) -> BimoduleData:
    """The dual carrier with the mate actions: algebras swap sides.

    On elements the left B-action is precomposition with the old right
    action and vice versa; the zig-zag identities make both module
    axioms carry over exactly.
    """
    cat = M.cat
    m = M.underlying
    dual_carrier = tuple(cat.dual[b] for b in m)
    idd = identity(cat, Obj((dual_carrier,)))
    ida = identity(cat, M.left_algebra.obj)
    idb = identity(cat, M.right_algebra.obj)
    left = tensor(idd, ev_primed(cat, m)) @ tensor_many(
        idd, M.right_action, idd
    ) @ tensor_many(coev_primed(cat, m), idb, idd)
    right = tensor(ev(cat, m), idd) @ tensor_many(
        idd, M.left_action, idd
    ) @ tensor_many(idd, ida, coev(cat, m))
    return BimoduleData(M.right_algebra, M.left_algebra, dual_carrier, left, right)


# -- bimodule morphisms -----------------------------------------------------


@dataclass(frozen=True, eq=False)
class BimoduleMorphism:
    source: BimoduleData
    target: BimoduleData
    vector: Tuple[Scalar, ...]

    @property
    def mor(self) -> Mor:
        return from_vector(
            self.source.cat, self.source.obj, self.target.obj, self.vector
        )


def _matrix_from_columns(field, columns: List[Tuple[Scalar, ...]], rows: int) -> Matrix:
    entries = tuple(col[i] for i in range(rows) for col in columns)
    return Matrix(field, rows, len(columns), entries)


def bimodule_hom_space(M: BimoduleData, N: BimoduleData) -> List[BimoduleMorphism]:
    """Basis of the intertwiner space between two bimodules.

    Solves the linear system cutting Hom_C(M, N) down to the maps that
    commute with both actions.
    """
    if M.left_algebra is not N.left_algebra or M.right_algebra is not N.right_algebra:
        raise AlgebraMismatch(
            f"bimodules over ({M.left_algebra.name}, {M.right_algebra.name}) "
            f"and ({N.left_algebra.name}, {N.right_algebra.name}) share no hom space"
        )
    cat = M.cat
    ida = identity(cat, M.left_algebra.obj)
    idb = identity(cat, M.right_algebra.obj)
    ambient = hom_space_basis(cat, M.obj, N.obj)
    if not ambient:
        return []
    columns = []
    for f in ambient:
        left = f @ M.left_action - N.left_action @ tensor(ida, f)
        right = f @ M.right_action - N.right_action @ tensor(f, idb)
        columns.append(entries_vector(left) + entries_vector(right))
    constraints = _matrix_from_columns(cat.field, columns, len(columns[0]))
    kernel = nullspace(constraints)
    out = []
    for k in range(kernel.cols):
        vec = tuple(kernel.at(i, k) for i in range(kernel.rows))
        out.append(BimoduleMorphism(M, N, vec))
    return out


# -- idempotent splitting at the object level -------------------------------


@dataclass(frozen=True, eq=False)
class ObjectSplitting:
    """Image of an idempotent as a sum of simples with both split maps."""

    carrier: Tuple[int, ...]
    include: Mor
    project: Mor

    @property
    def obj(self) -> Obj:
        return Obj((self.carrier,))


def postcompose_matrix(f: Mor, x: int) -> Matrix:
    """Matrix of (f . -) from Hom(x, src) to Hom(x, dst)."""
    cat = f.cat
    X = Obj.of(x)
    src_basis = hom_space_basis(cat, X, f.src)
    dst_dim = len(hom_space_basis(cat, X, f.dst))
    columns = [entries_vector(f @ b) for b in src_basis]
    return _matrix_from_columns(cat.field, columns, dst_dim) if columns else (
        Matrix.zeros(cat.field, dst_dim, 0)
    )


def is_invertible(f: Mor) -> bool:
    """Invertibility through the multiplicity matrices, one simple at a time."""
    cat = f.cat
    for x in range(cat.label_count):
        m = postcompose_matrix(f, x)
        if m.rows != m.cols:
            return False
        if m.rows and invert(m) is None:
            return False
    return True


def split_idempotent(p: Mor) -> ObjectSplitting:
    """Split p = include . project with project . include the identity.

    The image is assembled simple by simple: the matrix of p on each
    multiplicity space is rank-factored exactly, and the factors are
    corrected by the composition pairing of the canonical bases.
    Raises IdempotentViolation when p fails to square to itself.
    """
    cat = p.cat
    if p.src != p.dst:
        raise ValueError("only endomorphisms can be split")
    W = p.src
    carrier: List[int] = []
    g_list: List[Mor] = []
    q_list: List[Mor] = []
    for x in range(cat.label_count):
        X = Obj.of(x)
        f_in = hom_space_basis(cat, X, W)
        if not f_in:
            continue
        d = len(f_in)
        P = _matrix_from_columns(cat.field, [entries_vector(p @ f) for f in f_in], d)
        U, V = rank_factor(P)
        if U.cols == 0:
            continue
        f_out = hom_space_basis(cat, W, X)
        gram = Matrix(
            cat.field, d, d,
            tuple(entries_vector(f_out[i] @ f_in[j])[0]
                  for i in range(d) for j in range(d)),
        )
        gram_inv = invert(gram)
        if gram_inv is None:
            raise ArithmeticError("composition pairing degenerate; data is broken")
        VG = V @ gram_inv
        for k in range(U.cols):
            g = zero(cat, X, W)
            q = zero(cat, W, X)
            for j in range(d):
                g = g + f_in[j].scale(U.at(j, k))
                q = q + f_out[j].scale(VG.at(k, j))
            carrier.append(x)
            g_list.append(g)
            q_list.append(q)
    slot = tuple(carrier)
    T = Obj((slot,))
    include = zero(cat, T, W)
    project = zero(cat, W, T)
    for k, (g, q) in enumerate(zip(g_list, q_list)):
        include = include + g @ summand_projection(cat, slot, k)
        project = project + summand_injection(cat, slot, k) @ q
    return ObjectSplitting(slot, include, project)


# -- relative tensor product ------------------------------------------------


@dataclass(frozen=True, eq=False)
class RelativeTensor:
    module: BimoduleData
    include: Mor
    project: Mor


def averaging_idempotent(M: BimoduleData, N: BimoduleData) -> Mor:
    """Average over the middle algebra on the carrier of M (x) N."""
    if M.right_algebra is not N.left_algebra:
        raise AlgebraMismatch(
            f"middle algebras differ: {M.right_algebra.name} vs {N.left_algebra.name}"
        )
    cat = M.cat
    B = M.right_algebra
    separator = B.comult @ B.unit
    idm = identity(cat, M.obj)
    idn = identity(cat, N.obj)
    return tensor(M.right_action, N.left_action) @ tensor_many(idm, separator, idn)


def relative_tensor(M: BimoduleData, N: BimoduleData) -> RelativeTensor:
    """Tensor over the shared middle algebra, with its split maps.

    Splitting the averaging idempotent is well defined exactly because
    the middle algebra is separable; the returned include and project
    maps identify the image inside the plain tensor product.
    """
    cat = M.cat
    split = split_idempotent(averaging_idempotent(M, N))
    ida = identity(cat, M.left_algebra.obj)
    idc = identity(cat, N.right_algebra.obj)
    idm = identity(cat, M.obj)
    idn = identity(cat, N.obj)
    left = split.project @ tensor(M.left_action, idn) @ tensor(ida, split.include)
    right = split.project @ tensor(idm, N.right_action) @ tensor(split.include, idc)
    module = BimoduleData(
        M.left_algebra, N.right_algebra, split.carrier, left, right
    )
    return RelativeTensor(module, split.include, split.project)


def associator_comparison(
    M: BimoduleData, N: BimoduleData, P: BimoduleData
) -> Tuple[RelativeTensor, RelativeTensor, Mor]:
    """Both bracketings of a triple tensor and the canonical map between them.

    Returns ((M N) P, M (N P), comparison), the comparison running from
    the left-bracketed image to the right-bracketed one through the
    split maps.  It is invertible whenever the data is valid.
    """
    cat = M.cat
    mn = relative_tensor(M, N)
    left = relative_tensor(mn.module, P)
    np_ = relative_tensor(N, P)
    right = relative_tensor(M, np_.module)
    idm = identity(cat, M.obj)
    idp = identity(cat, P.obj)
    comparison = (
        right.project
        @ tensor(idm, np_.project)
        @ tensor(mn.include, idp)
        @ left.include
    )
    return left, right, comparison
