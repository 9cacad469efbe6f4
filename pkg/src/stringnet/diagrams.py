"""Planar string diagrams in a rectangle, and their evaluation.

A :class:`PlanarDiagram` is a stack of horizontal slices read bottom to
top; each slice is a row of items read left to right.  Items are
through-strands, the four cup/cap shapes, and vertices.  Strand labels
are slots (formal sums of simple labels), so sum objects pass through
the evaluator without being expanded into summand diagrams.

A vertex stores its state as a morphism out of the empty word whose
legs are listed counterclockwise; placing it in a slice names how many
legs enter from below.  The evaluator first rotates the state, then
bends the first ``n_in`` legs down with plain evaluations, so the
inputs read left to right as the duals of legs ``n_in`` down to 1.

Evaluation contracts slice by slice: tensor the items of a row, then
compose the rows.  Exchange of distant items and re-slicing cannot
change the result (the tensor product is computed in fixed comb
coordinates), which the tests exercise directly.

The combinatorial view :func:`as_planar_map` flattens a diagram to an
abstract planar map with a rotation system: numbered edges with slot
labels, vertices listing their incident edges in state order, and the
two boundary rows.  It is the stable face of a diagram that surgery
and the independent cross-checks compare on.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .exactlin import Scalar
from .fusion import FusionCategoryData
from .mor import (
    EMPTY,
    Mor,
    Obj,
    bend_first_legs,
    coev,
    coev_primed,
    entries_vector,
    ev,
    ev_primed,
    identity,
    rotate_times,
    tensor,
)

Slot = Tuple[int, ...]


class MalformedDiagram(ValueError):
    def __init__(self, level: int, position: int, message: str):
        super().__init__(f"level {level}, position {position}: {message}")
        self.level = level
        self.position = position


class BoundaryMismatch(ValueError):
    def __init__(self, position: int, lower: Optional[Slot], upper: Optional[Slot]):
        super().__init__(
            f"boundaries disagree first at strand {position}: {lower} vs {upper}"
        )
        self.position = position
        self.lower = lower
        self.upper = upper


def _slot(x) -> Slot:
    return (x,) if isinstance(x, int) else tuple(x)


@dataclass(frozen=True)
class Strand:
    slot: Slot

    def __post_init__(self):
        object.__setattr__(self, "slot", _slot(self.slot))


@dataclass(frozen=True)
class Cup:
    """Creates (slot, dual slot), the plain coevaluation."""

    slot: Slot

    def __post_init__(self):
        object.__setattr__(self, "slot", _slot(self.slot))


@dataclass(frozen=True)
class CupBar:
    """Creates (dual slot, slot), the pivotal coevaluation."""

    slot: Slot

    def __post_init__(self):
        object.__setattr__(self, "slot", _slot(self.slot))


@dataclass(frozen=True)
class Cap:
    """Consumes (dual slot, slot), the plain evaluation."""

    slot: Slot

    def __post_init__(self):
        object.__setattr__(self, "slot", _slot(self.slot))


@dataclass(frozen=True)
class CapBar:
    """Consumes (slot, dual slot), the pivotal evaluation."""

    slot: Slot

    def __post_init__(self):
        object.__setattr__(self, "slot", _slot(self.slot))


@dataclass(frozen=True, eq=False)
class Vertex:
    """A coupon holding a state out of the empty word.

    rotation turns the leg list cyclically before placement; n_in legs
    then attach below.  The optional tag names the vertex in the
    combinatorial view.
    """

    state: Mor
    n_in: int = 0
    rotation: int = 0
    tag: str = ""

    def __eq__(self, other):
        if not isinstance(other, Vertex):
            return NotImplemented
        return (
            self.state == other.state
            and self.n_in == other.n_in
            and self.rotation == other.rotation
            and self.tag == other.tag
        )


Item = Union[Strand, Cup, CupBar, Cap, CapBar, Vertex]


def _dual(cat: FusionCategoryData, slot: Slot) -> Slot:
    return tuple(cat.dual[b] for b in slot)


def _item_ports(cat: FusionCategoryData, item: Item) -> Tuple[Tuple[Slot, ...], Tuple[Slot, ...]]:
    """(source slots, target slots) of one item, by pure bookkeeping."""
    if isinstance(item, Strand):
        return (item.slot,), (item.slot,)
    if isinstance(item, Cup):
        return (), (item.slot, _dual(cat, item.slot))
    if isinstance(item, CupBar):
        return (), (_dual(cat, item.slot), item.slot)
    if isinstance(item, Cap):
        return (_dual(cat, item.slot), item.slot), ()
    if isinstance(item, CapBar):
        return (item.slot, _dual(cat, item.slot)), ()
    if isinstance(item, Vertex):
        if item.state.src != EMPTY:
            raise ValueError("vertex state must come out of the empty word")
        legs = item.state.dst.slots
        if not 0 <= item.n_in <= len(legs):
            raise ValueError("n_in out of range for vertex")
        r = item.rotation % len(legs) if legs else 0
        turned = legs[r:] + legs[:r]
        ins = tuple(_dual(cat, s) for s in reversed(turned[: item.n_in]))
        outs = tuple(turned[item.n_in :])
        return ins, outs
    raise TypeError(f"not a diagram item: {item!r}")


def _item_morphism(cat: FusionCategoryData, item: Item) -> Mor:
    if isinstance(item, Strand):
        return identity(cat, Obj((item.slot,)))
    if isinstance(item, Cup):
        return coev(cat, item.slot)
    if isinstance(item, CupBar):
        return coev_primed(cat, item.slot)
    if isinstance(item, Cap):
        return ev(cat, item.slot)
    if isinstance(item, CapBar):
        return ev_primed(cat, item.slot)
    v = rotate_times(cat, item.state, item.rotation % max(item.state.dst.rank, 1))
    return bend_first_legs(cat, v, item.n_in)


class PlanarDiagram:
    """A sliced diagram; boundary words are derived and validated."""

    def __init__(self, cat: FusionCategoryData, levels: Sequence[Sequence[Item]]):
        self.cat = cat
        self.levels = tuple(tuple(level) for level in levels)
        current: Optional[Tuple[Slot, ...]] = None
        for li, level in enumerate(self.levels):
            srcs: List[Slot] = []
            dsts: List[Slot] = []
            for pi, item in enumerate(level):
                try:
                    s, d = _item_ports(cat, item)
                except (TypeError, ValueError) as exc:
                    raise MalformedDiagram(li, pi, str(exc)) from None
                srcs.extend(s)
                dsts.extend(d)
            if current is not None and tuple(srcs) != current:
                position = 0
                for position in range(max(len(srcs), len(current))):
                    a = srcs[position] if position < len(srcs) else None
                    b = current[position] if position < len(current) else None
                    if a != b:
                        break
                raise MalformedDiagram(
                    li, position,
                    f"slice expects {tuple(srcs)} below but the previous "
                    f"slice produced {current}",
                )
            if current is None:
                self.bottom = tuple(srcs)
            current = tuple(dsts)
        if current is None:
            self.bottom = ()
            current = ()
        self.top = current

    @property
    def bottom_obj(self) -> Obj:
        return Obj(self.bottom)

    @property
    def top_obj(self) -> Obj:
        return Obj(self.top)

    def evaluate(self) -> Mor:
        """Contract slice by slice from the bottom."""
        out = identity(self.cat, self.bottom_obj)
        for level in self.levels:
            row: Optional[Mor] = None
            for item in level:
                m = _item_morphism(self.cat, item)
                row = m if row is None else tensor(row, m)
            if row is None:
                row = identity(self.cat, EMPTY)
            out = row @ out
        return out

    def __eq__(self, other):
        if not isinstance(other, PlanarDiagram):
            return NotImplemented
        return self.cat is other.cat and self.levels == other.levels

    def __repr__(self):
        return f"PlanarDiagram({len(self.levels)} slice(s), {self.bottom} -> {self.top})"


def evaluate_rectangle(diagram: PlanarDiagram) -> Mor:
    return diagram.evaluate()


def evaluate_disk(diagram: PlanarDiagram) -> Mor:
    """Evaluate a diagram whose boundary is entirely on top."""
    if diagram.bottom != ():
        raise MalformedDiagram(0, 0, "disk evaluation needs an empty bottom boundary")
    return diagram.evaluate()


def stack(lower: PlanarDiagram, upper: PlanarDiagram) -> PlanarDiagram:
    """Vertical composition: upper drawn on top of lower."""
    if lower.top != upper.bottom:
        n = max(len(lower.top), len(upper.bottom))
        for i in range(n):
            a = lower.top[i] if i < len(lower.top) else None
            b = upper.bottom[i] if i < len(upper.bottom) else None
            if a != b:
                raise BoundaryMismatch(i, a, b)
        raise BoundaryMismatch(0, None, None)
    return PlanarDiagram(lower.cat, lower.levels + upper.levels)


def beside(left: PlanarDiagram, right: PlanarDiagram) -> PlanarDiagram:
    """Horizontal juxtaposition, padding the shorter side with strands."""
    if left.cat is not right.cat:
        raise ValueError("diagrams over different categories")
    height = max(len(left.levels), len(right.levels))

    def padded(d: PlanarDiagram) -> List[Tuple[Item, ...]]:
        rows = list(d.levels)
        idle = tuple(Strand(s) for s in d.top)
        while len(rows) < height:
            rows.append(idle)
        return rows

    lrows, rrows = padded(left), padded(right)
    return PlanarDiagram(left.cat, [lrows[i] + rrows[i] for i in range(height)])


def identity_diagram(cat: FusionCategoryData, slots: Sequence[Slot]) -> PlanarDiagram:
    return PlanarDiagram(cat, [[Strand(s) for s in slots]] if slots else [])


# -- linear combinations ---------------------------------------------------


class StringNetElement:
    """Formal combination of diagrams with a common boundary."""

    def __init__(self, cat: FusionCategoryData, terms: Sequence[Tuple[Scalar, PlanarDiagram]]):
        self.cat = cat
        self.terms = list(terms)
        boundary = None
        for _, d in self.terms:
            this = (d.bottom, d.top)
            if boundary is None:
                boundary = this
            elif this != boundary:
                a, b = boundary[0] + boundary[1], this[0] + this[1]
                for i in range(max(len(a), len(b))):
                    x = a[i] if i < len(a) else None
                    y = b[i] if i < len(b) else None
                    if x != y:
                        raise BoundaryMismatch(i, x, y)
        self.boundary = boundary

    def evaluate(self) -> Mor:
        if not self.terms:
            raise ValueError("empty combination has no type; use an explicit zero")
        out = None
        for c, d in self.terms:
            m = d.evaluate().scale(c)
            out = m if out is None else out + m
        return out

    def scale(self, c: Scalar) -> "StringNetElement":
        return StringNetElement(self.cat, [(c * a, d) for a, d in self.terms])

    def __add__(self, other: "StringNetElement") -> "StringNetElement":
        return StringNetElement(self.cat, self.terms + other.terms)


# -- combinatorial view ----------------------------------------------------


@dataclass(frozen=True)
class PlanarMap:
    """Abstract planar map with a rotation system.

    edges map ids to slot labels; each vertex lists its incident edge
    ids in the state's cyclic leg order together with a signature of
    the attached state.  Cups, caps, and strands are invisible here:
    they only wire edges together.
    """

    edges: Tuple[Tuple[int, Slot], ...]
    vertices: Tuple[Tuple[object, Tuple[int, ...]], ...]
    bottom: Tuple[int, ...]
    top: Tuple[int, ...]


def as_planar_map(diagram: PlanarDiagram) -> PlanarMap:
    cat = diagram.cat
    parent: Dict[int, int] = {}

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a: int, b: int):
        parent[find(a)] = find(b)

    next_id = 0
    labels: Dict[int, Slot] = {}

    def fresh(slot: Slot) -> int:
        nonlocal next_id
        e = next_id
        next_id += 1
        parent[e] = e
        labels[e] = slot
        return e

    open_ends: List[int] = [fresh(s) for s in diagram.bottom]
    bottom_ids = tuple(open_ends)
    vertices: List[Tuple[object, Tuple[int, ...]]] = []

    for level in diagram.levels:
        pos = 0
        new_ends: List[int] = []
        for item in level:
            srcs, dsts = _item_ports(cat, item)
            taken = open_ends[pos : pos + len(srcs)]
            pos += len(srcs)
            if isinstance(item, Strand):
                new_ends.extend(taken)
            elif isinstance(item, (Cup, CupBar)):
                e = fresh(item.slot)
                new_ends.extend([e, e])
            elif isinstance(item, (Cap, CapBar)):
                union(taken[0], taken[1])
            else:
                legs = item.state.dst.slots
                r = item.rotation % len(legs) if legs else 0
                turned = legs[r:] + legs[:r]
                created = [fresh(s) for s in turned[item.n_in :]]
                # taken reads left to right as legs n_in .. 1
                in_order = list(reversed(taken))
                incident = tuple(in_order + created)
                signature = (
                    item.tag,
                    item.n_in,
                    r,
                    tuple(entries_vector(item.state)),
                )
                vertices.append((signature, incident))
                new_ends.extend(created)
        open_ends = new_ends

    # canonical edge numbering by first appearance after contraction
    renumber: Dict[int, int] = {}

    def canon(e: int) -> int:
        root = find(e)
        if root not in renumber:
            renumber[root] = len(renumber)
        return renumber[root]

    bottom = tuple(canon(e) for e in bottom_ids)
    verts = tuple((sig, tuple(canon(e) for e in inc)) for sig, inc in vertices)
    top = tuple(canon(e) for e in open_ends)
    # merged classes keep the label of their earliest created member
    edge_map: Dict[int, Slot] = {}
    for e in labels:
        edge_map.setdefault(canon(e), labels[e])
    return PlanarMap(tuple(sorted(edge_map.items())), verts, bottom, top)
