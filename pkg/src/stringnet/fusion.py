"""Presentations of pivotal fusion categories.

A :class:`FusionCategoryData` packages the combinatorial skeleton of the
input category: label set, duals, fusion multiplicities N, F-symbol
entries, and pivotal coefficients, over an exact number field.  The
constructor checks only structural well-formedness (index ranges, key
shapes); the axioms themselves -- pentagon, unit laws, duality
involution, pivotal monoidality -- are examined by
:func:`stringnet.validate.validate`, which reports violations as data
rather than raising, so that deliberately corrupted fixtures can be
loaded and inspected.

Conventions fixed here and relied on everywhere else:

* label ids are indices into the label tuple, in file order, and every
  deterministic enumeration follows that order;
* the F entry keyed ``(a, b, c, d, e, f, al, be, ga, de)`` is the
  coefficient of the right-bracketed tree ``(a,(b,c)_f^ga)_d^de`` in the
  expansion of the left-bracketed tree ``((a,b)_e^al,c)_d^be``;
* F entries with a unit leg are not stored: the chosen gauge makes them
  identity matrices, and :meth:`FusionCategoryData.f_block` synthesizes
  them;
* quantum dimensions are not part of the input; they are derived from
  loop evaluations (see :mod:`stringnet.mor`) and cached on the object.
"""

from __future__ import annotations

from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .exactlin import Matrix, NumberField, Scalar, invert


FKey = Tuple[int, int, int, int, int, int, int, int, int, int]


class UnknownLabel(KeyError):
    """A label name or id that the category does not declare."""


class FusionCategoryData:
    """Skeletal data of a pivotal fusion category over a number field."""

    def __init__(
        self,
        name: str,
        field: NumberField,
        labels: Sequence[str],
        unit: int,
        dual: Sequence[int],
        N: Dict[Tuple[int, int, int], int],
        F: Dict[FKey, Scalar],
        pivotal: Sequence[Scalar],
        spherical: bool = False,
    ):
        self.name = name
        self.field = field
        self.labels = tuple(labels)
        n = len(self.labels)
        if n == 0:
            raise ValueError("a fusion category needs at least the unit label")
        if len(set(self.labels)) != n:
            raise ValueError("duplicate label names")
        if not 0 <= unit < n:
            raise ValueError("unit label out of range")
        self.unit = unit
        if len(dual) != n or any(not 0 <= d < n for d in dual):
            raise ValueError("dual map must assign a label to every label")
        self.dual = tuple(dual)
        for key, value in N.items():
            if len(key) != 3 or any(not 0 <= x < n for x in key):
                raise ValueError(f"bad N key {key}")
            if not isinstance(value, int) or value < 0:
                raise ValueError(f"N{key} must be a nonnegative integer")
        self.N = {k: v for k, v in N.items() if v}
        for key, value in F.items():
            if len(key) != 10 or any(not 0 <= x < n for x in key[:6]):
                raise ValueError(f"bad F key {key}")
            if not isinstance(value, Scalar):
                raise ValueError(f"F{key} must be a Scalar")
        self.F = dict(F)
        if len(pivotal) != n:
            raise ValueError("pivotal coefficients must cover every label")
        self.pivotal = tuple(pivotal)
        self.spherical = spherical
        self._qdim: Optional[Tuple[Scalar, ...]] = None
        self._caches: Dict[str, dict] = {}

    # -- lookups -----------------------------------------------------------

    @property
    def label_count(self) -> int:
        return len(self.labels)

    def label_index(self, name: str) -> int:
        try:
            return self.labels.index(name)
        except ValueError:
            raise UnknownLabel(name) from None

    def label_name(self, a: int) -> str:
        if not 0 <= a < len(self.labels):
            raise UnknownLabel(a)
        return self.labels[a]

    def n(self, a: int, b: int, c: int) -> int:
        return self.N.get((a, b, c), 0)

    def fuse_channels(self, a: int, b: int) -> List[int]:
        return [c for c in range(len(self.labels)) if self.n(a, b, c)]

    def cache(self, kind: str) -> dict:
        return self._caches.setdefault(kind, {})

    # -- F blocks ----------------------------------------------------------

    def left_tree_index(self, a: int, b: int, c: int, d: int) -> List[Tuple[int, int, int]]:
        """(e, al, be) labels of the ((a,b)_e,c)_d basis, deterministic order."""
        out = []
        for e in range(len(self.labels)):
            nab = self.n(a, b, e)
            ned = self.n(e, c, d)
            for al in range(nab):
                for be in range(ned):
                    out.append((e, al, be))
        return out

    def right_tree_index(self, a: int, b: int, c: int, d: int) -> List[Tuple[int, int, int]]:
        """(f, ga, de) labels of the (a,(b,c)_f)_d basis, deterministic order."""
        out = []
        for f in range(len(self.labels)):
            nbc = self.n(b, c, f)
            naf = self.n(a, f, d)
            for ga in range(nbc):
                for de in range(naf):
                    out.append((f, ga, de))
        return out

    def f_block(self, a: int, b: int, c: int, d: int) -> Matrix:
        """Matrix of the rebracketing ((a,b),c) -> (a,(b,c)) at root d.

        Rows run over the right-tree index, columns over the left-tree
        index; stored entries are consulted for generic legs, unit legs
        are synthesized as the gauge-fixed identity.
        """
        cache = self.cache("f_block")
        key = (a, b, c, d)
        if key in cache:
            return cache[key]
        left = self.left_tree_index(a, b, c, d)
        right = self.right_tree_index(a, b, c, d)
        entries = []
        if self.unit in (a, b, c):
            for fr in right:
                for fl in left:
                    entries.append(
                        self.field.one if self._unit_leg_match(a, b, c, fl, fr) else self.field.zero
                    )
        else:
            for f, ga, de in right:
                for e, al, be in left:
                    entries.append(
                        self.F.get((a, b, c, d, e, f, al, be, ga, de), self.field.zero)
                    )
        m = Matrix(self.field, len(right), len(left), entries)
        cache[key] = m
        return m

    def _unit_leg_match(self, a, b, c, fl, fr) -> bool:
        e, al, be = fl
        f, ga, de = fr
        if a == self.unit:
            return al == 0 and de == 0 and be == ga
        if b == self.unit:
            return al == 0 and ga == 0 and be == de
        # c is the unit
        return be == 0 and ga == 0 and al == de

    def f_block_inverse(self, a: int, b: int, c: int, d: int) -> Matrix:
        cache = self.cache("f_block_inv")
        key = (a, b, c, d)
        if key in cache:
            return cache[key]
        block = self.f_block(a, b, c, d)
        if block.rows != block.cols:
            raise ValueError(
                f"F block at {self._key_names(key)} is not square: "
                f"{block.rows}x{block.cols}"
            )
        inv = invert(block)
        if inv is None:
            raise ValueError(f"F block at {self._key_names(key)} is singular")
        cache[key] = inv
        return inv

    def _key_names(self, key) -> str:
        return "(" + ",".join(self.labels[x] for x in key) + ")"

    # -- derived quantum dimensions ---------------------------------------

    @property
    def qdim(self) -> Tuple[Scalar, ...]:
        if self._qdim is None:
            from .mor import derive_quantum_dimensions

            self._qdim = derive_quantum_dimensions(self)
        return self._qdim

    # -- copies for mutation fixtures -------------------------------------

    def with_f_entry(self, key: FKey, value: Scalar) -> "FusionCategoryData":
        F = dict(self.F)
        F[key] = value
        return FusionCategoryData(
            self.name + "*",
            self.field,
            self.labels,
            self.unit,
            self.dual,
            dict(self.N),
            F,
            self.pivotal,
            self.spherical,
        )

    def with_pivotal(self, values: Sequence[Scalar]) -> "FusionCategoryData":
        return FusionCategoryData(
            self.name + "*",
            self.field,
            self.labels,
            self.unit,
            self.dual,
            dict(self.N),
            dict(self.F),
            values,
            self.spherical,
        )

    def __repr__(self) -> str:
        return f"FusionCategoryData({self.name!r}, labels={self.labels})"


def tree_count(cat: FusionCategoryData, word: Sequence[int], root: int) -> int:
    """Number of fusion trees on the given leaf word with the given root.

    Computed by dynamic programming over fusion multiplicities alone; the
    answer is bracketing-independent, so this doubles as an arithmetic
    cross-check on the tree enumerations elsewhere.
    """
    counts = {cat.unit: 1}
    for a in word:
        nxt: Dict[int, int] = {}
        for m, c0 in counts.items():
            for c in range(cat.label_count):
                k = cat.n(m, a, c)
                if k:
                    nxt[c] = nxt.get(c, 0) + c0 * k
        counts = nxt
    return counts.get(root, 0)


def hom_dimension(
    cat: FusionCategoryData, src: Sequence[int], tgt: Sequence[int]
) -> int:
    """Dimension of the hom space between two tensor words of labels."""
    dims = 0
    for s in range(cat.label_count):
        a = tree_count(cat, src, s)
        if a:
            b = tree_count(cat, tgt, s)
            dims += a * b
    return dims
