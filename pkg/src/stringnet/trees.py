"""Fusion trees and the rebracketing engine.

Trees on a word of labels come in two representations:

* a *labeled tree*, the engine's working form: a leaf is a bare label
  id, an internal node is a 4-tuple ``(out, mult, left, right)`` whose
  children carry their own outputs, and the empty word is ``()``;
* a :class:`FusionTree`, the flattened right-comb view (leaves, root,
  inner channels, vertex multiplicities) used in public signatures.

All basis enumerations are deterministic: channels ascend in label
order, multiplicity indices ascend, left subtrees vary before right
ones.  Bracketings ("shapes") are nested tuples of leaf positions;
``comb_shape(n)`` is the right comb ``(0, (1, (2, ...)))`` that serves
as the canonical shape.

The elementary move rewrites a subtree ``((A,B)_e, C)_d`` into the span
of ``(A, (B,C)_f)_d`` using the stored F entries ("assoc"), or back
using the inverted block ("unassoc").  Arbitrary rebracketings are
composites of elementary moves along a canonical rotation path, and
their matrices are cached on the category object.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .exactlin import Matrix, Scalar
from .fusion import FusionCategoryData

LabTree = object  # int leaf, () empty, or (out, mult, left, right)
Move = Tuple[Tuple[int, ...], str]


def tree_out(tree, unit: int) -> int:
    """Root label of a labeled tree."""
    if tree == ():
        return unit
    if isinstance(tree, int):
        return tree
    return tree[0]


def comb_shape(n: int):
    if n == 0:
        return ()
    shape = n - 1
    for i in range(n - 2, -1, -1):
        shape = (i, shape)
    return shape


def shape_leaves(shape) -> List[int]:
    if shape == ():
        return []
    if isinstance(shape, int):
        return [shape]
    return shape_leaves(shape[0]) + shape_leaves(shape[1])


def enumerate_labeled(
    cat: FusionCategoryData, shape, leaves: Sequence[int], root: int
) -> List[LabTree]:
    """All labeled trees of the given shape and root, canonical order."""
    if shape == ():
        return [()] if root == cat.unit else []
    if isinstance(shape, int):
        return [leaves[shape]] if leaves[shape] == root else []
    left_shape, right_shape = shape
    by_out: Dict[int, List[LabTree]] = {}
    for x in range(cat.label_count):
        sub = enumerate_labeled(cat, left_shape, leaves, x)
        if sub:
            by_out[x] = sub
    out = []
    for x in sorted(by_out):
        for y in range(cat.label_count):
            k = cat.n(x, y, root)
            if not k:
                continue
            right = enumerate_labeled(cat, right_shape, leaves, y)
            if not right:
                continue
            for m in range(k):
                for tl in by_out[x]:
                    for tr in right:
                        out.append((root, m, tl, tr))
    return out


def _index_positions(items: Sequence) -> Dict:
    return {item: i for i, item in enumerate(items)}


def _move_at_node(cat: FusionCategoryData, tree, direction: str) -> Dict[LabTree, Scalar]:
    d, top_mult, left, right = tree
    if direction == "assoc":
        if not (isinstance(left, tuple) and left != ()):
            raise ValueError("assoc move needs an internal left child")
        e, al, sub_a, sub_b = left
        a = tree_out(sub_a, cat.unit)
        b = tree_out(sub_b, cat.unit)
        c = tree_out(right, cat.unit)
        be = top_mult
        block = cat.f_block(a, b, c, d)
        col = _index_positions(cat.left_tree_index(a, b, c, d))[(e, al, be)]
        rows = cat.right_tree_index(a, b, c, d)
        out: Dict[LabTree, Scalar] = {}
        for i, (f, ga, de) in enumerate(rows):
            v = block.at(i, col)
            if not v.is_zero():
                out[(d, de, sub_a, (f, ga, sub_b, right))] = v
        return out
    if direction == "unassoc":
        if not (isinstance(right, tuple) and right != ()):
            raise ValueError("unassoc move needs an internal right child")
        f, ga, sub_b, sub_c = right
        a = tree_out(left, cat.unit)
        b = tree_out(sub_b, cat.unit)
        c = tree_out(sub_c, cat.unit)
        de = top_mult
        inv = cat.f_block_inverse(a, b, c, d)
        col = _index_positions(cat.right_tree_index(a, b, c, d))[(f, ga, de)]
        rows = cat.left_tree_index(a, b, c, d)
        out = {}
        for i, (e, al, be) in enumerate(rows):
            v = inv.at(i, col)
            if not v.is_zero():
                out[(d, be, (e, al, left, sub_b), sub_c)] = v
        return out
    raise ValueError(f"unknown move direction {direction!r}")


def _apply_at_address(
    cat: FusionCategoryData, tree, address: Tuple[int, ...], direction: str
) -> Dict[LabTree, Scalar]:
    if not address:
        return _move_at_node(cat, tree, direction)
    d, m, left, right = tree
    bit = address[0]
    child = left if bit == 0 else right
    sub = _apply_at_address(cat, child, address[1:], direction)
    out: Dict[LabTree, Scalar] = {}
    for new_child, coeff in sub.items():
        key = (d, m, new_child, right) if bit == 0 else (d, m, left, new_child)
        out[key] = coeff
    return out


def apply_f_move(
    cat: FusionCategoryData,
    vector: Dict[LabTree, Scalar],
    address: Tuple[int, ...],
    direction: str,
) -> Dict[LabTree, Scalar]:
    """Apply one elementary move, linearly extended over a tree vector."""
    out: Dict[LabTree, Scalar] = {}
    for tree, coeff in vector.items():
        if coeff.is_zero():
            continue
        for new_tree, c in _apply_at_address(cat, tree, address, direction).items():
            total = out.get(new_tree)
            total = c * coeff if total is None else total + c * coeff
            if total.is_zero():
                out.pop(new_tree, None)
            else:
                out[new_tree] = total
    return out


def apply_move_path(
    cat: FusionCategoryData, vector: Dict[LabTree, Scalar], moves: Sequence[Move]
) -> Dict[LabTree, Scalar]:
    for address, direction in moves:
        vector = apply_f_move(cat, vector, address, direction)
    return vector


def shape_after_move(shape, address: Tuple[int, ...], direction: str):
    if not address:
        if direction == "assoc":
            (sa, sb), sc = shape
            return (sa, (sb, sc))
        sa, (sb, sc) = shape
        return ((sa, sb), sc)
    left, right = shape
    if address[0] == 0:
        return (shape_after_move(left, address[1:], direction), right)
    return (left, shape_after_move(right, address[1:], direction))


def path_to_comb(shape) -> List[Move]:
    """Canonical assoc-move path taking a shape to the right comb.

    Rotates at the first preorder node whose left child is internal,
    repeating until none remains.
    """
    moves: List[Move] = []
    while True:
        address = _first_left_internal(shape, ())
        if address is None:
            return moves
        moves.append((address, "assoc"))
        shape = shape_after_move(shape, address, "assoc")


def _first_left_internal(shape, prefix) -> Optional[Tuple[int, ...]]:
    if isinstance(shape, int) or shape == ():
        return None
    left, right = shape
    if isinstance(left, tuple):
        return prefix
    return _first_left_internal(right, prefix + (1,))


def inverse_path(moves: Sequence[Move]) -> List[Move]:
    flip = {"assoc": "unassoc", "unassoc": "assoc"}
    return [(address, flip[direction]) for address, direction in reversed(moves)]


def move_path_matrix(
    cat: FusionCategoryData,
    leaves: Sequence[int],
    root: int,
    src_shape,
    moves: Sequence[Move],
) -> Tuple[Matrix, object]:
    """Matrix of a move path on the tree basis.

    Columns follow the canonical enumeration of the source shape, rows
    that of the resulting shape; returns the matrix and the final shape.
    """
    dst_shape = src_shape
    for address, direction in moves:
        dst_shape = shape_after_move(dst_shape, address, direction)
    src_basis = enumerate_labeled(cat, src_shape, leaves, root)
    dst_basis = enumerate_labeled(cat, dst_shape, leaves, root)
    dst_pos = _index_positions(dst_basis)
    entries = [[cat.field.zero] * len(src_basis) for _ in range(len(dst_basis))]
    for j, tree in enumerate(src_basis):
        vec = apply_move_path(cat, {tree: cat.field.one}, moves)
        for t, coeff in vec.items():
            entries[dst_pos[t]][j] = coeff
    flat = tuple(v for row in entries for v in row)
    return Matrix(cat.field, len(dst_basis), len(src_basis), flat), dst_shape


def rebracket_matrix(
    cat: FusionCategoryData,
    leaves: Sequence[int],
    root: int,
    src_shape,
    dst_shape,
) -> Matrix:
    """Change of basis from src_shape trees to dst_shape trees.

    Routes through the right comb: the canonical path of the source is
    applied forward, then the inverted canonical path of the target.
    Cached per category.
    """
    cache = cat.cache("rebracket")
    key = (tuple(leaves), root, src_shape, dst_shape)
    if key in cache:
        return cache[key]
    moves = list(path_to_comb(src_shape)) + inverse_path(path_to_comb(dst_shape))
    matrix, final_shape = move_path_matrix(cat, leaves, root, src_shape, moves)
    if final_shape != dst_shape:
        raise AssertionError("rebracketing path did not land on the target shape")
    cache[key] = matrix
    return matrix


def glue_matrix(
    cat: FusionCategoryData, xs: Sequence[int], ys: Sequence[int], root: int
) -> Matrix:
    """Change of basis from glued comb pairs to the full right comb.

    The source basis runs over ``(s, t, mult, tree_x, tree_y)`` with
    ``tree_x`` a comb tree on ``xs`` with root ``s`` and ``tree_y`` a
    comb tree on ``ys`` with root ``t``, joined by a vertex into
    ``root``; this is exactly the canonical enumeration of the
    pair-of-combs shape, so the matrix is a plain rebracketing.
    """
    cache = cat.cache("glue")
    key = (tuple(xs), tuple(ys), root)
    if key in cache:
        return cache[key]
    p, q = len(xs), len(ys)
    leaves = tuple(xs) + tuple(ys)
    src_shape = (comb_shape(p), _shifted(comb_shape(q), p))
    matrix = rebracket_matrix(cat, leaves, root, src_shape, comb_shape(p + q))
    cache[key] = matrix
    return matrix


def _shifted(shape, offset: int):
    if shape == ():
        return ()
    if isinstance(shape, int):
        return shape + offset
    return (_shifted(shape[0], offset), _shifted(shape[1], offset))


@dataclass(frozen=True)
class FusionTree:
    """Right-comb fusion tree in flattened form.

    ``channels[i]`` is the output of the node absorbing leaf ``i+1``
    counted from the deep end, i.e. the inner edges below the root;
    ``mults`` are the vertex multiplicity indices from the root
    downward.  A tree on fewer than two leaves has no channels.
    """

    leaves: Tuple[int, ...]
    root: int
    channels: Tuple[int, ...]
    mults: Tuple[int, ...]

    def labeled(self) -> LabTree:
        n = len(self.leaves)
        if n == 0:
            return ()
        if n == 1:
            return self.leaves[0]
        outs = (self.root,) + self.channels
        tree: LabTree = self.leaves[-1]
        for i in range(n - 2, -1, -1):
            tree = (outs[i], self.mults[i], self.leaves[i], tree)
        return tree

    @staticmethod
    def from_labeled(tree: LabTree, unit: int) -> "FusionTree":
        if tree == ():
            return FusionTree((), unit, (), ())
        if isinstance(tree, int):
            return FusionTree((tree,), tree, (), ())
        leaves: List[int] = []
        outs: List[int] = []
        mults: List[int] = []
        node = tree
        while isinstance(node, tuple) and node != ():
            out, mult, left, right = node
            if not isinstance(left, int):
                raise ValueError("not a right-comb tree")
            outs.append(out)
            mults.append(mult)
            leaves.append(left)
            node = right
        leaves.append(node)
        return FusionTree(tuple(leaves), outs[0], tuple(outs[1:]), tuple(mults))


def comb_basis(
    cat: FusionCategoryData, leaves: Sequence[int], root: int
) -> List[FusionTree]:
    """Canonical ordered basis of comb trees on a word with given root."""
    cache = cat.cache("comb_basis")
    key = (tuple(leaves), root)
    if key in cache:
        return cache[key]
    labeled = enumerate_labeled(cat, comb_shape(len(leaves)), tuple(leaves), root)
    basis = [FusionTree.from_labeled(t, cat.unit) for t in labeled]
    cache[key] = basis
    return basis
