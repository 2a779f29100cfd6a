"""Commutative squares of covers and their diagnostic predicates.

A square has four covers::

        top
     H ----->> G
     |         |
 left|         | right
     v         v
     B ----->> A
       bottom

All predicates work on kernels, which is both the cheapest route and the
one stable under recomposition; the remaining textbook criteria are kept
as test oracles.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import Mismatch, NotCartesian, NotCommutative, SourceTargetMismatch
from .groups import (
    Cover,
    all_subgroups,
    compose,
    find_epimorphism_over,
    is_indecomposable,
    same_group,
)

__all__ = [
    "CommSquare",
    "make_square",
    "is_cartesian",
    "is_semi_cartesian",
    "is_compact_cartesian",
    "compose_horizontal",
]


@dataclass(frozen=True)
class CommSquare:
    """A validated commutative square of surjections."""

    top: Cover
    left: Cover
    bottom: Cover
    right: Cover

    @property
    def corner_source(self):
        return self.top.source

    @property
    def corner_base(self):
        return self.bottom.target


def make_square(top: Cover, left: Cover, bottom: Cover, right: Cover) -> CommSquare:
    """Assemble and validate a commutative square.

    Raises SourceTargetMismatch if the four maps do not form a square and
    NotCommutative if the two composites H -> A differ.
    """
    if not same_group(top.source, left.source):
        raise SourceTargetMismatch("top and left must share their source")
    if not same_group(left.target, bottom.source):
        raise SourceTargetMismatch("left target must be the bottom source")
    if not same_group(top.target, right.source):
        raise SourceTargetMismatch("top target must be the right source")
    if not same_group(bottom.target, right.target):
        raise SourceTargetMismatch("bottom and right must share their target")
    via_bottom = bottom.image[left.image]
    via_right = right.image[top.image]
    if not (via_bottom == via_right).all():
        raise NotCommutative("the two composites to the base disagree")
    return CommSquare(top=top, left=left, bottom=bottom, right=right)


def is_cartesian(sq: CommSquare) -> bool:
    """True iff the left map restricts to a bijection Ker(top) -> Ker(bottom)."""
    top_ker = sq.top.kernel().elements
    images = {int(sq.left.image[x]) for x in top_ker}
    if len(images) != len(top_ker):
        return False
    return images == set(sq.bottom.kernel().elements)


def is_semi_cartesian(sq: CommSquare) -> bool:
    """True iff the left map carries Ker(top) onto Ker(bottom)."""
    top_ker = sq.top.kernel().elements
    images = {int(sq.left.image[x]) for x in top_ker}
    return images == set(sq.bottom.kernel().elements)


def is_compact_cartesian(sq: CommSquare) -> bool:
    """For a cartesian square: no proper subgroup of the corner source
    surjects onto both edges.

    Raises NotCartesian when the square is not cartesian. When the bottom
    cover is indecomposable, compactness is equivalent to the absence of a
    surjection g: G ->> B with bottom o g = right, which is much cheaper
    than the subgroup sweep; otherwise the subgroup lattice is searched
    exhaustively.
    """
    if not is_cartesian(sq):
        raise NotCartesian("compactness is defined for cartesian squares only")
    if is_indecomposable(sq.bottom):
        return find_epimorphism_over(sq.right, sq.bottom) is None
    return not _has_proper_full_subgroup(sq)


def _has_proper_full_subgroup(sq: CommSquare) -> bool:
    h = sq.corner_source
    n_g = sq.top.target.order
    n_b = sq.left.target.order
    top_img = sq.top.image
    left_img = sq.left.image
    for sub in all_subgroups(h):
        if sub.order == h.order:
            continue
        elems = sub.elements
        if len({int(top_img[x]) for x in elems}) != n_g:
            continue
        if len({int(left_img[x]) for x in elems}) == n_b:
            return True
    return False


def compose_horizontal(first: CommSquare, second: CommSquare) -> CommSquare:
    """Glue two squares along the shared vertical edge.

    ``first.right`` must equal ``second.left`` (same element table); the
    result has composed top and bottom rows. Raises Mismatch otherwise.
    """
    if not first.right.same_map(second.left):
        raise Mismatch("shared vertical edge differs between the two squares")
    return make_square(
        top=compose(second.top, first.top),
        left=first.left,
        bottom=compose(second.bottom, first.bottom),
        right=second.right,
    )
