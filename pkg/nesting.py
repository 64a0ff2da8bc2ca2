#!/usr/bin/env python3
"""
Generalized ranked operator

A ranked cut splits a shape into an outer (left) and an inner (right) part
so that an array can be nested into an array of arrays without losing or
reordering elements.

- Level 0 has a single trivial cut: (unit, unit).
- Level 1 has two cuts: side 0 puts a singleton outside ([n] -> [1] of [n]),
  side 1 puts it inside ([n] -> [n] of [1]).
- At level >= 2 the shape's extents form an array over the shape-of-shape.
  A cut picks a slot (an axis of the shape-of-shape) and a split point k.
  Extents whose position has coordinate < k at that slot go left, the rest
  go right; both sides keep relative row-major order.
"""

import functools
import logging
from dataclasses import dataclass
from typing import Any, Callable, Iterator, Optional, Tuple, Union

from arrays import Array, from_fn, map_array, sel, tabulate, to_buffer
from exceptions import BoundMismatchError, CutMismatchError, OutOfBoundsError, ShapeMismatchError
from performance_utils import DebugMode
from shapes import UNIT, BoundedNat, Index, Shape, enumerate_indices, unit_index, vector_shape

# Configure module logger
logger = logging.getLogger(__name__)


# ===============================================================================
# CUT DESCRIPTORS
# ===============================================================================

@dataclass(frozen=True)
class TrivialCut:
    """The only cut of a level-0 shape"""

    def __str__(self):
        return "cut()"


@dataclass(frozen=True)
class SideCut:
    """Level-1 cut: side 0 puts the singleton outside, side 1 inside"""
    side: BoundedNat

    def __str__(self):
        return f"cut(side={self.side.value})"


@dataclass(frozen=True)
class SlotCut:
    """Level >= 2 cut: split the shape-of-shape axis ``slot`` at ``split``"""
    slot: BoundedNat
    split: BoundedNat

    def __str__(self):
        return f"cut(slot={self.slot.value}, split={self.split.value})"


RankedCut = Union[TrivialCut, SideCut, SlotCut]


def trivial_cut() -> TrivialCut:
    return TrivialCut()


def side_cut(side: int) -> SideCut:
    """
    Raises:
        CutMismatchError: If ``side`` is not 0 or 1
    """
    try:
        return SideCut(BoundedNat(side, 2))
    except OutOfBoundsError as e:
        raise CutMismatchError(f"side={side}", "a level-1 cut side must be 0 or 1") from e


def slot_cut(s: Shape, slot: int, split: int) -> SlotCut:
    """
    Build a level >= 2 cut with bounds taken from ``s``.

    Raises:
        CutMismatchError: If ``s`` has level < 2, the slot does not exist or
            the split exceeds the extent at that slot
    """
    label = f"slot={slot}, split={split}"
    if s.level < 2:
        raise CutMismatchError(label, f"slot cuts need level >= 2, shape {s} has level {s.level}")
    axes = s.inner.extents
    if not 0 <= slot < len(axes):
        raise CutMismatchError(label, f"slot must be in [0, {len(axes)})")
    if not 0 <= split <= axes[slot]:
        raise CutMismatchError(label, f"split must be in [0, {axes[slot]}]")
    return SlotCut(BoundedNat(slot, len(axes)), BoundedNat(split, 1 + axes[slot]))


def _check_cut(s: Shape, c: RankedCut) -> None:
    if s.level == 0:
        if not isinstance(c, TrivialCut):
            raise CutMismatchError(c, "level-0 shapes only admit the trivial cut")
    elif s.level == 1:
        if not isinstance(c, SideCut) or c.side.bound != 2:
            raise CutMismatchError(c, "level-1 shapes need a side cut (side 0 or 1)")
    else:
        if not isinstance(c, SlotCut):
            raise CutMismatchError(c, f"level-{s.level} shapes need a slot cut")
        axes = s.inner.extents
        if c.slot.bound != len(axes):
            raise CutMismatchError(
                c, f"slot bound {c.slot.bound} differs from the {len(axes)} shape-of-shape axes"
            )
        if c.split.bound != 1 + axes[c.slot.value]:
            raise CutMismatchError(
                c, f"split bound {c.split.bound} differs from 1 + {axes[c.slot.value]}"
            )


def cut_count(s: Shape) -> int:
    """Number of distinct valid cuts of ``s``"""
    if s.level == 0:
        return 1
    if s.level == 1:
        return 2
    return sum(1 + axis for axis in s.inner.extents)


def iter_cuts(s: Shape) -> Iterator[RankedCut]:
    """Every valid cut of ``s``, ordered by slot then split"""
    if s.level == 0:
        yield TrivialCut()
    elif s.level == 1:
        yield side_cut(0)
        yield side_cut(1)
    else:
        for slot, axis in enumerate(s.inner.extents):
            for split in range(axis + 1):
                yield slot_cut(s, slot, split)


# ===============================================================================
# CUT PLANS
# ===============================================================================

@dataclass(frozen=True)
class CutPlan:
    """
    A validated cut of one shape: the two result shapes plus, for level >= 2,
    the routing of each extent position (True = left) in row-major order.
    """
    shape: Shape
    cut: RankedCut
    left: Shape
    right: Shape
    routing: Tuple[bool, ...] = ()

    def split(self, iv: Index) -> Tuple[Index, Index]:
        if iv.shape != self.shape:
            raise BoundMismatchError(self.shape, iv.shape, "index shape vs cut shape")
        if self.shape.level == 0:
            return unit_index(), unit_index()
        if self.shape.level == 1:
            return self._split_level_one(iv)
        left = [comp for comp, goes_left in zip(iv.components, self.routing) if goes_left]
        right = [comp for comp, goes_left in zip(iv.components, self.routing) if not goes_left]
        return Index(self.left, tuple(left)), Index(self.right, tuple(right))

    @property
    def _side(self) -> int:
        assert isinstance(self.cut, SideCut)
        return self.cut.side.value

    def _split_level_one(self, iv: Index) -> Tuple[Index, Index]:
        singleton = (BoundedNat(0, 1),)
        if self._side == 0:
            return Index(self.left, singleton), Index(self.right, iv.components)
        return Index(self.left, iv.components), Index(self.right, singleton)

    def merge(self, ov: Index, iv: Index) -> Index:
        if ov.shape != self.left:
            raise BoundMismatchError(self.left, ov.shape, "outer index vs left shape")
        if iv.shape != self.right:
            raise BoundMismatchError(self.right, iv.shape, "inner index vs right shape")
        if self.shape.level == 0:
            return unit_index()
        if self.shape.level == 1:
            source = iv if self._side == 0 else ov
            return Index(self.shape, source.components)
        outer = iter(ov.components)
        inner = iter(iv.components)
        merged = [next(outer) if goes_left else next(inner) for goes_left in self.routing]
        return Index(self.shape, tuple(merged))


@functools.lru_cache(maxsize=512)
def plan_cut(s: Shape, c: RankedCut) -> CutPlan:
    """
    Validate ``c`` against ``s`` and compute both cut shapes.

    Raises:
        CutMismatchError: If the cut's level or bounds do not match ``s``
    """
    _check_cut(s, c)

    if s.level == 0:
        return CutPlan(s, c, UNIT, UNIT)
    if isinstance(c, SideCut):
        if c.side.value == 0:
            return CutPlan(s, c, vector_shape(1), s)
        return CutPlan(s, c, s, vector_shape(1))

    assert isinstance(c, SlotCut) and s.inner is not None
    sos = s.inner
    slot = c.slot.value
    split = c.split.value
    routing = tuple(pos.components[slot].value < split for pos in enumerate_indices(sos))

    left_axes = list(sos.extents)
    right_axes = list(sos.extents)
    left_axes[slot] = split
    right_axes[slot] = sos.extents[slot] - split

    left = Shape(Shape(sos.inner, tuple(left_axes)),
                 tuple(e for e, goes_left in zip(s.extents, routing) if goes_left))
    right = Shape(Shape(sos.inner, tuple(right_axes)),
                  tuple(e for e, goes_left in zip(s.extents, routing) if not goes_left))

    DebugMode.assert_prod_conserved(s.prod, left.prod * right.prod, f"ranked cut {c}")
    logger.debug(f"Cut {s} with {c}: left {left}, right {right}")
    return CutPlan(s, c, left, right, routing)


# ===============================================================================
# OPERATIONS
# ===============================================================================

def ranked_cut(s: Shape, c: RankedCut) -> Tuple[Shape, Shape]:
    """
    Cut ``s`` into (left, right) shapes with prod(left) * prod(right) == prod(s).

    A side with a zero extent is a valid cut and is not rejected; every
    split from 0 to the full extent is counted by ``cut_count``.

    Raises:
        CutMismatchError: If ``c`` does not fit ``s``
    """
    plan = plan_cut(s, c)
    return plan.left, plan.right


def split_index(iv: Index, c: RankedCut) -> Tuple[Index, Index]:
    """Route the components of ``iv`` to the left and right cut shapes"""
    return plan_cut(iv.shape, c).split(iv)


def merge_index(ov: Index, iv: Index, c: RankedCut, s: Shape) -> Index:
    """
    The unique index of ``s`` that ``split_index`` maps to ``(ov, iv)``.

    Raises:
        CutMismatchError: If ``c`` does not fit ``s``
        BoundMismatchError: If ``ov`` / ``iv`` do not address the cut shapes
    """
    return plan_cut(s, c).merge(ov, iv)


def nest(a: Array[Any], c: RankedCut) -> Array[Array[Any]]:
    """
    Turn ``a`` into an array (outer shape = left) of arrays (shape = right).

    ``sel(sel(nest(a, c), ov), iv) == sel(a, merge_index(ov, iv, c, shape(a)))``
    """
    plan = plan_cut(a.shape, c)

    def block(ov: Index) -> Array[Any]:
        return from_fn(plan.right, lambda iv: sel(a, plan.merge(ov, iv)))

    return from_fn(plan.left, block)


def unnest(n: Array[Array[Any]], c: RankedCut, s: Shape) -> Array[Any]:
    """
    Flatten a nested array back to shape ``s``; inverse of ``nest``.

    Raises:
        CutMismatchError: If ``c`` does not fit ``s``
        ShapeMismatchError: If the outer or any inner shape differs from the cut
    """
    plan = plan_cut(s, c)
    if n.shape != plan.left:
        raise ShapeMismatchError(n.shape, plan.left, "unnest outer shape")
    outer = tabulate(n)
    for inner in to_buffer(outer):
        if inner.shape != plan.right:
            raise ShapeMismatchError(inner.shape, plan.right, "unnest inner shape")

    def element(iv: Index) -> Any:
        ov, riv = plan.split(iv)
        return sel(sel(outer, ov), riv)

    return from_fn(s, element)


def rank_map(f: Callable[[Array[Any]], Array[Any]], a: Array[Any], c: RankedCut) -> Array[Any]:
    """
    Apply ``f`` to every inner block of ``nest(a, c)`` and flatten back.

    ``f`` must return arrays of the inner shape.

    Raises:
        ShapeMismatchError: If ``f`` changes the inner shape
    """
    return unnest(map_array(f, nest(a, c)), c, a.shape)


# ===============================================================================
# JSON GRAMMAR
# ===============================================================================

def cut_to_json(c: RankedCut) -> Optional[dict]:
    """null for level 0, {"side": k} for level 1, {"slot": i, "split": k} otherwise"""
    if isinstance(c, TrivialCut):
        return None
    if isinstance(c, SideCut):
        return {"side": c.side.value}
    return {"slot": c.slot.value, "split": c.split.value}


def parse_cut(obj: Any, s: Shape) -> RankedCut:
    """
    Decode a cut fragment for shape ``s``.

    Raises:
        CutMismatchError: If the fragment does not describe a valid cut of ``s``
    """
    if s.level == 0:
        if obj not in (None, {}):
            raise CutMismatchError(obj, "level-0 shapes only admit the trivial cut (null)")
        return TrivialCut()

    if not isinstance(obj, dict):
        raise CutMismatchError(obj, "expected a JSON object")

    def natural(key: str) -> int:
        value = obj.get(key)
        if isinstance(value, bool) or not isinstance(value, int):
            raise CutMismatchError(obj, f"'{key}' must be an integer")
        return value

    if s.level == 1:
        if set(obj) != {"side"}:
            raise CutMismatchError(obj, "level-1 cuts are written {\"side\": 0|1}")
        return side_cut(natural("side"))

    if set(obj) != {"slot", "split"}:
        raise CutMismatchError(obj, "cuts of level >= 2 are written {\"slot\": i, \"split\": k}")
    return slot_cut(s, natural("slot"), natural("split"))
