#!/usr/bin/env python3
"""
Leveled shapes, bounded naturals and indices

A level-0 shape is the unit shape. A level-(l+1) shape is a level-l shape
(the "shape of the shape") together with a flat vector of extents that has
exactly prod(inner) entries, i.e. a level-l array of naturals stored in
row-major order. Indices carry the shape they address and one bounded
natural per extent.

The index <-> offset bijection is row-major: later axes vary fastest.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Iterator, List, Mapping, Optional, Sequence, Tuple

from exceptions import (
    ArityMismatchError,
    BoundMismatchError,
    EmptyShapeError,
    FormatError,
    LengthMismatchError,
    LevelMismatchError,
    OutOfBoundsError,
    ShapeError,
)

# Configure module logger
logger = logging.getLogger(__name__)


# ===============================================================================
# BOUNDED NATURALS
# ===============================================================================

@dataclass(frozen=True)
class BoundedNat:
    """A natural number packaged with a strict upper bound (0 <= value < bound)"""
    value: int
    bound: int

    def __post_init__(self) -> None:
        if self.value < 0 or self.value >= self.bound:
            raise OutOfBoundsError(None, self.value, self.bound)

    def __str__(self) -> str:
        return f"{self.value}<{self.bound}"


# ===============================================================================
# SHAPES
# ===============================================================================

@dataclass(frozen=True)
class Shape:
    """
    Recursive leveled shape.

    ``Shape()`` is the unit (level-0) shape. ``Shape(inner, extents)`` is a
    node whose extents vector has exactly ``prod(inner)`` entries. Extents
    may be zero; such shapes describe empty arrays.
    """
    inner: Optional["Shape"] = None
    extents: Tuple[int, ...] = ()
    level: int = field(init=False, compare=False, repr=False)
    prod: int = field(init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        extents = tuple(self.extents)
        object.__setattr__(self, "extents", extents)

        if self.inner is None:
            if extents:
                raise LengthMismatchError("extents of the unit shape", 0, len(extents))
            object.__setattr__(self, "level", 0)
            object.__setattr__(self, "prod", 1)
            return

        level = self.inner.level + 1
        for axis, extent in enumerate(extents):
            if isinstance(extent, bool) or not isinstance(extent, int) or extent < 0:
                raise ShapeError(
                    f"Extent {extent!r} on axis {axis} of a level-{level} shape "
                    f"is not a natural number"
                )
        if len(extents) != self.inner.prod:
            raise LengthMismatchError(f"extents at level {level}", self.inner.prod, len(extents))

        total = 1
        for extent in extents:
            total *= extent
        object.__setattr__(self, "level", level)
        object.__setattr__(self, "prod", total)

    @property
    def is_unit(self) -> bool:
        return self.inner is None

    @property
    def is_empty(self) -> bool:
        """True when the shape has no elements (some extent is zero)"""
        return self.prod == 0

    def __str__(self) -> str:
        if self.inner is None:
            return "unit"
        return f"L{self.level}{list(self.extents)}"


UNIT = Shape()


def prod(s: Shape) -> int:
    """Number of elements of ``s``: 1 for the unit shape, product of extents otherwise"""
    return s.prod


def level(s: Shape) -> int:
    """Depth of ``s`` in the shape hierarchy"""
    return s.level


def vector_shape(n: int) -> Shape:
    """Level-1 shape of a vector with ``n`` elements"""
    return Shape(UNIT, (n,))


def matrix_shape(*extents: int) -> Shape:
    """Level-2 shape with the given axes, e.g. ``matrix_shape(2, 3)``"""
    return Shape(vector_shape(len(extents)), tuple(extents))


def make_shape(level: int, description: Any) -> Shape:
    """
    Build a shape from a recursive extents description.

    ``description`` is ``None`` for the unit shape, a ``Shape``, a mapping with
    ``inner`` and ``extents`` keys, or an ``(inner, extents)`` pair, nested
    ``level`` times.

    Args:
        level: Expected level of the result
        description: Recursive description of the shape

    Returns:
        Validated Shape

    Raises:
        LengthMismatchError: If extents do not have prod(inner) entries
        LevelMismatchError: If the description's depth differs from ``level``
    """
    shape = _build_shape(description)
    if shape.level != level:
        raise LevelMismatchError(level, shape.level, "shape description depth")
    logger.debug(f"Built shape {shape}")
    return shape


def _build_shape(description: Any) -> Shape:
    if description is None:
        return UNIT
    if isinstance(description, Shape):
        return description
    if isinstance(description, Mapping):
        return Shape(_build_shape(description.get("inner")), tuple(description.get("extents", ())))
    inner_description, extents = description
    return Shape(_build_shape(inner_description), tuple(extents))


# ===============================================================================
# JSON GRAMMAR
# ===============================================================================

def shape_to_json(s: Shape) -> Optional[dict]:
    """Recursive record used by the levar-v1 format: null or {inner, extents}"""
    if s.inner is None:
        return None
    return {"extents": list(s.extents), "inner": shape_to_json(s.inner)}


def shape_from_json(obj: Any, level: Optional[int] = None) -> Shape:
    """
    Decode the recursive shape record.

    Raises:
        FormatError: If the record is not made of null / {inner, extents} nodes
        LengthMismatchError: If some extents vector has the wrong length
        LevelMismatchError: If ``level`` is given and differs from the depth
    """
    problems = _shape_record_problems(obj, "shape")
    if problems:
        raise FormatError("Malformed shape record", problems)
    shape = _build_shape(obj)
    if level is not None and shape.level != level:
        raise LevelMismatchError(level, shape.level, "declared level vs shape depth")
    return shape


def _shape_record_problems(obj: Any, path: str) -> List[str]:
    problems: List[str] = []
    while obj is not None:
        if not isinstance(obj, dict):
            return problems + [f"{path} must be null or an object, got {type(obj).__name__}"]
        unexpected = set(obj) - {"inner", "extents"}
        if unexpected:
            problems.append(f"{path} has unexpected keys {sorted(unexpected)}")
        if "extents" not in obj or "inner" not in obj:
            problems.append(f"{path} needs both 'inner' and 'extents'")
        extents = obj.get("extents", [])
        if not isinstance(extents, list) or not all(
            isinstance(e, int) and not isinstance(e, bool) and e >= 0 for e in extents
        ):
            problems.append(f"{path}.extents must be a list of natural numbers")
        obj = obj.get("inner")
        path += ".inner"
    return problems


# ===============================================================================
# INDICES
# ===============================================================================

@dataclass(frozen=True)
class Index:
    """An index into ``shape``: one bounded natural per extent (none for unit)"""
    shape: Shape
    components: Tuple[BoundedNat, ...] = ()

    def __post_init__(self) -> None:
        components = tuple(self.components)
        object.__setattr__(self, "components", components)
        if len(components) != len(self.shape.extents):
            raise ArityMismatchError(len(self.shape.extents), len(components))
        for axis, (component, extent) in enumerate(zip(components, self.shape.extents)):
            if component.bound != extent:
                raise BoundMismatchError(extent, component.bound, f"axis {axis}")

    @property
    def values(self) -> Tuple[int, ...]:
        return tuple(c.value for c in self.components)

    def __str__(self) -> str:
        return str(self.values)


def make_index(s: Shape, components: Sequence[int]) -> Index:
    """
    Build a bound-checked index for ``s``.

    Raises:
        ArityMismatchError: If the number of components is wrong
        OutOfBoundsError: If ``components[j] >= extents[j]`` (reports axis j)
        ShapeError: If a component is not an int
    """
    if len(components) != len(s.extents):
        raise ArityMismatchError(len(s.extents), len(components))
    bounded = []
    for axis, (value, extent) in enumerate(zip(components, s.extents)):
        if isinstance(value, bool) or not isinstance(value, int):
            raise ShapeError(f"Index component {value!r} on axis {axis} is not a natural number")
        if value < 0 or value >= extent:
            raise OutOfBoundsError(axis, value, extent)
        bounded.append(BoundedNat(value, extent))
    return Index(s, tuple(bounded))


def unit_index() -> Index:
    return Index(UNIT, ())


def lookup_bounded(v: Sequence[Any], i: BoundedNat) -> Any:
    """Select ``v[i.value]``; the bound of ``i`` must be the length of ``v``"""
    if i.bound != len(v):
        raise BoundMismatchError(len(v), i.bound, "vector length vs index bound")
    return v[i.value]


def index_to_offset(iv: Index) -> BoundedNat:
    """
    Row-major offset of ``iv`` bounded by prod(shape).

    The fold runs from the first (most significant) axis to the last:
    ``o -> o * extent[j] + value[j]`` starting from 0.

    Raises:
        EmptyShapeError: If the shape has no elements
    """
    total = iv.shape.prod
    if total == 0:
        raise EmptyShapeError(iv.shape)
    offset = 0
    for component, extent in zip(iv.components, iv.shape.extents):
        offset = offset * extent + component.value
    return BoundedNat(offset, total)


def offset_to_index(o: BoundedNat, s: Shape) -> Index:
    """
    Inverse of index_to_offset: repeated div/mod starting from the last axis.

    Raises:
        EmptyShapeError: If ``s`` has no elements
        BoundMismatchError: If ``o.bound != prod(s)``
    """
    total = s.prod
    if total == 0:
        raise EmptyShapeError(s)
    if o.bound != total:
        raise BoundMismatchError(total, o.bound, "offset bound vs prod(shape)")
    remaining = o.value
    values = []
    for extent in reversed(s.extents):
        remaining, value = divmod(remaining, extent)
        values.append(BoundedNat(value, extent))
    values.reverse()
    return Index(s, tuple(values))


def iter_indices(s: Shape) -> Iterator[Index]:
    """Lazily yield every index of ``s`` in ascending offset order"""
    if s.prod == 0:
        return
    extents = s.extents
    values = [0] * len(extents)
    while True:
        yield Index(s, tuple(BoundedNat(v, e) for v, e in zip(values, extents)))
        # odometer: the last axis moves fastest
        axis = len(extents) - 1
        while axis >= 0:
            values[axis] += 1
            if values[axis] < extents[axis]:
                break
            values[axis] = 0
            axis -= 1
        if axis < 0:
            return


def enumerate_indices(s: Shape) -> List[Index]:
    """All valid indices of ``s`` in strictly ascending offset order"""
    return list(iter_indices(s))
