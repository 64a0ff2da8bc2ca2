#!/usr/bin/env python3
"""
Leveled arrays

An array pairs a shape with its content. Content is either delayed (a pure,
total function from indices to elements) or materialized (a flat row-major
buffer with prod(shape) entries). Delayed arrays are never cached: every
selection re-evaluates the function, and callers tabulate for reuse.
"""

import functools
import logging
import operator
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Callable, Generic, Iterable, List, Optional, Sequence, Tuple, TypeVar, Union

from config_validation import get_active_config
from exceptions import (
    BoundMismatchError,
    LengthMismatchError,
    LevelMismatchError,
    ProdMismatchError,
    ShapeMismatchError,
)
from performance_utils import DebugMode, profile_performance
from shapes import (
    BoundedNat,
    Index,
    Shape,
    enumerate_indices,
    index_to_offset,
    make_index,
    matrix_shape,
    offset_to_index,
    vector_shape,
)

E = TypeVar('E')
F = TypeVar('F')

# Configure module logger
logger = logging.getLogger(__name__)


# ===============================================================================
# ARRAY TYPE
# ===============================================================================

@dataclass(frozen=True)
class Delayed(Generic[E]):
    """Content given by an index -> element function"""
    fn: Callable[[Index], E]


@dataclass(frozen=True)
class Materialized(Generic[E]):
    """Content stored as a flat row-major buffer"""
    buffer: Tuple[E, ...]


@dataclass(frozen=True, eq=False)
class Array(Generic[E]):
    """
    A leveled array.

    Arrays are not ``==``-comparable since delayed content is a function;
    use ``array_equal`` instead.
    """
    shape: Shape
    content: Union[Delayed[E], Materialized[E]]

    def __post_init__(self):
        if isinstance(self.content, Materialized) and len(self.content.buffer) != self.shape.prod:
            raise LengthMismatchError(
                f"buffer of a {self.shape} array", self.shape.prod, len(self.content.buffer)
            )

    @property
    def level(self) -> int:
        return self.shape.level

    @property
    def prod(self) -> int:
        return self.shape.prod

    @property
    def is_materialized(self) -> bool:
        return isinstance(self.content, Materialized)

    def at(self, *values: int) -> E:
        """Shorthand for ``sel(a, make_index(a.shape, values))``"""
        return sel(self, make_index(self.shape, values))

    def __repr__(self):
        kind = "materialized" if self.is_materialized else "delayed"
        return f"Array({self.shape}, {kind})"


# ===============================================================================
# CONSTRUCTION AND SELECTION
# ===============================================================================

def from_fn(s: Shape, f: Callable[[Index], E]) -> Array[E]:
    """Delayed array of shape ``s`` whose element at ``iv`` is ``f(iv)``"""
    return Array(s, Delayed(f))


def from_buffer(s: Shape, values: Iterable[E]) -> Array[E]:
    """
    Materialized array from a row-major buffer.

    Raises:
        LengthMismatchError: If the buffer does not hold prod(s) elements
    """
    return Array(s, Materialized(tuple(values)))


def sel(a: Array[E], iv: Index) -> E:
    """
    Select the element of ``a`` at ``iv``.

    Raises:
        BoundMismatchError: If ``iv`` addresses a different shape
    """
    if iv.shape != a.shape:
        raise BoundMismatchError(a.shape, iv.shape, "index shape vs array shape")
    content = a.content
    if isinstance(content, Delayed):
        return content.fn(iv)
    return content.buffer[index_to_offset(iv).value]


@profile_performance("arrays.tabulate")
def tabulate(a: Array[E],
             max_workers: Optional[int] = None,
             parallel_threshold: Optional[int] = None) -> Array[E]:
    """
    Materialize ``a`` into a row-major buffer.

    Delayed arrays with at least ``parallel_threshold`` elements are
    evaluated in contiguous chunks on a thread pool; chunks are joined in
    offset order so the buffer is identical to sequential evaluation.
    Materialized input is returned unchanged.

    Args:
        a: Array to materialize
        max_workers: Worker threads (default from the active configuration)
        parallel_threshold: Minimum size for parallel evaluation (same default)
    """
    content = a.content
    if isinstance(content, Materialized):
        return a

    settings = get_active_config().tabulation
    workers = max_workers if max_workers is not None else settings.max_workers
    threshold = parallel_threshold if parallel_threshold is not None else settings.parallel_threshold
    indices = enumerate_indices(a.shape)
    fn = content.fn

    if indices and workers > 1 and len(indices) >= threshold:
        chunk = -(-len(indices) // workers)
        chunks = [indices[start:start + chunk] for start in range(0, len(indices), chunk)]
        logger.debug(f"Tabulating {a.shape} in {len(chunks)} chunks on {workers} threads")

        def evaluate(part: List[Index]) -> List[E]:
            return [fn(iv) for iv in part]

        with ThreadPoolExecutor(max_workers=workers) as executor:
            buffer: List[E] = []
            for values in executor.map(evaluate, chunks):
                buffer.extend(values)
    else:
        buffer = [fn(iv) for iv in indices]

    return Array(a.shape, Materialized(tuple(buffer)))


def to_buffer(a: Array[E]) -> Tuple[E, ...]:
    """Row-major element tuple of ``a``"""
    content = tabulate(a).content
    assert isinstance(content, Materialized)
    return content.buffer


# ===============================================================================
# FUNCTORIAL OPERATIONS
# ===============================================================================

def map_array(f: Callable[[E], F], a: Array[E]) -> Array[F]:
    """Apply ``f`` to every element; traversal order is not prescribed"""
    return from_fn(a.shape, lambda iv: f(sel(a, iv)))


def zip_with(f: Callable[[E, E], F], a: Array[E], b: Array[E]) -> Array[F]:
    """
    Combine two arrays of the same shape elementwise.

    Raises:
        ShapeMismatchError: If the shapes differ
    """
    if a.shape != b.shape:
        raise ShapeMismatchError(a.shape, b.shape, "zip_with")
    return from_fn(a.shape, lambda iv: f(sel(a, iv), sel(b, iv)))


def reduce_array(op: Callable[[E, E], E], unit: E, a: Array[E]) -> E:
    """
    Fold all elements of ``a`` with ``op`` starting from ``unit``.

    ``op`` must be associative and commutative with identity ``unit``;
    the combination order is unspecified. Empty arrays reduce to ``unit``.
    """
    return functools.reduce(op, to_buffer(a), unit)


def sum_array(a: Array[Any]) -> Any:
    """Sum of all elements (0 for empty arrays)"""
    return reduce_array(operator.add, 0, a)


# ===============================================================================
# RESHAPE AND CONS
# ===============================================================================

def reshape(a: Array[E], target: Shape) -> Array[E]:
    """
    Reinterpret ``a`` with shape ``target`` keeping row-major element order.

    Source and target levels may differ. Each target index is converted to
    an offset, and the offset back to an index of the source shape.

    Raises:
        ProdMismatchError: If prod(shape(a)) != prod(target)
    """
    source = a.shape
    if source.prod != target.prod:
        raise ProdMismatchError(source.prod, target.prod)
    if source == target:
        return a

    logger.debug(f"Reshaping {source} -> {target}")
    content = a.content
    if isinstance(content, Materialized):
        result = Array(target, content)
    else:
        def element(jv: Index) -> E:
            offset = index_to_offset(jv)
            return sel(a, offset_to_index(BoundedNat(offset.value, source.prod), source))

        result = from_fn(target, element)

    DebugMode.assert_prod_conserved(source.prod, result.prod, "reshape")
    return result


def cons(x: E, a: Array[E]) -> Array[E]:
    """
    Prepend ``x`` to a level-1 array.

    Raises:
        LevelMismatchError: If ``a`` is not a level-1 array
    """
    if a.level != 1:
        raise LevelMismatchError(1, a.level, "cons")
    length = a.shape.extents[0]

    def element(iv: Index) -> E:
        j = iv.components[0].value
        if j == 0:
            return x
        return sel(a, make_index(a.shape, (j - 1,)))

    result = from_fn(vector_shape(length + 1), element)
    DebugMode.check_invariant(
        result.shape.extents[0] == length + 1,
        f"cons must grow the extent from {length} to {length + 1}",
    )
    return result


# ===============================================================================
# CONVENIENCE CONSTRUCTORS AND COMPARISON
# ===============================================================================

def iota(s: Shape) -> Array[int]:
    """Array whose element at offset k is k"""
    return from_buffer(s, range(s.prod))


def full(s: Shape, value: E) -> Array[E]:
    """Array with ``value`` everywhere"""
    return from_fn(s, lambda _: value)


def zeros(s: Shape) -> Array[int]:
    return full(s, 0)


def identity_matrix(n: int) -> Array[int]:
    """Level-2 ``n`` x ``n`` identity matrix"""
    return from_fn(
        matrix_shape(n, n),
        lambda iv: 1 if iv.components[0].value == iv.components[1].value else 0,
    )


def array_equal(a: Array[Any], b: Array[Any]) -> bool:
    """Same shape and the same elements in row-major order"""
    return a.shape == b.shape and to_buffer(a) == to_buffer(b)


def to_nested(a: Array[E]) -> Any:
    """
    Row-major nested-list rendering.

    Level 0 gives the scalar, level 1 a list, level 2 a list nested once per
    axis. Higher levels have no natural nesting and render as the flat buffer.
    """
    buffer = list(to_buffer(a))
    if a.level == 0:
        return buffer[0]
    if a.level > 2:
        return buffer

    def split(values: List[E], extents: Sequence[int]) -> Any:
        if len(extents) <= 1:
            return values
        step = len(values) // extents[0] if extents[0] else 0
        return [split(values[k * step:(k + 1) * step], extents[1:]) for k in range(extents[0])]

    return split(buffer, a.shape.extents)


# ===============================================================================
# SHAPES AS ARRAYS
# ===============================================================================

def shape_to_array(s: Shape) -> Array[int]:
    """
    The extents of a level-(l+1) shape as a level-l array of naturals.

    Raises:
        LevelMismatchError: For the unit shape, which has no extents array
    """
    if s.inner is None:
        raise LevelMismatchError(1, 0, "only shapes of level >= 1 are arrays of naturals")
    return from_buffer(s.inner, s.extents)


def shape_from_array(a: Array[int]) -> Shape:
    """
    The level-(l+1) shape described by a level-l array of naturals.

    Raises:
        ShapeError: If some element is not a natural number
    """
    return Shape(a.shape, tuple(int(v) for v in to_buffer(a)))
