#!/usr/bin/env python3
"""
Worked array computations

Element-wise addition, matrix multiplication and 2x2 average pooling. Pooling
comes in two formulations that must agree: a direct one with explicit index
arithmetic and one built from reshape, nest and map.
"""

import logging
import operator

from arrays import Array, from_fn, map_array, reshape, sum_array, tabulate, zip_with
from exceptions import DimMismatchError, LevelMismatchError, OddExtentError, ShapeMismatchError
from nesting import nest, slot_cut
from performance_utils import profile_performance
from shapes import Index, Shape, make_shape, matrix_shape, vector_shape

# Configure module logger
logger = logging.getLogger(__name__)


def _trunc_div(total: int, divisor: int) -> int:
    """Integer division rounding toward zero"""
    quotient = abs(total) // divisor
    return quotient if total >= 0 else -quotient


def _require_matrix(a: Array[int], operation: str) -> None:
    if a.level != 2:
        raise LevelMismatchError(2, a.level, operation)
    if len(a.shape.extents) != 2:
        raise ShapeMismatchError(a.shape, "a two-axis matrix shape", operation)


# ===============================================================================
# ELEMENT-WISE AND LINEAR ALGEBRA
# ===============================================================================

@profile_performance("kernels.plus")
def plus(a: Array[int], b: Array[int]) -> Array[int]:
    """
    Element-wise sum of two arrays of the same shape, at any level.

    Raises:
        ShapeMismatchError: If the shapes differ
    """
    if a.shape != b.shape:
        raise ShapeMismatchError(a.shape, b.shape, "plus")
    return zip_with(operator.add, a, b)


@profile_performance("kernels.matmul")
def matmul(a: Array[int], b: Array[int]) -> Array[int]:
    """
    Matrix product of an m x p and a p x n matrix.

    Each result element sums a delayed level-1 array of row-by-column products.

    Raises:
        LevelMismatchError: If either operand is not a level-2 array
        DimMismatchError: If the inner dimensions differ
    """
    _require_matrix(a, "matmul left operand")
    _require_matrix(b, "matmul right operand")
    m, p = a.shape.extents
    q, n = b.shape.extents
    if p != q:
        raise DimMismatchError(p, q)

    left = tabulate(a)
    right = tabulate(b)
    terms = vector_shape(p)

    def element(iv: Index) -> int:
        i, j = iv.values
        t = from_fn(
            terms,
            lambda kv: left.at(i, kv.components[0].value) * right.at(kv.components[0].value, j),
        )
        return sum_array(t)

    return from_fn(matrix_shape(m, n), element)


# ===============================================================================
# AVERAGE POOLING
# ===============================================================================

def _pooling_extents(a: Array[int], operation: str):
    _require_matrix(a, operation)
    rows, cols = a.shape.extents
    if rows % 2 or cols % 2:
        raise OddExtentError(a.shape.extents)
    return rows // 2, cols // 2


def blocked_shape(m: int, n: int) -> Shape:
    """
    Level-3 shape whose shape-of-shape is the 2 x 2 matrix [[m, 2], [n, 2]],
    i.e. the axes m x 2 x n x 2 arranged so that both 2s share a column.
    """
    return make_shape(3, {
        "inner": {"inner": {"inner": None, "extents": [2]}, "extents": [2, 2]},
        "extents": [m, 2, n, 2],
    })


@profile_performance("kernels.avgp_direct")
def avgp_direct(a: Array[int]) -> Array[int]:
    """
    2x2 average pooling over disjoint blocks with truncating division.

    ``result[i, j] = (a[2i, 2j] + a[2i, 2j+1] + a[2i+1, 2j] + a[2i+1, 2j+1]) / 4``

    Raises:
        LevelMismatchError: If ``a`` is not a level-2 array
        OddExtentError: If an extent is odd
    """
    m, n = _pooling_extents(a, "avgp_direct")
    source = tabulate(a)

    def element(iv: Index) -> int:
        i, j = iv.values
        total = sum(
            source.at(2 * i + r, 2 * j + c)
            for r in (0, 1)
            for c in (0, 1)
        )
        return _trunc_div(total, 4)

    return from_fn(matrix_shape(m, n), element)


@profile_performance("kernels.avgp_nested")
def avgp_nested(a: Array[int]) -> Array[int]:
    """
    2x2 average pooling without index arithmetic.

    The (2m) x (2n) input is reshaped to the level-3 shape with extents
    m x 2 x n x 2, nested by cutting the shape-of-shape vertically before its
    second column, the inner 2 x 1-shaped blocks are averaged, and the outer
    m x n result is reshaped back to a level-2 matrix.

    Raises:
        LevelMismatchError: If ``a`` is not a level-2 array
        OddExtentError: If an extent is odd
    """
    m, n = _pooling_extents(a, "avgp_nested")
    blocked = blocked_shape(m, n)
    nested = nest(reshape(tabulate(a), blocked), slot_cut(blocked, 1, 1))
    pooled = map_array(lambda block: _trunc_div(sum_array(block), 4), nested)
    logger.debug(f"Pooled {a.shape} through {blocked} into {pooled.shape}")
    return reshape(pooled, matrix_shape(m, n))
