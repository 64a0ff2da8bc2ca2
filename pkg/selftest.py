#!/usr/bin/env python3
"""
Property suites for the leveled array library

Each suite checks one family of laws (index/offset bijection, cuts,
nesting, functor laws, reshape conservation, kernels, file format) either
exhaustively over a deterministic catalogue of small shapes or on seeded
random inputs. ``run_selftest`` runs them all and returns a report.
"""

import itertools
import logging
import operator
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterator, List, Optional, Sequence

import numpy as np

from array_io import decode_array, encode_array, generate, Random
from arrays import (
    Array,
    array_equal,
    cons,
    from_buffer,
    identity_matrix,
    map_array,
    reshape,
    sel,
    tabulate,
    to_buffer,
    zip_with,
)
from config_validation import SelfTestConfig
from exceptions import LevarError, OutOfBoundsError
from kernels import avgp_direct, avgp_nested, matmul, plus
from nesting import cut_count, iter_cuts, merge_index, nest, ranked_cut, split_index, unnest
from shapes import (
    UNIT,
    BoundedNat,
    Shape,
    enumerate_indices,
    index_to_offset,
    matrix_shape,
    offset_to_index,
    vector_shape,
)

logger = logging.getLogger(__name__)

CATALOG_EXTENTS = (0, 1, 2, 3)
CATALOG_MAX_AXES = 4


# ===============================================================================
# SHAPE CATALOGUE
# ===============================================================================

def iter_shapes(max_level: int = 3,
                extent_values: Sequence[int] = CATALOG_EXTENTS,
                max_prod: int = 1024,
                max_axes: int = CATALOG_MAX_AXES) -> Iterator[Shape]:
    """
    Deterministically enumerate small shapes of levels 0..max_level.

    A level-(l+1) shape is built from every catalogued level-l shape with at
    most ``max_axes`` elements (its shape-of-shape) and every extents vector
    drawn from ``extent_values``. Shapes with more than ``max_prod`` elements
    are skipped.
    """
    current: List[Shape] = [UNIT]
    yield UNIT
    for _ in range(max_level):
        following: List[Shape] = []
        for inner in current:
            if inner.prod > max_axes:
                continue
            for extents in itertools.product(extent_values, repeat=inner.prod):
                shape = Shape(inner, extents)
                if shape.prod <= max_prod:
                    following.append(shape)
        yield from following
        current = following


def random_array(rng: np.random.Generator, s: Shape, low: int = -50, high: int = 50) -> Array[int]:
    """Materialized array with uniform integers in [low, high)"""
    return from_buffer(s, rng.integers(low, high, size=s.prod).tolist())


# ===============================================================================
# REPORTING
# ===============================================================================

@dataclass
class SuiteResult:
    """Pass/fail tally of one property suite"""
    name: str
    passed: int = 0
    failed: int = 0
    failures: List[str] = field(default_factory=list)

    def record(self, condition: bool, description: str) -> None:
        if condition:
            self.passed += 1
        else:
            self.failed += 1
            if len(self.failures) < 20:
                self.failures.append(description)

    @property
    def ok(self) -> bool:
        return self.failed == 0 and self.passed > 0


@dataclass
class SelfTestReport:
    """Results of all suites"""
    suites: List[SuiteResult]
    elapsed: float = 0.0

    @property
    def ok(self) -> bool:
        return all(suite.ok for suite in self.suites)

    @property
    def passed(self) -> int:
        return sum(suite.passed for suite in self.suites)

    @property
    def failed(self) -> int:
        return sum(suite.failed for suite in self.suites)


# ===============================================================================
# CORE-SHAPE SUITES
# ===============================================================================

def check_index_offset(config: SelfTestConfig, rng: np.random.Generator) -> SuiteResult:
    """io/oi: offsets and indices convert back and forth, in ascending order"""
    result = SuiteResult("index_offset_bijection")
    for s in iter_shapes(max_prod=config.io_oi_max_prod):
        indices = enumerate_indices(s)
        ok = len(indices) == s.prod
        for k, iv in enumerate(indices):
            if not ok:
                break
            offset = index_to_offset(iv)
            ok = (offset == BoundedNat(k, s.prod)
                  and offset_to_index(offset, s) == iv
                  and index_to_offset(offset_to_index(BoundedNat(k, s.prod), s)).value == k)
        result.record(ok, f"index/offset roundtrip fails for {s}")
    return result


def check_bounded_nat(config: SelfTestConfig, rng: np.random.Generator) -> SuiteResult:
    """Construction with value >= bound always fails"""
    result = SuiteResult("bounded_nat")
    for bound in range(0, 6):
        for value in range(0, 8):
            try:
                BoundedNat(value, bound)
                built = True
            except OutOfBoundsError:
                built = False
            result.record(built == (value < bound), f"BoundedNat({value}, {bound})")
    return result


# ===============================================================================
# NESTING SUITES
# ===============================================================================

def _nesting_shapes(config: SelfTestConfig) -> Iterator[Shape]:
    for s in iter_shapes(max_prod=config.nest_max_prod):
        if s.level >= 1:
            yield s


def check_cuts(config: SelfTestConfig, rng: np.random.Generator) -> SuiteResult:
    """Cut products multiply back to prod(s); cut counts follow the formula"""
    result = SuiteResult("cut_products_and_counts")
    result.record(cut_count(UNIT) == 1 and len(list(iter_cuts(UNIT))) == 1, "level-0 cut count")
    for s in _nesting_shapes(config):
        cuts = list(iter_cuts(s))
        expected = 2 if s.level == 1 else sum(1 + axis for axis in s.inner.extents)
        if s.level == 2:
            expected = len(s.extents) + 1
        result.record(len(cuts) == cut_count(s) == expected, f"cut count for {s}")
        for c in cuts:
            left, right = ranked_cut(s, c)
            result.record(left.prod * right.prod == s.prod, f"prod of {c} on {s}")
    return result


def check_split_merge(config: SelfTestConfig, rng: np.random.Generator) -> SuiteResult:
    """split_index and merge_index are mutually inverse bijections"""
    result = SuiteResult("split_merge_bijection")
    for s in _nesting_shapes(config):
        indices = enumerate_indices(s)
        for c in iter_cuts(s):
            left, right = ranked_cut(s, c)
            ok = all(merge_index(*split_index(iv, c), c, s) == iv for iv in indices)
            merged = set()
            for ov in enumerate_indices(left):
                for riv in enumerate_indices(right):
                    jv = merge_index(ov, riv, c, s)
                    ok = ok and split_index(jv, c) == (ov, riv)
                    merged.add(jv)
            ok = ok and merged == set(indices)
            result.record(ok, f"split/merge for {c} on {s}")
    return result


def check_nest(config: SelfTestConfig, rng: np.random.Generator) -> SuiteResult:
    """Nesting preserves every element and unnest inverts it"""
    result = SuiteResult("nest_element_preservation")
    for s in itertools.chain([UNIT], _nesting_shapes(config)):
        a = random_array(rng, s)
        for c in iter_cuts(s):
            nested = nest(a, c)
            left, right = ranked_cut(s, c)
            ok = nested.shape == left
            for ov in enumerate_indices(left):
                block = sel(nested, ov)
                ok = ok and block.shape == right
                for riv in enumerate_indices(right):
                    ok = ok and sel(block, riv) == sel(a, merge_index(ov, riv, c, s))
            ok = ok and array_equal(unnest(nested, c, s), a)
            result.record(ok, f"nest/unnest for {c} on {s}")
    return result


# ===============================================================================
# CORE-ARRAY SUITES
# ===============================================================================

def _law_shapes(config: SelfTestConfig) -> List[Shape]:
    return list(iter_shapes(max_prod=config.law_max_prod))


def check_functor_laws(config: SelfTestConfig, rng: np.random.Generator) -> SuiteResult:
    """map identity/composition, tabulate idempotence, selection consistency, zip laws"""
    result = SuiteResult("functor_laws")
    f: Callable[[int], int] = lambda x: 3 * x + 1
    g: Callable[[int], int] = lambda x: x * x - 2
    for s in _law_shapes(config):
        a = random_array(rng, s)
        b = random_array(rng, s)
        c = random_array(rng, s)
        t = tabulate(a)
        result.record(array_equal(map_array(lambda x: x, a), a), f"map id on {s}")
        result.record(
            array_equal(map_array(lambda x: f(g(x)), a), map_array(f, map_array(g, a))),
            f"map composition on {s}",
        )
        result.record(tabulate(t) is t and t.shape == a.shape, f"tabulate idempotent on {s}")
        result.record(
            all(sel(t, iv) == sel(a, iv) == sel(t, offset_to_index(index_to_offset(iv), s))
                for iv in enumerate_indices(s)),
            f"selection consistency on {s}",
        )
        result.record(
            array_equal(zip_with(operator.add, a, b), zip_with(operator.add, b, a))
            and array_equal(plus(plus(a, b), c), plus(a, plus(b, c))),
            f"zip_with(+) laws on {s}",
        )
    return result


def check_reshape(config: SelfTestConfig, rng: np.random.Generator) -> SuiteResult:
    """Reshape keeps the row-major buffer and reshaping back restores the array"""
    result = SuiteResult("reshape_conservation")
    by_prod: Dict[int, List[Shape]] = {}
    for s in _law_shapes(config):
        by_prod.setdefault(s.prod, []).append(s)

    for s in _law_shapes(config):
        a = random_array(rng, s)
        candidates = by_prod[s.prod]
        picks = rng.choice(len(candidates), size=min(3, len(candidates)), replace=False)
        for pick in picks:
            target = candidates[int(pick)]
            r = reshape(a, target)
            result.record(
                r.shape == target and to_buffer(r) == to_buffer(a)
                and array_equal(reshape(r, s), a),
                f"reshape {s} -> {target}",
            )

    figure = from_buffer(matrix_shape(2, 4), [1, 2, 5, 6, 3, 4, 7, 8])
    blocks = reshape(figure, matrix_shape(2, 2, 2))
    result.record(
        [sel(blocks, iv) for iv in enumerate_indices(blocks.shape)] == [1, 2, 5, 6, 3, 4, 7, 8],
        "reshape tiling of the pooling figure",
    )
    return result


def check_cons(config: SelfTestConfig, rng: np.random.Generator) -> SuiteResult:
    """cons grows the extent by one and shifts the old elements"""
    result = SuiteResult("cons")
    for n in range(0, 6):
        a = random_array(rng, vector_shape(n))
        x = int(rng.integers(-50, 50))
        consed = tabulate(cons(x, a))
        result.record(
            consed.shape == vector_shape(n + 1) and to_buffer(consed) == (x,) + to_buffer(a),
            f"cons on a length-{n} vector",
        )
    return result


# ===============================================================================
# KERNEL SUITES
# ===============================================================================

def check_pooling(config: SelfTestConfig, rng: np.random.Generator) -> SuiteResult:
    """Nested and direct pooling agree (and reproduce the worked figure)"""
    result = SuiteResult("pooling_equivalence")
    figure = from_buffer(matrix_shape(2, 4), [1, 2, 5, 6, 3, 4, 7, 8])
    for kernel in (avgp_direct, avgp_nested):
        result.record(to_buffer(kernel(figure)) == (2, 6), f"{kernel.__name__} on the figure")

    half = config.pooling_max_extent // 2
    for case in range(config.pooling_cases):
        m = int(rng.integers(1, half + 1))
        n = int(rng.integers(1, half + 1))
        a = random_array(rng, matrix_shape(2 * m, 2 * n), 0, 1000)
        result.record(array_equal(avgp_nested(a), avgp_direct(a)), f"pooling case {case} ({2 * m}x{2 * n})")
    return result


def _matmul_oracle(a: List[List[int]], b: List[List[int]]) -> List[int]:
    m, p, n = len(a), len(b), len(b[0]) if b else 0
    return [sum(a[i][k] * b[k][j] for k in range(p)) for i in range(m) for j in range(n)]


def check_matmul(config: SelfTestConfig, rng: np.random.Generator) -> SuiteResult:
    """matmul agrees with a triple loop and has identity units"""
    result = SuiteResult("matmul_oracle")
    top = config.matmul_max_dim
    for case in range(config.matmul_cases):
        m, p, n = (int(v) for v in rng.integers(1, top + 1, size=3))
        a_rows = rng.integers(-20, 20, size=(m, p)).tolist()
        b_rows = rng.integers(-20, 20, size=(p, n)).tolist()
        a = from_buffer(matrix_shape(m, p), [v for row in a_rows for v in row])
        b = from_buffer(matrix_shape(p, n), [v for row in b_rows for v in row])
        ok = list(to_buffer(matmul(a, b))) == _matmul_oracle(a_rows, b_rows)
        if case < 50:
            ok = ok and array_equal(matmul(identity_matrix(m), a), a)
            ok = ok and array_equal(matmul(a, identity_matrix(p)), a)
        result.record(ok, f"matmul case {case} ({m}x{p} . {p}x{n})")
    return result


# ===============================================================================
# FORMAT SUITE
# ===============================================================================

def check_format(config: SelfTestConfig, rng: np.random.Generator) -> SuiteResult:
    """Decoding inverts encoding, and encoding a decoded document is byte-exact"""
    result = SuiteResult("format_roundtrip")
    shapes = _law_shapes(config)
    for case in range(config.format_cases):
        s = shapes[int(rng.integers(0, len(shapes)))]
        a = generate(s, Random(int(rng.integers(0, 2 ** 31))))
        raw = encode_array(a)
        back = decode_array(raw)
        result.record(array_equal(back, a) and encode_array(back) == raw, f"format case {case} on {s}")
    return result


# ===============================================================================
# RUNNER
# ===============================================================================

SUITES: Dict[str, Callable[[SelfTestConfig, np.random.Generator], SuiteResult]] = {
    "index_offset_bijection": check_index_offset,
    "bounded_nat": check_bounded_nat,
    "cut_products_and_counts": check_cuts,
    "split_merge_bijection": check_split_merge,
    "nest_element_preservation": check_nest,
    "functor_laws": check_functor_laws,
    "reshape_conservation": check_reshape,
    "cons": check_cons,
    "pooling_equivalence": check_pooling,
    "matmul_oracle": check_matmul,
    "format_roundtrip": check_format,
}


def run_selftest(config: Optional[SelfTestConfig] = None,
                 seed: Optional[int] = None,
                 only: Optional[Sequence[str]] = None) -> SelfTestReport:
    """
    Run the property suites.

    Args:
        config: Suite sizes (defaults if omitted)
        seed: Overrides ``config.seed``
        only: Names of the suites to run (all if omitted)

    Returns:
        SelfTestReport with one SuiteResult per suite

    Raises:
        ValueError: If the seed is negative or a suite name is unknown
    """
    config = config or SelfTestConfig()
    base_seed = config.seed if seed is None else seed
    if base_seed < 0:
        raise ValueError(f"Seed must be non-negative, got {base_seed}")
    names = list(only) if only else list(SUITES)
    unknown = [name for name in names if name not in SUITES]
    if unknown:
        raise ValueError(f"Unknown suites: {', '.join(unknown)}")

    start = time.perf_counter()
    suites = []
    for position, name in enumerate(names):
        rng = np.random.default_rng([base_seed, position])
        try:
            suite = SUITES[name](config, rng)
        except (LevarError, AssertionError) as e:
            logger.error(f"Suite '{name}' raised: {e}", exc_info=True)
            suite = SuiteResult(name, failed=1, failures=[f"raised {type(e).__name__}: {e}"])
        logger.info(f"Suite {name}: {suite.passed} passed, {suite.failed} failed")
        suites.append(suite)

    return SelfTestReport(suites, time.perf_counter() - start)
