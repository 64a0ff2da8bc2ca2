#!/usr/bin/env python3
"""
Unit tests for ranked cuts, index split/merge and nesting
"""

import pytest
from hypothesis import given

from arrays import array_equal, from_buffer, iota, map_array, reshape, sel, tabulate, to_buffer
from exceptions import BoundMismatchError, CutMismatchError, ShapeMismatchError
from nesting import (
    SideCut,
    SlotCut,
    TrivialCut,
    cut_count,
    cut_to_json,
    iter_cuts,
    merge_index,
    nest,
    parse_cut,
    plan_cut,
    rank_map,
    ranked_cut,
    side_cut,
    slot_cut,
    split_index,
    trivial_cut,
    unnest,
)
from selftest import iter_shapes
from shapes import (
    UNIT,
    Shape,
    enumerate_indices,
    index_to_offset,
    make_index,
    matrix_shape,
    unit_index,
    vector_shape,
)
from tests.strategies import int_arrays, shapes


def pooling_shape(m, n):
    return Shape(Shape(vector_shape(2), (2, 2)), (m, 2, n, 2))


class TestCutConstruction:
    """Test cut descriptors and their validation"""

    def test_side_cut_bounds(self):
        assert side_cut(0).side.value == 0
        assert side_cut(1).side.bound == 2
        with pytest.raises(CutMismatchError):
            side_cut(2)

    def test_slot_cut_bounds_come_from_shape(self):
        c = slot_cut(matrix_shape(4, 5, 6), 0, 2)
        assert c.slot.bound == 1
        assert c.split.bound == 4

    def test_slot_cut_split_may_equal_axis_count(self):
        assert slot_cut(matrix_shape(4, 5), 0, 2).split.value == 2

    @pytest.mark.parametrize("slot,split", [(1, 0), (0, 4), (-1, 0)])
    def test_slot_cut_out_of_range(self, slot, split):
        with pytest.raises(CutMismatchError):
            slot_cut(matrix_shape(4, 5, 6), slot, split)

    def test_slot_cut_needs_level_two(self):
        with pytest.raises(CutMismatchError):
            slot_cut(vector_shape(3), 0, 0)

    def test_cut_level_checked(self):
        with pytest.raises(CutMismatchError):
            ranked_cut(matrix_shape(2, 3), side_cut(0))
        with pytest.raises(CutMismatchError):
            ranked_cut(vector_shape(3), trivial_cut())
        with pytest.raises(CutMismatchError):
            ranked_cut(UNIT, side_cut(1))

    def test_cut_bounds_checked_against_shape(self):
        c = slot_cut(matrix_shape(4, 5, 6), 0, 3)
        with pytest.raises(CutMismatchError):
            ranked_cut(matrix_shape(4, 5), c)

    def test_str(self):
        assert str(trivial_cut()) == "cut()"
        assert str(side_cut(1)) == "cut(side=1)"
        assert str(slot_cut(matrix_shape(2, 2), 0, 1)) == "cut(slot=0, split=1)"


class TestCutCount:
    """Test the number of cuts per shape"""

    def test_level_zero(self):
        assert cut_count(UNIT) == 1

    def test_level_one(self):
        assert cut_count(vector_shape(7)) == 2

    def test_level_two(self):
        assert cut_count(matrix_shape(3, 4, 5)) == 4
        assert cut_count(Shape(vector_shape(0), ())) == 1

    def test_level_three(self):
        assert cut_count(pooling_shape(3, 4)) == 6

    def test_iter_cuts_matches_count(self):
        for s in iter_shapes(max_prod=64):
            assert len(list(iter_cuts(s))) == cut_count(s)


class TestRankedCut:
    """Test the shapes produced by each cut"""

    def test_level_zero(self):
        assert ranked_cut(UNIT, trivial_cut()) == (UNIT, UNIT)

    def test_level_one_sides(self):
        s = vector_shape(3)
        assert ranked_cut(s, side_cut(0)) == (vector_shape(1), s)
        assert ranked_cut(s, side_cut(1)) == (s, vector_shape(1))

    def test_level_two_split_one(self):
        left, right = ranked_cut(matrix_shape(4, 5, 6), slot_cut(matrix_shape(4, 5, 6), 0, 1))
        assert left == matrix_shape(4)
        assert right == matrix_shape(5, 6)

    def test_level_two_split_zero_gives_singleton(self):
        s = matrix_shape(4, 5, 6)
        left, right = ranked_cut(s, slot_cut(s, 0, 0))
        assert left == Shape(vector_shape(0), ())
        assert left.prod == 1
        assert right == s

    def test_level_two_full_split(self):
        s = matrix_shape(4, 5, 6)
        left, right = ranked_cut(s, slot_cut(s, 0, 3))
        assert left == s
        assert right.prod == 1

    def test_pooling_cut(self):
        s = pooling_shape(3, 4)
        left, right = ranked_cut(s, slot_cut(s, 1, 1))
        column = Shape(vector_shape(2), (2, 1))
        assert left == Shape(column, (3, 4))
        assert right == Shape(column, (2, 2))

    def test_zero_extent_side_is_kept(self):
        s = matrix_shape(0, 3)
        left, right = ranked_cut(s, slot_cut(s, 0, 1))
        assert left == matrix_shape(0)
        assert right == matrix_shape(3)
        assert left.prod * right.prod == s.prod

    def test_products_multiply(self):
        for s in iter_shapes(max_prod=256):
            for c in iter_cuts(s):
                left, right = ranked_cut(s, c)
                assert left.prod * right.prod == s.prod
                assert left.level == right.level == s.level

    def test_plans_are_cached(self):
        s = matrix_shape(2, 3)
        c = slot_cut(s, 0, 1)
        assert plan_cut(s, c) is plan_cut(s, c)


class TestSplitMerge:
    """Test routing index components through a cut"""

    def test_level_two(self):
        s = matrix_shape(4, 5, 6)
        c = slot_cut(s, 0, 1)
        ov, iv = split_index(make_index(s, [3, 2, 1]), c)
        assert ov.values == (3,)
        assert iv.values == (2, 1)
        assert merge_index(ov, iv, c, s).values == (3, 2, 1)

    def test_level_zero(self):
        assert split_index(unit_index(), trivial_cut()) == (unit_index(), unit_index())

    def test_level_one(self):
        s = vector_shape(3)
        ov, iv = split_index(make_index(s, [2]), side_cut(0))
        assert ov.values == (0,)
        assert iv.values == (2,)
        ov, iv = split_index(make_index(s, [2]), side_cut(1))
        assert ov.values == (2,)
        assert iv.values == (0,)

    def test_pooling_merge_matches_matrix_offsets(self):
        m, n = 3, 2
        s = pooling_shape(m, n)
        c = slot_cut(s, 1, 1)
        left, right = ranked_cut(s, c)
        matrix = matrix_shape(2 * m, 2 * n)
        for ov in enumerate_indices(left):
            for iv in enumerate_indices(right):
                i, j = ov.values
                r, col = iv.values
                merged = merge_index(ov, iv, c, s)
                assert merged.values == (i, r, j, col)
                expected = index_to_offset(make_index(matrix, [2 * i + r, 2 * j + col]))
                assert index_to_offset(merged).value == expected.value

    def test_merge_checks_component_shapes(self):
        s = matrix_shape(4, 5, 6)
        c = slot_cut(s, 0, 1)
        with pytest.raises(BoundMismatchError):
            merge_index(make_index(matrix_shape(5, 6), [0, 0]), make_index(matrix_shape(4), [0]), c, s)

    def test_split_checks_index_shape(self):
        c = slot_cut(matrix_shape(2, 3), 0, 1)
        with pytest.raises(CutMismatchError):
            split_index(make_index(matrix_shape(3, 3, 3), [0, 0, 0]), c)

    def test_bijection_over_catalogue(self):
        for s in iter_shapes(max_prod=64):
            indices = enumerate_indices(s)
            for c in iter_cuts(s):
                left, right = ranked_cut(s, c)
                assert all(merge_index(*split_index(iv, c), c, s) == iv for iv in indices)
                merged = [merge_index(ov, iv, c, s)
                          for ov in enumerate_indices(left)
                          for iv in enumerate_indices(right)]
                assert sorted(merged, key=lambda jv: index_to_offset(jv).value) == indices


class TestNest:
    """Test nesting and unnesting arrays"""

    def test_vector_side_zero(self):
        a = from_buffer(vector_shape(3), [1, 2, 3])
        nested = nest(a, side_cut(0))
        assert nested.shape == vector_shape(1)
        assert to_buffer(nested.at(0)) == (1, 2, 3)

    def test_vector_side_one(self):
        a = from_buffer(vector_shape(3), [1, 2, 3])
        nested = nest(a, side_cut(1))
        assert nested.shape == vector_shape(3)
        assert [to_buffer(nested.at(j)) for j in range(3)] == [(1,), (2,), (3,)]

    def test_matrix_rows(self):
        s = matrix_shape(2, 3)
        nested = nest(iota(s), slot_cut(s, 0, 1))
        assert nested.shape == matrix_shape(2)
        assert to_buffer(nested.at(0)) == (0, 1, 2)
        assert to_buffer(nested.at(1)) == (3, 4, 5)

    def test_scalar(self, sca):
        nested = nest(sca, trivial_cut())
        inner = sel(nested, unit_index())
        assert sel(inner, unit_index()) == 42

    def test_pooling_blocks(self, pooling_figure):
        blocked = pooling_shape(1, 2)
        nested = nest(reshape(pooling_figure, blocked), slot_cut(blocked, 1, 1))
        blocks = [to_buffer(block) for block in to_buffer(nested)]
        assert blocks == [(1, 2, 3, 4), (5, 6, 7, 8)]

    def test_unnest_inverts_nest(self):
        for s in iter_shapes(max_prod=32):
            a = iota(s)
            for c in iter_cuts(s):
                assert array_equal(unnest(nest(a, c), c, s), a)

    @given(int_arrays(shapes(min_level=1)))
    def test_nest_preserves_elements(self, a):
        for c in iter_cuts(a.shape):
            nested = tabulate(nest(a, c))
            left, right = ranked_cut(a.shape, c)
            for ov in enumerate_indices(left):
                block = sel(nested, ov)
                assert block.shape == right
                for iv in enumerate_indices(right):
                    assert sel(block, iv) == sel(a, merge_index(ov, iv, c, a.shape))

    def test_unnest_outer_shape_checked(self):
        s = matrix_shape(2, 3)
        c = slot_cut(s, 0, 1)
        with pytest.raises(ShapeMismatchError):
            unnest(nest(iota(matrix_shape(3, 3)), slot_cut(matrix_shape(3, 3), 0, 1)), c, s)

    def test_unnest_inner_shape_checked(self):
        s = matrix_shape(2, 3)
        c = slot_cut(s, 0, 1)
        bad = map_array(lambda block: iota(vector_shape(1)), nest(iota(s), c))
        with pytest.raises(ShapeMismatchError):
            unnest(bad, c, s)


class TestRankMap:
    """Test applying a function to every inner block"""

    def test_reverse_rows(self):
        s = matrix_shape(2, 3)
        reversed_rows = rank_map(
            lambda row: from_buffer(row.shape, tuple(reversed(to_buffer(row)))),
            iota(s),
            slot_cut(s, 0, 1),
        )
        assert to_buffer(reversed_rows) == (2, 1, 0, 5, 4, 3)

    def test_shape_change_rejected(self):
        s = matrix_shape(2, 3)
        with pytest.raises(ShapeMismatchError):
            to_buffer(rank_map(lambda row: iota(vector_shape(1)), iota(s), slot_cut(s, 0, 1)))


class TestCutJson:
    """Test the cut fragment grammar"""

    def test_to_json(self):
        assert cut_to_json(trivial_cut()) is None
        assert cut_to_json(side_cut(1)) == {"side": 1}
        assert cut_to_json(slot_cut(matrix_shape(2, 3), 0, 1)) == {"slot": 0, "split": 1}

    def test_parse(self):
        assert isinstance(parse_cut(None, UNIT), TrivialCut)
        assert parse_cut({"side": 0}, vector_shape(3)) == side_cut(0)
        s = pooling_shape(2, 2)
        parsed = parse_cut({"slot": 1, "split": 1}, s)
        assert isinstance(parsed, SlotCut)
        assert parsed == slot_cut(s, 1, 1)

    @pytest.mark.parametrize("fragment,shape", [
        ({"side": 0}, UNIT),
        ([0], vector_shape(3)),
        ({"side": 2}, vector_shape(3)),
        ({"side": "0"}, vector_shape(3)),
        ({"slot": 0}, matrix_shape(2, 3)),
        ({"slot": 0, "split": 3}, matrix_shape(2, 3)),
        ({"side": 0}, matrix_shape(2, 3)),
        ({"slot": True, "split": 0}, matrix_shape(2, 3)),
    ])
    def test_parse_rejects(self, fragment, shape):
        with pytest.raises(CutMismatchError):
            parse_cut(fragment, shape)

    def test_roundtrip_all_cuts(self):
        for s in iter_shapes(max_prod=16):
            for c in iter_cuts(s):
                assert parse_cut(cut_to_json(c), s) == c

    def test_side_cut_type(self):
        assert isinstance(side_cut(0), SideCut)
