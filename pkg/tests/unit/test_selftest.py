#!/usr/bin/env python3
"""
Unit tests for the property self-test runner
"""

import numpy as np
import pytest

from config_validation import SelfTestConfig
from selftest import (
    SUITES,
    SelfTestReport,
    SuiteResult,
    iter_shapes,
    random_array,
    run_selftest,
)
from arrays import to_buffer
from shapes import matrix_shape


@pytest.fixture
def small_config():
    """Suite sizes small enough for unit tests"""
    return SelfTestConfig(
        io_oi_max_prod=32,
        nest_max_prod=16,
        law_max_prod=8,
        pooling_cases=5,
        pooling_max_extent=6,
        matmul_cases=5,
        matmul_max_dim=3,
        format_cases=5,
    )


class TestShapeCatalogue:
    """Test the deterministic shape enumeration"""

    def test_catalogue_size(self):
        """Acceptance needs at least 200 shapes up to 1024 elements"""
        catalogue = list(iter_shapes(max_prod=1024))
        assert len(catalogue) >= 200
        assert {s.level for s in catalogue} == {0, 1, 2, 3}
        assert all(s.prod <= 1024 for s in catalogue)

    def test_catalogue_is_deterministic(self):
        assert list(iter_shapes(max_prod=64)) == list(iter_shapes(max_prod=64))

    def test_catalogue_has_no_duplicates(self):
        catalogue = list(iter_shapes(max_prod=256))
        assert len(set(catalogue)) == len(catalogue)

    def test_level_limit(self):
        assert all(s.level <= 1 for s in iter_shapes(max_level=1))
        assert len(list(iter_shapes(max_level=1))) == 5

    def test_random_array(self):
        a = random_array(np.random.default_rng(0), matrix_shape(3, 3), 0, 5)
        assert all(0 <= v < 5 for v in to_buffer(a))


class TestReporting:
    """Test suite tallies"""

    def test_record(self):
        result = SuiteResult("demo")
        result.record(True, "ok")
        result.record(False, "broken")
        assert result.passed == 1
        assert result.failed == 1
        assert result.failures == ["broken"]
        assert not result.ok

    def test_failures_are_capped(self):
        result = SuiteResult("demo")
        for k in range(30):
            result.record(False, f"case {k}")
        assert result.failed == 30
        assert len(result.failures) == 20

    def test_suite_without_checks_is_not_ok(self):
        assert not SuiteResult("empty").ok

    def test_report_totals(self):
        report = SelfTestReport([SuiteResult("a", passed=3), SuiteResult("b", passed=1, failed=2)])
        assert report.passed == 4
        assert report.failed == 2
        assert not report.ok


class TestRunSelftest:
    """Test running the property suites"""

    @pytest.mark.parametrize("name", sorted(SUITES))
    def test_each_suite_passes(self, name, small_config):
        report = run_selftest(small_config, only=[name])
        assert [suite.name for suite in report.suites] == [name]
        assert report.ok, report.suites[0].failures

    def test_all_suites_pass(self, small_config):
        report = run_selftest(small_config, seed=3)
        assert len(report.suites) == len(SUITES)
        assert report.ok
        assert report.elapsed >= 0

    def test_same_seed_same_counts(self, small_config):
        first = run_selftest(small_config, seed=5, only=["pooling_equivalence", "format_roundtrip"])
        second = run_selftest(small_config, seed=5, only=["pooling_equivalence", "format_roundtrip"])
        assert [s.passed for s in first.suites] == [s.passed for s in second.suites]

    def test_unknown_suite(self, small_config):
        with pytest.raises(ValueError, match="Unknown suites"):
            run_selftest(small_config, only=["nope"])

    def test_negative_seed(self, small_config):
        with pytest.raises(ValueError, match="non-negative"):
            run_selftest(small_config, seed=-1, only=["cons"])

    def test_raising_suite_is_reported(self, small_config, monkeypatch):
        def broken(config, rng):
            raise AssertionError("invariant broken")

        monkeypatch.setitem(SUITES, "cons", broken)
        report = run_selftest(small_config, only=["cons"])
        assert not report.ok
        assert "invariant broken" in report.suites[0].failures[0]

    @pytest.mark.slow
    def test_default_sizes_pass(self):
        assert run_selftest(seed=1).ok
