#!/usr/bin/env python3
"""
Pytest configuration and fixtures for leveled array tests
"""

import pytest
from hypothesis import settings

from arrays import from_buffer, from_fn
from config_validation import set_active_config
from performance_utils import DebugMode, profiler
from shapes import UNIT, matrix_shape, vector_shape

# Delayed arrays re-evaluate on every selection, so timing varies a lot
settings.register_profile("levar", deadline=None, max_examples=100)
settings.load_profile("levar")


# ===============================================================================
# SESSION FIXTURES
# ===============================================================================

@pytest.fixture(scope="session")
def temp_data_dir(tmp_path_factory):
    """Create a temporary directory for array documents"""
    return tmp_path_factory.mktemp("arrays")


@pytest.fixture(autouse=True)
def reset_global_state():
    """Leave profiler, debug mode and active configuration as we found them"""
    yield
    DebugMode.disable()
    profiler.disable()
    profiler.reset()
    set_active_config(None)


# ===============================================================================
# WORKED EXAMPLES
# ===============================================================================

@pytest.fixture
def sca():
    """Scalar 42"""
    return from_fn(UNIT, lambda _: 42)


@pytest.fixture
def vec():
    """Five-element vector with 42 at index 0 and zeros elsewhere"""
    return from_fn(vector_shape(5), lambda iv: 42 if iv.values == (0,) else 0)


@pytest.fixture
def mat():
    """2x2 matrix with 42 at (1, 1) and zeros elsewhere"""
    return from_fn(matrix_shape(2, 2), lambda iv: 42 if iv.values == (1, 1) else 0)


@pytest.fixture
def pooling_figure():
    """The 2x4 pooling input with rows [1, 2, 5, 6] and [3, 4, 7, 8]"""
    return from_buffer(matrix_shape(2, 4), [1, 2, 5, 6, 3, 4, 7, 8])


@pytest.fixture
def golden_dir(request):
    """Directory holding the byte-exact golden documents"""
    return request.path.parent.parent / "golden"
