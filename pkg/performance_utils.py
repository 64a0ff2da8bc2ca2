#!/usr/bin/env python3
"""
Performance utilities for the leveled array library

This module provides a lightweight profiler for tabulation and kernels and a
debug mode for runtime invariant checks (element conservation, cons extent).
"""

import logging
import sys
import time
from dataclasses import dataclass
from functools import wraps
from typing import Callable, Dict, Optional, TextIO, TypeVar

T = TypeVar('T')

logger = logging.getLogger(__name__)


# ===============================================================================
# PERFORMANCE PROFILING
# ===============================================================================

@dataclass
class ProfileStats:
    """Statistics for a profiled operation"""
    call_count: int = 0
    total_time: float = 0.0
    min_time: float = float('inf')
    max_time: float = 0.0
    avg_time: float = 0.0


class PerformanceProfiler:
    """Profile operation execution times"""

    def __init__(self):
        self._stats: Dict[str, ProfileStats] = {}
        self._enabled = False

    def enable(self):
        """Enable profiling"""
        self._enabled = True

    def disable(self):
        """Disable profiling"""
        self._enabled = False

    @property
    def enabled(self) -> bool:
        return self._enabled

    def profile(self, func_name: Optional[str] = None):
        """
        Decorator to profile a function.

        Args:
            func_name: Optional custom name for the operation

        Example:
            >>> profiler = PerformanceProfiler()
            >>> profiler.enable()
            >>> @profiler.profile("kernels.plus")
            ... def plus(a, b):
            ...     ...
        """
        def decorator(func: Callable[..., T]) -> Callable[..., T]:
            name = func_name or f"{func.__module__}.{func.__name__}"

            @wraps(func)
            def wrapper(*args, **kwargs):
                if not self._enabled:
                    return func(*args, **kwargs)

                start_time = time.perf_counter()
                try:
                    return func(*args, **kwargs)
                finally:
                    self._record(name, time.perf_counter() - start_time)

            return wrapper
        return decorator

    def _record(self, func_name: str, elapsed_time: float):
        """Record execution time"""
        stats = self._stats.setdefault(func_name, ProfileStats())
        stats.call_count += 1
        stats.total_time += elapsed_time
        stats.min_time = min(stats.min_time, elapsed_time)
        stats.max_time = max(stats.max_time, elapsed_time)
        stats.avg_time = stats.total_time / stats.call_count

    def get_stats(self) -> Dict[str, ProfileStats]:
        """Get profiling statistics"""
        return self._stats.copy()

    def print_stats(self, top_n: int = 10, stream: Optional[TextIO] = None):
        """Print profiling statistics (stderr by default, stdout carries payloads)"""
        out = stream or sys.stderr
        if not self._stats:
            print("No profiling data collected", file=out)
            return

        print("=" * 80, file=out)
        print("PROFILE", file=out)
        print("=" * 80, file=out)

        sorted_stats = sorted(
            self._stats.items(),
            key=lambda x: x[1].total_time,
            reverse=True
        )

        print(
            f"{'Operation':<40} {'Calls':<8} {'Total(s)':<10} {'Avg(ms)':<10} "
            f"{'Min(ms)':<10} {'Max(ms)':<10}",
            file=out,
        )
        print("-" * 80, file=out)

        for func_name, stats in sorted_stats[:top_n]:
            print(
                f"{func_name:<40} {stats.call_count:<8} "
                f"{stats.total_time:<10.3f} "
                f"{stats.avg_time * 1000:<10.3f} "
                f"{stats.min_time * 1000:<10.3f} "
                f"{stats.max_time * 1000:<10.3f}",
                file=out,
            )

        print("=" * 80, file=out)

    def reset(self):
        """Reset all profiling data"""
        self._stats.clear()


# ===============================================================================
# RUNTIME ASSERTIONS
# ===============================================================================

class DebugMode:
    """
    Debug mode with runtime invariant checking.

    Disabled by default. In strict mode a violation raises AssertionError,
    otherwise it is logged as a warning.
    """

    _enabled = False
    _strict = False

    @classmethod
    def enable(cls, strict: bool = False):
        """
        Enable debug mode.

        Args:
            strict: If True, violations raise AssertionError instead of logging
        """
        cls._enabled = True
        cls._strict = strict
        logger.info("Debug mode enabled (strict=%s)", strict)

    @classmethod
    def disable(cls):
        """Disable debug mode"""
        cls._enabled = False
        cls._strict = False
        logger.info("Debug mode disabled")

    @classmethod
    def is_enabled(cls) -> bool:
        return cls._enabled

    @classmethod
    def _report(cls, msg: str):
        if cls._strict:
            raise AssertionError(msg)
        logger.warning(msg)

    @classmethod
    def assert_prod_conserved(cls, before: int, after: int, what: str):
        """Assert that an operation kept the element count"""
        if not cls._enabled:
            return

        if before != after:
            cls._report(f"Element count not conserved by {what}: {before} -> {after}")

    @classmethod
    def check_invariant(cls, condition: bool, message: str):
        """Check a general invariant"""
        if not cls._enabled:
            return

        if not condition:
            cls._report(f"Invariant violation: {message}")


# ===============================================================================
# GLOBAL INSTANCES
# ===============================================================================

# Global performance profiler
profiler = PerformanceProfiler()


def profile_performance(func_name: Optional[str] = None):
    """
    Decorator to profile an operation with the global profiler.

    Example:
        >>> @profile_performance("arrays.tabulate")
        ... def tabulate(a):
        ...     ...
    """
    return profiler.profile(func_name)
