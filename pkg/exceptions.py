#!/usr/bin/env python3
"""
Custom exceptions for the leveled array library

This module defines all custom exception types raised by shapes, arrays,
nesting, kernels, the levar-v1 file format and the configuration layer.
Each exception keeps its context as attributes so callers (and the CLI)
can report exactly what went wrong.
"""

from typing import Any, List, Optional, Sequence


# ===============================================================================
# BASE EXCEPTIONS
# ===============================================================================

class LevarError(Exception):
    """Base exception for all leveled array errors"""
    pass


# ===============================================================================
# SHAPE AND INDEX EXCEPTIONS
# ===============================================================================

class ShapeError(LevarError):
    """Base exception for shape, bounded natural and index errors"""
    pass


class LengthMismatchError(ShapeError):
    """Raised when a sequence length disagrees with the product it must equal"""

    def __init__(self, what: str, expected: int, actual: int):
        """
        Initialize length mismatch error

        Args:
            what: Which sequence was checked (e.g. "extents at level 2")
            expected: Required length
            actual: Observed length
        """
        self.what = what
        self.expected = expected
        self.actual = actual
        super().__init__(f"Length mismatch for {what}: expected {expected}, got {actual}")


class LevelMismatchError(ShapeError):
    """Raised when a shape or array has a different level than required"""

    def __init__(self, expected: int, actual: int, context: Optional[str] = None):
        self.expected = expected
        self.actual = actual
        self.context = context
        message = f"Level mismatch: expected level {expected}, got level {actual}"
        if context:
            message += f" ({context})"
        super().__init__(message)


class ArityMismatchError(ShapeError):
    """Raised when an index has the wrong number of components"""

    def __init__(self, expected: int, actual: int):
        self.expected = expected
        self.actual = actual
        super().__init__(
            f"Arity mismatch: index needs {expected} components, got {actual}"
        )


class OutOfBoundsError(ShapeError):
    """Raised when a value is not strictly below its bound"""

    def __init__(self, axis: Optional[int], value: int, bound: int):
        self.axis = axis
        self.value = value
        self.bound = bound
        where = f" on axis {axis}" if axis is not None else ""
        super().__init__(f"Out of bounds{where}: {value} is not in [0, {bound})")


class BoundMismatchError(ShapeError):
    """Raised when a bound (or an index's shape) disagrees with its target"""

    def __init__(self, expected: Any, actual: Any, context: Optional[str] = None):
        self.expected = expected
        self.actual = actual
        self.context = context
        message = f"Bound mismatch: expected {expected}, got {actual}"
        if context:
            message += f" ({context})"
        super().__init__(message)


class EmptyShapeError(ShapeError):
    """Raised when an index or offset is requested for a shape without elements"""

    def __init__(self, shape: Any):
        self.shape = shape
        super().__init__(f"Shape {shape} has no elements, so it has no valid index")


# ===============================================================================
# ARRAY EXCEPTIONS
# ===============================================================================

class ArrayError(LevarError):
    """Base exception for array operation errors"""
    pass


class ShapeMismatchError(ArrayError):
    """Raised when two arrays (or an array and a shape) must agree but do not"""

    def __init__(self, left: Any, right: Any, operation: Optional[str] = None):
        self.left = left
        self.right = right
        self.operation = operation
        prefix = f"{operation}: " if operation else ""
        super().__init__(f"{prefix}Shape mismatch between {left} and {right}")


class ProdMismatchError(ArrayError):
    """Raised when a reshape target does not hold the same number of elements"""

    def __init__(self, source_prod: int, target_prod: int):
        self.source_prod = source_prod
        self.target_prod = target_prod
        super().__init__(
            f"Prod mismatch: cannot reshape {source_prod} elements into {target_prod}"
        )


class DimMismatchError(ArrayError):
    """Raised when the contracted dimensions of a matrix product differ"""

    def __init__(self, left_dim: int, right_dim: int):
        self.left_dim = left_dim
        self.right_dim = right_dim
        super().__init__(
            f"Dim mismatch: inner dimension {left_dim} does not match outer dimension {right_dim}"
        )


class OddExtentError(ArrayError):
    """Raised when 2x2 pooling receives an axis of odd length"""

    def __init__(self, extents: Sequence[int]):
        self.extents = tuple(extents)
        super().__init__(f"Odd extent: 2x2 pooling needs even extents, got {list(extents)}")


# ===============================================================================
# NESTING EXCEPTIONS
# ===============================================================================

class CutError(LevarError):
    """Base exception for ranked cut errors"""
    pass


class CutMismatchError(CutError):
    """Raised when a ranked cut does not fit the shape it is applied to"""

    def __init__(self, cut: Any, reason: str):
        self.cut = cut
        self.reason = reason
        super().__init__(f"Cut mismatch for {cut}: {reason}")


# ===============================================================================
# FORMAT EXCEPTIONS
# ===============================================================================

class FormatError(LevarError):
    """Raised when a levar-v1 document cannot be decoded"""

    def __init__(self, message: str, errors: Optional[List[str]] = None):
        """
        Initialize format error

        Args:
            message: Human-readable error message
            errors: List of specific problems found in the document
        """
        self.errors = errors or []
        error_detail = format_validation_errors(self.errors) if self.errors else ""
        full_message = f"{message}\n{error_detail}" if error_detail else message
        super().__init__(full_message)


# ===============================================================================
# CONFIGURATION EXCEPTIONS
# ===============================================================================

class ConfigurationError(LevarError):
    """Base exception for configuration errors"""
    pass


class InvalidConfigurationError(ConfigurationError):
    """Raised when a configuration file or value is invalid"""

    def __init__(self, source: str, reason: str):
        self.source = source
        self.reason = reason
        super().__init__(f"Invalid configuration in '{source}': {reason}")


# ===============================================================================
# COMMAND LINE EXCEPTIONS
# ===============================================================================

class UsageError(LevarError):
    """Raised when command-line arguments or flag fragments are malformed"""

    def __init__(self, reason: str, command: Optional[str] = None):
        self.reason = reason
        self.command = command
        prefix = f"{command}: " if command else ""
        super().__init__(f"{prefix}{reason}")


# ===============================================================================
# UTILITY FUNCTIONS
# ===============================================================================

def format_validation_errors(errors: List[str], prefix: str = "  - ") -> str:
    """
    Format a list of validation errors for display

    Args:
        errors: List of error messages
        prefix: Prefix for each error line

    Returns:
        Formatted error string
    """
    if not errors:
        return "No errors"
    return "\n".join(f"{prefix}{err}" for err in errors)
