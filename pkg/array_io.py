#!/usr/bin/env python3
"""
levar-v1 array documents and test-data generation

A document is UTF-8 JSON with sorted keys and no insignificant whitespace:

    {"data":[...],"format":"levar-v1","level":L,"shape":S}

where S is null for level 0 and {"extents":[...],"inner":S'} otherwise, and
data is the row-major buffer of 64-bit signed integers.
"""

import io
import json
import logging
from dataclasses import dataclass
from typing import IO, Any, Dict, List, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from arrays import Array, from_buffer, iota, to_buffer
from exceptions import FormatError, LengthMismatchError
from shapes import Shape, shape_from_json, shape_to_json

# Configure module logger
logger = logging.getLogger(__name__)

FORMAT_TAG = "levar-v1"
INT64_MIN = -(2 ** 63)
INT64_MAX = 2 ** 63 - 1
RANDOM_UPPER = 2 ** 31


# ===============================================================================
# DOCUMENT SCHEMA
# ===============================================================================

class ArrayDocument(BaseModel):
    """Schema of a levar-v1 document (shape consistency is checked separately)"""

    model_config = ConfigDict(extra="forbid", strict=True)

    format: str
    level: int = Field(ge=0)
    shape: Optional[Dict[str, Any]]
    data: List[int]

    @field_validator("format")
    @classmethod
    def check_format_tag(cls, value: str) -> str:
        if value != FORMAT_TAG:
            raise ValueError(f"unsupported format tag '{value}', expected '{FORMAT_TAG}'")
        return value

    @field_validator("data")
    @classmethod
    def check_int64(cls, values: List[int]) -> List[int]:
        for position, value in enumerate(values):
            if not INT64_MIN <= value <= INT64_MAX:
                raise ValueError(f"data[{position}] = {value} does not fit a 64-bit signed integer")
        return values


def _check_element(position: int, value: Any) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise FormatError(f"Element {position} is {type(value).__name__}, expected an integer")
    value = int(value)
    if not INT64_MIN <= value <= INT64_MAX:
        raise FormatError(f"Element {position} = {value} does not fit a 64-bit signed integer")
    return value


# ===============================================================================
# ENCODING
# ===============================================================================

def encode_array(a: Array[int]) -> bytes:
    """
    Serialize ``a`` to canonical levar-v1 bytes.

    Raises:
        FormatError: If some element is not a 64-bit signed integer
    """
    data = [_check_element(k, v) for k, v in enumerate(to_buffer(a))]
    document = {
        "format": FORMAT_TAG,
        "level": a.level,
        "shape": shape_to_json(a.shape),
        "data": data,
    }
    return json.dumps(document, sort_keys=True, separators=(",", ":")).encode("utf-8")


def decode_array(raw: Union[bytes, str]) -> Array[int]:
    """
    Parse levar-v1 bytes into a materialized array.

    Raises:
        FormatError: Bad JSON, bad tag or schema violation
        LengthMismatchError: data length != prod(shape), or extents != prod(inner)
        LevelMismatchError: declared level differs from the shape's depth
    """
    try:
        text = raw.decode("utf-8") if isinstance(raw, bytes) else raw
        obj = json.loads(text)
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise FormatError(f"Not a JSON document: {e}") from e

    if not isinstance(obj, dict):
        raise FormatError("A levar-v1 document must be a JSON object")
    if obj.get("format") != FORMAT_TAG:
        raise FormatError(f"Unsupported format tag {obj.get('format')!r}, expected '{FORMAT_TAG}'")

    try:
        document = ArrayDocument.model_validate(obj)
    except ValidationError as e:
        problems = [
            f"{'.'.join(str(part) for part in err['loc']) or '<document>'}: {err['msg']}"
            for err in e.errors()
        ]
        raise FormatError("Invalid levar-v1 document", problems) from e

    shape = shape_from_json(document.shape, level=document.level)
    if len(document.data) != shape.prod:
        raise LengthMismatchError(f"data of a {shape} array", shape.prod, len(document.data))
    return from_buffer(shape, document.data)


def write_array(a: Array[int], sink: IO[Any]) -> None:
    """
    Write the canonical document for ``a`` to a binary or text stream.

    Raises:
        FormatError: If some element is not a 64-bit signed integer
        OSError: If the sink cannot be written
    """
    payload = encode_array(a)
    if isinstance(sink, io.TextIOBase):
        sink.write(payload.decode("utf-8"))
    else:
        sink.write(payload)


def read_array(source: IO[Any]) -> Array[int]:
    """Read one levar-v1 document from a binary or text stream"""
    return decode_array(source.read())


def save_array(a: Array[int], path: str) -> None:
    with open(path, "wb") as f:
        write_array(a, f)
    logger.info(f"Wrote {a.shape} array to '{path}'")


def load_array(path: str) -> Array[int]:
    with open(path, "rb") as f:
        a = read_array(f)
    logger.info(f"Read {a.shape} array from '{path}'")
    return a


# ===============================================================================
# GENERATION
# ===============================================================================

@dataclass(frozen=True)
class Iota:
    """Element at offset k is k"""


@dataclass(frozen=True)
class Const:
    """The same value everywhere"""
    value: int


@dataclass(frozen=True)
class Random:
    """
    Uniform integers in [0, 2**31) from numpy's default generator (PCG64)
    seeded with ``seed``, drawn in row-major order.
    """
    seed: int


Fill = Union[Iota, Const, Random]


def parse_fill(text: str) -> Fill:
    """
    Parse ``iota``, ``const:V`` or ``rand:SEED``.

    Raises:
        ValueError: If the text is not one of these forms
    """
    kind, _, argument = text.partition(":")
    if kind == "iota" and not argument:
        return Iota()
    if kind == "const" and argument:
        return Const(int(argument))
    if kind == "rand" and argument:
        seed = int(argument)
        if seed < 0:
            raise ValueError(f"random seed must be non-negative, got {seed}")
        return Random(seed)
    raise ValueError(f"unknown fill '{text}', expected iota, const:V or rand:SEED")


def generate(s: Shape, fill: Fill) -> Array[int]:
    """Materialized integer array of shape ``s`` filled according to ``fill``"""
    if isinstance(fill, Iota):
        return iota(s)
    if isinstance(fill, Const):
        return from_buffer(s, [fill.value] * s.prod)
    rng = np.random.default_rng(fill.seed)
    values = rng.integers(0, RANDOM_UPPER, size=s.prod, dtype=np.int64)
    return from_buffer(s, values.tolist())
