"""Binary vector files: 8-byte magic, u64 little-endian length, f64 payload.

The round trip is bit-exact (including -0.0, denormals and NaN payloads).
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .errors import MalformedVectorFile

MAGIC = b"WL1VEC01"
_HEADER = struct.Struct("<8sQ")


def write_vector_file(path, x: np.ndarray) -> None:
    """Write ``x`` as float64 little-endian with the standard header."""
    x = np.ascontiguousarray(x, dtype="<f8")
    if x.ndim != 1:
        raise ValueError("vector files hold one-dimensional data")
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, x.size))
        fh.write(x.tobytes())


def read_vector_file(path) -> np.ndarray:
    """Read a vector file, validating magic and exact payload length."""
    raw = Path(path).read_bytes()
    if len(raw) < _HEADER.size:
        raise MalformedVectorFile(f"{path}: truncated header ({len(raw)} bytes)")
    magic, length = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise MalformedVectorFile(f"{path}: bad magic {magic!r}")
    expected = _HEADER.size + 8 * length
    if len(raw) != expected:
        raise MalformedVectorFile(
            f"{path}: payload is {len(raw) - _HEADER.size} bytes, expected {8 * length}"
        )
    return np.frombuffer(raw, dtype="<f8", offset=_HEADER.size).copy()
