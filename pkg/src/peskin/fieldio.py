"""Binary field files.

Layout (all little-endian)::

    bytes 0-7    magic  b"PESKFLD\\0"
    bytes 8-11   uint32 format version
    bytes 12-15  uint32 component count (1 or 2)
    bytes 16-23  uint64 grid size N
    then         float64 values, component-major (components x N)
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .errors import FieldFormatError
from .spectral import PeriodicField

MAGIC = b"PESKFLD\x00"
VERSION = 1
_HEADER = struct.Struct("<8sIIQ")


def save_field(path, field) -> Path:
    values = field.values if isinstance(field, PeriodicField) else np.asarray(field, dtype=float)
    ncomp = 1 if values.ndim == 1 else values.shape[0]
    path = Path(path)
    with path.open("wb") as fh:
        fh.write(_HEADER.pack(MAGIC, VERSION, ncomp, values.shape[-1]))
        fh.write(np.ascontiguousarray(values, dtype="<f8").tobytes())
    return path


def load_field(path) -> PeriodicField:
    data = Path(path).read_bytes()
    if len(data) < _HEADER.size:
        raise FieldFormatError(f"{path}: truncated header ({len(data)} bytes)")
    magic, version, ncomp, n = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise FieldFormatError(f"{path}: not a field file (magic {magic!r})")
    if version != VERSION:
        raise FieldFormatError(f"{path}: format version {version} is not supported (expected {VERSION})")
    if ncomp not in (1, 2):
        raise FieldFormatError(f"{path}: bad component count {ncomp}")
    expected = _HEADER.size + 8 * ncomp * n
    if len(data) != expected:
        raise FieldFormatError(f"{path}: expected {expected} bytes, found {len(data)}")
    values = np.frombuffer(data, dtype="<f8", offset=_HEADER.size).astype(float)
    if ncomp == 2:
        values = values.reshape(2, n)
    return PeriodicField(values)
