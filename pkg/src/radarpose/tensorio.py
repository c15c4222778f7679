"""Binary tensor file format shared by every pipeline stage.

Layout: magic "PRM3F", one version byte, one axis-count byte, axis lengths
as unsigned 64-bit little-endian, one element-tag byte (0 = real64,
1 = complex128), then the row-major little-endian payload.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

MAGIC = b"PRM3F"
VERSION = 1
_TAG_REAL64 = 0
_TAG_COMPLEX128 = 1


class TensorFormatError(ValueError):
    """Raised when a tensor file is malformed or truncated."""


def write_tensor(path: str | Path, data: np.ndarray) -> None:
    """Write an array as real64 or complex128 depending on its dtype."""
    data = np.asarray(data)
    if np.iscomplexobj(data):
        tag, payload = _TAG_COMPLEX128, np.ascontiguousarray(data, dtype="<c16")
    else:
        tag, payload = _TAG_REAL64, np.ascontiguousarray(data, dtype="<f8")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(bytes([VERSION, data.ndim]))
        fh.write(struct.pack(f"<{data.ndim}Q", *data.shape))
        fh.write(bytes([tag]))
        fh.write(payload.tobytes())


def read_tensor(path: str | Path) -> np.ndarray:
    raw = Path(path).read_bytes()
    if raw[: len(MAGIC)] != MAGIC:
        raise TensorFormatError(f"{path}: bad magic {raw[:5]!r}")
    off = len(MAGIC)
    if len(raw) < off + 2:
        raise TensorFormatError(f"{path}: truncated header")
    version, ndim = raw[off], raw[off + 1]
    if version != VERSION:
        raise TensorFormatError(f"{path}: unsupported version {version}")
    off += 2
    if len(raw) < off + 8 * ndim + 1:
        raise TensorFormatError(f"{path}: truncated axis table")
    shape = struct.unpack_from(f"<{ndim}Q", raw, off)
    off += 8 * ndim
    tag = raw[off]
    off += 1
    if tag == _TAG_REAL64:
        dtype, itemsize = np.dtype("<f8"), 8
    elif tag == _TAG_COMPLEX128:
        dtype, itemsize = np.dtype("<c16"), 16
    else:
        raise TensorFormatError(f"{path}: unknown element tag {tag}")
    count = int(np.prod(shape, dtype=np.int64)) if ndim else 1
    expected = off + count * itemsize
    if len(raw) != expected:
        raise TensorFormatError(
            f"{path}: payload size mismatch, expected {expected} bytes, got {len(raw)}"
        )
    return np.frombuffer(raw, dtype=dtype, count=count, offset=off).reshape(shape).copy()
