"""LEB128-style unsigned varints with a vectorized numpy decoder."""

from __future__ import annotations

import numpy as np


def encode_stream(values) -> bytes:
    """Encode an iterable of non-negative ints as concatenated varints."""
    out = bytearray()
    for v in values:
        v = int(v)
        if v < 0:
            raise ValueError(f"varint cannot encode negative value {v}")
        while v >= 0x80:
            out.append((v & 0x7F) | 0x80)
            v >>= 7
        out.append(v)
    return bytes(out)


def decode_stream(buf: bytes) -> np.ndarray:
    """Decode concatenated varints into a uint64 array."""
    arr = np.frombuffer(buf, dtype=np.uint8)
    if arr.size == 0:
        return np.empty(0, dtype=np.uint64)
    payload = (arr & 0x7F).astype(np.uint64)
    if arr.max() < 0x80:  # common case: every value fits one byte
        return payload
    ends = arr < 0x80
    if not ends[-1]:
        raise ValueError("truncated varint stream")
    starts = np.empty(arr.size, dtype=bool)
    starts[0] = True
    starts[1:] = ends[:-1]
    idx_starts = np.flatnonzero(starts)
    group = np.cumsum(starts) - 1
    shift = (np.arange(arr.size, dtype=np.int64) - idx_starts[group]).astype(
        np.uint64
    )
    return np.add.reduceat(payload << (np.uint64(7) * shift), idx_starts)
