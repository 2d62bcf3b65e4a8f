"""Stable content hashes shared by the synthetic backends.

All synthetic backends must be pure functions of their input bytes, stable
across processes and platforms, so they hash content with SHA-256 (never
Python's randomized hash()).
"""

from __future__ import annotations

import hashlib

import numpy as np


def stable_hash64(data: bytes | str) -> int:
    """First 8 bytes of SHA-256(data), big-endian, as an unsigned 64-bit int."""
    if isinstance(data, str):
        data = data.encode("utf-8")
    return int.from_bytes(hashlib.sha256(data).digest()[:8], "big")


def byte_sum(data: bytes) -> int:
    """Exact sum of all byte values. Fast even for multi-megabyte payloads."""
    if not data:
        return 0
    return int(np.frombuffer(data, dtype=np.uint8).sum(dtype=np.uint64))


def unit_fraction(data: bytes | str) -> float:
    """Map content to a reproducible fraction in [0, 1] with 1/10000 steps."""
    return (stable_hash64(data) % 10001) / 10000.0
