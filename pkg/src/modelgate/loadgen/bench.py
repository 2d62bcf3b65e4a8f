"""Throughput benchmark: naive one-item calls vs batched calls.

Measures items/second through a registered backend. For backends whose
cost is dominated by per-call overhead, batching B items per call should
approach a B-fold speedup; the benchmark makes that ratio observable.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from ..core.registry import InferenceRegistry

MODE_NAIVE = "naive"
MODE_BATCHED = "batched"
MODES = (MODE_NAIVE, MODE_BATCHED)

_DEFAULT_PAYLOAD = bytes(range(64))


@dataclass(frozen=True)
class ThroughputResult:
    backend_id: str
    mode: str
    items: int
    batch_size: int
    fps: float
    wall_time_s: float


def bench_throughput(
    registry: InferenceRegistry,
    backend_id: str,
    *,
    mode: str,
    items: int,
    batch_size: int = 1,
    payload: bytes | None = None,
) -> ThroughputResult:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if items < 1:
        raise ValueError(f"items must be >= 1, got {items}")
    if mode == MODE_BATCHED and batch_size < 1:
        raise ValueError(f"batch_size must be >= 1, got {batch_size}")
    backend = registry.backend(backend_id)
    item = payload if payload is not None else _DEFAULT_PAYLOAD

    start = time.perf_counter()
    if mode == MODE_NAIVE:
        for _ in range(items):
            backend.infer(item)
    else:
        remaining = items
        while remaining > 0:
            chunk = min(batch_size, remaining)
            backend.infer_batch([item] * chunk)
            remaining -= chunk
    wall_time = time.perf_counter() - start

    return ThroughputResult(
        backend_id=backend_id,
        mode=mode,
        items=items,
        batch_size=batch_size if mode == MODE_BATCHED else 1,
        fps=items / wall_time,
        wall_time_s=wall_time,
    )
