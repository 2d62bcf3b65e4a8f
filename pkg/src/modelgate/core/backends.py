"""Deterministic synthetic inference backends.

These stand in for trained networks: each is a pure function of its input
bytes, so every output is exactly reproducible in tests and across runs.
A backend exposes single-item `infer` plus `infer_batch`; the default batch
path just loops, while backends with per-call overhead can amortize it.
"""

from __future__ import annotations

import time
from typing import Any, Sequence

import numpy as np

from .errors import EmptyInputError
from .hashing import byte_sum, stable_hash64, unit_fraction
from .types import EMBEDDING_DIM, Embedding, LabelSet, ScoreRange


class Backend:
    """Base inference backend. Subclasses set `kind` and implement `infer`."""

    kind: str = "abstract"

    def infer(self, item: Any) -> Any:
        raise NotImplementedError

    def infer_batch(self, items: Sequence[Any]) -> list[Any]:
        return [self.infer(item) for item in items]


class HashClassifier(Backend):
    """Synthetic classifier driven by a stable content hash.

    Rule (fixed, relied on by tests):
      * labels are the sorted label set; L = len(labels)
      * peak index p = (sum of all byte values) mod L
      * sharpness tau = 0.5 + (stable_hash64(image) mod 1000) / 1000
      * raw weight for label i = exp(-tau * ((i - p) mod L))
      * confidences = raw weights normalized to sum to 1

    The peak label always wins and weights strictly decrease around the
    label ring, so the full distribution has no ties.
    """

    kind = "classification"

    def __init__(self, labels: LabelSet):
        self.labels = labels

    def infer(self, image: bytes) -> dict[str, float]:
        if not image:
            raise EmptyInputError("image payload is empty")
        ordered = self.labels.labels
        count = len(ordered)
        peak = byte_sum(image) % count
        tau = 0.5 + (stable_hash64(image) % 1000) / 1000.0
        distances = (np.arange(count) - peak) % count
        raw = np.exp(-tau * distances)
        weights = raw / raw.sum()
        return {label: float(w) for label, w in zip(ordered, weights)}


class HashRegressor(Backend):
    """Synthetic regressor: maps input to a reproducible point in its range.

    score = low + (stable_hash64(input) mod 10001) / 10000 * (high - low),
    giving uniform 1/10000-step coverage of the contract range.
    """

    kind = "regression"

    def __init__(self, score_range: ScoreRange):
        self.score_range = score_range

    def infer(self, payload: bytes | str) -> float:
        if not payload:
            raise EmptyInputError("regression input is empty")
        low, high = self.score_range.low, self.score_range.high
        return low + unit_fraction(payload) * (high - low)


def embed_bytes(image: bytes) -> Embedding:
    """256-bin histogram of byte values, L2-normalized.

    Format-agnostic (no image decoding) and deterministic, which is all a
    desk-scale retrieval pipeline needs.
    """
    if not image:
        raise EmptyInputError("image payload is empty")
    counts = np.bincount(
        np.frombuffer(image, dtype=np.uint8), minlength=EMBEDDING_DIM
    ).astype(np.float64)
    normalized = counts / np.linalg.norm(counts)
    return Embedding(vector=tuple(float(v) for v in normalized))


class ByteHistogramEmbedder(Backend):
    kind = "embedding"

    def infer(self, image: bytes) -> Embedding:
        return embed_bytes(image)


class SyntheticDelayBackend(Backend):
    """Backend with a fixed per-call overhead plus per-item cost.

    Models the call-overhead-dominated regime where batching pays: one
    batched call absorbs the per-call overhead once for the whole batch.
    Used by the throughput benchmark; returns its inputs unchanged.
    """

    kind = "synthetic"

    def __init__(self, per_call_ms: float, per_item_ms: float = 0.0):
        if per_call_ms < 0 or per_item_ms < 0:
            raise ValueError("delays cannot be negative")
        self.per_call_ms = per_call_ms
        self.per_item_ms = per_item_ms

    def infer(self, item: Any) -> Any:
        time.sleep((self.per_call_ms + self.per_item_ms) / 1000.0)
        return item

    def infer_batch(self, items: Sequence[Any]) -> list[Any]:
        time.sleep((self.per_call_ms + self.per_item_ms * len(items)) / 1000.0)
        return list(items)
