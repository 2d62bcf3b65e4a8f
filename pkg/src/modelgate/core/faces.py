"""In-memory face index over byte-histogram embeddings.

Single-writer / multi-reader: enrollments are serialized by a lock and
searches rank against a snapshot, so concurrent searches are always safe.
"""

from __future__ import annotations

import threading
from typing import Callable

import numpy as np

from .backends import embed_bytes
from .errors import EmptyIndexError, EmptyInputError
from .types import Embedding


class FaceIndex:
    def __init__(self, embedder: Callable[[bytes], Embedding] = embed_bytes):
        self._embedder = embedder
        self._entries: dict[str, np.ndarray] = {}
        self._lock = threading.Lock()

    def __len__(self) -> int:
        with self._lock:
            return len(self._entries)

    def person_ids(self) -> tuple[str, ...]:
        with self._lock:
            return tuple(sorted(self._entries))

    def enroll(self, person_id: str, image: bytes) -> None:
        """Store the image's embedding; re-enrolling replaces the old one."""
        if not person_id:
            raise EmptyInputError("person_id is empty")
        embedding = self._embedder(image)
        vector = np.asarray(embedding.vector, dtype=np.float64)
        with self._lock:
            self._entries[person_id] = vector

    def search(self, image: bytes, k: int = 5) -> list[tuple[str, float]]:
        """Top-k enrolled ids by cosine similarity, descending.

        Ties break toward the lexicographically smaller person_id. Asking
        for more results than enrollments returns everything, unpadded.
        """
        if not isinstance(k, int) or k < 1:
            raise ValueError(f"k must be a positive integer, got {k!r}")
        query = np.asarray(self._embedder(image).vector, dtype=np.float64)
        with self._lock:
            if not self._entries:
                raise EmptyIndexError("no faces enrolled")
            snapshot = list(self._entries.items())
        # Embeddings are unit vectors, so the dot product is the cosine.
        scored = [(pid, float(np.dot(query, vec))) for pid, vec in snapshot]
        scored.sort(key=lambda pair: (-pair[1], pair[0]))
        return scored[:k]
