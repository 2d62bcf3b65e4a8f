"""Service catalog and backend registry.

The registry is the only public path to backends: services are registered
under unique routes, backends under unique identifiers, and the classify/
score/embed operations validate inputs and normalize outputs uniformly.

Thread contract: lookups may run concurrently; registrations are serialized
by an internal lock and visible to subsequent lookups.
"""

from __future__ import annotations

import math
import threading
import time

from .backends import Backend
from .errors import (
    DuplicateRouteError,
    EmptyInputError,
    InvalidDescriptorError,
    UnknownBackendError,
    UnknownRouteError,
)
from .types import (
    KIND_CLASSIFICATION,
    KIND_REGRESSION,
    KIND_RETRIEVAL,
    ClassificationResult,
    Embedding,
    RegressionResult,
    ServiceDescriptor,
)


class InferenceRegistry:
    def __init__(self):
        self._backends: dict[str, Backend] = {}
        self._services: dict[str, ServiceDescriptor] = {}
        self._lock = threading.RLock()

    # -- registration -------------------------------------------------

    def register_backend(self, backend_id: str, backend: Backend) -> None:
        if not backend_id:
            raise ValueError("backend_id must be non-empty")
        with self._lock:
            if backend_id in self._backends:
                raise ValueError(f"backend {backend_id!r} already registered")
            self._backends[backend_id] = backend

    def register_service(self, descriptor: ServiceDescriptor) -> None:
        descriptor.validate()
        with self._lock:
            backend = self._backends.get(descriptor.backend_id)
            if backend is None:
                raise InvalidDescriptorError(
                    f"{descriptor.route}: backend {descriptor.backend_id!r} is not registered"
                )
            self._check_contract(descriptor, backend)
            if descriptor.route in self._services:
                raise DuplicateRouteError(f"route {descriptor.route!r} already registered")
            self._services[descriptor.route] = descriptor

    @staticmethod
    def _check_contract(descriptor: ServiceDescriptor, backend: Backend) -> None:
        kind = descriptor.kind
        if kind == KIND_CLASSIFICATION:
            if backend.kind != "classification":
                raise InvalidDescriptorError(
                    f"{descriptor.route}: backend {descriptor.backend_id!r} is not a classifier"
                )
            if getattr(backend, "labels", None) != descriptor.output_contract:
                raise InvalidDescriptorError(
                    f"{descriptor.route}: label set does not match backend's"
                )
        elif kind == KIND_REGRESSION:
            if backend.kind != "regression":
                raise InvalidDescriptorError(
                    f"{descriptor.route}: backend {descriptor.backend_id!r} is not a regressor"
                )
            if getattr(backend, "score_range", None) != descriptor.output_contract:
                raise InvalidDescriptorError(
                    f"{descriptor.route}: score range does not match backend's"
                )
        elif kind == KIND_RETRIEVAL and backend.kind != "embedding":
            raise InvalidDescriptorError(
                f"{descriptor.route}: retrieval needs an embedding backend"
            )

    # -- lookup -------------------------------------------------------

    def lookup(self, route: str) -> ServiceDescriptor:
        with self._lock:
            try:
                return self._services[route]
            except KeyError:
                raise UnknownRouteError(f"no service registered at {route!r}") from None

    def has_route(self, route: str) -> bool:
        with self._lock:
            return route in self._services

    def routes(self) -> tuple[str, ...]:
        with self._lock:
            return tuple(self._services)

    def services(self) -> tuple[ServiceDescriptor, ...]:
        with self._lock:
            return tuple(self._services.values())

    def backend(self, backend_id: str) -> Backend:
        with self._lock:
            try:
                return self._backends[backend_id]
            except KeyError:
                raise UnknownBackendError(f"no backend registered as {backend_id!r}") from None

    # -- inference ----------------------------------------------------

    def classify(self, backend_id: str, image: bytes, k: int = 1) -> ClassificationResult:
        """Top-k labels by confidence; ties broken by lexicographic label."""
        backend = self._classification_backend(backend_id)
        if not image:
            raise EmptyInputError("image payload is empty")
        labels = backend.labels
        if not isinstance(k, int) or k < 1 or k > len(labels):
            raise ValueError(f"k must be in 1..{len(labels)}, got {k!r}")

        start = time.perf_counter()
        distribution = backend.infer(image)
        elapsed_ms = (time.perf_counter() - start) * 1000.0

        if set(distribution) != set(labels.labels):
            raise RuntimeError(
                f"backend {backend_id!r} scored labels outside its label set"
            )
        total = math.fsum(distribution.values())
        if total <= 0.0:
            raise RuntimeError(f"backend {backend_id!r} returned non-positive mass")
        ranked = sorted(
            ((label, score / total) for label, score in distribution.items()),
            key=lambda pair: (-pair[1], pair[0]),
        )
        return ClassificationResult(top_k=tuple(ranked[:k]), elapsed_ms=elapsed_ms)

    def score(self, backend_id: str, payload: bytes | str) -> RegressionResult:
        """Deterministic score, clamped into the backend's range."""
        backend = self.backend(backend_id)
        if backend.kind != "regression":
            raise UnknownBackendError(f"{backend_id!r} is not a regression backend")
        if not payload:
            raise EmptyInputError("regression input is empty")
        start = time.perf_counter()
        raw = backend.infer(payload)
        elapsed_ms = (time.perf_counter() - start) * 1000.0
        return RegressionResult(
            score=backend.score_range.clamp(float(raw)), elapsed_ms=elapsed_ms
        )

    def embed(self, backend_id: str, image: bytes) -> Embedding:
        backend = self.backend(backend_id)
        if backend.kind != "embedding":
            raise UnknownBackendError(f"{backend_id!r} is not an embedding backend")
        if not image:
            raise EmptyInputError("image payload is empty")
        return backend.infer(image)

    def _classification_backend(self, backend_id: str):
        backend = self.backend(backend_id)
        if backend.kind != "classification":
            raise UnknownBackendError(f"{backend_id!r} is not a classification backend")
        return backend
