"""Domain types for the service catalog and inference results."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

from .errors import InvalidDescriptorError

METHODS = ("GET", "POST")
KIND_CLASSIFICATION = "classification"
KIND_REGRESSION = "regression"
KIND_RETRIEVAL = "retrieval"
KINDS = (KIND_CLASSIFICATION, KIND_REGRESSION, KIND_RETRIEVAL)

EMBEDDING_DIM = 256

METRIC_ACC = "Acc"
METRIC_PC = "PC"
METRIC_MAE = "MAE"
METRIC_NAMES = (METRIC_ACC, METRIC_PC, METRIC_MAE)


@dataclass(frozen=True)
class LabelSet:
    """The closed set of labels a classification service may emit.

    Labels are kept sorted so that "label index" is well defined and
    tie-breaking is deterministic.
    """

    labels: tuple[str, ...]

    def __post_init__(self):
        cleaned = tuple(sorted(set(self.labels)))
        if not cleaned:
            raise ValueError("label set cannot be empty")
        if any(not isinstance(l, str) or not l for l in cleaned):
            raise ValueError("labels must be non-empty strings")
        object.__setattr__(self, "labels", cleaned)

    def __len__(self) -> int:
        return len(self.labels)

    def __contains__(self, label: object) -> bool:
        return label in self.labels

    def __iter__(self):
        return iter(self.labels)


@dataclass(frozen=True)
class ScoreRange:
    """Inclusive numeric range a regression service's scores stay within."""

    low: float
    high: float

    def __post_init__(self):
        if not (self.low < self.high):
            raise ValueError(f"score range needs low < high, got [{self.low}, {self.high}]")

    def clamp(self, value: float) -> float:
        return min(self.high, max(self.low, value))

    def __contains__(self, value: float) -> bool:
        return self.low <= value <= self.high


OutputContract = Union[LabelSet, ScoreRange, None]


@dataclass(frozen=True)
class ServiceDescriptor:
    """One registered API service: route, method, backend and output contract."""

    route: str
    method: str
    kind: str
    backend_id: str
    output_contract: OutputContract = None

    def validate(self) -> None:
        """Check structural invariants; raises InvalidDescriptorError."""
        if not self.route or self.route.startswith("/") or self.route.endswith("/"):
            raise InvalidDescriptorError(f"bad route {self.route!r}")
        if self.method not in METHODS:
            raise InvalidDescriptorError(f"method must be one of {METHODS}, got {self.method!r}")
        if self.kind not in KINDS:
            raise InvalidDescriptorError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if not self.backend_id:
            raise InvalidDescriptorError("backend_id must be non-empty")
        if self.kind == KIND_CLASSIFICATION and not isinstance(self.output_contract, LabelSet):
            raise InvalidDescriptorError(f"{self.route}: classification needs a LabelSet contract")
        if self.kind == KIND_REGRESSION and not isinstance(self.output_contract, ScoreRange):
            raise InvalidDescriptorError(f"{self.route}: regression needs a ScoreRange contract")
        if self.kind == KIND_RETRIEVAL and self.output_contract is not None:
            raise InvalidDescriptorError(f"{self.route}: retrieval takes no output contract")


@dataclass(frozen=True)
class ClassificationResult:
    """Top-k labels with confidences, non-increasing, from one backend call."""

    top_k: tuple[tuple[str, float], ...]
    elapsed_ms: float


@dataclass(frozen=True)
class RegressionResult:
    score: float
    elapsed_ms: float


@dataclass(frozen=True)
class Embedding:
    """A unit-L2-norm, non-negative feature vector of fixed dimension."""

    vector: tuple[float, ...]

    def __post_init__(self):
        if len(self.vector) != EMBEDDING_DIM:
            raise ValueError(f"embedding must have {EMBEDDING_DIM} components")
        if any(v < 0.0 for v in self.vector):
            raise ValueError("embedding components must be non-negative")
        norm = math.sqrt(math.fsum(v * v for v in self.vector))
        if abs(norm - 1.0) > 1e-9:
            raise ValueError(f"embedding must be unit norm, got {norm}")


@dataclass(frozen=True)
class EvalRow:
    """One evaluation-report line: a metric value for a service/model/dataset."""

    service: str
    model: str
    dataset: str
    metric_name: str
    value: float

    def __post_init__(self):
        if self.metric_name not in METRIC_NAMES:
            raise ValueError(f"metric_name must be one of {METRIC_NAMES}")


@dataclass(frozen=True)
class EvaluationReport:
    rows: tuple[EvalRow, ...] = field(default_factory=tuple)
