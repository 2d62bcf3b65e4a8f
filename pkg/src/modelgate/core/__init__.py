"""Service catalog, synthetic backends, face retrieval and evaluation."""

from .backends import (
    Backend,
    ByteHistogramEmbedder,
    HashClassifier,
    HashRegressor,
    SyntheticDelayBackend,
    embed_bytes,
)
from .defaults import DEFAULT_SERVICES, default_registry, demo_faces, seed_faces
from .errors import (
    CoreError,
    DuplicateRouteError,
    EmptyDatasetError,
    EmptyIndexError,
    EmptyInputError,
    InvalidDescriptorError,
    UnknownBackendError,
    UnknownRouteError,
)
from .evaluation import evaluate_classifier, evaluate_regressor, render_evaluation
from .faces import FaceIndex
from .registry import InferenceRegistry
from .types import (
    EMBEDDING_DIM,
    ClassificationResult,
    Embedding,
    EvalRow,
    EvaluationReport,
    LabelSet,
    RegressionResult,
    ScoreRange,
    ServiceDescriptor,
)

__all__ = [
    "Backend",
    "ByteHistogramEmbedder",
    "HashClassifier",
    "HashRegressor",
    "SyntheticDelayBackend",
    "embed_bytes",
    "DEFAULT_SERVICES",
    "default_registry",
    "demo_faces",
    "seed_faces",
    "CoreError",
    "DuplicateRouteError",
    "EmptyDatasetError",
    "EmptyIndexError",
    "EmptyInputError",
    "InvalidDescriptorError",
    "UnknownBackendError",
    "UnknownRouteError",
    "evaluate_classifier",
    "evaluate_regressor",
    "render_evaluation",
    "FaceIndex",
    "InferenceRegistry",
    "EMBEDDING_DIM",
    "ClassificationResult",
    "Embedding",
    "EvalRow",
    "EvaluationReport",
    "LabelSet",
    "RegressionResult",
    "ScoreRange",
    "ServiceDescriptor",
]
