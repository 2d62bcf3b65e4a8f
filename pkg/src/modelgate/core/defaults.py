"""Built-in service catalog: the eight shipped routes and their backends.

Every service is backed by a deterministic synthetic model honoring the
published output contract (a label set, or a bounded score range). The
`delay-*` backends exist only for throughput benchmarking.
"""

from __future__ import annotations

from .backends import (
    ByteHistogramEmbedder,
    HashClassifier,
    HashRegressor,
    SyntheticDelayBackend,
)
from .faces import FaceIndex
from .registry import InferenceRegistry
from .types import (
    KIND_CLASSIFICATION,
    KIND_REGRESSION,
    KIND_RETRIEVAL,
    LabelSet,
    ScoreRange,
    ServiceDescriptor,
)

SKIN_LABELS = LabelSet((
    "acne", "dermatitis", "eczema", "hives", "melanoma",
    "psoriasis", "rosacea", "vitiligo",
))
NSFW_LABELS = LabelSet(("explicit", "neutral", "racy", "suggestive"))
PLANT_DISEASE_LABELS = LabelSet((
    "bacterial_spot", "black_rot", "healthy", "late_blight",
    "leaf_mold", "powdery_mildew", "rust", "scab",
))
FOOD_LABELS = LabelSet((
    "burger", "dumplings", "fried_rice", "noodles", "pizza",
    "ramen", "salad", "steak", "sushi", "tacos",
))
PLANT_LABELS = LabelSet((
    "aloe", "bamboo", "cactus", "daisy", "fern", "lavender",
    "maple", "orchid", "rose", "sunflower", "tulip",
))
BEAUTY_RANGE = ScoreRange(1.0, 5.0)
LIVE_RATING_RANGE = ScoreRange(0.0, 5.0)

DEFAULT_SERVICES = (
    ServiceDescriptor("cv/mcloud/skin", "POST", KIND_CLASSIFICATION, "stub-skin", SKIN_LABELS),
    ServiceDescriptor("cv/fbp", "POST", KIND_REGRESSION, "stub-beauty", BEAUTY_RANGE),
    ServiceDescriptor("cv/nsfw", "POST", KIND_CLASSIFICATION, "stub-nsfw", NSFW_LABELS),
    ServiceDescriptor("cv/pdr", "POST", KIND_CLASSIFICATION, "stub-plant-disease", PLANT_DISEASE_LABELS),
    ServiceDescriptor("cv/food", "POST", KIND_CLASSIFICATION, "stub-food", FOOD_LABELS),
    ServiceDescriptor("cv/plant", "POST", KIND_CLASSIFICATION, "stub-plant", PLANT_LABELS),
    ServiceDescriptor("cv/facesearch", "POST", KIND_RETRIEVAL, "face-embedder", None),
    ServiceDescriptor("dm/zhihuliveeval", "GET", KIND_REGRESSION, "stub-live-rating", LIVE_RATING_RANGE),
)


def default_registry() -> InferenceRegistry:
    """Registry pre-loaded with all shipped services and bench backends."""
    registry = InferenceRegistry()
    registry.register_backend("stub-skin", HashClassifier(SKIN_LABELS))
    registry.register_backend("stub-beauty", HashRegressor(BEAUTY_RANGE))
    registry.register_backend("stub-nsfw", HashClassifier(NSFW_LABELS))
    registry.register_backend("stub-plant-disease", HashClassifier(PLANT_DISEASE_LABELS))
    registry.register_backend("stub-food", HashClassifier(FOOD_LABELS))
    registry.register_backend("stub-plant", HashClassifier(PLANT_LABELS))
    registry.register_backend("face-embedder", ByteHistogramEmbedder())
    registry.register_backend("stub-live-rating", HashRegressor(LIVE_RATING_RANGE))
    registry.register_backend("delay-10ms", SyntheticDelayBackend(per_call_ms=10.0))
    registry.register_backend("delay-1ms", SyntheticDelayBackend(per_call_ms=1.0))
    for descriptor in DEFAULT_SERVICES:
        registry.register_service(descriptor)
    return registry


def demo_faces() -> list[tuple[str, bytes]]:
    """Deterministic sample enrollments for demos and smoke tests."""
    people = []
    for i in range(1, 6):
        blob = bytes((i * 37 + j * 11) % 256 for j in range(512))
        people.append((f"person-{i:02d}", blob))
    return people


def seed_faces(index: FaceIndex) -> int:
    faces = demo_faces()
    for person_id, image in faces:
        index.enroll(person_id, image)
    return len(faces)
