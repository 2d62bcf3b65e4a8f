"""Evaluation and latency statistics.

Pearson correlation, mean absolute error and accuracy score the synthetic
model backends; the nearest-rank percentile and latency summaries feed the
stress-test reports. Everything here is pure and safe for concurrent use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from typing import Sequence


class MetricsError(Exception):
    """Base class for bad metric inputs."""


class LengthMismatchError(MetricsError):
    pass


class TooFewSamplesError(MetricsError):
    pass


class DegenerateVarianceError(MetricsError):
    """A series has zero variance, so correlation is undefined."""


class InvalidPercentileError(MetricsError):
    pass


class EmptySamplesError(MetricsError):
    pass


@dataclass(frozen=True)
class ScoreSeries:
    """Paired predicted (x) and groundtruth (y) score vectors."""

    x: tuple[float, ...]
    y: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "x", tuple(float(v) for v in self.x))
        object.__setattr__(self, "y", tuple(float(v) for v in self.y))
        if len(self.x) != len(self.y):
            raise LengthMismatchError(
                f"series lengths differ: {len(self.x)} != {len(self.y)}"
            )
        if not self.x:
            raise EmptySamplesError("score series must hold at least one pair")
        for v in self.x + self.y:
            if not math.isfinite(v):
                raise ValueError("score series values must be finite")

    @property
    def n(self) -> int:
        return len(self.x)

    @property
    def mean_x(self) -> float:
        return math.fsum(self.x) / self.n

    @property
    def mean_y(self) -> float:
        return math.fsum(self.y) / self.n


@dataclass(frozen=True)
class LatencySummary:
    """One report row: latency statistics for a single API route."""

    api: str
    avg_latency_ms: float
    p99_ms: float
    error_count: int
    sample_count: int


def _paired(x: Sequence[float], y: Sequence[float]) -> ScoreSeries:
    return ScoreSeries(tuple(x), tuple(y))


def pearson_correlation(x: Sequence[float], y: Sequence[float]) -> float:
    """Pearson correlation of two equal-length series, in [-1, 1].

    Computed in two passes (means first, then centered moments) to avoid
    the cancellation the one-pass form suffers. Raises
    DegenerateVarianceError when either series has zero variance, rather
    than returning NaN, because the denominator is the product of the
    sample standard deviations.
    """
    series = _paired(x, y)
    if series.n < 2:
        raise TooFewSamplesError("correlation needs at least 2 pairs")
    mx, my = series.mean_x, series.mean_y
    sxy = math.fsum((a - mx) * (b - my) for a, b in zip(series.x, series.y))
    sxx = math.fsum((a - mx) ** 2 for a in series.x)
    syy = math.fsum((b - my) ** 2 for b in series.y)
    if sxx == 0.0 or syy == 0.0:
        raise DegenerateVarianceError("zero variance in at least one series")
    return sxy / (math.sqrt(sxx) * math.sqrt(syy))


def mean_absolute_error(x: Sequence[float], y: Sequence[float]) -> float:
    """Mean absolute difference between predictions and groundtruth."""
    series = _paired(x, y)
    return math.fsum(abs(a - b) for a, b in zip(series.x, series.y)) / series.n


def accuracy(predictions: Sequence[str], truths: Sequence[str]) -> float:
    """Fraction of positions where prediction equals truth."""
    if len(predictions) != len(truths):
        raise LengthMismatchError(
            f"label lists differ in length: {len(predictions)} != {len(truths)}"
        )
    if not predictions:
        raise EmptySamplesError("accuracy needs at least one pair")
    matches = sum(1 for p, t in zip(predictions, truths) if p == t)
    return matches / len(predictions)


def percentile_nearest_rank(samples: Sequence[float], p: float) -> float:
    """Nearest-rank percentile: the ceil(p*n)-th smallest sample.

    Always returns an observed sample. The small epsilon compensates for
    float representation of p: e.g. 0.07 * 100 evaluates to 7.000...001,
    whose plain ceil would skip a rank.
    """
    if not samples:
        raise EmptySamplesError("no samples")
    if not (0.0 < p <= 1.0):
        raise InvalidPercentileError(f"percentile must be in (0, 1], got {p}")
    ordered = sorted(samples)
    rank = max(1, math.ceil(p * len(ordered) - 1e-9))
    return ordered[rank - 1]


def summarize_latencies(
    api: str, samples: Sequence[float], errors: int = 0
) -> LatencySummary:
    """Aggregate one route's latency samples into a report row."""
    if not samples:
        raise EmptySamplesError(f"no latency samples for {api!r}")
    if errors < 0:
        raise ValueError("error count cannot be negative")
    avg = math.fsum(samples) / len(samples)
    return LatencySummary(
        api=api,
        avg_latency_ms=avg,
        p99_ms=percentile_nearest_rank(samples, 0.99),
        error_count=errors,
        sample_count=len(samples),
    )


def round_half_up(value: float) -> int:
    """Round to the nearest integer, halves away from zero (so 50.5 -> 51)."""
    return int(
        Decimal(repr(value)).quantize(Decimal("1"), rounding=ROUND_HALF_UP)
    )
