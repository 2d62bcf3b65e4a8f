"""Metric correctness: frozen examples, properties, and oracle agreement."""

from __future__ import annotations

import math
import random
import statistics

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modelgate import metrics
from oracles import mae_reference, pearson_reference, percentile_reference

finite_scores = st.floats(
    min_value=-1e6, max_value=1e6, allow_nan=False, allow_infinity=False
)


# -- pearson correlation -------------------------------------------------

def test_pearson_perfect_positive():
    assert metrics.pearson_correlation([1, 2, 3], [1, 2, 3]) == pytest.approx(1.0)


def test_pearson_perfect_negative():
    assert metrics.pearson_correlation([1, 2, 3], [3, 2, 1]) == pytest.approx(-1.0)


def test_pearson_hand_computed():
    # x=[1,2,3,4], y=[2,2,4,3]: centered cross-sum 2.5, moments 5 and 2.75,
    # so PC = 2.5 / sqrt(13.75).
    expected = 2.5 / math.sqrt(13.75)
    assert metrics.pearson_correlation([1, 2, 3, 4], [2, 2, 4, 3]) == pytest.approx(
        expected, abs=1e-12
    )


def test_pearson_zero_variance_is_an_error():
    with pytest.raises(metrics.DegenerateVarianceError):
        metrics.pearson_correlation([5, 5, 5], [1, 2, 3])
    with pytest.raises(metrics.DegenerateVarianceError):
        metrics.pearson_correlation([1, 2, 3], [7, 7, 7])


def test_pearson_too_few_samples():
    with pytest.raises(metrics.TooFewSamplesError):
        metrics.pearson_correlation([1], [2])


def test_pearson_length_mismatch():
    with pytest.raises(metrics.LengthMismatchError):
        metrics.pearson_correlation([1, 2], [1, 2, 3])


def _varied(series):
    return max(series) - min(series) > 1e-3


@given(
    st.lists(st.tuples(finite_scores, finite_scores), min_size=2, max_size=60)
)
@settings(max_examples=200)
def test_pearson_symmetric_and_bounded(pairs):
    x = [p[0] for p in pairs]
    y = [p[1] for p in pairs]
    if not (_varied(x) and _varied(y)):
        return
    pc_xy = metrics.pearson_correlation(x, y)
    pc_yx = metrics.pearson_correlation(y, x)
    assert abs(pc_xy - pc_yx) <= 1e-12
    assert abs(pc_xy) <= 1.0 + 1e-12


@given(
    st.lists(st.tuples(finite_scores, finite_scores), min_size=2, max_size=40),
    st.floats(min_value=0.1, max_value=50.0),
    st.floats(min_value=-100.0, max_value=100.0),
)
@settings(max_examples=200)
def test_pearson_affine_invariance(pairs, a, b):
    x = [p[0] for p in pairs]
    y = [p[1] for p in pairs]
    if not (_varied(x) and _varied(y)):
        return
    base = metrics.pearson_correlation(x, y)
    scaled = metrics.pearson_correlation([a * v + b for v in x], y)
    flipped = metrics.pearson_correlation([-a * v + b for v in x], y)
    assert scaled == pytest.approx(base, abs=1e-9)
    assert flipped == pytest.approx(-base, abs=1e-9)


# -- mean absolute error ----------------------------------------------------

def test_mae_identical_series():
    assert metrics.mean_absolute_error([4, 5, 6], [4, 5, 6]) == 0.0


def test_mae_hand_computed():
    # |1-2| + |2-2| + |3-5| = 3 over n=3
    assert metrics.mean_absolute_error([1, 2, 3], [2, 2, 5]) == pytest.approx(1.0)


def test_mae_single_pair():
    assert metrics.mean_absolute_error([0], [5]) == 5.0


@given(st.lists(st.tuples(finite_scores, finite_scores), min_size=1, max_size=60))
@settings(max_examples=200)
def test_mae_symmetry_and_shift_invariance(pairs):
    x = [p[0] for p in pairs]
    y = [p[1] for p in pairs]
    forward = metrics.mean_absolute_error(x, y)
    assert forward == metrics.mean_absolute_error(y, x)
    shifted = metrics.mean_absolute_error([v + 17.5 for v in x], [v + 17.5 for v in y])
    assert shifted == pytest.approx(forward, abs=1e-12 * max(1.0, forward))


# -- accuracy ------------------------------------------------------------

def test_accuracy_extremes():
    assert metrics.accuracy(["a", "b"], ["a", "b"]) == 1.0
    assert metrics.accuracy(["a", "b"], ["b", "a"]) == 0.0


def test_accuracy_reported_shape():
    predictions = ["hit"] * 9012 + ["miss"] * 988
    truths = ["hit"] * 10000
    assert metrics.accuracy(predictions, truths) == pytest.approx(0.9012)


def test_accuracy_errors():
    with pytest.raises(metrics.LengthMismatchError):
        metrics.accuracy(["a"], ["a", "b"])
    with pytest.raises(metrics.EmptySamplesError):
        metrics.accuracy([], [])


# -- nearest-rank percentile -------------------------------------------------

def test_percentile_99_of_1_to_100():
    samples = list(range(1, 101))
    random.Random(7).shuffle(samples)
    assert metrics.percentile_nearest_rank(samples, 0.99) == 99


def test_percentile_single_sample():
    assert metrics.percentile_nearest_rank([7], 0.5) == 7
    assert metrics.percentile_nearest_rank([7], 1.0) == 7


def test_percentile_p_one_is_max():
    assert metrics.percentile_nearest_rank([5, 1, 3], 1.0) == 5


def test_percentile_rejects_bad_p():
    for p in (0.0, -0.5, 1.5):
        with pytest.raises(metrics.InvalidPercentileError):
            metrics.percentile_nearest_rank([1, 2], p)
    with pytest.raises(metrics.EmptySamplesError):
        metrics.percentile_nearest_rank([], 0.5)


@given(
    st.lists(st.floats(min_value=0, max_value=1e5, allow_nan=False), min_size=1, max_size=80),
    st.integers(min_value=1, max_value=100),
)
@settings(max_examples=200)
def test_percentile_membership_and_reference(samples, hundredths):
    p = hundredths / 100
    value = metrics.percentile_nearest_rank(samples, p)
    assert value in samples
    assert value == percentile_reference(samples, p)


@given(st.lists(st.floats(min_value=0, max_value=1e5, allow_nan=False), min_size=1, max_size=50))
@settings(max_examples=100)
def test_percentile_monotone_in_p(samples):
    values = [
        metrics.percentile_nearest_rank(samples, p / 100) for p in range(1, 101)
    ]
    assert values == sorted(values)


# -- latency summaries ----------------------------------------------------------

def test_summary_constant_samples():
    summary = metrics.summarize_latencies("cv/nsfw", [16.0] * 12)
    assert summary.avg_latency_ms == 16.0
    assert summary.p99_ms == 16.0
    assert summary.sample_count == 12
    assert summary.error_count == 0


def test_summary_1_to_100():
    summary = metrics.summarize_latencies("cv/plant", list(range(1, 101)))
    assert summary.avg_latency_ms == 50.5
    assert summary.p99_ms == 99


def test_summary_rejects_empty():
    with pytest.raises(metrics.EmptySamplesError):
        metrics.summarize_latencies("cv/plant", [])


# -- rounding ----------------------------------------------------------------

def test_round_half_up():
    assert metrics.round_half_up(50.5) == 51
    assert metrics.round_half_up(49.4) == 49
    assert metrics.round_half_up(25.0) == 25
    assert metrics.round_half_up(36.5) == 37


# -- oracle agreement -----------------------------------------------------------

def test_metrics_match_independent_reimplementations():
    rng = random.Random(20260808)
    for _ in range(1000):
        n = rng.randint(2, 60)
        x = [rng.uniform(-100, 100) for _ in range(n)]
        y = [rng.uniform(-100, 100) for _ in range(n)]
        if max(x) - min(x) < 1e-6 or max(y) - min(y) < 1e-6:
            continue
        assert metrics.pearson_correlation(x, y) == pytest.approx(
            pearson_reference(x, y), abs=1e-9
        )
        assert metrics.mean_absolute_error(x, y) == pytest.approx(
            mae_reference(x, y), abs=1e-9
        )


def test_pearson_matches_statistics_module():
    rng = random.Random(99)
    for _ in range(50):
        n = rng.randint(3, 40)
        x = [rng.gauss(0, 10) for _ in range(n)]
        y = [rng.gauss(5, 3) for _ in range(n)]
        assert metrics.pearson_correlation(x, y) == pytest.approx(
            statistics.correlation(x, y), abs=1e-9
        )


def test_score_series_validation():
    series = metrics.ScoreSeries((1.0, 2.0, 3.0), (4.0, 5.0, 6.0))
    assert series.n == 3
    assert series.mean_x == 2.0
    assert series.mean_y == 5.0
    with pytest.raises(metrics.LengthMismatchError):
        metrics.ScoreSeries((1.0,), (1.0, 2.0))
    with pytest.raises(metrics.EmptySamplesError):
        metrics.ScoreSeries((), ())
    with pytest.raises(ValueError):
        metrics.ScoreSeries((float("nan"),), (1.0,))
