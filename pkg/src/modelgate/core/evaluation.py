"""Evaluation harness: score a backend against a labelled dataset.

Classification services are scored by accuracy; regression services by
Pearson correlation and MAE. Each evaluation produces report rows in the
(service, model, dataset, metric, value) shape used for release notes.
"""

from __future__ import annotations

from typing import Sequence

from .. import metrics
from .errors import EmptyDatasetError
from .registry import InferenceRegistry
from .types import METRIC_ACC, METRIC_MAE, METRIC_PC, EvalRow, EvaluationReport


def evaluate_classifier(
    registry: InferenceRegistry,
    backend_id: str,
    dataset: Sequence[tuple[bytes, str]],
    *,
    service: str = "",
    model: str = "",
    dataset_name: str = "",
) -> EvalRow:
    """Accuracy of the backend's top-1 label over (image, true_label) pairs."""
    if not dataset:
        raise EmptyDatasetError("classification dataset is empty")
    predictions = [
        registry.classify(backend_id, image, k=1).top_k[0][0] for image, _ in dataset
    ]
    truths = [label for _, label in dataset]
    value = metrics.accuracy(predictions, truths)
    return EvalRow(service, model, dataset_name, METRIC_ACC, value)


def evaluate_regressor(
    registry: InferenceRegistry,
    backend_id: str,
    dataset: Sequence[tuple[bytes | str, float]],
    *,
    service: str = "",
    model: str = "",
    dataset_name: str = "",
) -> tuple[EvalRow, EvalRow]:
    """Pearson correlation and MAE rows over (input, true_score) pairs.

    Raises DegenerateVarianceError if either the predictions or the truths
    have zero variance (a constant backend, say), since correlation is
    undefined there.
    """
    if not dataset:
        raise EmptyDatasetError("regression dataset is empty")
    predictions = [registry.score(backend_id, item).score for item, _ in dataset]
    truths = [float(score) for _, score in dataset]
    pc = metrics.pearson_correlation(predictions, truths)
    mae = metrics.mean_absolute_error(predictions, truths)
    return (
        EvalRow(service, model, dataset_name, METRIC_PC, pc),
        EvalRow(service, model, dataset_name, METRIC_MAE, mae),
    )


def render_evaluation(report: EvaluationReport) -> str:
    """Plain-text table of report rows, one metric per line."""
    if not report.rows:
        return "(no evaluation rows)\n"
    headers = ("Service", "Model", "Dataset", "Metric", "Value")
    table = [headers] + [
        (r.service, r.model, r.dataset, r.metric_name, f"{r.value:.4f}")
        for r in report.rows
    ]
    widths = [max(len(row[col]) for row in table) for col in range(len(headers))]
    lines = []
    for i, row in enumerate(table):
        lines.append("  ".join(cell.ljust(widths[c]) for c, cell in enumerate(row)).rstrip())
        if i == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"
