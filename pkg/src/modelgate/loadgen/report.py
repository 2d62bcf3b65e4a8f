"""Stress report rendering: fixed-width table and CSV.

Latencies are rounded half-up to whole milliseconds for display; the
underlying report keeps full precision. Output bytes are a pure function
of the report.
"""

from __future__ import annotations

import io
import csv

from ..metrics import round_half_up
from .runner import StressReport

TABLE_COLUMNS = ("API", "AVG_LATENCY (ms)", "P99 (ms)", "ERROR")


def _table_cells(report: StressReport) -> list[tuple[str, str, str, str]]:
    return [
        (
            row.api,
            str(round_half_up(row.avg_latency_ms)),
            str(round_half_up(row.p99_ms)),
            str(row.error_count),
        )
        for row in report.rows
    ]


def render_report(report: StressReport) -> str:
    """Fixed-width table, one row per route, plus a totals footer."""
    if not report.rows:
        raise ValueError("report has no rows")
    cells = _table_cells(report)
    widths = [
        max(len(TABLE_COLUMNS[col]), max(len(row[col]) for row in cells))
        for col in range(4)
    ]
    header = " | ".join(
        title.ljust(widths[i]) if i == 0 else title.rjust(widths[i])
        for i, title in enumerate(TABLE_COLUMNS)
    )
    divider = "-+-".join("-" * w for w in widths)
    lines = [header, divider]
    for row in cells:
        lines.append(
            " | ".join(
                cell.ljust(widths[i]) if i == 0 else cell.rjust(widths[i])
                for i, cell in enumerate(row)
            )
        )
    lines.append("")
    lines.append(
        f"requests={report.attempts} ok={report.successes} errors={report.errors} "
        f"wall_time_s={report.wall_time_s:.2f} achieved_qps={report.achieved_qps:.2f}"
    )
    return "\n".join(lines) + "\n"


def render_csv(report: StressReport) -> str:
    """The same table as CSV, without the footer."""
    if not report.rows:
        raise ValueError("report has no rows")
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(TABLE_COLUMNS)
    writer.writerows(_table_cells(report))
    return buffer.getvalue()
