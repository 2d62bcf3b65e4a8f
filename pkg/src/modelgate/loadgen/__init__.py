"""Stress testing and throughput benchmarking."""

from .bench import MODE_BATCHED, MODE_NAIVE, MODES, ThroughputResult, bench_throughput
from .plan import (
    InvalidPlanError,
    StressPlan,
    StressTarget,
    apply_overrides,
    parse_plan_file,
    parse_payload_spec,
    pattern_bytes,
)
from .report import TABLE_COLUMNS, render_csv, render_report
from .runner import (
    HttpTransport,
    Sample,
    StressReport,
    StressRunner,
    TargetUnreachableError,
    run_stress,
    warmup_count,
)

__all__ = [
    "MODE_BATCHED",
    "MODE_NAIVE",
    "MODES",
    "ThroughputResult",
    "bench_throughput",
    "InvalidPlanError",
    "StressPlan",
    "StressTarget",
    "apply_overrides",
    "parse_plan_file",
    "parse_payload_spec",
    "pattern_bytes",
    "TABLE_COLUMNS",
    "render_csv",
    "render_report",
    "HttpTransport",
    "Sample",
    "StressReport",
    "StressRunner",
    "TargetUnreachableError",
    "run_stress",
    "warmup_count",
]
