"""Stress-testing CLI.

    stress run --plan plan.txt [--users N] [--duration S | --requests N]
               [--qps Q] [--base-url URL] [--key KEY]
               [--out report.txt] [--format table|csv]
    stress bench --backend delay-10ms --mode batched --items 100 --batch 10

`stress run` exits 0 only when every request succeeded.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from ..core.defaults import default_registry
from .bench import MODES, bench_throughput
from .plan import InvalidPlanError, apply_overrides, parse_plan_file
from .report import render_csv, render_report
from .runner import StressRunner, TargetUnreachableError


def _cmd_run(args: argparse.Namespace) -> int:
    try:
        plan = parse_plan_file(args.plan)
        plan = apply_overrides(
            plan,
            users=args.users,
            duration_s=args.duration,
            total_requests=args.requests,
            qps=args.qps,
            user_key=args.key,
            base_url=args.base_url,
        )
        report = StressRunner(plan).run()
    except (InvalidPlanError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except TargetUnreachableError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    rendered = render_csv(report) if args.format == "csv" else render_report(report)
    if args.out:
        Path(args.out).write_text(rendered)
        print(f"report written to {args.out}")
    else:
        print(rendered, end="")
    return 0 if report.errors == 0 else 1


def _cmd_bench(args: argparse.Namespace) -> int:
    registry = default_registry()
    try:
        result = bench_throughput(
            registry,
            args.backend,
            mode=args.mode,
            items=args.items,
            batch_size=args.batch,
        )
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(
        f"backend={result.backend_id} mode={result.mode} items={result.items} "
        f"batch={result.batch_size} wall_time_s={result.wall_time_s:.3f} "
        f"fps={result.fps:.2f}"
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stress", description="gateway load testing")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a stress plan against the gateway")
    run.add_argument("--plan", required=True, help="plan file path")
    run.add_argument("--users", type=int, help="virtual users (overrides plan)")
    run.add_argument("--duration", type=float, help="seconds to run (overrides plan)")
    run.add_argument("--requests", type=int, help="total requests (overrides plan)")
    run.add_argument("--qps", type=float, help="paced request rate (overrides plan)")
    run.add_argument("--base-url", help="gateway base URL (overrides plan)")
    run.add_argument("--key", help="API key (overrides plan)")
    run.add_argument("--out", help="write the report to a file")
    run.add_argument("--format", choices=("table", "csv"), default="table")
    run.set_defaults(func=_cmd_run)

    bench = sub.add_parser("bench", help="throughput-benchmark a backend")
    bench.add_argument("--backend", required=True, help="backend id, e.g. delay-10ms")
    bench.add_argument("--mode", choices=MODES, required=True)
    bench.add_argument("--items", type=int, required=True)
    bench.add_argument("--batch", type=int, default=1, help="items per call in batched mode")
    bench.set_defaults(func=_cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
