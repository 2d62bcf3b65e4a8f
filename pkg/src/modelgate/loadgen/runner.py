"""Closed-loop / paced stress runner.

Each virtual user issues requests back-to-back (or on a fixed-interval
schedule when qps pacing is on), timing every request from write start to
body fully read. Samples are collected losslessly per user and merged
after all loops stop; per-route statistics come from the metrics module
after the declared warmup exclusion.

Warmup rule: per route, the first max(5, ceil(n/20)) attempts are excluded
from latency statistics (errors still count); runs too short to warm up
(the exclusion would swallow everything) keep all samples.

The transport is pluggable: tests drive the runner with an in-process fake
that injects known latencies, so aggregation is checkable exactly.
"""

from __future__ import annotations

import http.client
import json
import socket
import threading
import time
import urllib.parse
from dataclasses import dataclass, field

from .. import metrics
from .plan import StressPlan, StressTarget

DEFAULT_REQUEST_TIMEOUT_S = 10.0


class TargetUnreachableError(Exception):
    """The gateway refused connections before any sample was taken."""


@dataclass(frozen=True)
class Sample:
    route: str
    sent_at: float  # perf-counter seconds, orders samples within a run
    ok: bool
    latency_ms: float
    status: int


@dataclass(frozen=True)
class StressReport:
    rows: tuple[metrics.LatencySummary, ...]
    wall_time_s: float
    achieved_qps: float
    attempts: int
    successes: int
    errors: int
    # successful latencies per route, in send order (lossless introspection)
    route_samples: dict[str, tuple[float, ...]] = field(default_factory=dict)


def warmup_count(attempts: int) -> int:
    """Samples excluded from statistics: max(5, ceil(n/20)), or 0 if that
    would exclude every sample."""
    w = max(5, -(-attempts // 20))
    return 0 if w >= attempts else w


class HttpSession:
    """One virtual user's connection; reconnects after transport errors."""

    def __init__(self, host: str, port: int, prefix: str, user_key: str, timeout_s: float):
        self._host = host
        self._port = port
        self._prefix = prefix
        self._headers = {"X-API-Key": user_key} if user_key else {}
        self._timeout_s = timeout_s
        self._conn: http.client.HTTPConnection | None = None

    def _connection(self) -> http.client.HTTPConnection:
        if self._conn is None:
            self._conn = http.client.HTTPConnection(
                self._host, self._port, timeout=self._timeout_s
            )
        return self._conn

    def request(self, target: StressTarget) -> tuple[bool, float, int]:
        """Returns (ok, latency_ms, http_status); status 0 on transport failure."""
        path = self._prefix + target.route
        body = None
        headers = dict(self._headers)
        if target.method == "GET":
            if target.params:
                path += "?" + urllib.parse.urlencode(target.params)
        else:
            body = json.dumps(target.params).encode("utf-8")
            headers["Content-Type"] = "application/json"
        conn = self._connection()
        start = time.perf_counter_ns()
        try:
            conn.request(target.method, path, body=body, headers=headers)
            response = conn.getresponse()
            response.read()
            latency_ms = (time.perf_counter_ns() - start) / 1e6
            return 200 <= response.status < 300, latency_ms, response.status
        except (http.client.HTTPException, OSError):
            latency_ms = (time.perf_counter_ns() - start) / 1e6
            self.close()
            return False, latency_ms, 0

    def close(self) -> None:
        if self._conn is not None:
            try:
                self._conn.close()
            finally:
                self._conn = None


class HttpTransport:
    def __init__(self, plan: StressPlan, timeout_s: float = DEFAULT_REQUEST_TIMEOUT_S):
        parsed = urllib.parse.urlparse(plan.base_url)
        if parsed.scheme != "http" or not parsed.hostname:
            raise ValueError(f"base_url must be http://host:port, got {plan.base_url!r}")
        self._host = parsed.hostname
        self._port = parsed.port or 80
        self._prefix = plan.api_prefix
        self._user_key = plan.user_key
        self._timeout_s = timeout_s

    def preflight(self) -> None:
        try:
            conn = http.client.HTTPConnection(self._host, self._port, timeout=5.0)
            conn.request("GET", "/healthz")
            conn.getresponse().read()
            conn.close()
        except (ConnectionRefusedError, socket.gaierror, OSError) as exc:
            raise TargetUnreachableError(
                f"cannot reach {self._host}:{self._port}: {exc}"
            ) from exc

    def session(self) -> HttpSession:
        return HttpSession(
            self._host, self._port, self._prefix, self._user_key, self._timeout_s
        )


class StressRunner:
    def __init__(self, plan: StressPlan, transport=None):
        plan.validate()
        self.plan = plan
        self.transport = transport if transport is not None else HttpTransport(plan)

    def run(self) -> StressReport:
        plan = self.plan
        self.transport.preflight()
        users = plan.virtual_users
        quotas = self._quotas(users)
        per_user_samples: list[list[Sample]] = [[] for _ in range(users)]
        start = time.perf_counter()
        deadline = start + plan.duration_s if plan.duration_s is not None else None
        threads = [
            threading.Thread(
                target=self._user_loop,
                args=(u, start, deadline, quotas[u], per_user_samples[u]),
                name=f"vu-{u}",
                daemon=True,
            )
            for u in range(users)
        ]
        for thread in threads:
            thread.start()
        for thread in threads:
            thread.join()
        wall_time = time.perf_counter() - start
        samples = [s for bucket in per_user_samples for s in bucket]
        return self._aggregate(samples, wall_time)

    def _quotas(self, users: int) -> list[int | None]:
        total = self.plan.total_requests
        if total is None:
            return [None] * users
        base, extra = divmod(total, users)
        return [base + (1 if u < extra else 0) for u in range(users)]

    def _user_loop(
        self,
        user_index: int,
        start: float,
        deadline: float | None,
        quota: int | None,
        out: list[Sample],
    ) -> None:
        plan = self.plan
        session = self.transport.session()
        targets = plan.targets
        interval = offset = None
        if plan.target_qps is not None:
            # Users stagger their fixed-interval schedules to spread load evenly.
            interval = plan.virtual_users / plan.target_qps
            offset = user_index / plan.target_qps
        i = 0
        try:
            while quota is None or i < quota:
                if interval is not None:
                    scheduled = start + offset + i * interval
                    if deadline is not None and scheduled >= deadline:
                        break
                    delay = scheduled - time.perf_counter()
                    if delay > 0:
                        time.sleep(delay)
                elif deadline is not None and time.perf_counter() >= deadline:
                    break
                target = targets[(user_index + i) % len(targets)]
                sent_at = time.perf_counter()
                ok, latency_ms, status = session.request(target)
                out.append(Sample(target.route, sent_at, ok, latency_ms, status))
                i += 1
        finally:
            close = getattr(session, "close", None)
            if close is not None:
                close()

    def _aggregate(self, samples: list[Sample], wall_time: float) -> StressReport:
        seen_routes = []  # preserve plan target order, one row per target route
        for target in self.plan.targets:
            if target.route not in seen_routes:
                seen_routes.append(target.route)
        by_route: dict[str, list[Sample]] = {route: [] for route in seen_routes}
        for sample in samples:
            by_route[sample.route].append(sample)

        rows = []
        route_samples: dict[str, tuple[float, ...]] = {}
        for route in seen_routes:
            attempts = sorted(by_route[route], key=lambda s: s.sent_at)
            error_count = sum(1 for s in attempts if not s.ok)
            successes = [s.latency_ms for s in attempts if s.ok]
            route_samples[route] = tuple(successes)
            skip = warmup_count(len(attempts))
            measured = [s.latency_ms for s in attempts[skip:] if s.ok]
            if not measured:
                measured = successes
            if measured:
                stats = metrics.summarize_latencies(route, measured, errors=error_count)
                rows.append(
                    metrics.LatencySummary(
                        api=route,
                        avg_latency_ms=stats.avg_latency_ms,
                        p99_ms=stats.p99_ms,
                        error_count=error_count,
                        sample_count=len(successes),
                    )
                )
            else:
                rows.append(metrics.LatencySummary(route, 0.0, 0.0, error_count, 0))

        successes_total = sum(1 for s in samples if s.ok)
        return StressReport(
            rows=tuple(rows),
            wall_time_s=wall_time,
            achieved_qps=successes_total / wall_time if wall_time > 0 else 0.0,
            attempts=len(samples),
            successes=successes_total,
            errors=len(samples) - successes_total,
            route_samples=route_samples,
        )


def run_stress(plan: StressPlan, transport=None) -> StressReport:
    return StressRunner(plan, transport=transport).run()
