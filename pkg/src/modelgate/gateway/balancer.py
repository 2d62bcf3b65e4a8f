"""Round-robin dispatch over a pool of backend-executor workers.

Dispatch rotates strictly over healthy workers, skipping unhealthy ones
without consuming their turn. A HealthChecker flips worker health with
hysteresis: unhealthy after F consecutive probe failures, healthy again
after S consecutive successes.
"""

from __future__ import annotations

import threading
from typing import Callable, Sequence

from .errors import NoHealthyWorkerError


class Worker:
    """One backend-executor slot.

    In this desk-scale deployment workers execute in-process; the probe
    callable stands in for a remote health endpoint.
    """

    def __init__(self, name: str, probe: Callable[[], bool] | None = None):
        if not name:
            raise ValueError("worker name must be non-empty")
        self.name = name
        self.healthy = True
        self.dispatched = 0
        self._probe = probe

    def probe(self) -> bool:
        if self._probe is None:
            return True
        try:
            return bool(self._probe())
        except Exception:
            return False

    def execute(self, fn: Callable, /, *args, **kwargs):
        return fn(*args, **kwargs)

    def __repr__(self) -> str:
        state = "healthy" if self.healthy else "unhealthy"
        return f"Worker({self.name!r}, {state}, dispatched={self.dispatched})"


class WorkerPool:
    def __init__(self, workers: Sequence[Worker]):
        if not workers:
            raise ValueError("worker pool cannot be empty")
        names = [w.name for w in workers]
        if len(set(names)) != len(names):
            raise ValueError("worker names must be unique")
        self._workers = tuple(workers)
        self._cursor = 0
        self._lock = threading.Lock()

    @property
    def workers(self) -> tuple[Worker, ...]:
        return self._workers

    def get(self, name: str) -> Worker:
        for worker in self._workers:
            if worker.name == name:
                return worker
        raise KeyError(name)

    def dispatch(self) -> Worker:
        """Next healthy worker in rotation; unhealthy ones are skipped."""
        with self._lock:
            n = len(self._workers)
            for step in range(n):
                idx = (self._cursor + step) % n
                worker = self._workers[idx]
                if worker.healthy:
                    self._cursor = (idx + 1) % n
                    worker.dispatched += 1
                    return worker
            raise NoHealthyWorkerError("no healthy workers in pool")

    def dispatch_counts(self) -> dict[str, int]:
        with self._lock:
            return {w.name: w.dispatched for w in self._workers}


class HealthChecker:
    def __init__(
        self,
        pool: WorkerPool,
        *,
        fail_threshold: int = 3,
        success_threshold: int = 2,
        period_s: float = 1.0,
    ):
        if fail_threshold < 1 or success_threshold < 1:
            raise ValueError("thresholds must be >= 1")
        self._pool = pool
        self._fail_threshold = fail_threshold
        self._success_threshold = success_threshold
        self._period_s = period_s
        self._streaks = {w.name: [0, 0] for w in pool.workers}  # [fails, successes]
        self._stop = threading.Event()
        self._thread: threading.Thread | None = None

    def run_once(self) -> None:
        """Probe every worker once and update health with hysteresis."""
        for worker in self._pool.workers:
            streak = self._streaks[worker.name]
            if worker.probe():
                streak[0] = 0
                streak[1] += 1
                if not worker.healthy and streak[1] >= self._success_threshold:
                    worker.healthy = True
            else:
                streak[1] = 0
                streak[0] += 1
                if worker.healthy and streak[0] >= self._fail_threshold:
                    worker.healthy = False

    def start(self) -> None:
        if self._thread is not None:
            return
        self._stop.clear()
        self._thread = threading.Thread(
            target=self._loop, name="health-checker", daemon=True
        )
        self._thread.start()

    def stop(self) -> None:
        if self._thread is None:
            return
        self._stop.set()
        self._thread.join()
        self._thread = None

    def _loop(self) -> None:
        while not self._stop.wait(self._period_s):
            self.run_once()
