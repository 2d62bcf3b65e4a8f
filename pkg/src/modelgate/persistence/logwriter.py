"""Buffered hand-off of call records to the store.

Request threads only enqueue; a single writer thread performs the SQLite
inserts, so logging never serializes request handling. flush() blocks until
everything enqueued so far is durably written, and close() flushes first —
one request, one record, guaranteed at shutdown.
"""

from __future__ import annotations

import logging
import queue
import threading

from .store import ApiCallRecord, Store

log = logging.getLogger(__name__)

_STOP = object()


class CallLogWriter:
    def __init__(self, store: Store):
        self._store = store
        self._queue: queue.Queue = queue.Queue()
        self._failed = 0
        self._closed = False
        self._thread = threading.Thread(
            target=self._drain, name="call-log-writer", daemon=True
        )
        self._thread.start()

    @property
    def failed_writes(self) -> int:
        return self._failed

    def log(self, record: ApiCallRecord) -> None:
        if self._closed:
            raise RuntimeError("log writer is closed")
        self._queue.put(record)

    def flush(self) -> None:
        """Block until every record enqueued before this call is written."""
        self._queue.join()

    def close(self) -> None:
        if self._closed:
            return
        self._closed = True
        self._queue.join()
        self._queue.put(_STOP)
        self._thread.join()

    def _drain(self) -> None:
        while True:
            item = self._queue.get()
            try:
                if item is _STOP:
                    return
                try:
                    self._store.record_api_call(item)
                except Exception:
                    self._failed += 1
                    log.exception("failed to persist call record %r", item)
            finally:
                self._queue.task_done()
