"""Test doubles for the stress runner and gateway clients."""

from __future__ import annotations

import json
import threading
import time
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer


class ScriptedSession:
    def __init__(self, transport):
        self._transport = transport

    def request(self, target):
        return self._transport._next(target)

    def close(self):
        pass


class ScriptedTransport:
    """In-process fake gateway: hands out pre-programmed latencies.

    Each request consumes the next (ok, latency_ms, status) entry, in
    issue order, thread-safely. With the script exhausted it fails hard,
    so lost/duplicated samples are loud.
    """

    def __init__(self, script):
        # script: iterable of latency_ms floats, or (ok, latency_ms, status)
        normalized = []
        for entry in script:
            if isinstance(entry, (int, float)):
                normalized.append((True, float(entry), 200))
            else:
                normalized.append(entry)
        self._script = normalized
        self._cursor = 0
        self._lock = threading.Lock()

    def preflight(self):
        pass

    def session(self):
        return ScriptedSession(self)

    def _next(self, target):
        with self._lock:
            if self._cursor >= len(self._script):
                raise AssertionError("scripted transport exhausted")
            entry = self._script[self._cursor]
            self._cursor += 1
        return entry

    @property
    def consumed(self):
        with self._lock:
            return self._cursor


class ConstantDelayHandler(BaseHTTPRequestHandler):
    """Fixture HTTP endpoint answering every request after a fixed delay."""

    protocol_version = "HTTP/1.1"
    disable_nagle_algorithm = True
    delay_s = 0.005
    status = 200

    def _reply(self):
        time.sleep(self.delay_s)
        body = json.dumps({"status": 0, "message": "OK", "elapse": self.delay_s * 1000}).encode()
        self.send_response(self.status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def do_GET(self):
        self._reply()

    def do_POST(self):
        length = int(self.headers.get("Content-Length", 0))
        if length:
            self.rfile.read(length)
        self._reply()

    def log_message(self, *args):
        pass


def start_fixture_server(handler_class=ConstantDelayHandler):
    httpd = ThreadingHTTPServer(("127.0.0.1", 0), handler_class)
    httpd.daemon_threads = True
    thread = threading.Thread(target=httpd.serve_forever, daemon=True)
    thread.start()

    def stop():
        httpd.shutdown()
        httpd.server_close()

    return httpd.server_address[1], stop
