"""HTTP/1.1 front-end: a threading server wrapping the Gateway pipeline.

GatewayServer owns and wires every platform component — store, log writer,
worker pool, health checker, registry, face index — and tears them down in
reverse on close(), flushing buffered call records first.
"""

from __future__ import annotations

import logging
import threading
import urllib.parse
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from ..core.defaults import default_registry, seed_faces
from ..core.faces import FaceIndex
from ..core.registry import InferenceRegistry
from ..persistence.logwriter import CallLogWriter
from ..persistence.store import Store
from .app import (
    BODY_MISSING_LENGTH,
    BODY_TOO_LARGE,
    BODY_UNSUPPORTED_ENCODING,
    Gateway,
    HttpView,
    RawRequest,
)
from .balancer import HealthChecker, Worker, WorkerPool
from .config import GatewayConfig

log = logging.getLogger(__name__)

_BODY_METHODS = ("POST", "PUT", "PATCH")


class _Handler(BaseHTTPRequestHandler):
    server_version = "modelgate/0.1"
    protocol_version = "HTTP/1.1"
    # headers and body go out as separate writes; without this, Nagle plus
    # delayed ACK adds ~40 ms to every response on loopback
    disable_nagle_algorithm = True
    gateway: Gateway = None  # set by server subclass

    def _handle(self, method: str) -> None:
        raw = self._build_request(method)
        view = self.gateway.handle(raw)
        self._respond(view, include_body=method != "HEAD")

    def _build_request(self, method: str) -> RawRequest:
        parsed = urllib.parse.urlsplit(self.path)
        query = {
            key: values[-1]
            for key, values in urllib.parse.parse_qs(
                parsed.query, keep_blank_values=True
            ).items()
        }
        headers = {key.lower(): value for key, value in self.headers.items()}
        body, body_error = b"", None
        if method in _BODY_METHODS:
            body, body_error = self._read_body(headers)
        return RawRequest(
            method=method,
            path=parsed.path,
            query=query,
            headers=headers,
            body=body,
            content_type=headers.get("content-type", ""),
            body_error=body_error,
        )

    def _read_body(self, headers: dict[str, str]) -> tuple[bytes, str | None]:
        cap = self.gateway.config.body_cap_bytes
        if "chunked" in headers.get("transfer-encoding", "").lower():
            self.close_connection = True
            return b"", BODY_UNSUPPORTED_ENCODING
        raw_length = headers.get("content-length")
        if raw_length is None:
            return b"", BODY_MISSING_LENGTH
        try:
            length = int(raw_length)
        except ValueError:
            self.close_connection = True
            return b"", BODY_MISSING_LENGTH
        if length > cap:
            # Read nothing further; the connection is dropped after responding.
            self.close_connection = True
            return b"", BODY_TOO_LARGE
        return self.rfile.read(length), None

    def _respond(self, view: HttpView, include_body: bool = True) -> None:
        try:
            self.send_response(view.status)
            self.send_header("Content-Type", view.content_type)
            self.send_header("Content-Length", str(len(view.body)))
            if view.close or self.close_connection:
                self.send_header("Connection", "close")
                self.close_connection = True
            self.end_headers()
            if include_body:
                self.wfile.write(view.body)
        except (BrokenPipeError, ConnectionResetError):
            self.close_connection = True

    def do_GET(self):
        self._handle("GET")

    def do_POST(self):
        self._handle("POST")

    def do_PUT(self):
        self._handle("PUT")

    def do_DELETE(self):
        self._handle("DELETE")

    def do_PATCH(self):
        self._handle("PATCH")

    def do_HEAD(self):
        self._handle("HEAD")

    def log_message(self, format, *args):  # noqa: A002 - stdlib signature
        log.debug("%s - %s", self.address_string(), format % args)


class GatewayServer:
    """Everything needed to serve the platform, wired together."""

    def __init__(
        self,
        config: GatewayConfig | None = None,
        *,
        registry: InferenceRegistry | None = None,
        faces: FaceIndex | None = None,
        store: Store | None = None,
        seed_demo_faces: bool = False,
    ):
        self.config = config or GatewayConfig()
        self.registry = registry or default_registry()
        self.faces = faces or FaceIndex()
        if seed_demo_faces:
            seed_faces(self.faces)
        if store is not None:
            self.store = store
            self._owns_store = False
        else:
            self.config.data_dir.mkdir(parents=True, exist_ok=True)
            self.store = Store(self.config.data_dir / "gateway.db")
            self._owns_store = True
        self.log_writer = CallLogWriter(self.store)
        self.pool = WorkerPool([Worker(name) for name in self.config.workers])
        self.health_checker = HealthChecker(
            self.pool,
            fail_threshold=self.config.fail_threshold,
            success_threshold=self.config.success_threshold,
            period_s=self.config.probe_period_s,
        )
        self.app = Gateway(
            registry=self.registry,
            faces=self.faces,
            store=self.store,
            log_writer=self.log_writer,
            pool=self.pool,
            config=self.config,
        )
        self._httpd: ThreadingHTTPServer | None = None
        self._thread: threading.Thread | None = None
        self._closed = False

    # -- lifecycle ---------------------------------------------------------

    def start(self) -> None:
        """Bind and serve in a background thread (port 0 picks a free port)."""
        if self._httpd is not None:
            return
        handler = type("BoundHandler", (_Handler,), {"gateway": self.app})
        self._httpd = ThreadingHTTPServer(
            (self.config.host, self.config.port), handler
        )
        self._httpd.daemon_threads = True
        self._thread = threading.Thread(
            target=self._httpd.serve_forever, name="gateway-http", daemon=True
        )
        self._thread.start()
        self.health_checker.start()
        log.info("gateway serving on %s", self.base_url)

    @property
    def port(self) -> int:
        if self._httpd is None:
            raise RuntimeError("server not started")
        return self._httpd.server_address[1]

    @property
    def base_url(self) -> str:
        return f"http://{self.config.host}:{self.port}"

    def close(self) -> None:
        if self._closed:
            return
        self._closed = True
        if self._httpd is not None:
            self._httpd.shutdown()
            self._httpd.server_close()
            self._thread.join()
        self.health_checker.stop()
        self.log_writer.close()
        if self._owns_store:
            self.store.close()

    def __enter__(self) -> "GatewayServer":
        self.start()
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()
