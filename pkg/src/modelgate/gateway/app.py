"""The gateway request pipeline, independent of any socket.

`Gateway.handle()` takes an already-parsed RawRequest and returns an
HttpView, so the whole pipeline — routing, auth, parameter validation,
image acquisition, dispatch, backend invocation, logging — is exercisable
in-process. The HTTP server layer is a thin adapter around it.

Response envelope (all /api/ responses):
    {"status": 0, "message": "OK", "elapse": <ms>, "results": ...}   on success
    {"status": -<http code>, "message": "...", "elapse": <ms>}       on error

Call logging: every request that passes authentication writes exactly one
call record, success or failure. Requests rejected before authentication
(unknown route, wrong method, bad key) are not attributable to a user and
are not logged.
"""

from __future__ import annotations

import hashlib
import json
import logging
import mimetypes
import time
import urllib.parse
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

from ..core.errors import EmptyIndexError, UnknownRouteError
from ..core.faces import FaceIndex
from ..core.registry import InferenceRegistry
from ..core.types import (
    KIND_CLASSIFICATION,
    KIND_REGRESSION,
    KIND_RETRIEVAL,
    LabelSet,
    ServiceDescriptor,
)
from ..persistence.logwriter import CallLogWriter
from ..persistence.store import ApiCallRecord, IMG_PATH_MAX, Store, utc_now_ms
from .auth import API_KEY_HEADER, authenticate
from .balancer import WorkerPool
from .config import GatewayConfig
from .errors import (
    BadRequestError,
    GatewayError,
    MethodNotAllowedError,
    RouteNotFoundError,
)
from .images import decode_imgraw, fetch_image_url

log = logging.getLogger(__name__)

TERMINAL_WEB = 0
TERMINAL_ANDROID = 1
TERMINAL_IOS = 2
TERMINAL_MINIPROGRAM = 3
TERMINAL_API = 4
TERMINAL_TYPES = (0, 1, 2, 3, 4)

DEFAULT_CLASSIFY_K = 1
DEFAULT_RETRIEVAL_K = 5

LOGS_ROUTE = "logs"
LOGS_DEFAULT_LIMIT = 20
LOGS_MAX_LIMIT = 200

BODY_TOO_LARGE = "too_large"
BODY_MISSING_LENGTH = "missing_length"
BODY_UNSUPPORTED_ENCODING = "unsupported_encoding"


@dataclass
class RawRequest:
    method: str
    path: str
    query: dict[str, str] = field(default_factory=dict)
    headers: dict[str, str] = field(default_factory=dict)  # lower-cased keys
    body: bytes = b""
    content_type: str = ""
    body_error: str | None = None


@dataclass
class HttpView:
    status: int
    body: bytes
    content_type: str = "application/json"
    close: bool = False


@dataclass
class ApiResponse:
    status: int
    message: str
    elapse_ms: float
    results: Any = None

    @property
    def http_status(self) -> int:
        return 200 if self.status == 0 else -self.status

    def to_view(self) -> HttpView:
        payload: dict[str, Any] = {
            "status": self.status,
            "message": self.message,
            "elapse": self.elapse_ms,
        }
        if self.status == 0:
            payload["results"] = self.results
        return HttpView(
            status=self.http_status,
            body=json.dumps(payload).encode("utf-8"),
        )


def _ok(results: Any, elapse_ms: float) -> ApiResponse:
    return ApiResponse(status=0, message="OK", elapse_ms=elapse_ms, results=results)


def _error(exc: GatewayError, elapse_ms: float) -> ApiResponse:
    return ApiResponse(
        status=-exc.http_status, message=exc.message, elapse_ms=elapse_ms
    )


class Gateway:
    def __init__(
        self,
        *,
        registry: InferenceRegistry,
        faces: FaceIndex,
        store: Store,
        log_writer: CallLogWriter,
        pool: WorkerPool,
        config: GatewayConfig,
    ):
        self.registry = registry
        self.faces = faces
        self.store = store
        self.log_writer = log_writer
        self.pool = pool
        self.config = config

    # -- top-level routing ------------------------------------------------

    def handle(self, request: RawRequest) -> HttpView:
        try:
            if request.path == "/healthz":
                if request.method != "GET":
                    return _json_view(405, {"error": "method not allowed"})
                return _json_view(200, {"ok": True})
            prefix = self.config.api_prefix
            if request.path.startswith(prefix):
                return self._handle_api(request, request.path[len(prefix):])
            if request.path == "/console" or request.path.startswith("/console/"):
                return self._serve_console(request)
            return _json_view(404, {"error": f"no such path: {request.path}"})
        except Exception:
            log.exception("unhandled error for %s %s", request.method, request.path)
            return _json_view(500, {"status": -500, "message": "internal error", "elapse": 0.0})

    def _handle_api(self, request: RawRequest, route: str) -> HttpView:
        if route == LOGS_ROUTE:
            return self._handle_logs(request)
        return self._handle_service(request, route).to_view()

    # -- the service pipeline ----------------------------------------------

    def _handle_service(self, request: RawRequest, route: str) -> ApiResponse:
        started = time.perf_counter()

        def elapse() -> float:
            return (time.perf_counter() - started) * 1000.0

        # Pre-auth phase: failures here have no username and are not logged.
        try:
            try:
                descriptor = self.registry.lookup(route)
            except UnknownRouteError as exc:
                raise RouteNotFoundError(str(exc)) from exc
            if request.method != descriptor.method:
                raise MethodNotAllowedError(
                    f"{route} expects {descriptor.method}, got {request.method}"
                )
            username = authenticate(
                self.store, request.headers.get(API_KEY_HEADER)
            )
        except GatewayError as exc:
            return _error(exc, elapse())

        # Post-auth phase: exactly one call record, whatever happens.
        terminal_type = TERMINAL_API
        img_ref = "-"
        try:
            params = self._parse_params(request)
            terminal_type = _parse_terminal_type(params)
            payload, img_ref = self._resolve_payload(descriptor, params)
            worker = self.pool.dispatch()
            results = worker.execute(self._invoke, descriptor, payload, params)
            response = _ok(results, elapse())
        except GatewayError as exc:
            response = _error(exc, elapse())
        except Exception:
            log.exception("backend failure on %s", route)
            response = ApiResponse(
                status=-500, message="internal error", elapse_ms=elapse()
            )
        self._log_call(username, route, response.elapse_ms, terminal_type, img_ref)
        return response

    def _parse_params(self, request: RawRequest) -> dict[str, Any]:
        if request.method == "GET":
            return dict(request.query)
        if request.body_error == BODY_TOO_LARGE:
            raise BadRequestError(
                f"request body exceeds the {self.config.body_cap_bytes}-byte cap"
            )
        if request.body_error == BODY_MISSING_LENGTH:
            raise BadRequestError("Content-Length header is required")
        if request.body_error == BODY_UNSUPPORTED_ENCODING:
            raise BadRequestError("chunked transfer encoding is not supported")
        if request.body_error:
            raise BadRequestError(f"unreadable body: {request.body_error}")
        content_type = request.content_type.split(";")[0].strip().lower()
        try:
            text = request.body.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise BadRequestError("body is not valid UTF-8") from exc
        if content_type == "application/json" or (
            not content_type and text.lstrip().startswith("{")
        ):
            try:
                parsed = json.loads(text) if text.strip() else {}
            except json.JSONDecodeError as exc:
                raise BadRequestError(f"body is not valid JSON: {exc}") from exc
            if not isinstance(parsed, dict):
                raise BadRequestError("JSON body must be an object")
            return parsed
        if content_type in ("application/x-www-form-urlencoded", ""):
            pairs = urllib.parse.parse_qs(text, keep_blank_values=True)
            return {key: values[-1] for key, values in pairs.items()}
        raise BadRequestError(f"unsupported content type {content_type!r}")

    def _resolve_payload(
        self, descriptor: ServiceDescriptor, params: Mapping[str, Any]
    ) -> tuple[bytes | str, str]:
        """Produce the backend input and the img_path value for the call log.

        POST services take exactly one of imgraw/imgurl; the GET service
        takes an opaque id.
        """
        if descriptor.method == "GET":
            raw_id = params.get("id")
            if raw_id is None or not str(raw_id):
                raise BadRequestError("parameter 'id' is required")
            return str(raw_id), f"id:{raw_id}"[:IMG_PATH_MAX]

        imgraw = params.get("imgraw")
        imgurl = params.get("imgurl")
        if (imgraw is None) == (imgurl is None):
            raise BadRequestError("exactly one of imgraw/imgurl is required")
        if imgraw is not None:
            if not isinstance(imgraw, str):
                raise BadRequestError("imgraw must be a base64 string")
            image = decode_imgraw(imgraw, max_bytes=self.config.img_cap_bytes)
            digest = hashlib.sha256(image).hexdigest()[:16]
            return image, f"imgraw:{digest}"
        if not isinstance(imgurl, str):
            raise BadRequestError("imgurl must be a string")
        image = fetch_image_url(
            imgurl,
            timeout_s=self.config.fetch_timeout_s,
            max_bytes=self.config.img_cap_bytes,
        )
        return image, imgurl[:IMG_PATH_MAX]

    def _invoke(
        self,
        descriptor: ServiceDescriptor,
        payload: bytes | str,
        params: Mapping[str, Any],
    ) -> Any:
        if descriptor.kind == KIND_CLASSIFICATION:
            assert isinstance(descriptor.output_contract, LabelSet)
            k = _parse_k(params, DEFAULT_CLASSIFY_K)
            k = min(k, len(descriptor.output_contract))
            result = self.registry.classify(descriptor.backend_id, payload, k=k)
            return [
                {"label": label, "confidence": confidence}
                for label, confidence in result.top_k
            ]
        if descriptor.kind == KIND_REGRESSION:
            result = self.registry.score(descriptor.backend_id, payload)
            return {"score": result.score}
        if descriptor.kind == KIND_RETRIEVAL:
            k = _parse_k(params, DEFAULT_RETRIEVAL_K)
            try:
                matches = self.faces.search(payload, k=k)
            except EmptyIndexError as exc:
                raise GatewayError(f"face index is empty: {exc}") from exc
            return [
                {"person_id": person_id, "similarity": similarity}
                for person_id, similarity in matches
            ]
        raise GatewayError(f"unservable service kind {descriptor.kind!r}")

    def _log_call(
        self,
        username: str,
        route: str,
        elapse_ms: float,
        terminal_type: int,
        img_ref: str,
    ) -> None:
        record = ApiCallRecord(
            username=username,
            api_name=route,
            api_elapse=elapse_ms,
            api_call_datetime=utc_now_ms(),
            terminal_type=terminal_type,
            img_path=img_ref or "-",
        )
        try:
            self.log_writer.log(record)
        except Exception:
            log.exception("failed to enqueue call record for %s", username)

    # -- auxiliary endpoints ------------------------------------------------

    def _handle_logs(self, request: RawRequest) -> HttpView:
        """Authenticated view of the caller's own recent call records."""
        started = time.perf_counter()
        try:
            if request.method != "GET":
                raise MethodNotAllowedError("logs endpoint is GET-only")
            username = authenticate(
                self.store, request.headers.get(API_KEY_HEADER)
            )
            limit = _parse_limit(request.query)
            api_name = request.query.get("api_name") or None
            self.log_writer.flush()  # read-your-writes for the console
            records = self.store.query_calls(
                username=username, api_name=api_name, limit=limit
            )
        except GatewayError as exc:
            return _error(exc, (time.perf_counter() - started) * 1000.0).to_view()
        rows = [
            {
                "username": r.username,
                "api_name": r.api_name,
                "api_elapse": r.api_elapse,
                "api_call_datetime": r.api_call_datetime.isoformat().replace("+00:00", "Z"),
                "terminal_type": r.terminal_type,
                "img_path": r.img_path,
            }
            for r in records
        ]
        return _ok(rows, (time.perf_counter() - started) * 1000.0).to_view()

    def _serve_console(self, request: RawRequest) -> HttpView:
        if request.method != "GET":
            return _json_view(405, {"error": "method not allowed"})
        root = self.config.console_dir
        if root is None:
            return _json_view(404, {"error": "console not deployed"})
        rel = request.path[len("/console"):].lstrip("/") or "index.html"
        root = Path(root).resolve()
        target = (root / rel).resolve()
        if not str(target).startswith(str(root)) or not target.is_file():
            return _json_view(404, {"error": "not found"})
        content_type = mimetypes.guess_type(target.name)[0] or "application/octet-stream"
        return HttpView(status=200, body=target.read_bytes(), content_type=content_type)


def _json_view(status: int, payload: dict) -> HttpView:
    return HttpView(status=status, body=json.dumps(payload).encode("utf-8"))


def _parse_terminal_type(params: Mapping[str, Any]) -> int:
    raw = params.get("terminal_type")
    if raw is None or raw == "":
        return TERMINAL_API
    try:
        value = int(raw)
    except (TypeError, ValueError):
        raise BadRequestError(f"terminal_type must be an integer, got {raw!r}") from None
    if value not in TERMINAL_TYPES:
        raise BadRequestError(f"terminal_type must be in {TERMINAL_TYPES}, got {value}")
    return value


def _parse_k(params: Mapping[str, Any], default: int) -> int:
    raw = params.get("k")
    if raw is None or raw == "":
        return default
    try:
        value = int(raw)
    except (TypeError, ValueError):
        raise BadRequestError(f"k must be an integer, got {raw!r}") from None
    if value < 1:
        raise BadRequestError(f"k must be positive, got {value}")
    return value


def _parse_limit(query: Mapping[str, str]) -> int:
    raw = query.get("limit")
    if not raw:
        return LOGS_DEFAULT_LIMIT
    try:
        value = int(raw)
    except (TypeError, ValueError):
        raise BadRequestError(f"limit must be an integer, got {raw!r}") from None
    if value < 1:
        raise BadRequestError(f"limit must be positive, got {value}")
    return min(value, LOGS_MAX_LIMIT)
