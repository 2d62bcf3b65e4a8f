"""HTTP gateway: routing, auth, balancing, logging."""

from .app import ApiResponse, Gateway, HttpView, RawRequest
from .auth import API_KEY_HEADER, authenticate
from .balancer import HealthChecker, Worker, WorkerPool
from .config import ENV_PREFIX, GatewayConfig, load_config
from .errors import (
    BadRequestError,
    GatewayError,
    MethodNotAllowedError,
    NoHealthyWorkerError,
    RouteNotFoundError,
    UnauthorizedError,
    UpstreamFetchFailedError,
)
from .httpserver import GatewayServer
from .images import decode_imgraw, fetch_image_url

__all__ = [
    "ApiResponse",
    "Gateway",
    "HttpView",
    "RawRequest",
    "API_KEY_HEADER",
    "authenticate",
    "HealthChecker",
    "Worker",
    "WorkerPool",
    "ENV_PREFIX",
    "GatewayConfig",
    "load_config",
    "BadRequestError",
    "GatewayError",
    "MethodNotAllowedError",
    "NoHealthyWorkerError",
    "RouteNotFoundError",
    "UnauthorizedError",
    "UpstreamFetchFailedError",
    "GatewayServer",
    "decode_imgraw",
    "fetch_image_url",
]
