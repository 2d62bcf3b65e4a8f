"""Gateway configuration with flags > environment > defaults precedence.

Environment variables (all optional):
    MODELGATE_LISTEN           host:port to bind
    MODELGATE_WORKERS          comma-separated worker names
    MODELGATE_DATA_DIR         directory for the SQLite store
    MODELGATE_API_PREFIX       route prefix (default /api/)
    MODELGATE_IMG_CAP_MB       decoded/fetched image cap in MiB
    MODELGATE_BODY_CAP_MB      request body cap in MiB
    MODELGATE_FETCH_TIMEOUT_S  imgurl fetch timeout in seconds
    MODELGATE_CONSOLE_DIR      static bundle served under /console/
    MODELGATE_PROBE_PERIOD_S   worker health probe period
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any, Mapping

ENV_PREFIX = "MODELGATE_"

MIB = 1024 * 1024


@dataclass(frozen=True)
class GatewayConfig:
    listen: str = "127.0.0.1:8080"
    workers: tuple[str, ...] = ("w1", "w2", "w3", "w4")
    data_dir: Path = Path("./data")
    api_prefix: str = "/api/"
    img_cap_bytes: int = 8 * MIB
    body_cap_bytes: int = 12 * MIB
    fetch_timeout_s: float = 5.0
    probe_period_s: float = 1.0
    fail_threshold: int = 3
    success_threshold: int = 2
    console_dir: Path | None = None

    def __post_init__(self):
        if not self.workers:
            raise ValueError("at least one worker is required")
        if not self.api_prefix.startswith("/") or not self.api_prefix.endswith("/"):
            raise ValueError("api_prefix must start and end with '/'")
        if self.img_cap_bytes < 1 or self.body_cap_bytes < 1:
            raise ValueError("size caps must be positive")

    @property
    def host(self) -> str:
        return self.listen.rsplit(":", 1)[0]

    @property
    def port(self) -> int:
        return int(self.listen.rsplit(":", 1)[1])


def _parse_workers(raw: Any) -> tuple[str, ...]:
    if not isinstance(raw, str):
        return tuple(raw)
    names = tuple(name.strip() for name in raw.split(",") if name.strip())
    if not names:
        raise ValueError(f"no worker names in {raw!r}")
    return names


def _mib(raw: Any) -> int:
    return int(float(raw) * MIB)


# flag/env name -> (config field, parser); parsers accept str or native values
_SETTINGS: dict[str, tuple[str, Any]] = {
    "listen": ("listen", str),
    "workers": ("workers", _parse_workers),
    "data_dir": ("data_dir", Path),
    "api_prefix": ("api_prefix", str),
    "img_cap_mb": ("img_cap_bytes", _mib),
    "body_cap_mb": ("body_cap_bytes", _mib),
    "fetch_timeout_s": ("fetch_timeout_s", float),
    "probe_period_s": ("probe_period_s", float),
    "console_dir": ("console_dir", Path),
}


def load_config(
    flags: Mapping[str, Any] | None = None,
    env: Mapping[str, str] | None = None,
) -> GatewayConfig:
    """Resolve the effective config. Flag values of None mean "not given"."""
    flags = flags or {}
    env = os.environ if env is None else env
    resolved: dict[str, Any] = {}
    for name, (field_name, parse) in _SETTINGS.items():
        flag_value = flags.get(name)
        if flag_value is not None:
            resolved[field_name] = parse(flag_value)
            continue
        env_value = env.get(ENV_PREFIX + name.upper())
        if env_value is not None:
            resolved[field_name] = parse(env_value)
    known = {f.name for f in fields(GatewayConfig)}
    assert set(resolved) <= known
    return GatewayConfig(**resolved)
