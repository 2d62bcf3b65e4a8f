"""Stress plan: what to hit, how hard, for how long.

Plans live in a plain text file so runs are reproducible under version
control. Format: `key = value` lines, `#` comments, and one `target =`
line per route:

    base_url = http://127.0.0.1:8080
    user_key = abc123
    users = 20
    duration = 60        # seconds; mutually exclusive with `requests`
    qps = 20             # optional open-loop pacing across all users
    target = POST cv/plant imgraw:256
    target = GET dm/zhihuliveeval id:12345

Payload specs: `imgraw:N` (N deterministic bytes, base64-inlined),
`imgurl:<url>`, `id:<value>`, or `none`.
"""

from __future__ import annotations

import base64
from dataclasses import dataclass, field, replace
from pathlib import Path


class InvalidPlanError(Exception):
    pass


def pattern_bytes(n: int) -> bytes:
    """Deterministic n-byte payload (a repeating 0..255 ramp)."""
    if n < 1:
        raise InvalidPlanError(f"payload size must be positive, got {n}")
    return bytes(i % 256 for i in range(n))


@dataclass(frozen=True)
class StressTarget:
    route: str
    method: str
    params: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if not self.route:
            raise InvalidPlanError("target route is empty")
        if self.method not in ("GET", "POST"):
            raise InvalidPlanError(f"target method must be GET or POST, got {self.method!r}")


@dataclass(frozen=True)
class StressPlan:
    targets: tuple[StressTarget, ...]
    virtual_users: int = 1
    duration_s: float | None = None
    total_requests: int | None = None
    target_qps: float | None = None
    user_key: str = ""
    base_url: str = "http://127.0.0.1:8080"
    api_prefix: str = "/api/"

    def validate(self) -> None:
        if not self.targets:
            raise InvalidPlanError("plan has no targets")
        if self.virtual_users < 1:
            raise InvalidPlanError("virtual_users must be >= 1")
        if (self.duration_s is None) == (self.total_requests is None):
            raise InvalidPlanError("exactly one of duration/requests must be set")
        if self.duration_s is not None and self.duration_s <= 0:
            raise InvalidPlanError("duration must be positive")
        if self.total_requests is not None and self.total_requests < 1:
            raise InvalidPlanError("requests must be >= 1")
        if self.target_qps is not None and self.target_qps <= 0:
            raise InvalidPlanError("qps must be positive")


def parse_payload_spec(spec: str) -> dict[str, str]:
    spec = spec.strip()
    if not spec or spec == "none":
        return {}
    kind, _, value = spec.partition(":")
    if kind == "imgraw":
        try:
            size = int(value)
        except ValueError:
            raise InvalidPlanError(f"imgraw size must be an integer, got {value!r}") from None
        return {"imgraw": base64.b64encode(pattern_bytes(size)).decode("ascii")}
    if kind == "imgurl":
        if not value:
            raise InvalidPlanError("imgurl spec needs a URL")
        return {"imgurl": value}
    if kind == "id":
        if not value:
            raise InvalidPlanError("id spec needs a value")
        return {"id": value}
    raise InvalidPlanError(f"unknown payload spec {spec!r}")


def parse_target_line(value: str) -> StressTarget:
    parts = value.split(None, 2)
    if len(parts) < 2:
        raise InvalidPlanError(f"target needs '<METHOD> <route> [payload]', got {value!r}")
    method, route = parts[0].upper(), parts[1]
    params = parse_payload_spec(parts[2]) if len(parts) == 3 else {}
    return StressTarget(route=route, method=method, params=params)


def parse_plan_file(path: str | Path) -> StressPlan:
    scalars: dict[str, str] = {}
    targets: list[StressTarget] = []
    for lineno, raw_line in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise InvalidPlanError(f"{path}:{lineno}: expected 'key = value'")
        key, value = key.strip().lower(), value.strip()
        if key == "target":
            targets.append(parse_target_line(value))
        else:
            scalars[key] = value
    try:
        plan = StressPlan(
            targets=tuple(targets),
            virtual_users=int(scalars.get("users", 1)),
            duration_s=float(scalars["duration"]) if "duration" in scalars else None,
            total_requests=int(scalars["requests"]) if "requests" in scalars else None,
            target_qps=float(scalars["qps"]) if "qps" in scalars else None,
            user_key=scalars.get("user_key", ""),
            base_url=scalars.get("base_url", "http://127.0.0.1:8080"),
            api_prefix=scalars.get("api_prefix", "/api/"),
        )
    except ValueError as exc:
        raise InvalidPlanError(f"{path}: {exc}") from exc
    unknown = set(scalars) - {
        "users", "duration", "requests", "qps", "user_key", "base_url", "api_prefix"
    }
    if unknown:
        raise InvalidPlanError(f"{path}: unknown keys {sorted(unknown)}")
    return plan


def apply_overrides(
    plan: StressPlan,
    *,
    users: int | None = None,
    duration_s: float | None = None,
    total_requests: int | None = None,
    qps: float | None = None,
    user_key: str | None = None,
    base_url: str | None = None,
) -> StressPlan:
    """CLI flags override plan-file values.

    Giving --requests clears a file-set duration (and vice versa), so the
    exactly-one-of rule keeps holding.
    """
    updates: dict = {}
    if users is not None:
        updates["virtual_users"] = users
    if duration_s is not None:
        updates["duration_s"] = duration_s
        updates["total_requests"] = None
    if total_requests is not None:
        updates["total_requests"] = total_requests
        updates["duration_s"] = None
    if duration_s is not None and total_requests is not None:
        raise InvalidPlanError("give either --duration or --requests, not both")
    if qps is not None:
        updates["target_qps"] = qps
    if user_key is not None:
        updates["user_key"] = user_key
    if base_url is not None:
        updates["base_url"] = base_url
    return replace(plan, **updates) if updates else plan
