"""Image acquisition: inline base-64 payloads and server-side URL fetch."""

from __future__ import annotations

import base64
import binascii
import socket
import urllib.error
import urllib.parse
import urllib.request

from .errors import BadRequestError, UpstreamFetchFailedError

DEFAULT_IMG_CAP_BYTES = 8 * 1024 * 1024
DEFAULT_FETCH_TIMEOUT_S = 5.0

_FETCH_USER_AGENT = "modelgate-fetch/0.1"


def decode_imgraw(field: str, *, max_bytes: int = DEFAULT_IMG_CAP_BYTES) -> bytes:
    """Strict base-64 decode of an inline image field, size-capped."""
    if not field:
        raise BadRequestError("imgraw is empty")
    try:
        payload = base64.b64decode(field, validate=True)
    except (binascii.Error, ValueError) as exc:
        raise BadRequestError(f"imgraw is not valid base64: {exc}") from exc
    if not payload:
        raise BadRequestError("imgraw decoded to an empty payload")
    if len(payload) > max_bytes:
        raise BadRequestError(
            f"image exceeds the {max_bytes}-byte cap ({len(payload)} bytes)"
        )
    return payload


def fetch_image_url(
    url: str,
    *,
    timeout_s: float = DEFAULT_FETCH_TIMEOUT_S,
    max_bytes: int = DEFAULT_IMG_CAP_BYTES,
) -> bytes:
    """Fetch the image behind an absolute http(s) URL.

    Anything short of a 200 body within the timeout and size cap —
    non-200 status, connection refused, timeout, oversized body — is an
    upstream fetch failure, distinct from a malformed URL (bad request).
    """
    parsed = urllib.parse.urlparse(url)
    if parsed.scheme not in ("http", "https") or not parsed.netloc:
        raise BadRequestError(f"imgurl must be an absolute http(s) URL, got {url!r}")
    request = urllib.request.Request(url, headers={"User-Agent": _FETCH_USER_AGENT})
    try:
        with urllib.request.urlopen(request, timeout=timeout_s) as response:
            if response.status != 200:
                raise UpstreamFetchFailedError(
                    f"upstream returned HTTP {response.status}"
                )
            body = response.read(max_bytes + 1)
    except UpstreamFetchFailedError:
        raise
    except urllib.error.HTTPError as exc:
        raise UpstreamFetchFailedError(f"upstream returned HTTP {exc.code}") from exc
    except (urllib.error.URLError, socket.timeout, ConnectionError, OSError) as exc:
        raise UpstreamFetchFailedError(f"fetch failed: {exc}") from exc
    if not body:
        raise UpstreamFetchFailedError("upstream returned an empty body")
    if len(body) > max_bytes:
        raise UpstreamFetchFailedError(
            f"upstream body exceeds the {max_bytes}-byte cap"
        )
    return body
