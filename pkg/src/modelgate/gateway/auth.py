"""API-key authentication against the user store."""

from __future__ import annotations

import hashlib
import hmac

from ..persistence.store import Store
from .errors import UnauthorizedError

API_KEY_HEADER = "x-api-key"


def authenticate(store: Store, user_key: str | None) -> str:
    """Resolve a userkey to its unique username.

    Every stored key is compared (no early exit) via compare_digest over
    SHA-256 digests, so neither key length nor match position leaks
    through timing.
    """
    if not user_key:
        raise UnauthorizedError("missing API key")
    candidate = hashlib.sha256(user_key.encode("utf-8")).digest()
    matched = None
    for username, stored_key in store.auth_entries():
        stored = hashlib.sha256(stored_key.encode("utf-8")).digest()
        if hmac.compare_digest(candidate, stored):
            matched = username
    if matched is None:
        raise UnauthorizedError("unknown API key")
    return matched
