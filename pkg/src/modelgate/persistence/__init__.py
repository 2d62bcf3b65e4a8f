"""Durable storage of API call details and user records."""

from .logwriter import CallLogWriter
from .store import (
    API_NAME_MAX,
    CALLS_CSV_HEADER,
    EMAIL_MAX,
    IMG_PATH_MAX,
    ORGANIZATION_MAX,
    PASSWORD_MAX,
    REGISTER_ADMIN,
    REGISTER_IMPORTED,
    REGISTER_TYPES,
    REGISTER_WEB_FORM,
    TERMINAL_TYPES,
    USERKEY_MAX,
    USERNAME_MAX,
    USERS_CSV_HEADER,
    ApiCallRecord,
    DuplicateUserkeyError,
    DuplicateUsernameError,
    FieldTooLongError,
    InvalidFieldError,
    StorageError,
    Store,
    StoreError,
    UnknownUserError,
    UserNotFoundError,
    UserRecord,
    from_epoch_ms,
    hash_credential,
    iso_ms,
    to_epoch_ms,
    utc_now_ms,
    verify_credential,
)

__all__ = [
    "CallLogWriter",
    "API_NAME_MAX",
    "CALLS_CSV_HEADER",
    "EMAIL_MAX",
    "IMG_PATH_MAX",
    "ORGANIZATION_MAX",
    "PASSWORD_MAX",
    "REGISTER_ADMIN",
    "REGISTER_IMPORTED",
    "REGISTER_TYPES",
    "REGISTER_WEB_FORM",
    "TERMINAL_TYPES",
    "USERKEY_MAX",
    "USERNAME_MAX",
    "USERS_CSV_HEADER",
    "ApiCallRecord",
    "DuplicateUserkeyError",
    "DuplicateUsernameError",
    "FieldTooLongError",
    "InvalidFieldError",
    "StorageError",
    "Store",
    "StoreError",
    "UnknownUserError",
    "UserNotFoundError",
    "UserRecord",
    "from_epoch_ms",
    "hash_credential",
    "iso_ms",
    "to_epoch_ms",
    "utc_now_ms",
    "verify_credential",
]
