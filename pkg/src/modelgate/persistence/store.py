"""Durable relational storage for API call details and user records.

Backed by SQLite: a single embedded file, transactional writes, unique
constraints enforced even under concurrent create attempts. Timestamps are
stored as integer epoch milliseconds (UTC) so every stored field reads back
exactly. Credentials are stored only as salted PBKDF2 digests.

Concurrency: one connection guarded by a lock — readers never observe a
partial record and writes are serialized.
"""

from __future__ import annotations

import csv
import hashlib
import hmac
import os
import sqlite3
import threading
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from pathlib import Path

USERNAME_MAX = 16
API_NAME_MAX = 20
IMG_PATH_MAX = 100
ORGANIZATION_MAX = 100
EMAIL_MAX = 50
USERKEY_MAX = 20
PASSWORD_MAX = 12

REGISTER_WEB_FORM = 0
REGISTER_IMPORTED = 1
REGISTER_ADMIN = 2
REGISTER_TYPES = (REGISTER_WEB_FORM, REGISTER_IMPORTED, REGISTER_ADMIN)

TERMINAL_TYPES = (0, 1, 2, 3, 4)  # web, android, ios, miniprogram, api

_EPOCH = datetime(1970, 1, 1, tzinfo=timezone.utc)
_MS = timedelta(milliseconds=1)

_PBKDF2_ITERATIONS = 120_000

CALLS_CSV_HEADER = (
    "username", "api_name", "api_elapse", "api_call_datetime",
    "terminal_type", "img_path",
)
USERS_CSV_HEADER = (
    "username", "register_datetime", "register_type", "user_organization",
    "email", "userkey",
)


class StoreError(Exception):
    pass


class FieldTooLongError(StoreError):
    pass


class InvalidFieldError(StoreError):
    pass


class DuplicateUsernameError(StoreError):
    pass


class DuplicateUserkeyError(StoreError):
    pass


class UserNotFoundError(StoreError):
    pass


class UnknownUserError(StoreError):
    """An API call record references a username that was never registered."""


class StorageError(StoreError):
    pass


@dataclass(frozen=True)
class UserRecord:
    username: str
    register_datetime: datetime
    register_type: int
    user_organization: str
    email: str
    userkey: str
    credential_digest: str


@dataclass(frozen=True)
class ApiCallRecord:
    username: str
    api_name: str
    api_elapse: float  # milliseconds
    api_call_datetime: datetime
    terminal_type: int
    img_path: str


def utc_now_ms() -> datetime:
    """Current UTC time truncated to millisecond precision."""
    return from_epoch_ms(to_epoch_ms(datetime.now(timezone.utc)))


def to_epoch_ms(moment: datetime) -> int:
    if moment.tzinfo is None:
        moment = moment.replace(tzinfo=timezone.utc)
    return (moment - _EPOCH) // _MS


def from_epoch_ms(ms: int) -> datetime:
    return _EPOCH + ms * _MS


def iso_ms(moment: datetime) -> str:
    """ISO-8601 UTC with millisecond precision, e.g. 2026-01-02T03:04:05.678Z."""
    moment = from_epoch_ms(to_epoch_ms(moment))
    return moment.strftime("%Y-%m-%dT%H:%M:%S.") + f"{moment.microsecond // 1000:03d}Z"


def hash_credential(password: str, *, salt: bytes | None = None) -> str:
    if salt is None:
        salt = os.urandom(16)
    digest = hashlib.pbkdf2_hmac(
        "sha256", password.encode("utf-8"), salt, _PBKDF2_ITERATIONS
    )
    return f"pbkdf2_sha256${_PBKDF2_ITERATIONS}${salt.hex()}${digest.hex()}"


def verify_credential(password: str, stored_digest: str) -> bool:
    try:
        _, iterations, salt_hex, digest_hex = stored_digest.split("$")
        recomputed = hashlib.pbkdf2_hmac(
            "sha256", password.encode("utf-8"), bytes.fromhex(salt_hex), int(iterations)
        )
        return hmac.compare_digest(recomputed.hex(), digest_hex)
    except (ValueError, TypeError):
        return False


_SCHEMA = """
CREATE TABLE IF NOT EXISTS users (
    username          TEXT PRIMARY KEY,
    register_datetime INTEGER NOT NULL,
    register_type     INTEGER NOT NULL,
    user_organization TEXT NOT NULL,
    email             TEXT NOT NULL,
    userkey           TEXT NOT NULL UNIQUE,
    credential_digest TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS api_calls (
    id                INTEGER PRIMARY KEY AUTOINCREMENT,
    username          TEXT NOT NULL REFERENCES users(username),
    api_name          TEXT NOT NULL,
    api_elapse        REAL NOT NULL,
    api_call_datetime INTEGER NOT NULL,
    terminal_type     INTEGER NOT NULL,
    img_path          TEXT NOT NULL
);
CREATE INDEX IF NOT EXISTS idx_calls_user_time
    ON api_calls (username, api_call_datetime);
CREATE INDEX IF NOT EXISTS idx_calls_api_time
    ON api_calls (api_name, api_call_datetime);
"""


def _require_length(field: str, value: str, limit: int) -> None:
    if len(value) > limit:
        raise FieldTooLongError(f"{field} exceeds {limit} chars ({len(value)})")


class Store:
    def __init__(self, path: str | Path):
        self._path = str(path)
        self._lock = threading.RLock()
        try:
            # Autocommit: every INSERT is its own durable transaction.
            self._conn = sqlite3.connect(
                self._path, check_same_thread=False, isolation_level=None
            )
            self._conn.execute("PRAGMA foreign_keys = ON")
            if self._path != ":memory:":
                self._conn.execute("PRAGMA journal_mode = WAL")
            self._conn.executescript(_SCHEMA)
        except sqlite3.Error as exc:
            raise StorageError(f"cannot open store at {self._path}: {exc}") from exc

    @property
    def path(self) -> str:
        return self._path

    def close(self) -> None:
        with self._lock:
            self._conn.close()

    def __enter__(self) -> "Store":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()

    # -- users ----------------------------------------------------------

    def create_user(
        self,
        username: str,
        *,
        email: str,
        organization: str,
        userkey: str,
        password: str,
        register_type: int = REGISTER_ADMIN,
        register_datetime: datetime | None = None,
    ) -> UserRecord:
        if not username:
            raise InvalidFieldError("username is empty")
        if not userkey:
            raise InvalidFieldError("userkey is empty")
        if not password:
            raise InvalidFieldError("password is empty")
        if "@" not in email:
            raise InvalidFieldError(f"email {email!r} has no '@'")
        if register_type not in REGISTER_TYPES:
            raise InvalidFieldError(f"register_type must be one of {REGISTER_TYPES}")
        _require_length("username", username, USERNAME_MAX)
        _require_length("email", email, EMAIL_MAX)
        _require_length("user_organization", organization, ORGANIZATION_MAX)
        _require_length("userkey", userkey, USERKEY_MAX)
        _require_length("password", password, PASSWORD_MAX)

        moment = register_datetime or utc_now_ms()
        digest = hash_credential(password)
        with self._lock:
            try:
                self._conn.execute(
                    "INSERT INTO users VALUES (?, ?, ?, ?, ?, ?, ?)",
                    (username, to_epoch_ms(moment), register_type,
                     organization, email, userkey, digest),
                )
            except sqlite3.IntegrityError as exc:
                if "userkey" in str(exc):
                    raise DuplicateUserkeyError(f"userkey {userkey!r} already in use") from exc
                raise DuplicateUsernameError(f"username {username!r} already in use") from exc
            except sqlite3.Error as exc:
                raise StorageError(str(exc)) from exc
        return UserRecord(
            username, from_epoch_ms(to_epoch_ms(moment)), register_type,
            organization, email, userkey, digest,
        )

    def get_user(self, username: str) -> UserRecord:
        row = self._fetch_one("SELECT * FROM users WHERE username = ?", (username,))
        if row is None:
            raise UserNotFoundError(f"no user {username!r}")
        return self._user_from_row(row)

    def lookup_user_by_key(self, userkey: str) -> UserRecord:
        """Exact, case-sensitive userkey lookup."""
        row = self._fetch_one("SELECT * FROM users WHERE userkey = ?", (userkey,))
        if row is None:
            raise UserNotFoundError("no user with that key")
        return self._user_from_row(row)

    def auth_entries(self) -> list[tuple[str, str]]:
        """(username, userkey) pairs for the gateway's authenticator."""
        with self._lock:
            rows = self._conn.execute(
                "SELECT username, userkey FROM users ORDER BY username"
            ).fetchall()
        return [(r[0], r[1]) for r in rows]

    def check_credential(self, username: str, password: str) -> bool:
        try:
            user = self.get_user(username)
        except UserNotFoundError:
            return False
        return verify_credential(password, user.credential_digest)

    # -- call records -----------------------------------------------------

    def record_api_call(self, record: ApiCallRecord) -> None:
        if not record.username:
            raise InvalidFieldError("username is empty")
        if record.terminal_type not in TERMINAL_TYPES:
            raise InvalidFieldError(
                f"terminal_type must be one of {TERMINAL_TYPES}, got {record.terminal_type}"
            )
        _require_length("username", record.username, USERNAME_MAX)
        _require_length("api_name", record.api_name, API_NAME_MAX)
        _require_length("img_path", record.img_path, IMG_PATH_MAX)
        with self._lock:
            try:
                self._conn.execute(
                    "INSERT INTO api_calls "
                    "(username, api_name, api_elapse, api_call_datetime, terminal_type, img_path) "
                    "VALUES (?, ?, ?, ?, ?, ?)",
                    (record.username, record.api_name, float(record.api_elapse),
                     to_epoch_ms(record.api_call_datetime), record.terminal_type,
                     record.img_path),
                )
            except sqlite3.IntegrityError as exc:
                raise UnknownUserError(f"no registered user {record.username!r}") from exc
            except sqlite3.Error as exc:
                raise StorageError(str(exc)) from exc

    def query_calls(
        self,
        *,
        username: str | None = None,
        api_name: str | None = None,
        since: datetime | None = None,
        until: datetime | None = None,
        limit: int = 100,
    ) -> list[ApiCallRecord]:
        """Matching records, newest first, at most `limit`."""
        if limit < 1:
            raise ValueError("limit must be >= 1")
        clauses, params = [], []
        if username is not None:
            clauses.append("username = ?")
            params.append(username)
        if api_name is not None:
            clauses.append("api_name = ?")
            params.append(api_name)
        if since is not None:
            clauses.append("api_call_datetime >= ?")
            params.append(to_epoch_ms(since))
        if until is not None:
            clauses.append("api_call_datetime <= ?")
            params.append(to_epoch_ms(until))
        where = f" WHERE {' AND '.join(clauses)}" if clauses else ""
        sql = (
            "SELECT username, api_name, api_elapse, api_call_datetime, "
            f"terminal_type, img_path FROM api_calls{where} "
            "ORDER BY api_call_datetime DESC, id DESC LIMIT ?"
        )
        params.append(limit)
        with self._lock:
            rows = self._conn.execute(sql, params).fetchall()
        return [self._call_from_row(r) for r in rows]

    def count_calls(self) -> int:
        with self._lock:
            return self._conn.execute("SELECT COUNT(*) FROM api_calls").fetchone()[0]

    # -- export -----------------------------------------------------------

    def export_csv(self, calls_path: str | Path, users_path: str | Path) -> None:
        """Dump both tables as CSV with fixed header order.

        Credential digests are deliberately not exported.
        """
        with self._lock:
            calls = self._conn.execute(
                "SELECT username, api_name, api_elapse, api_call_datetime, "
                "terminal_type, img_path FROM api_calls ORDER BY id"
            ).fetchall()
            users = self._conn.execute(
                "SELECT username, register_datetime, register_type, "
                "user_organization, email, userkey FROM users ORDER BY username"
            ).fetchall()
        with open(calls_path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(CALLS_CSV_HEADER)
            for username, api_name, elapse, ts, terminal, img in calls:
                writer.writerow(
                    [username, api_name, repr(float(elapse)),
                     iso_ms(from_epoch_ms(ts)), terminal, img]
                )
        with open(users_path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(USERS_CSV_HEADER)
            for username, ts, rtype, org, email, key in users:
                writer.writerow(
                    [username, iso_ms(from_epoch_ms(ts)), rtype, org, email, key]
                )

    # -- helpers ------------------------------------------------------------

    def _fetch_one(self, sql: str, params: tuple):
        with self._lock:
            return self._conn.execute(sql, params).fetchone()

    @staticmethod
    def _user_from_row(row) -> UserRecord:
        return UserRecord(
            username=row[0],
            register_datetime=from_epoch_ms(row[1]),
            register_type=row[2],
            user_organization=row[3],
            email=row[4],
            userkey=row[5],
            credential_digest=row[6],
        )

    @staticmethod
    def _call_from_row(row) -> ApiCallRecord:
        return ApiCallRecord(
            username=row[0],
            api_name=row[1],
            api_elapse=row[2],
            api_call_datetime=from_epoch_ms(row[3]),
            terminal_type=row[4],
            img_path=row[5],
        )
