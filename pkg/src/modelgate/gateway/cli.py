"""Server command line: serve, create-user, export.

Flag values override MODELGATE_* environment variables, which override
built-in defaults.
"""

from __future__ import annotations

import argparse
import logging
import secrets
import sys
from pathlib import Path

from ..persistence.store import Store, StoreError
from .config import GatewayConfig, load_config
from .httpserver import GatewayServer


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--listen", help="host:port to bind (default 127.0.0.1:8080)")
    parser.add_argument("--workers", help="comma-separated worker names")
    parser.add_argument("--data-dir", help="directory for the SQLite store")
    parser.add_argument("--api-prefix", help="route prefix, default /api/")
    parser.add_argument("--img-cap-mb", help="image size cap in MiB (default 8)")
    parser.add_argument("--body-cap-mb", help="request body cap in MiB (default 12)")
    parser.add_argument("--fetch-timeout-s", help="imgurl fetch timeout (default 5)")
    parser.add_argument("--probe-period-s", help="worker health probe period (default 1)")
    parser.add_argument("--console-dir", help="static console bundle to serve under /console/")


def _config_from(args: argparse.Namespace) -> GatewayConfig:
    flags = {
        "listen": args.listen,
        "workers": args.workers,
        "data_dir": args.data_dir,
        "api_prefix": args.api_prefix,
        "img_cap_mb": args.img_cap_mb,
        "body_cap_mb": args.body_cap_mb,
        "fetch_timeout_s": args.fetch_timeout_s,
        "probe_period_s": args.probe_period_s,
        "console_dir": args.console_dir,
    }
    return load_config(flags)


def _cmd_serve(args: argparse.Namespace) -> int:
    config = _config_from(args)
    server = GatewayServer(config, seed_demo_faces=args.seed_demo)
    if args.seed_demo:
        key = "demo-" + secrets.token_hex(6)
        try:
            server.store.create_user(
                "demo",
                email="demo@example.com",
                organization="demo",
                userkey=key,
                password="demo-pass",
            )
            print(f"demo user created; X-API-Key: {key}")
        except StoreError:
            print("demo user already exists; reusing stored key")
    server.start()
    print(f"serving on {server.base_url}{config.api_prefix} (Ctrl-C to stop)")
    try:
        server._thread.join()
    except KeyboardInterrupt:
        print("shutting down")
    finally:
        server.close()
    return 0


def _cmd_create_user(args: argparse.Namespace) -> int:
    config = _config_from(args)
    config.data_dir.mkdir(parents=True, exist_ok=True)
    userkey = args.userkey or secrets.token_hex(10)
    password = args.password or secrets.token_urlsafe(8)[:12]
    with Store(config.data_dir / "gateway.db") as store:
        try:
            user = store.create_user(
                args.username,
                email=args.email,
                organization=args.organization,
                userkey=userkey,
                password=password,
                register_type=args.register_type,
            )
        except StoreError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
    print(f"created user {user.username!r}")
    print(f"X-API-Key: {user.userkey}")
    if not args.password:
        print(f"password: {password}")
    return 0


def _cmd_export(args: argparse.Namespace) -> int:
    config = _config_from(args)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    calls_path = out_dir / "api_calls.csv"
    users_path = out_dir / "users.csv"
    with Store(config.data_dir / "gateway.db") as store:
        store.export_csv(calls_path, users_path)
    print(f"wrote {calls_path} and {users_path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="modelgate-server", description="AI inference gateway"
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the gateway")
    _add_config_flags(serve)
    serve.add_argument(
        "--seed-demo", action="store_true",
        help="create a demo user and enroll sample faces",
    )
    serve.set_defaults(func=_cmd_serve)

    create = sub.add_parser("create-user", help="register an API user")
    _add_config_flags(create)
    create.add_argument("--username", required=True)
    create.add_argument("--email", required=True)
    create.add_argument("--organization", default="")
    create.add_argument("--userkey", help="credential to issue (generated if omitted)")
    create.add_argument("--password", help="login credential (generated if omitted)")
    create.add_argument("--register-type", type=int, default=2)
    create.set_defaults(func=_cmd_create_user)

    export = sub.add_parser("export", help="dump both tables as CSV")
    _add_config_flags(export)
    export.add_argument("--out-dir", default=".")
    export.set_defaults(func=_cmd_export)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(asctime)s %(name)s %(levelname)s %(message)s",
    )
    return args.func(args)


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
