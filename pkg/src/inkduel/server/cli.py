"""Match server CLI. Flags beat environment variables; both beat defaults."""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from ..catalog import builtin_catalog, load_catalog
from .app import create_app
from .service import MatchService


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="inkduel-server", description="Authoritative match server.")
    parser.add_argument("--bind", default=None,
                        help="host:port (default env INKDUEL_BIND or 127.0.0.1:8787)")
    parser.add_argument("--catalog", default=None, help="catalog JSON path (default: builtin)")
    parser.add_argument("--data-dir", default=None,
                        help="journal/asset directory (default env INKDUEL_DATA_DIR or ./inkduel-data)")
    parser.add_argument("--timer-scale", type=float, default=1.0,
                        help="shrink illustration timers for demos/tests (default 1.0)")
    parser.add_argument("--max-turns", type=int, default=30,
                        help="battle turns per round before a forced draw")
    parser.add_argument("--session-ttl-days", type=float, default=30.0)
    parser.add_argument("--static-dir", default=None,
                        help="serve a built browser client from this directory")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    bind = args.bind or os.environ.get("INKDUEL_BIND", "127.0.0.1:8787")
    data_dir = args.data_dir or os.environ.get("INKDUEL_DATA_DIR", "./inkduel-data")
    host, _, port = bind.rpartition(":")
    if not host or not port.isdigit():
        print(f"error: --bind wants host:port, got {bind!r}", file=sys.stderr)
        return 2

    catalog = load_catalog(Path(args.catalog).read_bytes()) if args.catalog else builtin_catalog()
    service = MatchService(
        catalog,
        data_dir,
        timer_scale=args.timer_scale,
        max_turns=args.max_turns,
        session_ttl_days=args.session_ttl_days,
    )
    app = create_app(service, static_dir=args.static_dir)

    import uvicorn

    uvicorn.run(app, host=host, port=int(port), log_level="info")
    return 0


if __name__ == "__main__":
    sys.exit(main())
