"""Headless simulator CLI: bot matches, fuzzing, and window sweeps."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from ..catalog import builtin_catalog, load_catalog
from .bots import BOT_NAMES, make_bot
from .fuzz import fuzz
from .report_io import write_fuzz_findings, write_journals, write_report, write_sweep
from .runner import run_games
from .sweep import window_sweep


def _load(path: str | None):
    if path is None:
        return builtin_catalog()
    return load_catalog(Path(path).read_bytes())


def _parse_windows(spec: str) -> list[int]:
    if ".." in spec:
        lo, hi = spec.split("..", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(part) for part in spec.split(",") if part]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="inkduel-sim", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="play bot-vs-bot matches and report balance")
    run.add_argument("--catalog", help="catalog JSON path (default: builtin)")
    run.add_argument("--bot-a", default="random-legal", choices=BOT_NAMES)
    run.add_argument("--bot-b", default="random-legal", choices=BOT_NAMES)
    run.add_argument("--games", type=int, required=True, metavar="N")
    run.add_argument("--seed", type=int, default=0, metavar="S")
    run.add_argument("--out", help="directory for CSV tables and summary")
    run.add_argument("--mirror", action="store_true", help="player B copies player A's hand")
    run.add_argument("--max-turns", type=int, default=30)
    run.add_argument("--workers", type=int, default=None)
    run.add_argument("--keep-journals", action="store_true", help="write per-game journals under --out")
    run.add_argument("--no-verify", action="store_true", help="skip per-game replay verification")

    fz = sub.add_parser("fuzz", help="random command sequences against the engine")
    fz.add_argument("--catalog", help="catalog JSON path (default: builtin)")
    fz.add_argument("--sequences", type=int, required=True, metavar="N")
    fz.add_argument("--seed", type=int, default=0, metavar="S")
    fz.add_argument("--length", type=int, default=10, help="commands per sequence")
    fz.add_argument("--out", help="directory for findings")

    sw = sub.add_parser("sweep", help="win rate as a function of the dice window")
    sw.add_argument("--catalog", help="catalog JSON path (default: builtin)")
    sw.add_argument("--windows", default="1..10", help="range like 1..10 or list like 3,5,7")
    sw.add_argument("--games-per", type=int, required=True, metavar="N")
    sw.add_argument("--seed", type=int, default=0, metavar="S")
    sw.add_argument("--bot-a", default="defense-biased", choices=BOT_NAMES)
    sw.add_argument("--bot-b", default="greedy-damage", choices=BOT_NAMES)
    sw.add_argument("--workers", type=int, default=None)
    sw.add_argument("--out", help="CSV output path")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        catalog = _load(args.catalog)
        if args.command == "run":
            report = run_games(
                catalog,
                make_bot(args.bot_a, args.seed),
                make_bot(args.bot_b, args.seed + 1),
                args.games,
                args.seed,
                mirror=args.mirror,
                max_turns=args.max_turns,
                verify_replays=not args.no_verify,
                keep_journals=args.keep_journals,
                workers=args.workers,
            )
            print("\n".join(report.summary_lines()))
            if args.out:
                write_report(report, args.out)
                if args.keep_journals:
                    count = write_journals(report, args.out)
                    print(f"wrote {count} journals under {args.out}/journals")
                print(f"report written to {args.out}")
            return 1 if report.illegal_states else 0

        if args.command == "fuzz":
            summary = fuzz(catalog, args.sequences, args.seed, length=args.length)
            print("\n".join(summary.summary_lines()))
            if args.out:
                write_fuzz_findings(summary, args.out)
            return 0 if summary.ok else 1

        if args.command == "sweep":
            rows = window_sweep(
                catalog,
                _parse_windows(args.windows),
                args.games_per,
                args.seed,
                bot_a=args.bot_a,
                bot_b=args.bot_b,
                workers=args.workers,
            )
            print(f"{'window':>6} {'games':>7} {'wins':>6} {'draws':>6} {'losses':>7} {'win_rate':>9}")
            for row in rows:
                print(f"{row['window']:>6} {row['games']:>7} {row['wins']:>6}"
                      f" {row['draws']:>6} {row['losses']:>7} {row['win_rate']:>9.4f}")
            if args.out:
                write_sweep(rows, args.out)
            return 0
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
