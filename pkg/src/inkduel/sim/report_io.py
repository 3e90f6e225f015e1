"""CSV and plain-text output for balance runs (plot-ready, no plotting here)."""
from __future__ import annotations

import csv
import json
from pathlib import Path

from .fuzz import FuzzSummary
from .runner import BalanceReport


def write_report(report: BalanceReport, out_dir: str | Path) -> None:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    (out / "summary.txt").write_text("\n".join(report.summary_lines()) + "\n")

    with open(out / "archetypes.csv", "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["archetype", "games", "wins", "draws", "losses", "win_rate", "draw_rate", "loss_rate"])
        for arch_id, s in report.per_archetype.items():
            writer.writerow([arch_id, s["games"], s["wins"], s["draws"], s["losses"],
                             f"{s['win_rate']:.4f}", f"{s['draw_rate']:.4f}", f"{s['loss_rate']:.4f}"])

    with open(out / "moves.csv", "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["move", "planned", "player_games", "pick_rate", "win_rate_delta"])
        for move_id, s in report.per_move.items():
            writer.writerow([move_id, s["planned"], s["player_games"],
                             f"{s['pick_rate']:.4f}", f"{s['win_rate_delta']:+.4f}"])

    with open(out / "windows.csv", "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["window", "rolls", "successes", "success_rate"])
        for window, s in report.window_rolls.items():
            writer.writerow([window, s["rolls"], s["successes"], f"{s['success_rate']:.4f}"])

    if report.window_sensitivity:
        write_sweep(report.window_sensitivity, out / "sweep.csv")


def write_sweep(rows: list[dict], path: str | Path) -> None:
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["window", "games", "wins", "draws", "losses", "win_rate"])
        for row in rows:
            writer.writerow([row["window"], row["games"], row["wins"], row["draws"],
                             row["losses"], f"{row['win_rate']:.4f}"])


def write_journals(report: BalanceReport, out_dir: str | Path) -> int:
    out = Path(out_dir) / "journals"
    out.mkdir(parents=True, exist_ok=True)
    written = 0
    for record in report.records:
        if record.journal is None:
            continue
        payload = {"seed": record.seed, "match_id": record.match_id,
                   "commands": record.journal}
        (out / f"{record.match_id}.json").write_text(json.dumps(payload))
        written += 1
    return written


def write_fuzz_findings(summary: FuzzSummary, out_dir: str | Path) -> None:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "fuzz-summary.txt").write_text("\n".join(summary.summary_lines()) + "\n")
    if summary.corruptions:
        (out / "fuzz-findings.json").write_text(json.dumps(summary.corruptions, indent=2))
