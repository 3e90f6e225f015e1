#!/usr/bin/env python3
"""Capture a real per-player envelope stream for the client store tests.

Run from the repository root (needs the Python package importable):

    python3 frontend/scripts/generate_stream_fixture.py

Plays a scripted three-round match through the match service and writes
every envelope the server sends to player B, in order, to
frontend/test/fixtures/match-stream.json.
"""
from __future__ import annotations

import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[2]
sys.path.insert(0, str(ROOT))
sys.path.insert(0, str(ROOT / "tests"))

from tests.test_server_service import SETUP_A, SETUP_B, Harness  # noqa: E402


def main() -> None:
    import tempfile

    h = Harness(Path(tempfile.mkdtemp()), seed=2024, timer_scale=1.0)
    token_a, token_b = h.pair()
    placeholder = h.service.catalog.placeholder_asset

    h.cmd(token_a, "select_hand", SETUP_A)
    h.cmd(token_b, "select_hand", SETUP_B)

    def illustrate():
        h.cmd(token_a, "attach", {"asset": placeholder})
        h.cmd(token_b, "attach", {"asset": placeholder})

    # round 1: one real exchange with a dodge roll, then a forfeit
    illustrate()
    h.cmd(token_a, "submit_plan", {"entries": [{"slot": 0, "move_id": "cleave", "target_slot": 0}]})
    h.cmd(token_b, "submit_plan", {"entries": [{"slot": 1, "move_id": "frost-jab", "target_slot": 1}]})
    h.cmd(token_a, "submit_plan", {"entries": [{"slot": 1, "move_id": "dino-blindo", "target_slot": None}]})
    h.cmd(token_b, "submit_plan", {"entries": [{"slot": 0, "move_id": "shield-bash", "target_slot": 1}]})
    h.cmd(token_b, "forfeit")

    # round 2: mutual tie
    h.cmd(token_a, "select_move", {"move_id": "rampage"})
    h.cmd(token_b, "select_move", {"move_id": "mirror-ward"})
    illustrate()
    h.cmd(token_a, "declare_tie")
    h.cmd(token_b, "declare_tie")

    # round 3: B forfeits immediately, A takes the match
    h.cmd(token_a, "select_move", {"move_id": "blood-frenzy"})
    h.cmd(token_b, "select_move", {"move_id": "granite-guard"})
    illustrate()
    h.cmd(token_b, "forfeit")

    envelopes = [json.loads(raw) for raw in h.bytes_log[token_b]]
    out = ROOT / "frontend" / "test" / "fixtures" / "match-stream.json"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(envelopes, indent=1))
    print(f"wrote {len(envelopes)} envelopes to {out}")


if __name__ == "__main__":
    main()
