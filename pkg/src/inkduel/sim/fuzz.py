"""Random command-sequence fuzzing of the rule engine.

Each sequence mixes plausible commands (to drive matches deep) with garbage
(wrong phase, bogus ids, malformed plans). Every rejection must be a typed
GameError that leaves the state untouched; every accepted prefix must replay
to the same hash. Anything else is recorded as a corruption finding.
"""
from __future__ import annotations

import random
import time
import traceback
from collections import Counter
from dataclasses import dataclass, field

from ..catalog import Catalog
from ..core import Phase, apply_command, legal_plans, new_match, replay, state_hash
from ..core.replay import COMMAND_OPS
from ..core.rng import stream_value
from ..errors import GameError
from .checks import InvariantViolation, check_state_invariants


@dataclass
class FuzzSummary:
    sequences: int
    commands: int
    accepted: int
    rejected: Counter
    corruptions: list[dict] = field(default_factory=list)
    elapsed_s: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.corruptions

    def summary_lines(self) -> list[str]:
        lines = [
            f"sequences: {self.sequences}",
            f"commands: {self.commands} ({self.accepted} accepted)",
            "rejections by kind:",
        ]
        for code, count in sorted(self.rejected.items()):
            lines.append(f"  {code}: {count}")
        lines.append(f"corruptions: {len(self.corruptions)}")
        for finding in self.corruptions[:5]:
            lines.append(f"  {finding['kind']} (sequence {finding['sequence']}): {finding['detail']}")
        lines.append(f"elapsed: {self.elapsed_s:.1f}s")
        return lines


def fuzz(
    catalog: Catalog,
    n_sequences: int,
    seed: int,
    *,
    length: int = 10,
    legal_bias: float = 0.7,
    snapshot_every: int = 16,
    max_turns: int = 12,
) -> FuzzSummary:
    """Run n random command sequences; failures are findings, not raises."""
    started = time.perf_counter()
    rejected: Counter = Counter()
    corruptions: list[dict] = []
    commands = 0
    accepted_total = 0

    for sequence_index in range(n_sequences):
        rnd = random.Random(stream_value(seed, sequence_index))
        match_seed = rnd.getrandbits(63)
        state = new_match(catalog, match_seed, max_turns=max_turns)
        accepted: list[dict] = []

        for step in range(length):
            command = _gen_command(state, catalog, rnd, legal_bias)
            commands += 1
            snapshot = state.canonical_bytes() if step % snapshot_every == 0 else None
            try:
                next_state, _ = apply_command(state, command)
            except GameError as exc:
                rejected[exc.code] += 1
                if snapshot is not None and state.canonical_bytes() != snapshot:
                    corruptions.append(_finding("state_mutated_on_error", sequence_index,
                                                f"{command.get('op')} raised {exc.code} but changed state",
                                                accepted, command))
            except Exception as exc:  # noqa: BLE001 - untyped escape is the finding
                corruptions.append(_finding("untyped_exception", sequence_index,
                                            f"{command.get('op')}: {exc!r}\n{traceback.format_exc(limit=3)}",
                                            accepted, command))
            else:
                state = next_state
                accepted.append(command)
                accepted_total += 1
                try:
                    check_state_invariants(state)
                except InvariantViolation as exc:
                    corruptions.append(_finding("invariant_violation", sequence_index,
                                                str(exc), accepted, command))

        mismatch = _verify_prefix_replay(catalog, match_seed, max_turns, accepted, state)
        if mismatch is not None:
            corruptions.append({**mismatch, "sequence": sequence_index})

    return FuzzSummary(
        sequences=n_sequences,
        commands=commands,
        accepted=accepted_total,
        rejected=rejected,
        corruptions=corruptions,
        elapsed_s=time.perf_counter() - started,
    )


def _finding(kind: str, sequence: int, detail: str, accepted: list[dict], command: dict) -> dict:
    return {
        "kind": kind,
        "sequence": sequence,
        "detail": detail,
        "repro": {"accepted_prefix": list(accepted), "failing_command": command},
    }


def _verify_prefix_replay(catalog, match_seed, max_turns, accepted, live_state) -> dict | None:
    """Replay the accepted prefix; on mismatch, minimize to the first bad index."""
    try:
        replayed = replay(catalog, match_seed, accepted, max_turns=max_turns)
    except GameError as exc:
        return _minimized(catalog, match_seed, max_turns, accepted, f"replay rejected: {exc}")
    if state_hash(replayed) != state_hash(live_state):
        return _minimized(catalog, match_seed, max_turns, accepted, "replay hash differs")
    return None


def _minimized(catalog, match_seed, max_turns, accepted, detail) -> dict:
    # Walk the prefix again, hashing step by step, to name the divergence point.
    state = new_match(catalog, match_seed, max_turns=max_turns)
    check = new_match(catalog, match_seed, max_turns=max_turns)
    first_bad = len(accepted)
    for i, command in enumerate(accepted):
        try:
            check, _ = apply_command(check, command)
        except GameError:
            first_bad = i
            break
        state, _ = apply_command(state, command)
        if state_hash(check) != state_hash(state):
            first_bad = i
            break
    return {
        "kind": "replay_mismatch",
        "detail": f"{detail}; first divergent command index {first_bad}",
        "repro": {"accepted_prefix": accepted[: first_bad + 1], "seed": match_seed},
    }


# --- command generation ------------------------------------------------------


def _gen_command(state, catalog: Catalog, rnd: random.Random, legal_bias: float) -> dict:
    if rnd.random() < legal_bias:
        command = _plausible_command(state, catalog, rnd)
        if command is not None:
            return command
    return _garbage_command(state, catalog, rnd)


def _plausible_command(state, catalog: Catalog, rnd: random.Random) -> dict | None:
    phase = state.phase
    if phase is Phase.SETUP:
        player = rnd.randint(0, 1)
        archetype = rnd.choice(catalog.archetypes)
        return {
            "op": "select_hand",
            "player": player,
            "prompt_id": rnd.choice(catalog.prompts).id,
            "archetype_id": archetype.id,
            "first_move_id": rnd.choice(archetype.move_pool),
            "premade_ids": rnd.sample([c.id for c in catalog.premade_cards], 2),
        }
    if phase is Phase.CUSTOMIZE:
        player = rnd.randint(0, 1)
        side = state.side(player)
        pool = catalog.archetype(side.archetype_id).move_pool
        chosen = {m.move_id for m in side.cards[0].moves}
        remaining = [m for m in pool if m not in chosen] or list(pool)
        return {"op": "select_round_move", "player": player, "move_id": rnd.choice(remaining)}
    if phase is Phase.ILLUSTRATE:
        if rnd.random() < 0.25:
            return {"op": "expire_illustration", "round": state.round}
        return {
            "op": "attach_illustration",
            "player": rnd.randint(0, 1),
            "round": state.round,
            "asset": f"fuzz:art-{rnd.randint(0, 3)}",
        }
    if phase is Phase.AWAIT_PLANS:
        roll = rnd.random()
        if all(p.plan is not None for p in state.players):
            return {"op": "resolve_turn"}
        if roll < 0.05:
            return {"op": "declare_tie", "player": rnd.randint(0, 1)}
        if roll < 0.08:
            return {"op": "forfeit", "player": rnd.randint(0, 1)}
        player = rnd.randint(0, 1)
        entries = []
        for slot, choices in legal_plans(state, player).items():
            pick = rnd.randrange(len(choices) + 1)
            if pick == len(choices):
                continue
            choice = choices[pick]
            target = rnd.choice(choice.targets) if choice.targets else None
            entries.append({"slot": slot, "move_id": choice.move_id, "target_slot": target})
        return {"op": "submit_plan", "player": player, "plan": {"entries": entries}}
    if phase is Phase.ROUND_OVER:
        return {"op": "conclude_round"}
    return None  # MATCH_OVER: let the garbage generator poke at it


def _garbage_command(state, catalog: Catalog, rnd: random.Random) -> dict:
    op = rnd.choice(COMMAND_OPS)
    player = rnd.choice([-1, 0, 1, 2])
    move_ids = list(catalog.moves) + ["bogus-move", ""]
    if op == "select_hand":
        ids = [c.id for c in catalog.premade_cards] + ["bogus-card"]
        premades = [rnd.choice(ids), rnd.choice(ids)]
        return {
            "op": op,
            "player": player,
            "prompt_id": rnd.choice([p.id for p in catalog.prompts] + ["bogus-prompt"]),
            "archetype_id": rnd.choice([a.id for a in catalog.archetypes] + ["bogus-arch"]),
            "first_move_id": rnd.choice(move_ids),
            "premade_ids": premades,
        }
    if op == "select_round_move":
        return {"op": op, "player": player, "move_id": rnd.choice(move_ids)}
    if op == "attach_illustration":
        return {"op": op, "player": player, "round": rnd.randint(0, 4), "asset": rnd.choice(["fuzz:x", ""])}
    if op == "expire_illustration":
        return {"op": op, "round": rnd.randint(0, 4)}
    if op == "submit_plan":
        entries = [
            {
                "slot": rnd.randint(-1, 3),
                "move_id": rnd.choice(move_ids),
                "target_slot": rnd.choice([None, -1, 0, 1, 2, 3]),
            }
            for _ in range(rnd.randint(0, 4))
        ]
        return {"op": op, "player": player, "plan": {"entries": entries}}
    if op in ("declare_tie", "forfeit"):
        return {"op": op, "player": player}
    return {"op": op}  # resolve_turn / conclude_round
