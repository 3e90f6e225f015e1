"""Command journal encoding and deterministic replay.

A match is fully described by (catalog, seed, command list): replaying the
journal reproduces the original final state bit-for-bit, which the server
audit, the simulator, and the fuzzer all lean on.
"""
from __future__ import annotations

from ..catalog import Catalog
from ..errors import GameError, ProtocolError, ReplayMismatch
from . import engine
from .types import DEFAULT_MAX_TURNS, MatchState, ResolutionLog, TurnPlan

# Ops that mutate state and therefore belong in a journal.
COMMAND_OPS = (
    "select_hand",
    "select_round_move",
    "attach_illustration",
    "expire_illustration",
    "submit_plan",
    "resolve_turn",
    "conclude_round",
    "declare_tie",
    "forfeit",
)


def apply_command(state: MatchState, command: dict) -> tuple[MatchState, ResolutionLog | None]:
    """Apply one journaled command; raises the op's typed error on rejection."""
    op = command.get("op")
    if op == "select_hand":
        return (
            engine.select_hand(
                state,
                command["player"],
                command["prompt_id"],
                command["archetype_id"],
                command["first_move_id"],
                tuple(command["premade_ids"]),
            ),
            None,
        )
    if op == "select_round_move":
        return engine.select_round_move(state, command["player"], command["move_id"]), None
    if op == "attach_illustration":
        return (
            engine.attach_illustration(state, command["player"], command["round"], command["asset"]),
            None,
        )
    if op == "expire_illustration":
        return engine.expire_illustration(state, command["round"]), None
    if op == "submit_plan":
        plan = TurnPlan.from_dict(command["plan"])
        return engine.submit_plan(state, command["player"], plan), None
    if op == "resolve_turn":
        return engine.resolve_turn(state)
    if op == "conclude_round":
        return engine.conclude_round(state), None
    if op == "declare_tie":
        return engine.declare_tie(state, command["player"]), None
    if op == "forfeit":
        return engine.forfeit(state, command["player"]), None
    raise ProtocolError(f"unknown command op {op!r}")


def replay(
    catalog: Catalog,
    seed: int,
    commands: list[dict],
    *,
    match_id: str | None = None,
    max_turns: int = DEFAULT_MAX_TURNS,
) -> MatchState:
    """Re-run a journal from scratch; ReplayMismatch names the first bad index."""
    state = engine.new_match(catalog, seed, match_id=match_id, max_turns=max_turns)
    for index, command in enumerate(commands):
        try:
            state, _ = apply_command(state, command)
        except GameError as exc:
            raise ReplayMismatch(index, f"{command.get('op')}: {exc}") from exc
    return state


def apply_log(pre_turn: MatchState, log: ResolutionLog) -> MatchState:
    """Reproduce a resolved turn from its log alone, without re-rolling dice.

    Dual route to resolve_turn: damage and knockouts are taken from the
    recorded steps, so the result must equal the engine's post-turn state.
    """
    from .types import DamageDealt, Phase, RoundEnd, RoundResult

    out = pre_turn.clone()
    ended: RoundEnd | None = None
    for step in log.steps:
        if isinstance(step, DamageDealt):
            player, slot = step.target
            card = out.side(player).cards[slot]
            card.hp = max(0, card.hp - step.amount)
        elif isinstance(step, RoundEnd):
            ended = step
    out.rng_cursor = log.rng_cursor_after
    for side in out.players:
        side.plan = None
    if ended is not None:
        out.phase = Phase.ROUND_OVER
        out.pending_result = RoundResult(log.round, ended.winner, ended.reason)
    else:
        out.turn = log.turn + 1
        out.initiative = 1 - log.initiative
    return out
