"""Property tests: rule invariants under randomized play and hostile input."""
from __future__ import annotations

import random

from hypothesis import given, settings, strategies as st

from inkduel.catalog import builtin_catalog
from inkduel.core import Phase, apply_command, legal_plans, new_match, replay, state_hash
from inkduel.core.types import DiceRolled
from inkduel.errors import GameError
from inkduel.sim.checks import check_state_invariants
from inkduel.sim.fuzz import _gen_command
from inkduel.sim import make_bot, play_game

CATALOG = builtin_catalog()


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2**32))
def test_every_command_either_applies_or_rejects_cleanly(seed):
    """Totality: random (often illegal) commands never corrupt the state."""
    rnd = random.Random(seed)
    state = new_match(CATALOG, rnd.getrandbits(63), max_turns=8)
    accepted = []
    for _ in range(25):
        command = _gen_command(state, CATALOG, rnd, legal_bias=0.6)
        before = state.canonical_bytes()
        try:
            next_state, _ = apply_command(state, command)
        except GameError:
            assert state.canonical_bytes() == before, command
        else:
            state = next_state
            accepted.append(command)
            check_state_invariants(state)
    replayed = replay(CATALOG, state.seed, accepted, match_id=state.match_id, max_turns=8)
    assert state_hash(replayed) == state_hash(state)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2**32))
def test_hp_never_increases_within_a_battle_round(seed):
    rnd = random.Random(seed)
    state = new_match(CATALOG, rnd.getrandbits(63), max_turns=10)
    previous_hp = None
    for _ in range(120):
        if state.phase is Phase.MATCH_OVER:
            break
        command = _gen_command(state, CATALOG, rnd, legal_bias=1.0)
        if command is None:
            break
        if command["op"] in ("conclude_round", "attach_illustration", "expire_illustration"):
            previous_hp = None  # hp legitimately resets between rounds
        try:
            state, _ = apply_command(state, command)
        except GameError:
            continue
        hp = [c.hp for side in state.players for c in side.cards]
        if previous_hp is not None and len(previous_hp) == len(hp):
            assert all(b <= a for a, b in zip(previous_hp, hp))
        for side in state.players:
            for card in side.cards:
                assert 0 <= card.hp <= card.max_hp
        previous_hp = hp if state.phase is Phase.AWAIT_PLANS else None


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2**31))
def test_resolution_logs_respect_activation_gating_and_dice_shape(seed):
    """Scan logs of a full random game for gating and d10 sanity."""
    bots = (make_bot("random-legal", seed), make_bot("random-legal", seed + 1))
    state = new_match(CATALOG, seed)
    rnds = (bots[0].game_rng(0, 0), bots[1].game_rng(0, 1))
    driver = random.Random(seed)
    while state.phase is not Phase.MATCH_OVER:
        if state.phase is Phase.AWAIT_PLANS:
            pre = state
            for player in (0, 1):
                plan = bots[player].plan(state, player, rnds[player])
                state, _ = apply_command(
                    state, {"op": "submit_plan", "player": player, "plan": plan.to_dict()})
            state, log = apply_command(state, {"op": "resolve_turn"})
            for step in log.steps:
                if isinstance(step, DiceRolled):
                    assert 1 <= step.face <= 10
                    spec = CATALOG.move(step.move_id)
                    assert step.success == (step.face <= spec.dice_window)
                    card = pre.side(step.player).cards[step.slot]
                    position = [m.move_id for m in card.moves].index(step.move_id)
                    assert position + 1 <= log.round  # activation gating
        else:
            command = _gen_command(state, CATALOG, driver, legal_bias=1.0)
            try:
                state, _ = apply_command(state, command)
            except GameError:
                continue  # plausible commands may still double-act a player


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2**32))
def test_enumerated_plans_validate(seed):
    """Everything legal_plans offers must pass submit_plan's validator."""
    from inkduel.core import PlanEntry, TurnPlan, submit_plan

    bot = make_bot("random-legal", seed)
    rnd = bot.game_rng(0, 0)
    state = new_match(CATALOG, seed)
    while state.phase is not Phase.AWAIT_PLANS:
        command = _gen_command(state, CATALOG, rnd, legal_bias=1.0)
        try:
            state, _ = apply_command(state, command)
        except GameError:
            continue
    options = legal_plans(state, 0)
    for slot, choices in options.items():
        for choice in choices:
            targets = choice.targets or (None,)
            for target in targets:
                submit_plan(state, 0, TurnPlan((PlanEntry(slot, choice.move_id, target),)))


@settings(max_examples=12, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2**31))
def test_full_games_replay_bit_equal(seed):
    record = play_game(CATALOG, (make_bot("random-legal", seed), make_bot("random-legal", seed ^ 1)),
                       seed, keep_journal=True)
    replayed = replay(CATALOG, seed, record.journal, match_id=record.match_id)
    assert state_hash(replayed) == record.final_hash
