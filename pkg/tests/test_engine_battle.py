from __future__ import annotations

import pytest

from inkduel.catalog import MoveKind
from inkduel.core import (
    Phase,
    PlanEntry,
    TurnPlan,
    declare_tie,
    forfeit,
    legal_plans,
    new_match,
    ready_to_resolve,
    resolve_turn,
    round_end_outcome,
    state_hash,
    submit_plan,
)
from inkduel.core import rng
from inkduel.core.types import DamageDealt, DiceRolled, Knockout, AttackFizzled, RoundEnd
from inkduel.errors import AlreadySubmitted, InvalidPlan, NotReady, PhaseViolation
from tests.conftest import start_battle


def plan(*entries: tuple) -> TurnPlan:
    return TurnPlan(entries=tuple(PlanEntry(*e) for e in entries))


PASS = TurnPlan()


def seed_with_initiative(want: int) -> int:
    """First match seed whose initiative draw has the wanted parity."""
    for seed in range(100):
        value, _ = rng.draw(seed, 0)
        if value & 1 == want:
            return seed
    raise AssertionError("no such seed in range")


def first_face(seed: int, window: int) -> tuple[int, bool]:
    """The d10 face a battle's first roll will see (cursor 1 after setup)."""
    face, _ = rng.d10(seed, 1)
    return face, face <= window


class TestLegalPlans:
    def test_round1_offers_exactly_the_first_move_per_card(self, mini_catalog):
        state = start_battle(mini_catalog, seed=3)
        options = legal_plans(state, 0)
        # custom card: its setup pick; premades: only their activation-1 move
        assert [c.move_id for c in options[0]] == ["slam8"]
        assert [c.move_id for c in options[1]] == ["jab5"]
        assert [c.move_id for c in options[2]] == ["duck10"]

    def test_attacks_list_alive_targets_and_defenses_none(self, mini_catalog):
        state = start_battle(mini_catalog, seed=3)
        options = legal_plans(state, 0)
        assert options[0][0].kind is MoveKind.ATTACK
        assert options[0][0].targets == (0, 1, 2)
        assert options[2][0].kind is MoveKind.DODGE
        assert options[2][0].targets == ()

    def test_knocked_out_card_has_no_options(self, mini_catalog):
        state = start_battle(mini_catalog, seed=seed_with_initiative(0))
        # A's custom slams B's glass target (8 hp) flat
        state = submit_plan(state, 0, plan((0, "slam8", 1)))
        state = submit_plan(state, 1, PASS)
        state, _ = resolve_turn(state)
        assert state.players[1].cards[1].knocked_out
        options = legal_plans(state, 1)
        assert options[1] == []

    def test_dead_targets_drop_out_of_target_lists(self, mini_catalog):
        state = start_battle(mini_catalog, seed=seed_with_initiative(0))
        state = submit_plan(state, 0, plan((0, "slam8", 1)))
        state = submit_plan(state, 1, PASS)
        state, _ = resolve_turn(state)
        options = legal_plans(state, 0)
        assert options[0][0].targets == (0, 2)


class TestSubmitPlan:
    def test_both_submitting_makes_the_turn_ready(self, mini_catalog):
        state = start_battle(mini_catalog, seed=3)
        state = submit_plan(state, 0, plan((0, "slam8", 0)))
        assert not ready_to_resolve(state)
        state = submit_plan(state, 1, PASS)
        assert ready_to_resolve(state)

    def test_two_moves_on_one_card_is_invalid(self, mini_catalog):
        state = start_battle(mini_catalog, seed=3)
        bad = plan((0, "slam8", 0), (0, "slam8", 1))
        before = state_hash(state)
        with pytest.raises(InvalidPlan):
            submit_plan(state, 0, bad)
        assert state_hash(state) == before

    def test_targeting_a_knocked_out_card_is_invalid(self, mini_catalog):
        state = start_battle(mini_catalog, seed=seed_with_initiative(0))
        state = submit_plan(state, 0, plan((0, "slam8", 1)))
        state = submit_plan(state, 1, PASS)
        state, _ = resolve_turn(state)
        with pytest.raises(InvalidPlan):
            submit_plan(state, 0, plan((0, "slam8", 1)))

    def test_planning_with_a_knocked_out_card_is_invalid(self, mini_catalog):
        state = start_battle(mini_catalog, seed=seed_with_initiative(0))
        state = submit_plan(state, 0, plan((0, "slam8", 1)))
        state = submit_plan(state, 1, PASS)
        state, _ = resolve_turn(state)
        with pytest.raises(InvalidPlan):
            submit_plan(state, 1, plan((1, "jab5", 0)))

    def test_locked_moves_are_invalid_before_their_round(self, mini_catalog):
        state = start_battle(mini_catalog, seed=3)
        # premade wall's bounce5 sits at position 2 -> unlocks in round 2
        with pytest.raises(InvalidPlan):
            submit_plan(state, 0, plan((2, "bounce5", None)))

    def test_attack_needs_target_and_defense_refuses_one(self, mini_catalog):
        state = start_battle(mini_catalog, seed=3)
        with pytest.raises(InvalidPlan):
            submit_plan(state, 0, plan((0, "slam8", None)))
        with pytest.raises(InvalidPlan):
            submit_plan(state, 0, plan((2, "duck10", 0)))

    def test_double_submit_is_rejected(self, mini_catalog):
        state = start_battle(mini_catalog, seed=3)
        state = submit_plan(state, 0, PASS)
        with pytest.raises(AlreadySubmitted):
            submit_plan(state, 0, PASS)

    def test_resolve_without_both_plans_is_not_ready(self, mini_catalog):
        state = start_battle(mini_catalog, seed=3)
        with pytest.raises(NotReady):
            resolve_turn(state)


class TestResolution:
    def test_magnitude_8_flattens_an_8_hp_card(self, mini_catalog):
        state = start_battle(mini_catalog, seed=3)
        state = submit_plan(state, 0, plan((0, "slam8", 1)))  # B's glass target
        state = submit_plan(state, 1, PASS)
        state, log = resolve_turn(state)
        glass = state.players[1].cards[1]
        assert glass.hp == 0 and glass.knocked_out
        assert DamageDealt((0, 0), (1, 1), 8) in log.steps
        assert Knockout(1, 1) in log.steps

    def test_hp_clamps_at_zero(self, mini_catalog):
        state = start_battle(mini_catalog, seed=3, first_move_a="jab5")
        # two 5-point jabs into the 8 hp glass target: 8 -> 3 -> 0, never negative
        state = submit_plan(state, 0, plan((0, "jab5", 1), (1, "jab5", 1)))
        state = submit_plan(state, 1, PASS)
        state, log = resolve_turn(state)
        assert state.players[1].cards[1].hp == 0
        assert sum(1 for s in log.steps if isinstance(s, Knockout)) == 1

    def test_full_window_dodge_always_succeeds(self, mini_catalog):
        for seed in range(12):
            state = start_battle(mini_catalog, seed=seed)
            state = submit_plan(state, 0, plan((0, "slam8", 2)))  # hit B's wall
            state = submit_plan(state, 1, plan((2, "duck10", None)))
            state, log = resolve_turn(state)
            rolls = [s for s in log.steps if isinstance(s, DiceRolled)]
            assert rolls and rolls[0].success
            assert state.players[1].cards[2].hp == 30  # untouched

    def test_reflect_success_returns_full_magnitude(self, mini_catalog):
        # seed 0: the battle's first roll is face 1, inside bounce5's window.
        face, success = first_face(0, window=5)
        assert success
        state = start_battle(mini_catalog, seed=0, first_move_a="bounce5")
        state = submit_plan(state, 0, plan((0, "bounce5", None)))
        state = submit_plan(state, 1, plan((0, "jab5", 0)))
        state, log = resolve_turn(state)
        assert state.players[0].cards[0].hp == 20  # reflector untouched
        assert state.players[1].cards[0].hp == 15  # attacker ate its own 5
        assert DiceRolled(0, 0, "bounce5", face, True) in log.steps
        assert DamageDealt((0, 0), (1, 0), 5, reflected=True) in log.steps

    def test_reflect_failure_lets_the_attack_through(self, mini_catalog):
        # seed 1: the battle's first roll is face 10, outside the window.
        face, success = first_face(1, window=5)
        assert not success
        state = start_battle(mini_catalog, seed=1, first_move_a="bounce5")
        state = submit_plan(state, 0, plan((0, "bounce5", None)))
        state = submit_plan(state, 1, plan((0, "jab5", 0)))
        state, log = resolve_turn(state)
        assert state.players[0].cards[0].hp == 15
        assert state.players[1].cards[0].hp == 20
        assert DiceRolled(0, 0, "bounce5", face, False) in log.steps

    def test_dodge_blanks_every_incoming_attack(self, mini_catalog):
        face, success = first_face(0, window=5)
        assert success
        state = start_battle(mini_catalog, seed=0, first_move_a="jab5", first_move_b="duck5")
        state = submit_plan(state, 0, plan((0, "jab5", 0), (1, "jab5", 0)))
        state = submit_plan(state, 1, plan((0, "duck5", None)))
        state, log = resolve_turn(state)
        assert state.players[1].cards[0].hp == 20
        zero_hits = [s for s in log.steps if isinstance(s, DamageDealt) and s.amount == 0]
        assert len(zero_hits) == 2

    def test_attacker_knocked_out_mid_step_is_canceled(self, mini_catalog):
        seed = seed_with_initiative(0)
        state = start_battle(mini_catalog, seed=seed)
        # A (initiative) slams B's glass target before it can jab back.
        state = submit_plan(state, 0, plan((0, "slam8", 1)))
        state = submit_plan(state, 1, plan((1, "jab5", 0)))
        state, log = resolve_turn(state)
        assert AttackFizzled(1, 1, "attacker_down") in log.steps
        assert state.players[0].cards[0].hp == 20

    def test_attack_on_already_downed_target_fizzles(self, mini_catalog):
        state = start_battle(mini_catalog, seed=3)
        # both of A's attackers aim at the same 8 hp card; the second fizzles
        state = submit_plan(state, 0, plan((0, "slam8", 1), (1, "jab5", 1)))
        state = submit_plan(state, 1, PASS)
        state, log = resolve_turn(state)
        assert AttackFizzled(0, 1, "target_down") in log.steps
        assert state.players[1].cards[1].hp == 0

    def test_continuing_turn_swaps_initiative_and_clears_plans(self, mini_catalog):
        state = start_battle(mini_catalog, seed=3)
        before = state.initiative
        state = submit_plan(state, 0, PASS)
        state = submit_plan(state, 1, PASS)
        state, log = resolve_turn(state)
        assert state.phase is Phase.AWAIT_PLANS
        assert state.turn == 2
        assert state.initiative == 1 - before
        assert all(p.plan is None for p in state.players)

    def test_wiping_the_opponent_ends_the_round(self, mini_catalog):
        state = _wipe_player_b(mini_catalog)
        assert state.phase is Phase.ROUND_OVER
        assert state.pending_result.winner == 0
        assert state.pending_result.reason == "wipe"

    def test_turn_cap_forces_a_drawn_round(self, mini_catalog):
        state = start_battle(mini_catalog, seed=3, max_turns=2)
        for _ in range(2):
            state = submit_plan(state, 0, PASS)
            state = submit_plan(state, 1, PASS)
            state, log = resolve_turn(state)
        assert state.phase is Phase.ROUND_OVER
        assert state.pending_result.winner is None
        assert state.pending_result.reason == "turn_cap"
        assert RoundEnd(None, "turn_cap") in log.steps


class TestRoundEndOracle:
    def test_all_64_binary_hp_configurations_match_brute_force(self):
        for bits in range(64):
            hp_a = [(bits >> i) & 1 for i in range(3)]
            hp_b = [(bits >> (i + 3)) & 1 for i in range(3)]
            ended, winner = round_end_outcome(hp_a, hp_b)
            # Independent predicate: a side is all-zero.
            a_dead = not any(hp_a)
            b_dead = not any(hp_b)
            assert ended == (a_dead or b_dead)
            if a_dead and b_dead:
                assert winner is None
            elif a_dead:
                assert winner == 1
            elif b_dead:
                assert winner == 0


class TestTieAndForfeit:
    def test_single_tie_declaration_records_consent_and_continues(self, mini_catalog):
        state = start_battle(mini_catalog, seed=3)
        state = declare_tie(state, 0)
        assert state.phase is Phase.AWAIT_PLANS
        assert state.players[0].tie_consent and not state.players[1].tie_consent

    def test_mutual_tie_draws_the_round(self, mini_catalog):
        state = start_battle(mini_catalog, seed=3)
        state = declare_tie(state, 0)
        state = declare_tie(state, 1)
        assert state.phase is Phase.ROUND_OVER
        assert state.pending_result.winner is None
        assert state.pending_result.reason == "tie"

    def test_forfeit_credits_the_opponent(self, mini_catalog):
        state = start_battle(mini_catalog, seed=3)
        state = forfeit(state, 1)
        assert state.phase is Phase.ROUND_OVER
        assert state.pending_result.winner == 0
        assert state.pending_result.reason == "forfeit"

    def test_tie_or_forfeit_outside_battle_is_rejected(self, mini_catalog):
        state = new_match(mini_catalog, 3)
        with pytest.raises(PhaseViolation):
            declare_tie(state, 0)
        with pytest.raises(PhaseViolation):
            forfeit(state, 0)


def _wipe_player_b(mini_catalog):
    """Play battle turns until player B's side is fully knocked out."""
    state = start_battle(mini_catalog, seed=3)
    while state.phase is Phase.AWAIT_PLANS:
        options = legal_plans(state, 0)
        entries = []
        for slot, choices in options.items():
            attack = next((c for c in choices if c.kind is MoveKind.ATTACK), None)
            if attack:
                entries.append(PlanEntry(slot, attack.move_id, attack.targets[0]))
        state = submit_plan(state, 0, TurnPlan(tuple(entries)))
        state = submit_plan(state, 1, PASS)
        state, _ = resolve_turn(state)
    return state
