from __future__ import annotations

import json

import pytest

from inkduel.catalog import builtin_catalog
from inkduel.core import Phase
from inkduel.errors import (
    NameTaken,
    PhaseViolation,
    ProtocolError,
    SessionNotFound,
    UnknownContent,
)
from inkduel.server import Connection, MatchService, Router
from tests.test_storage import png_bytes

SETUP_A = {"prompt_id": "ember-fox", "archetype_id": "berserker",
           "first_move_id": "cleave", "premade_ids": ["blindfold-rex", "tide-oracle"]}
SETUP_B = {"prompt_id": "coral-witch", "archetype_id": "warden",
           "first_move_id": "shield-bash", "premade_ids": ["frost-vanguard", "marsh-brawler"]}


class Harness:
    """Service plus byte-recording connections and a fake clock."""

    def __init__(self, tmp_path, *, timer_scale=1.0, seed=42, max_turns=30):
        self.now = 1_000.0
        self.service = MatchService(
            builtin_catalog(),
            tmp_path,
            timer_scale=timer_scale,
            clock=lambda: self.now,
            seed_source=lambda: seed,
            max_turns=max_turns,
        )
        self.router = Router()
        self.bytes_log: dict[str, list[bytes]] = {}

    def connect(self, address: str):
        self.bytes_log[address] = []
        self.router.register(address, Connection(send_bytes=self.bytes_log[address].append))

    def alias(self, address: str, token: str):
        self.bytes_log[token] = self.bytes_log[address]
        self.router.register(token, self.router.connections[address])

    def dispatch(self, deliveries):
        self.router.dispatch(deliveries)
        return deliveries

    def pair(self, name_a="ada", name_b="ben") -> tuple[str, str]:
        self.connect("conn-a")
        self.connect("conn-b")
        self.dispatch(self.service.join_lobby(name_a, "conn-a"))
        deliveries = self.dispatch(self.service.join_lobby(name_b, "conn-b"))
        tokens = {d.payload["player_index"]: d.payload["token"]
                  for d in deliveries if d.kind == "match_found"}
        self.alias("conn-a", tokens[0])
        self.alias("conn-b", tokens[1])
        return tokens[0], tokens[1]

    def cmd(self, token, kind, payload=None):
        return self.dispatch(self.service.handle_command(token, kind, payload or {}))

    @property
    def session(self):
        return next(iter(self.service.sessions.values()))

    def to_battle(self, token_a, token_b):
        self.cmd(token_a, "select_hand", SETUP_A)
        self.cmd(token_b, "select_hand", SETUP_B)
        placeholder = self.service.catalog.placeholder_asset
        self.cmd(token_a, "attach", {"asset": placeholder})
        self.cmd(token_b, "attach", {"asset": placeholder})
        assert self.session.state.phase is Phase.AWAIT_PLANS


class TestLobby:
    def test_first_joiner_queues_second_matches(self, tmp_path):
        h = Harness(tmp_path)
        h.connect("conn-a")
        deliveries = h.service.join_lobby("ada", "conn-a")
        assert [d.kind for d in deliveries] == ["queued"]
        h.connect("conn-b")
        deliveries = h.service.join_lobby("ben", "conn-b")
        kinds = [d.kind for d in deliveries]
        assert kinds.count("match_found") == 2
        match_ids = {d.payload["match_id"] for d in deliveries if d.kind == "match_found"}
        assert len(match_ids) == 1

    def test_third_joiner_queues_again(self, tmp_path):
        h = Harness(tmp_path)
        for ref in ("conn-a", "conn-b", "conn-c"):
            h.connect(ref)
        h.service.join_lobby("ada", "conn-a")
        h.service.join_lobby("ben", "conn-b")
        deliveries = h.service.join_lobby("cle", "conn-c")
        assert [d.kind for d in deliveries] == ["queued"]
        assert len(h.service.sessions) == 1

    def test_duplicate_active_name_is_rejected(self, tmp_path):
        h = Harness(tmp_path)
        h.connect("conn-a")
        h.service.join_lobby("ada", "conn-a")
        with pytest.raises(NameTaken):
            h.service.join_lobby("ada", "conn-x")

    def test_room_codes_pair_privately(self, tmp_path):
        h = Harness(tmp_path)
        for ref in ("conn-a", "conn-b", "conn-c"):
            h.connect(ref)
        assert h.service.join_lobby("ada", "conn-a", room="XYZ")[0].kind == "queued"
        # a global joiner does not steal the room slot
        assert h.service.join_lobby("ben", "conn-b")[0].kind == "queued"
        deliveries = h.service.join_lobby("cle", "conn-c", room="XYZ")
        assert sum(1 for d in deliveries if d.kind == "match_found") == 2

    def test_empty_name_is_a_protocol_error(self, tmp_path):
        h = Harness(tmp_path)
        with pytest.raises(ProtocolError):
            h.service.join_lobby("   ", "conn-a")


class TestTimers:
    def test_illustrate_deadlines_are_exactly_the_schedule(self, tmp_path):
        # Mock clock, scale 1.0: deadlines must be now + 1080 / 600 / 420 s,
        # tolerance zero at the scheduling layer.
        h = Harness(tmp_path)
        token_a, token_b = h.pair()
        h.now = 5_000.0
        h.cmd(token_a, "select_hand", SETUP_A)
        h.cmd(token_b, "select_hand", SETUP_B)
        assert h.session.state.phase is Phase.ILLUSTRATE and h.session.state.round == 1
        assert h.session.deadline == 5_000.0 + 1080.0

        placeholder = h.service.catalog.placeholder_asset
        h.cmd(token_a, "attach", {"asset": placeholder})
        h.cmd(token_b, "attach", {"asset": placeholder})
        assert h.session.deadline is None  # deadline only while illustrating
        h.cmd(token_b, "forfeit")  # round 1 over; auto-conclude into customize 2
        assert h.session.state.phase is Phase.CUSTOMIZE and h.session.state.round == 2

        h.now = 6_000.0
        h.cmd(token_a, "select_move", {"move_id": "rampage"})
        h.cmd(token_b, "select_move", {"move_id": "mirror-ward"})
        assert h.session.deadline == 6_000.0 + 600.0

        h.cmd(token_a, "attach", {"asset": placeholder})
        h.cmd(token_b, "attach", {"asset": placeholder})
        h.cmd(token_b, "forfeit")
        h.now = 7_000.0
        h.cmd(token_a, "select_move", {"move_id": "blood-frenzy"})
        h.cmd(token_b, "select_move", {"move_id": "granite-guard"})
        assert h.session.deadline == 7_000.0 + 420.0

    def test_schedule_shrinks_with_timer_scale(self, tmp_path):
        h = Harness(tmp_path, timer_scale=0.01)
        token_a, token_b = h.pair()
        h.now = 100.0
        h.cmd(token_a, "select_hand", SETUP_A)
        h.cmd(token_b, "select_hand", SETUP_B)
        assert h.session.deadline == pytest.approx(100.0 + 10.8)

    def test_tick_before_deadline_only_syncs(self, tmp_path):
        h = Harness(tmp_path)
        token_a, token_b = h.pair()
        h.cmd(token_a, "select_hand", SETUP_A)
        h.cmd(token_b, "select_hand", SETUP_B)
        h.now += 100
        deliveries = h.service.tick()
        assert {d.kind for d in deliveries} == {"timer_sync"}
        assert h.session.state.phase is Phase.ILLUSTRATE

    def test_tick_after_deadline_expires_with_placeholder(self, tmp_path):
        h = Harness(tmp_path)
        token_a, token_b = h.pair()
        h.cmd(token_a, "select_hand", SETUP_A)
        h.cmd(token_b, "select_hand", SETUP_B)
        ref = h.service.store.save(png_bytes(), "png")
        h.cmd(token_a, "attach", {"asset": ref.token})
        h.now += 1080.0 + 1.0
        deliveries = h.service.tick()
        state = h.session.state
        assert state.phase is Phase.AWAIT_PLANS
        assert state.players[0].cards[0].moves[0].cover_art == ref.token
        assert state.players[1].cards[0].moves[0].cover_art == h.service.catalog.placeholder_asset
        assert any(d.kind == "phase_change" for d in deliveries)


class TestCommands:
    def test_attach_requires_known_asset(self, tmp_path):
        h = Harness(tmp_path)
        token_a, token_b = h.pair()
        h.cmd(token_a, "select_hand", SETUP_A)
        h.cmd(token_b, "select_hand", SETUP_B)
        with pytest.raises(UnknownContent):
            h.cmd(token_a, "attach", {"asset": "sha256:" + "0" * 64})

    def test_malformed_payload_is_a_protocol_error_and_not_journaled(self, tmp_path):
        h = Harness(tmp_path)
        token_a, _ = h.pair()
        journal_before = h.session.journal_path.read_text()
        with pytest.raises(ProtocolError):
            h.cmd(token_a, "select_hand", {"prompt_id": "ember-fox"})  # missing fields
        assert h.session.journal_path.read_text() == journal_before

    def test_unknown_token_is_session_not_found(self, tmp_path):
        h = Harness(tmp_path)
        h.pair()
        with pytest.raises(SessionNotFound):
            h.service.handle_command("deadbeef", "forfeit", {})

    def test_full_battle_turn_broadcasts_resolution(self, tmp_path):
        h = Harness(tmp_path)
        token_a, token_b = h.pair()
        h.to_battle(token_a, token_b)
        plan_a = {"entries": [{"slot": 0, "move_id": "cleave", "target_slot": 0}]}
        deliveries = h.cmd(token_a, "submit_plan", plan_a)
        assert deliveries[0].kind == "plan_ack" and deliveries[0].reply
        deliveries = h.cmd(token_b, "submit_plan", {"entries": []})
        kinds = [d.kind for d in deliveries]
        assert kinds.count("resolved") == 2  # both players get the same log
        logs = [d.payload["log"] for d in deliveries if d.kind == "resolved"]
        assert logs[0] == logs[1]
        assert h.session.state.turn == 2

    def test_journal_audit_after_scripted_match(self, tmp_path):
        h = Harness(tmp_path)
        token_a, token_b = h.pair()
        h.to_battle(token_a, token_b)
        h.cmd(token_b, "forfeit")
        placeholder = h.service.catalog.placeholder_asset
        for round_move_a, round_move_b in (("rampage", "mirror-ward"), ("blood-frenzy", "granite-guard")):
            h.cmd(token_a, "select_move", {"move_id": round_move_a})
            h.cmd(token_b, "select_move", {"move_id": round_move_b})
            h.cmd(token_a, "attach", {"asset": placeholder})
            h.cmd(token_b, "attach", {"asset": placeholder})
            h.cmd(token_b, "forfeit")
        state = h.session.state
        assert state.phase is Phase.MATCH_OVER and state.winner == 0
        assert h.service.audit(h.session.match_id)

    def test_resume_returns_projection_and_deadline(self, tmp_path):
        h = Harness(tmp_path)
        token_a, token_b = h.pair()
        h.cmd(token_a, "select_hand", SETUP_A)
        h.cmd(token_b, "select_hand", SETUP_B)
        deliveries = h.service.resume(token_a)
        assert deliveries[0].kind == "state"
        payload = deliveries[0].payload
        assert payload["projection"]["phase"] == "illustrate"
        assert payload["remaining_s"] == pytest.approx(1080.0)
        with pytest.raises(SessionNotFound):
            h.service.resume("stale-token")

    def test_resume_after_match_over_shows_summary(self, tmp_path):
        h = Harness(tmp_path)
        token_a, token_b = h.pair()
        h.to_battle(token_a, token_b)
        h.cmd(token_a, "forfeit")
        placeholder = h.service.catalog.placeholder_asset
        for round_move_a, round_move_b in (("rampage", "mirror-ward"), ("blood-frenzy", "granite-guard")):
            h.cmd(token_a, "select_move", {"move_id": round_move_a})
            h.cmd(token_b, "select_move", {"move_id": round_move_b})
            h.cmd(token_a, "attach", {"asset": placeholder})
            h.cmd(token_b, "attach", {"asset": placeholder})
            h.cmd(token_a, "forfeit")
        payload = h.service.resume(token_b)[0].payload
        assert payload["projection"]["phase"] == "match_over"
        assert payload["projection"]["winner"] == 1


class TestUpload:
    def test_upload_stores_and_attaches(self, tmp_path):
        h = Harness(tmp_path)
        token_a, token_b = h.pair()
        h.cmd(token_a, "select_hand", SETUP_A)
        h.cmd(token_b, "select_hand", SETUP_B)
        data = png_bytes()
        ref, deliveries = h.service.store_upload(token_a, data, "image/png")
        assert h.session.state.players[0].cards[0].moves[0].cover_art == ref.token
        ref2, _ = h.service.store_upload(token_b, data, "image/png")
        assert ref2.token == ref.token  # same bytes, same address
        assert h.session.state.phase is Phase.AWAIT_PLANS

    def test_upload_outside_illustrate_is_rejected(self, tmp_path):
        h = Harness(tmp_path)
        token_a, _ = h.pair()
        with pytest.raises(PhaseViolation):
            h.service.store_upload(token_a, png_bytes(), "png")


class TestPlanPrivacyOnTheWire:
    def test_bytes_to_opponent_are_invariant_to_plan_content(self, tmp_path):
        # Two identical sessions that differ only in A's submitted plan;
        # every byte sent to B during await_plans must be identical.
        def run(plan):
            h = Harness(tmp_path / f"run-{plan['entries'][0]['move_id']}", seed=77)
            token_a, token_b = h.pair()
            h.to_battle(token_a, token_b)
            start = len(h.bytes_log[token_b])
            h.cmd(token_a, "submit_plan", plan)
            h.cmd(token_a, "declare_tie")  # more await-plans traffic, same both runs
            return h.bytes_log[token_b][start:]

        captured_x = run({"entries": [{"slot": 0, "move_id": "cleave", "target_slot": 0}]})
        captured_y = run({"entries": [{"slot": 1, "move_id": "dino-blindo", "target_slot": None}]})
        assert captured_x == captured_y
        assert len(captured_x) > 0  # the capture window saw real traffic

    def test_projection_bytes_reveal_submission_flag_only(self, tmp_path):
        h = Harness(tmp_path, seed=77)
        token_a, token_b = h.pair()
        h.to_battle(token_a, token_b)
        h.cmd(token_a, "submit_plan", {"entries": [{"slot": 0, "move_id": "cleave", "target_slot": 2}]})
        last_state = [json.loads(b) for b in h.bytes_log[token_b]
                      if json.loads(b)["kind"] == "state"][-1]
        opponent_view = last_state["payload"]["projection"]["opponent"]
        assert opponent_view["plan_submitted"] is True
        assert "plan" not in opponent_view
