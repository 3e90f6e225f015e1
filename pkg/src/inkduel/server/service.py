"""Authoritative match sessions: lobby pairing, command routing, timers.

The service is synchronous and never blocks; the socket layer calls into it
from a single event loop, which is what serializes commands per match. All
game legality lives in the core engine - this layer adds identity (tokens),
wall-clock deadlines, journals, and per-player event fan-out.
"""
from __future__ import annotations

import json
import secrets
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from ..catalog import Catalog
from ..core import (
    MatchState,
    Phase,
    TurnPlan,
    apply_command,
    new_match,
    project_for,
    ready_to_resolve,
    replay,
    state_hash,
)
from ..errors import (
    NameTaken,
    PhaseViolation,
    ProtocolError,
    SessionNotFound,
    UnknownContent,
)
from .protocol import PROTOCOL_VERSION, Delivery
from .storage import AssetRef, BlobStore

SESSION_TTL_DAYS = 30


@dataclass
class Session:
    match_id: str
    seed: int
    state: MatchState
    tokens: dict[str, int]  # token -> player index
    names: tuple[str, str]
    journal_path: Path
    deadline: float | None = None
    finished_at: float | None = None

    def token_of(self, player: int) -> str:
        for token, index in self.tokens.items():
            if index == player:
                return token
        raise KeyError(player)


@dataclass
class _Waiting:
    client_ref: str
    name: str


@dataclass
class MatchService:
    catalog: Catalog
    data_dir: Path
    timer_scale: float = 1.0
    clock: Callable[[], float] = time.time
    max_turns: int = 30
    session_ttl_days: float = SESSION_TTL_DAYS
    seed_source: Callable[[], int] | None = None
    sessions: dict[str, Session] = field(default_factory=dict)
    token_index: dict[str, tuple[str, int]] = field(default_factory=dict)
    lobby: list[_Waiting] = field(default_factory=list)
    rooms: dict[str, _Waiting] = field(default_factory=dict)
    store: BlobStore | None = None

    def __post_init__(self):
        self.data_dir = Path(self.data_dir)
        (self.data_dir / "journals").mkdir(parents=True, exist_ok=True)
        if self.store is None:
            self.store = BlobStore(self.data_dir / "assets")
        if self.seed_source is None:
            self.seed_source = lambda: secrets.randbits(63)

    # --- lobby ---------------------------------------------------------------

    def active_names(self) -> set[str]:
        names = {waiting.name for waiting in self.lobby}
        names.update(waiting.name for waiting in self.rooms.values())
        for session in self.sessions.values():
            if session.finished_at is None:
                names.update(session.names)
        return names

    def join_lobby(self, name: str, client_ref: str, room: str | None = None) -> list[Delivery]:
        """FIFO pairing (or by room code); second joiner opens the match."""
        if not name or not name.strip():
            raise ProtocolError("player name must be non-empty")
        name = name.strip()
        if name in self.active_names():
            raise NameTaken(f"{name!r} is already playing or waiting")

        if room:
            waiting = self.rooms.get(room)
            if waiting is None:
                self.rooms[room] = _Waiting(client_ref, name)
                return [Delivery(client_ref, "queued", {"room": room}, reply=True)]
            del self.rooms[room]
            return self._start_match(waiting, _Waiting(client_ref, name))
        if not self.lobby:
            self.lobby.append(_Waiting(client_ref, name))
            return [Delivery(client_ref, "queued", {}, reply=True)]
        waiting = self.lobby.pop(0)
        return self._start_match(waiting, _Waiting(client_ref, name))

    def leave_lobby(self, client_ref: str) -> None:
        self.lobby = [w for w in self.lobby if w.client_ref != client_ref]
        self.rooms = {code: w for code, w in self.rooms.items() if w.client_ref != client_ref}

    def _start_match(self, first: _Waiting, second: _Waiting) -> list[Delivery]:
        seed = self.seed_source()
        state = new_match(self.catalog, seed, max_turns=self.max_turns)
        match_id = state.match_id
        tokens = {secrets.token_hex(16): 0, secrets.token_hex(16): 1}
        session = Session(
            match_id=match_id,
            seed=seed,
            state=state,
            tokens=tokens,
            names=(first.name, second.name),
            journal_path=self.data_dir / "journals" / f"{match_id}.jsonl",
        )
        header = {
            "match_id": match_id,
            "seed": seed,
            "max_turns": self.max_turns,
            "catalog_digest": self.catalog.digest,
            "names": list(session.names),
        }
        session.journal_path.write_text(json.dumps(header, sort_keys=True) + "\n")
        self.sessions[match_id] = session
        for token, player in tokens.items():
            self.token_index[token] = (match_id, player)

        deliveries = []
        refs = (first.client_ref, second.client_ref)
        for player, client_ref in enumerate(refs):
            token = session.token_of(player)
            deliveries.append(
                Delivery(
                    client_ref,
                    "match_found",
                    {
                        "match_id": match_id,
                        "token": token,
                        "player_index": player,
                        "opponent_name": session.names[1 - player],
                        "protocol_version": PROTOCOL_VERSION,
                        "catalog_digest": self.catalog.digest,
                        "timer_scale": self.timer_scale,
                    },
                    match_id=match_id,
                    reply=True,
                )
            )
        deliveries.extend(self._state_deliveries(session))
        return deliveries

    # --- command handling ------------------------------------------------------

    def _session_for(self, token: str) -> tuple[Session, int]:
        entry = self.token_index.get(token)
        if entry is None:
            raise SessionNotFound("unknown or expired session token")
        match_id, player = entry
        return self.sessions[match_id], player

    def handle_command(self, token: str, kind: str, payload: dict) -> list[Delivery]:
        session, player = self._session_for(token)
        if kind == "ping":
            return [Delivery(token, "pong", self._timer_payload(session), session.match_id, reply=True)]
        command = self._decode_command(kind, payload, player, session)
        return self._apply_chain(session, command, actor=player)

    def _decode_command(self, kind: str, payload: dict, player: int, session: Session) -> dict:
        try:
            if kind == "select_hand":
                return {
                    "op": "select_hand",
                    "player": player,
                    "prompt_id": str(payload["prompt_id"]),
                    "archetype_id": str(payload["archetype_id"]),
                    "first_move_id": str(payload["first_move_id"]),
                    "premade_ids": [str(x) for x in payload["premade_ids"]],
                }
            if kind == "select_move":
                return {"op": "select_round_move", "player": player, "move_id": str(payload["move_id"])}
            if kind == "attach":
                asset = str(payload["asset"])
                if asset != self.catalog.placeholder_asset and not self.store.exists(asset):
                    raise UnknownContent(asset, "no stored asset with this reference")
                return {"op": "attach_illustration", "player": player,
                        "round": session.state.round, "asset": asset}
            if kind == "submit_plan":
                plan = TurnPlan.from_dict({"entries": [
                    {"slot": int(e["slot"]), "move_id": str(e["move_id"]),
                     "target_slot": None if e.get("target_slot") is None else int(e["target_slot"])}
                    for e in payload.get("entries", [])
                ]})
                return {"op": "submit_plan", "player": player, "plan": plan.to_dict()}
            if kind == "declare_tie":
                return {"op": "declare_tie", "player": player}
            if kind == "forfeit":
                return {"op": "forfeit", "player": player}
        except (KeyError, TypeError, ValueError) as exc:
            raise ProtocolError(f"malformed {kind} payload: {exc!r}") from None
        raise ProtocolError(f"unroutable message kind {kind!r}")

    def _apply_chain(self, session: Session, command: dict, actor: int | None) -> list[Delivery]:
        """Apply a command plus any forced follow-ups (resolve, conclude)."""
        deliveries: list[Delivery] = []
        state = session.state
        pending = command
        first = True
        while pending is not None:
            before = state
            state, log = apply_command(state, pending)
            self._journal(session, pending)
            session.state = state
            if first and actor is not None:
                deliveries.extend(self._reply_for(session, pending, actor))
                first = False
            deliveries.extend(self._transition_events(session, before, state, log))
            if ready_to_resolve(state):
                pending = {"op": "resolve_turn"}
            elif state.phase is Phase.ROUND_OVER:
                pending = {"op": "conclude_round"}
            else:
                pending = None
        self._update_deadline(session, deliveries)
        deliveries.extend(self._state_deliveries(session))
        if session.state.phase is Phase.MATCH_OVER and session.finished_at is None:
            session.finished_at = self.clock()
        return deliveries

    def _reply_for(self, session: Session, command: dict, actor: int) -> list[Delivery]:
        token = session.token_of(actor)
        if command["op"] == "submit_plan":
            return [Delivery(token, "plan_ack", {"turn": session.state.turn}, session.match_id, reply=True)]
        return []

    def _transition_events(self, session: Session, before: MatchState, after: MatchState,
                           log) -> list[Delivery]:
        deliveries = []
        match_id = session.match_id
        if log is not None:
            for player in (0, 1):
                deliveries.append(Delivery(session.token_of(player), "resolved",
                                           {"log": log.to_dict()}, match_id))
        if after.phase is not before.phase or after.round != before.round:
            for player in (0, 1):
                deliveries.append(Delivery(
                    session.token_of(player), "phase_change",
                    {"phase": after.phase.value, "round": after.round, "turn": after.turn},
                    match_id))
        if len(after.round_results) > len(before.round_results):
            result = after.round_results[-1]
            wins = [after.players[0].round_wins, after.players[1].round_wins]
            for player in (0, 1):
                deliveries.append(Delivery(
                    session.token_of(player), "round_end",
                    {"result": result.to_dict(), "round_wins": wins, "ties": after.ties},
                    match_id))
        if after.phase is Phase.MATCH_OVER and before.phase is not Phase.MATCH_OVER:
            wins = [after.players[0].round_wins, after.players[1].round_wins]
            for player in (0, 1):
                deliveries.append(Delivery(
                    session.token_of(player), "match_end",
                    {"winner": after.winner, "round_wins": wins, "ties": after.ties},
                    match_id))
        return deliveries

    # --- uploads -----------------------------------------------------------------

    def store_upload(self, token: str, data: bytes, media_type: str) -> tuple[AssetRef, list[Delivery]]:
        """Store bytes content-addressed, then attach to the current round."""
        session, player = self._session_for(token)
        if session.state.phase is not Phase.ILLUSTRATE:
            raise PhaseViolation(f"uploads are only open while illustrating "
                                 f"(phase is {session.state.phase.value})")
        ref = self.store.save(data, media_type)
        deliveries = self._apply_chain(
            session,
            {"op": "attach_illustration", "player": player,
             "round": session.state.round, "asset": ref.token},
            actor=None,
        )
        return ref, deliveries

    # --- timers --------------------------------------------------------------------

    def _scaled_schedule(self, round_no: int) -> float:
        return self.catalog.timer_schedule[round_no - 1] * self.timer_scale

    def _timer_payload(self, session: Session) -> dict:
        if session.deadline is None:
            return {"deadline": None, "remaining_s": None}
        return {
            "deadline": session.deadline,
            "remaining_s": max(0.0, session.deadline - self.clock()),
        }

    def _update_deadline(self, session: Session, deliveries: list[Delivery]) -> None:
        state = session.state
        if state.phase is Phase.ILLUSTRATE:
            if session.deadline is None:
                session.deadline = self.clock() + self._scaled_schedule(state.round)
                deliveries.extend(self._timer_deliveries(session))
        else:
            session.deadline = None

    def _timer_deliveries(self, session: Session) -> list[Delivery]:
        payload = self._timer_payload(session)
        return [Delivery(session.token_of(player), "timer_sync", payload, session.match_id)
                for player in (0, 1)]

    def tick(self, now: float | None = None) -> list[Delivery]:
        """Fire expiries whose deadline passed; sync countdowns for the rest."""
        now = self.clock() if now is None else now
        deliveries: list[Delivery] = []
        for session in list(self.sessions.values()):
            if session.state.phase is not Phase.ILLUSTRATE or session.deadline is None:
                continue
            if now >= session.deadline:
                deliveries.extend(self._apply_chain(
                    session, {"op": "expire_illustration", "round": session.state.round}, actor=None))
            else:
                deliveries.extend(self._timer_deliveries(session))
        return deliveries

    # --- projections and resume ------------------------------------------------------

    def _state_deliveries(self, session: Session) -> list[Delivery]:
        deliveries = []
        for player in (0, 1):
            payload = {
                "projection": project_for(session.state, player),
                "names": list(session.names),
                **self._timer_payload(session),
            }
            deliveries.append(Delivery(session.token_of(player), "state", payload, session.match_id))
        return deliveries

    def resume(self, token: str) -> list[Delivery]:
        session, player = self._session_for(token)
        payload = {
            "projection": project_for(session.state, player),
            "names": list(session.names),
            "player_index": player,
            "match_id": session.match_id,
            **self._timer_payload(session),
        }
        return [Delivery(token, "state", payload, session.match_id, reply=True)]

    # --- journal and maintenance -------------------------------------------------------

    def _journal(self, session: Session, command: dict) -> None:
        with open(session.journal_path, "a") as journal:
            journal.write(json.dumps(command, sort_keys=True) + "\n")

    def audit(self, match_id: str) -> bool:
        """Replay the on-disk journal and compare with the live state hash."""
        session = self.sessions[match_id]
        lines = session.journal_path.read_text().splitlines()
        header = json.loads(lines[0])
        commands = [json.loads(line) for line in lines[1:]]
        replayed = replay(self.catalog, header["seed"], commands,
                          match_id=header["match_id"], max_turns=header["max_turns"])
        return state_hash(replayed) == state_hash(session.state)

    def sweep_expired(self, now: float | None = None) -> int:
        """Drop finished sessions and stale files past the retention window."""
        now = self.clock() if now is None else now
        ttl = self.session_ttl_days * 86400
        removed = 0
        for match_id, session in list(self.sessions.items()):
            if session.finished_at is not None and now - session.finished_at > ttl:
                for token in session.tokens:
                    self.token_index.pop(token, None)
                del self.sessions[match_id]
                removed += 1
        for journal in (self.data_dir / "journals").iterdir():
            if now - journal.stat().st_mtime > ttl:
                journal.unlink(missing_ok=True)
        self.store.sweep_older_than(ttl, now=now)
        return removed
