"""State and log types for the match rule engine.

Operations never mutate a state they are handed; they validate, clone, and
return a new snapshot, so any raised GameError leaves the caller's state
untouched and snapshots can be shared freely across threads.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from enum import Enum

from ..catalog import Catalog

HAND_SIZE = 3
CUSTOM_SLOT = 0
DEFAULT_MAX_TURNS = 30


class Phase(str, Enum):
    SETUP = "setup"
    CUSTOMIZE = "customize"
    ILLUSTRATE = "illustrate"
    AWAIT_PLANS = "await_plans"
    ROUND_OVER = "round_over"
    MATCH_OVER = "match_over"


class CardOrigin(str, Enum):
    CUSTOM = "custom"
    PREMADE = "premade"


@dataclass
class CardMove:
    move_id: str
    cover_art: str | None = None


@dataclass
class CardInstance:
    slot: int
    origin: CardOrigin
    content_id: str  # prompt id for custom cards, premade card id otherwise
    name: str
    max_hp: int
    hp: int
    # Position i is usable from round i+1: premade hands are stored sorted by
    # activation round, custom cards gain one move per round in pick order.
    moves: list[CardMove]

    @property
    def knocked_out(self) -> bool:
        return self.hp == 0

    def clone(self) -> CardInstance:
        return CardInstance(
            slot=self.slot,
            origin=self.origin,
            content_id=self.content_id,
            name=self.name,
            max_hp=self.max_hp,
            hp=self.hp,
            moves=[CardMove(m.move_id, m.cover_art) for m in self.moves],
        )

    def to_dict(self) -> dict:
        return {
            "slot": self.slot,
            "origin": self.origin.value,
            "content_id": self.content_id,
            "name": self.name,
            "max_hp": self.max_hp,
            "hp": self.hp,
            "knocked_out": self.knocked_out,
            "moves": [{"move_id": m.move_id, "cover_art": m.cover_art} for m in self.moves],
        }


@dataclass(frozen=True)
class PlanEntry:
    slot: int
    move_id: str
    target_slot: int | None = None  # opponent slot; attacks only

    def to_dict(self) -> dict:
        return {"slot": self.slot, "move_id": self.move_id, "target_slot": self.target_slot}


@dataclass(frozen=True)
class TurnPlan:
    """One player's private assignment of moves for a turn; absent slot = pass."""

    entries: tuple[PlanEntry, ...] = ()

    def entry_for(self, slot: int) -> PlanEntry | None:
        for e in self.entries:
            if e.slot == slot:
                return e
        return None

    def to_dict(self) -> dict:
        return {"entries": [e.to_dict() for e in self.entries]}

    @classmethod
    def from_dict(cls, doc: dict) -> TurnPlan:
        return cls(
            entries=tuple(
                PlanEntry(slot=e["slot"], move_id=e["move_id"], target_slot=e.get("target_slot"))
                for e in doc.get("entries", [])
            )
        )


@dataclass
class PlayerSide:
    cards: list[CardInstance] = field(default_factory=list)
    archetype_id: str | None = None
    prompt_id: str | None = None
    round_wins: int = 0
    plan: TurnPlan | None = None
    attached_this_round: bool = False
    tie_consent: bool = False

    @property
    def selected(self) -> bool:
        return bool(self.cards)

    @property
    def wiped(self) -> bool:
        return bool(self.cards) and all(c.hp == 0 for c in self.cards)

    def clone(self, share_cards: bool = False) -> PlayerSide:
        # share_cards skips copying card objects for ops that only touch
        # side-level scalars; every op that mutates a card clones first.
        return PlayerSide(
            cards=self.cards if share_cards else [c.clone() for c in self.cards],
            archetype_id=self.archetype_id,
            prompt_id=self.prompt_id,
            round_wins=self.round_wins,
            plan=self.plan,  # TurnPlan is immutable
            attached_this_round=self.attached_this_round,
            tie_consent=self.tie_consent,
        )

    def to_dict(self) -> dict:
        return {
            "cards": [c.to_dict() for c in self.cards],
            "archetype_id": self.archetype_id,
            "prompt_id": self.prompt_id,
            "round_wins": self.round_wins,
            "plan": self.plan.to_dict() if self.plan else None,
            "attached_this_round": self.attached_this_round,
            "tie_consent": self.tie_consent,
        }


@dataclass(frozen=True)
class RoundResult:
    round: int
    winner: int | None  # player index; None = drawn round
    reason: str  # "wipe" | "tie" | "forfeit" | "turn_cap"

    def to_dict(self) -> dict:
        return {"round": self.round, "winner": self.winner, "reason": self.reason}


@dataclass
class MatchState:
    match_id: str
    seed: int
    rng_cursor: int
    phase: Phase
    round: int
    turn: int
    initiative: int
    players: list[PlayerSide]
    catalog: Catalog
    round_results: list[RoundResult] = field(default_factory=list)
    pending_result: RoundResult | None = None
    winner: int | None = None
    max_turns: int = DEFAULT_MAX_TURNS

    def side(self, player: int) -> PlayerSide:
        return self.players[player]

    @property
    def ties(self) -> int:
        return sum(1 for r in self.round_results if r.winner is None)

    def clone(self, share_cards: bool = False) -> MatchState:
        # Hand-rolled instead of deepcopy: this runs on every operation and
        # dominates simulator throughput. The catalog is immutable and shared.
        return MatchState(
            match_id=self.match_id,
            seed=self.seed,
            rng_cursor=self.rng_cursor,
            phase=self.phase,
            round=self.round,
            turn=self.turn,
            initiative=self.initiative,
            players=[p.clone(share_cards) for p in self.players],
            catalog=self.catalog,
            round_results=list(self.round_results),
            pending_result=self.pending_result,
            winner=self.winner,
            max_turns=self.max_turns,
        )

    def to_dict(self) -> dict:
        return {
            "match_id": self.match_id,
            "seed": self.seed,
            "rng_cursor": self.rng_cursor,
            "phase": self.phase.value,
            "round": self.round,
            "turn": self.turn,
            "initiative": self.initiative,
            "players": [p.to_dict() for p in self.players],
            "catalog_digest": self.catalog.digest,
            "round_results": [r.to_dict() for r in self.round_results],
            "pending_result": self.pending_result.to_dict() if self.pending_result else None,
            "winner": self.winner,
            "max_turns": self.max_turns,
        }

    def canonical_bytes(self) -> bytes:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":")).encode()


def state_hash(state: MatchState) -> str:
    """256-bit hex digest of the canonical state encoding."""
    return hashlib.sha256(state.canonical_bytes()).hexdigest()


# --- Resolution log ---------------------------------------------------------


@dataclass(frozen=True)
class DiceRolled:
    player: int
    slot: int
    move_id: str
    face: int
    success: bool

    def to_dict(self) -> dict:
        return {
            "kind": "dice_rolled",
            "player": self.player,
            "slot": self.slot,
            "move_id": self.move_id,
            "face": self.face,
            "success": self.success,
        }


@dataclass(frozen=True)
class DamageDealt:
    attacker: tuple[int, int]  # (player, slot) credited with the damage
    target: tuple[int, int]  # (player, slot) losing the HP
    amount: int
    reflected: bool = False

    def to_dict(self) -> dict:
        return {
            "kind": "damage_dealt",
            "attacker": list(self.attacker),
            "target": list(self.target),
            "amount": self.amount,
            "reflected": self.reflected,
        }


@dataclass(frozen=True)
class AttackFizzled:
    player: int
    slot: int
    reason: str  # "attacker_down" | "target_down"

    def to_dict(self) -> dict:
        return {"kind": "attack_fizzled", "player": self.player, "slot": self.slot, "reason": self.reason}


@dataclass(frozen=True)
class Knockout:
    player: int
    slot: int

    def to_dict(self) -> dict:
        return {"kind": "knockout", "player": self.player, "slot": self.slot}


@dataclass(frozen=True)
class RoundEnd:
    winner: int | None
    reason: str

    def to_dict(self) -> dict:
        return {"kind": "round_end", "winner": self.winner, "reason": self.reason}


LogStep = DiceRolled | DamageDealt | AttackFizzled | Knockout | RoundEnd


@dataclass(frozen=True)
class ResolutionLog:
    """Ordered record of one turn's reveal; replays the pre-turn state exactly."""

    round: int
    turn: int
    initiative: int
    steps: tuple[LogStep, ...]
    rng_cursor_after: int

    def to_dict(self) -> dict:
        return {
            "round": self.round,
            "turn": self.turn,
            "initiative": self.initiative,
            "steps": [s.to_dict() for s in self.steps],
            "rng_cursor_after": self.rng_cursor_after,
        }
