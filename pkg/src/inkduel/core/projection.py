"""Per-player views of a match.

Everything except pending plans is public knowledge (the catalog ships with
the game and art is revealed on the battlefield), so the projection's one
hard job is keeping an unresolved plan out of the opponent's view. The wire
privacy tests assert that byte-for-byte.
"""
from __future__ import annotations

from .types import CardInstance, MatchState


def _card_view(card: CardInstance, visible_moves: int) -> dict:
    return {
        "slot": card.slot,
        "origin": card.origin.value,
        "content_id": card.content_id,
        "name": card.name,
        "max_hp": card.max_hp,
        "hp": card.hp,
        "knocked_out": card.knocked_out,
        "moves": [
            {"move_id": m.move_id, "cover_art": m.cover_art, "unlocks_round": i + 1}
            for i, m in enumerate(card.moves[:visible_moves])
        ],
    }


def project_for(state: MatchState, player: int) -> dict:
    """The full state as one player is allowed to see it."""
    you = state.side(player)
    opponent = state.side(1 - player)
    return {
        "match_id": state.match_id,
        "phase": state.phase.value,
        "round": state.round,
        "turn": state.turn,
        "initiative": state.initiative,
        "player_index": player,
        "max_turns": state.max_turns,
        "you": {
            "hand": [_card_view(c, len(c.moves)) for c in you.cards],
            "archetype_id": you.archetype_id,
            "prompt_id": you.prompt_id,
            "round_wins": you.round_wins,
            "plan": you.plan.to_dict() if you.plan else None,
            "plan_submitted": you.plan is not None,
            "attached_this_round": you.attached_this_round,
            "tie_requested": you.tie_consent,
        },
        "opponent": {
            "hand": [_card_view(c, len(c.moves)) for c in opponent.cards],
            "selected": opponent.selected,
            "round_wins": opponent.round_wins,
            "plan_submitted": opponent.plan is not None,
            "attached_this_round": opponent.attached_this_round,
            "tie_requested": opponent.tie_consent,
        },
        "round_results": [r.to_dict() for r in state.round_results],
        "pending_result": state.pending_result.to_dict() if state.pending_result else None,
        "winner": state.winner,
    }
