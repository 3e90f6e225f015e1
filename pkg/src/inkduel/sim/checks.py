"""State invariants asserted after every simulated command."""
from __future__ import annotations

from ..core import MatchState, Phase


class InvariantViolation(AssertionError):
    pass


def check_state_invariants(state: MatchState) -> None:
    for player, side in enumerate(state.players):
        if side.cards and len(side.cards) != 3:
            raise InvariantViolation(f"player {player} holds {len(side.cards)} cards")
        for card in side.cards:
            if not 0 <= card.hp <= card.max_hp:
                raise InvariantViolation(
                    f"player {player} slot {card.slot} hp {card.hp} outside 0..{card.max_hp}"
                )
    if not 1 <= state.round <= 3:
        raise InvariantViolation(f"round {state.round} outside 1..3")
    if state.turn > state.max_turns + 1:
        raise InvariantViolation(f"turn {state.turn} ran past the cap {state.max_turns}")
    wins_and_ties = state.players[0].round_wins + state.players[1].round_wins + state.ties
    if wins_and_ties > 3:
        raise InvariantViolation(f"{wins_and_ties} rounds credited in a 3-round match")
    if state.phase is Phase.MATCH_OVER:
        wins = (state.players[0].round_wins, state.players[1].round_wins)
        expect = None if wins[0] == wins[1] else (0 if wins[0] > wins[1] else 1)
        if state.winner != expect:
            raise InvariantViolation(f"winner {state.winner} disagrees with round wins {wins}")
    if state.phase in (Phase.AWAIT_PLANS,) and any(
        side.cards and side.wiped for side in state.players
    ):
        raise InvariantViolation("battle phase with a fully wiped side")
    if state.phase is Phase.AWAIT_PLANS:
        # move-count progression: in round r the custom card carries exactly
        # r moves, every one with cover art (placeholder counts)
        for player, side in enumerate(state.players):
            custom = side.cards[0]
            if len(custom.moves) != state.round:
                raise InvariantViolation(
                    f"player {player} custom card has {len(custom.moves)} moves in round {state.round}"
                )
            if any(m.cover_art is None for m in custom.moves):
                raise InvariantViolation(f"player {player} battling with uncovered custom move")
