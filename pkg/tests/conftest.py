from __future__ import annotations

import pytest

from inkduel.catalog import builtin_catalog, catalog_from_dict
from inkduel.core import (
    Phase,
    attach_illustration,
    conclude_round,
    expire_illustration,
    forfeit,
    new_match,
    select_hand,
    select_round_move,
)

# A minimal valid catalog with hand-picked numbers for exact battle fixtures.
MINI_CATALOG_DOC = {
    "version": 1,
    "prompts": [
        {"id": "hero", "name": "Hero", "description": "A stand-in combatant.", "keywords": ["test"]},
    ],
    "moves": [
        {"id": "slam8", "display_name": "Slam", "kind": "attack", "magnitude": 8, "dice_window": 0, "activation_round": 1, "effect_text": "Deal 8 damage."},
        {"id": "jab5", "display_name": "Jab", "kind": "attack", "magnitude": 5, "dice_window": 0, "activation_round": 1, "effect_text": "Deal 5 damage."},
        {"id": "cross3", "display_name": "Cross", "kind": "attack", "magnitude": 3, "dice_window": 0, "activation_round": 2, "effect_text": "Deal 3 damage."},
        {"id": "finisher9", "display_name": "Finisher", "kind": "attack", "magnitude": 9, "dice_window": 0, "activation_round": 3, "effect_text": "Deal 9 damage."},
        {"id": "duck10", "display_name": "Sure Duck", "kind": "dodge", "magnitude": 0, "dice_window": 10, "activation_round": 1, "effect_text": "Always dodges."},
        {"id": "duck5", "display_name": "Duck", "kind": "dodge", "magnitude": 0, "dice_window": 5, "activation_round": 1, "effect_text": "Dodge on 1-5."},
        {"id": "bounce5", "display_name": "Bounce", "kind": "reflect", "magnitude": 0, "dice_window": 5, "activation_round": 2, "effect_text": "Reflect on 1-5."},
        {"id": "bounce3", "display_name": "Hard Bounce", "kind": "reflect", "magnitude": 0, "dice_window": 3, "activation_round": 3, "effect_text": "Reflect on 1-3."},
    ],
    "archetypes": [
        {"id": "tester", "name": "Tester", "base_hp": 20, "move_pool": ["slam8", "jab5", "duck5", "duck10", "bounce5"]},
    ],
    "premade_cards": [
        {"id": "pm-glass", "name": "Glass Target", "max_hp": 8, "moves": ["jab5", "cross3", "finisher9"], "cover_art": "builtin:premade/pm-glass", "illustrator": "t"},
        {"id": "pm-wall", "name": "Wall", "max_hp": 30, "moves": ["duck10", "bounce5", "bounce3"], "cover_art": "builtin:premade/pm-wall", "illustrator": "t"},
    ],
    "placeholder_asset": "builtin:placeholder",
    "timer_schedule": [1080, 600, 420],
}


@pytest.fixture(scope="session")
def catalog():
    return builtin_catalog()


@pytest.fixture(scope="session")
def mini_catalog():
    return catalog_from_dict(MINI_CATALOG_DOC)


def select_mini_hands(state, first_move_a="slam8", first_move_b="jab5"):
    state = select_hand(state, 0, "hero", "tester", first_move_a, ("pm-glass", "pm-wall"))
    state = select_hand(state, 1, "hero", "tester", first_move_b, ("pm-glass", "pm-wall"))
    return state


def start_battle(mini_catalog, seed=1, first_move_a="slam8", first_move_b="jab5", max_turns=30):
    """Drive a mini-catalog match through setup and round-1 illustration."""
    state = new_match(mini_catalog, seed, max_turns=max_turns)
    state = select_mini_hands(state, first_move_a, first_move_b)
    state = attach_illustration(state, 0, 1, "sha256:" + "a" * 64)
    state = attach_illustration(state, 1, 1, "sha256:" + "b" * 64)
    assert state.phase is Phase.AWAIT_PLANS
    return state


@pytest.fixture
def forfeit_to_customize(mini_catalog):
    """Advance a mini-catalog match to the customize phase of round 2 or 3."""

    def advance(round_no=2, seed=3):
        assert round_no in (2, 3)
        state = start_battle(mini_catalog, seed=seed)
        state = forfeit(state, 1)
        state = conclude_round(state)
        if round_no == 3:
            state = select_round_move(state, 0, "jab5")
            state = select_round_move(state, 1, "slam8")
            state = expire_illustration(state, 2)
            state = forfeit(state, 1)
            state = conclude_round(state)
        assert state.phase is Phase.CUSTOMIZE and state.round == round_no
        return state

    return advance
