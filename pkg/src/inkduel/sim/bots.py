"""Bot strategies for headless play.

Every bot emits choices drawn from the engine's own legal option sets, so a
bot plan failing validation indicates an engine bug, not a bot bug. Bot
randomness is a separate stream from the match dice: greedy and defensive
bots are fully deterministic, random-legal derives a private generator from
(bot seed, game index, player index).
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from ..catalog import Catalog, MoveKind
from ..core import MatchState, PlanChoice, PlanEntry, TurnPlan, legal_plans
from ..core.rng import stream_value

BOT_NAMES = ("random-legal", "greedy-damage", "defense-biased")


@dataclass(frozen=True)
class SetupChoice:
    prompt_id: str
    archetype_id: str
    first_move_id: str
    premade_ids: tuple[str, str]


class Bot:
    """Base strategy; subclasses override the three choice hooks."""

    name = "bot"

    def __init__(self, seed: int = 0):
        self.seed = seed

    def game_rng(self, game_index: int, player: int) -> random.Random:
        return random.Random(stream_value(self.seed, game_index * 2 + player))

    def setup(self, catalog: Catalog, rnd: random.Random) -> SetupChoice:
        raise NotImplementedError

    def round_move(self, state: MatchState, player: int, rnd: random.Random) -> str:
        raise NotImplementedError

    def plan(self, state: MatchState, player: int, rnd: random.Random) -> TurnPlan:
        raise NotImplementedError

    # shared helpers -------------------------------------------------------

    @staticmethod
    def _pool_remaining(state: MatchState, player: int) -> list[str]:
        side = state.side(player)
        pool = state.catalog.archetype(side.archetype_id).move_pool
        chosen = {m.move_id for m in side.cards[0].moves}
        return [mid for mid in pool if mid not in chosen]

    @staticmethod
    def _greedy_entries(state: MatchState, player: int, options: dict[int, list[PlanChoice]],
                        skip_slots: set[int] | None = None) -> list[PlanEntry]:
        """Maximize immediate damage with overkill awareness, deterministic ties."""
        catalog = state.catalog
        projected = {c.slot: c.hp for c in state.side(1 - player).cards}
        entries: list[PlanEntry] = []
        for slot in sorted(options):
            if skip_slots and slot in skip_slots:
                continue
            best: tuple[int, str, int] | None = None  # (-damage, move_id, target)
            for choice in options[slot]:
                if choice.kind is not MoveKind.ATTACK:
                    continue
                magnitude = catalog.move(choice.move_id).magnitude
                for target in choice.targets:
                    damage = min(magnitude, projected[target])
                    if damage <= 0:
                        continue
                    key = (-damage, choice.move_id, target)
                    if best is None or key < best:
                        best = key
            if best is not None:
                damage, move_id, target = -best[0], best[1], best[2]
                projected[target] -= damage
                entries.append(PlanEntry(slot, move_id, target))
        return entries


class RandomLegalBot(Bot):
    name = "random-legal"

    def setup(self, catalog: Catalog, rnd: random.Random) -> SetupChoice:
        archetype = rnd.choice(catalog.archetypes)
        return SetupChoice(
            prompt_id=rnd.choice(catalog.prompts).id,
            archetype_id=archetype.id,
            first_move_id=rnd.choice(archetype.move_pool),
            premade_ids=tuple(rnd.sample([c.id for c in catalog.premade_cards], 2)),
        )

    def round_move(self, state: MatchState, player: int, rnd: random.Random) -> str:
        return rnd.choice(self._pool_remaining(state, player))

    def plan(self, state: MatchState, player: int, rnd: random.Random) -> TurnPlan:
        entries = []
        for slot, choices in legal_plans(state, player).items():
            pick = rnd.randrange(len(choices) + 1)  # the extra option is a pass
            if pick == len(choices):
                continue
            choice = choices[pick]
            target = rnd.choice(choice.targets) if choice.targets else None
            entries.append(PlanEntry(slot, choice.move_id, target))
        return TurnPlan(tuple(entries))


class GreedyDamageBot(Bot):
    """All-in on expected immediate damage; never defends.

    Attacks are deterministic (window 0), so expected damage is just the
    clamped magnitude; ties break lowest slot then lowest move id.
    """

    name = "greedy-damage"

    def setup(self, catalog: Catalog, rnd: random.Random) -> SetupChoice:
        def pool_power(archetype) -> tuple:
            mags = [catalog.move(m).magnitude for m in archetype.move_pool]
            return (-sum(mags), archetype.id)

        archetype = min(catalog.archetypes, key=pool_power)
        attacks = sorted(
            (m for m in archetype.move_pool if catalog.move(m).kind is MoveKind.ATTACK),
            key=lambda m: (-catalog.move(m).magnitude, m),
        )
        first = attacks[0] if attacks else sorted(archetype.move_pool)[0]

        def card_power(card) -> tuple:
            mags = [catalog.move(m).magnitude for m in card.move_ids]
            return (-sum(mags), card.id)

        premades = sorted(catalog.premade_cards, key=card_power)[:2]
        return SetupChoice(
            prompt_id=min(p.id for p in catalog.prompts),
            archetype_id=archetype.id,
            first_move_id=first,
            premade_ids=(premades[0].id, premades[1].id),
        )

    def round_move(self, state: MatchState, player: int, rnd: random.Random) -> str:
        remaining = self._pool_remaining(state, player)
        catalog = state.catalog
        return min(remaining, key=lambda m: (-catalog.move(m).magnitude, m))

    def plan(self, state: MatchState, player: int, rnd: random.Random) -> TurnPlan:
        options = legal_plans(state, player)
        return TurnPlan(tuple(self._greedy_entries(state, player, options)))


class DefenseBiasedBot(Bot):
    """Defends every card that can; the rest fall back to greedy attacks."""

    name = "defense-biased"

    def setup(self, catalog: Catalog, rnd: random.Random) -> SetupChoice:
        def defensiveness(move_ids) -> tuple[int, int]:
            specs = [catalog.move(m) for m in move_ids]
            defensive = [s for s in specs if s.kind.is_defensive]
            return len(defensive), sum(s.dice_window for s in defensive)

        def archetype_key(archetype) -> tuple:
            count, windows = defensiveness(archetype.move_pool)
            return (-count, -windows, archetype.id)

        archetype = min(catalog.archetypes, key=archetype_key)
        defensive = sorted(
            (m for m in archetype.move_pool if catalog.move(m).kind.is_defensive),
            key=lambda m: (-catalog.move(m).dice_window, m),
        )
        if defensive:
            first = defensive[0]
        else:
            first = min(archetype.move_pool)

        def card_key(card) -> tuple:
            count, windows = defensiveness(card.move_ids)
            return (-count, -windows, card.id)

        premades = sorted(catalog.premade_cards, key=card_key)[:2]
        return SetupChoice(
            prompt_id=min(p.id for p in catalog.prompts),
            archetype_id=archetype.id,
            first_move_id=first,
            premade_ids=(premades[0].id, premades[1].id),
        )

    def round_move(self, state: MatchState, player: int, rnd: random.Random) -> str:
        remaining = self._pool_remaining(state, player)
        catalog = state.catalog
        defensive = [m for m in remaining if catalog.move(m).kind.is_defensive]
        if defensive:
            return min(defensive, key=lambda m: (-catalog.move(m).dice_window, m))
        return min(remaining, key=lambda m: (-catalog.move(m).magnitude, m))

    def plan(self, state: MatchState, player: int, rnd: random.Random) -> TurnPlan:
        catalog = state.catalog
        options = legal_plans(state, player)
        entries: list[PlanEntry] = []
        defended: set[int] = set()
        for slot in sorted(options):
            defensive = sorted(
                (c for c in options[slot] if c.kind.is_defensive),
                key=lambda c: (-catalog.move(c.move_id).dice_window, c.move_id),
            )
            if defensive:
                entries.append(PlanEntry(slot, defensive[0].move_id, None))
                defended.add(slot)
        entries.extend(self._greedy_entries(state, player, options, skip_slots=defended))
        return TurnPlan(tuple(sorted(entries, key=lambda e: e.slot)))


def make_bot(name: str, seed: int = 0) -> Bot:
    bots = {cls.name: cls for cls in (RandomLegalBot, GreedyDamageBot, DefenseBiasedBot)}
    if name not in bots:
        raise ValueError(f"unknown bot {name!r}; choose from {', '.join(BOT_NAMES)}")
    return bots[name](seed)
