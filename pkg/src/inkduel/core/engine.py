"""Match rule engine: every legal transition of a two-player duel.

Pure and deterministic. Wall clocks and randomness never enter implicitly:
expiry arrives as an explicit operation and all dice come from the seeded
counter stream carried in the state.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..catalog import Catalog, MoveKind, validate_catalog
from ..errors import (
    AlreadyAttached,
    AlreadySubmitted,
    CatalogError,
    InvalidPlan,
    InvalidSelection,
    NotReady,
    PhaseViolation,
    UnknownContent,
)
from . import rng
from .types import (
    CUSTOM_SLOT,
    DEFAULT_MAX_TURNS,
    HAND_SIZE,
    AttackFizzled,
    CardInstance,
    CardMove,
    CardOrigin,
    DamageDealt,
    DiceRolled,
    Knockout,
    LogStep,
    MatchState,
    Phase,
    PlayerSide,
    ResolutionLog,
    RoundEnd,
    RoundResult,
    TurnPlan,
)

FINAL_ROUND = 3


def _expect_phase(state: MatchState, phase: Phase, op: str) -> None:
    if state.phase is not phase:
        raise PhaseViolation(f"{op} requires phase {phase.value}, state is in {state.phase.value}")


def _expect_player(state: MatchState, player: int) -> None:
    if player not in (0, 1):
        raise InvalidSelection(f"player index must be 0 or 1, got {player}")


def new_match(
    catalog: Catalog,
    seed: int,
    *,
    match_id: str | None = None,
    max_turns: int = DEFAULT_MAX_TURNS,
) -> MatchState:
    """Open a match in the setup phase; initiative comes from the first draw."""
    violations = validate_catalog(catalog)
    if violations:
        raise CatalogError("catalog failed validation: " + "; ".join(violations))
    if max_turns < 1:
        raise InvalidSelection(f"max_turns must be >= 1, got {max_turns}")
    first_draw, cursor = rng.draw(seed, 0)
    return MatchState(
        match_id=match_id if match_id is not None else f"m{seed & 0xFFFFFFFFFFFFFFFF:016x}",
        seed=seed,
        rng_cursor=cursor,
        phase=Phase.SETUP,
        round=1,
        turn=1,
        initiative=first_draw & 1,
        players=[PlayerSide(), PlayerSide()],
        catalog=catalog,
        max_turns=max_turns,
    )


def select_hand(
    state: MatchState,
    player: int,
    prompt_id: str,
    archetype_id: str,
    first_move_id: str,
    premade_ids: tuple[str, str] | list[str],
) -> MatchState:
    """Build one player's hand: the custom card plus two premade picks."""
    _expect_phase(state, Phase.SETUP, "select_hand")
    _expect_player(state, player)
    if state.side(player).selected:
        raise InvalidSelection("hand already selected")
    premade_ids = tuple(premade_ids)
    if len(premade_ids) != 2:
        raise InvalidSelection(f"exactly 2 premade cards required, got {len(premade_ids)}")
    if premade_ids[0] == premade_ids[1]:
        raise InvalidSelection(f"premade picks must be distinct, got {premade_ids[0]!r} twice")

    catalog = state.catalog
    prompt = catalog.prompt(prompt_id)
    archetype = catalog.archetype(archetype_id)
    catalog.move(first_move_id)
    if first_move_id not in archetype.move_pool:
        raise InvalidSelection(f"move {first_move_id!r} is not in archetype {archetype_id!r}'s pool")
    premades = [catalog.premade(pid) for pid in premade_ids]

    out = state.clone()
    side = out.side(player)
    side.prompt_id = prompt_id
    side.archetype_id = archetype_id
    custom = CardInstance(
        slot=CUSTOM_SLOT,
        origin=CardOrigin.CUSTOM,
        content_id=prompt_id,
        name=prompt.name,
        max_hp=archetype.base_hp,
        hp=archetype.base_hp,
        moves=[CardMove(first_move_id)],
    )
    side.cards = [custom]
    for i, premade in enumerate(premades, start=1):
        ordered = sorted(premade.move_ids, key=lambda mid: catalog.move(mid).activation_round)
        side.cards.append(
            CardInstance(
                slot=i,
                origin=CardOrigin.PREMADE,
                content_id=premade.id,
                name=premade.name,
                max_hp=premade.max_hp,
                hp=premade.max_hp,
                moves=[CardMove(mid, cover_art=premade.cover_art) for mid in ordered],
            )
        )
    if all(p.selected for p in out.players):
        _enter_illustrate(out)
    return out


def select_round_move(state: MatchState, player: int, move_id: str) -> MatchState:
    """Pick the custom card's new move for the current round (rounds 2 and 3)."""
    _expect_phase(state, Phase.CUSTOMIZE, "select_round_move")
    _expect_player(state, player)
    side = state.side(player)
    custom = side.cards[CUSTOM_SLOT]
    if len(custom.moves) >= state.round:
        raise InvalidSelection(f"round {state.round} move already selected")
    archetype = state.catalog.archetype(side.archetype_id)
    if move_id not in archetype.move_pool:
        raise UnknownContent(move_id, f"not in archetype {archetype.id!r}'s pool")
    if any(m.move_id == move_id for m in custom.moves):
        raise InvalidSelection(f"move {move_id!r} is already on the custom card")

    out = state.clone()
    out.side(player).cards[CUSTOM_SLOT].moves.append(CardMove(move_id))
    if all(len(p.cards[CUSTOM_SLOT].moves) == out.round for p in out.players):
        _enter_illustrate(out)
    return out


def attach_illustration(state: MatchState, player: int, round_no: int, asset_ref: str) -> MatchState:
    """Set the cover art of the custom card's current-round move."""
    _expect_phase(state, Phase.ILLUSTRATE, "attach_illustration")
    _expect_player(state, player)
    if round_no != state.round:
        raise PhaseViolation(f"attach targets round {round_no}, match is illustrating round {state.round}")
    if state.side(player).attached_this_round:
        raise AlreadyAttached(f"player {player} already attached art this round")
    if not asset_ref:
        raise InvalidSelection("asset reference must be non-empty")

    out = state.clone()
    side = out.side(player)
    side.cards[CUSTOM_SLOT].moves[out.round - 1].cover_art = asset_ref
    side.attached_this_round = True
    if all(p.attached_this_round for p in out.players):
        _enter_battle(out)
    return out


def expire_illustration(state: MatchState, round_no: int) -> MatchState:
    """Timer expiry: fill missing covers with the placeholder and start battle."""
    _expect_phase(state, Phase.ILLUSTRATE, "expire_illustration")
    if round_no != state.round:
        raise PhaseViolation(f"expiry targets round {round_no}, match is illustrating round {state.round}")
    out = state.clone()
    for side in out.players:
        if not side.attached_this_round:
            side.cards[CUSTOM_SLOT].moves[out.round - 1].cover_art = out.catalog.placeholder_asset
            side.attached_this_round = True
    _enter_battle(out)
    return out


@dataclass(frozen=True)
class PlanChoice:
    move_id: str
    kind: MoveKind
    targets: tuple[int, ...]  # legal opponent slots; empty for dodge/reflect


def legal_plans(state: MatchState, player: int) -> dict[int, list[PlanChoice]]:
    """Per-slot move options this turn; knocked-out cards get an empty list.

    Passing (no entry for a slot) is always legal and not enumerated.
    """
    _expect_phase(state, Phase.AWAIT_PLANS, "legal_plans")
    _expect_player(state, player)
    opponent = state.side(1 - player)
    alive_targets = tuple(c.slot for c in opponent.cards if not c.knocked_out)
    options: dict[int, list[PlanChoice]] = {}
    for card in state.side(player).cards:
        if card.knocked_out:
            options[card.slot] = []
            continue
        choices = []
        for move in card.moves[: state.round]:
            spec = state.catalog.move(move.move_id)
            if spec.kind is MoveKind.ATTACK:
                if alive_targets:
                    choices.append(PlanChoice(move.move_id, spec.kind, alive_targets))
            else:
                choices.append(PlanChoice(move.move_id, spec.kind, ()))
        options[card.slot] = choices
    return options


def _validate_plan(state: MatchState, player: int, plan: TurnPlan) -> None:
    opponent = state.side(1 - player)
    seen_slots: set[int] = set()
    for entry in plan.entries:
        if entry.slot in seen_slots:
            raise InvalidPlan(f"two moves assigned to card in slot {entry.slot}")
        seen_slots.add(entry.slot)
        if not 0 <= entry.slot < HAND_SIZE:
            raise InvalidPlan(f"no card in slot {entry.slot}")
        card = state.side(player).cards[entry.slot]
        if card.knocked_out:
            raise InvalidPlan(f"card in slot {entry.slot} is knocked out")
        position = next((i for i, m in enumerate(card.moves) if m.move_id == entry.move_id), None)
        if position is None:
            raise InvalidPlan(f"move {entry.move_id!r} is not on the card in slot {entry.slot}")
        if position + 1 > state.round:
            raise InvalidPlan(f"move {entry.move_id!r} unlocks in round {position + 1}")
        spec = state.catalog.move(entry.move_id)
        if spec.kind is MoveKind.ATTACK:
            if entry.target_slot is None:
                raise InvalidPlan(f"attack {entry.move_id!r} needs a target")
            if not 0 <= entry.target_slot < HAND_SIZE:
                raise InvalidPlan(f"no opponent card in slot {entry.target_slot}")
            if opponent.cards[entry.target_slot].knocked_out:
                raise InvalidPlan(f"target in slot {entry.target_slot} is already knocked out")
        elif entry.target_slot is not None:
            raise InvalidPlan(f"{spec.kind.value} {entry.move_id!r} cannot take a target")


def submit_plan(state: MatchState, player: int, plan: TurnPlan) -> MatchState:
    """Store one player's private plan; never visible to the opponent."""
    _expect_phase(state, Phase.AWAIT_PLANS, "submit_plan")
    _expect_player(state, player)
    if state.side(player).plan is not None:
        raise AlreadySubmitted(f"player {player} already submitted for turn {state.turn}")
    _validate_plan(state, player, plan)
    out = state.clone(share_cards=True)
    out.side(player).plan = plan
    return out


def ready_to_resolve(state: MatchState) -> bool:
    return state.phase is Phase.AWAIT_PLANS and all(p.plan is not None for p in state.players)


def round_end_outcome(hp_a: list[int], hp_b: list[int]) -> tuple[bool, int | None]:
    """Round-end check on raw HP lists: (ended, winner index or None for a draw)."""
    a_wiped = all(h == 0 for h in hp_a)
    b_wiped = all(h == 0 for h in hp_b)
    if a_wiped and b_wiped:
        return True, None
    if a_wiped:
        return True, 1
    if b_wiped:
        return True, 0
    return False, None


def resolve_turn(state: MatchState) -> tuple[MatchState, ResolutionLog]:
    """Reveal both plans and execute the turn.

    Fixed order: dodge rolls, then reflect rolls, then attacks (initiative
    side first, slot 0..2 within a side). A successful dodge blanks every
    incoming attack this turn; a successful reflect returns each attack's
    full magnitude to its attacker; attackers knocked out earlier in the
    attack step are canceled, attacks on already-downed targets fizzle.
    """
    if state.phase is not Phase.AWAIT_PLANS:
        raise PhaseViolation(f"resolve_turn requires await_plans, state is in {state.phase.value}")
    if any(p.plan is None for p in state.players):
        missing = [i for i, p in enumerate(state.players) if p.plan is None]
        raise NotReady(f"waiting on plan from player {missing[0]}")

    out = state.clone()
    catalog = out.catalog
    steps: list[LogStep] = []
    order = [(out.initiative, s) for s in range(HAND_SIZE)] + [
        (1 - out.initiative, s) for s in range(HAND_SIZE)
    ]
    cursor = out.rng_cursor

    defense_ok: dict[tuple[int, int], MoveKind] = {}
    for wanted in (MoveKind.DODGE, MoveKind.REFLECT):
        for player, slot in order:
            entry = out.side(player).plan.entry_for(slot)
            if entry is None:
                continue
            spec = catalog.move(entry.move_id)
            if spec.kind is not wanted:
                continue
            face, cursor = rng.d10(out.seed, cursor)
            success = face <= spec.dice_window
            steps.append(DiceRolled(player, slot, entry.move_id, face, success))
            if success:
                defense_ok[(player, slot)] = wanted

    def apply_damage(victim: tuple[int, int], amount: int, attacker: tuple[int, int], reflected: bool = False):
        card = out.side(victim[0]).cards[victim[1]]
        was_alive = card.hp > 0
        card.hp = max(0, card.hp - amount)
        steps.append(DamageDealt(attacker, victim, amount, reflected))
        if was_alive and card.hp == 0:
            steps.append(Knockout(victim[0], victim[1]))

    for player, slot in order:
        entry = out.side(player).plan.entry_for(slot)
        if entry is None:
            continue
        spec = catalog.move(entry.move_id)
        if spec.kind is not MoveKind.ATTACK:
            continue
        attacker_card = out.side(player).cards[slot]
        if attacker_card.knocked_out:
            steps.append(AttackFizzled(player, slot, "attacker_down"))
            continue
        target = (1 - player, entry.target_slot)
        if out.side(target[0]).cards[target[1]].knocked_out:
            steps.append(AttackFizzled(player, slot, "target_down"))
            continue
        defense = defense_ok.get(target)
        if defense is MoveKind.DODGE:
            steps.append(DamageDealt((player, slot), target, 0))
        elif defense is MoveKind.REFLECT:
            apply_damage((player, slot), spec.magnitude, target, reflected=True)
        else:
            apply_damage(target, spec.magnitude, (player, slot))

    out.rng_cursor = cursor
    for side in out.players:
        side.plan = None

    ended, winner = round_end_outcome(
        [c.hp for c in out.players[0].cards], [c.hp for c in out.players[1].cards]
    )
    if ended:
        result = RoundResult(out.round, winner, "wipe")
    elif out.turn >= out.max_turns:
        result = RoundResult(out.round, None, "turn_cap")
    else:
        result = None

    log_round, log_turn, log_initiative = out.round, out.turn, out.initiative
    if result is not None:
        out.phase = Phase.ROUND_OVER
        out.pending_result = result
        steps.append(RoundEnd(result.winner, result.reason))
    else:
        out.turn += 1
        out.initiative = 1 - out.initiative

    log = ResolutionLog(
        round=log_round,
        turn=log_turn,
        initiative=log_initiative,
        steps=tuple(steps),
        rng_cursor_after=cursor,
    )
    return out, log


def declare_tie(state: MatchState, player: int) -> MatchState:
    """Record tie consent; the round is drawn once both players consent."""
    _expect_phase(state, Phase.AWAIT_PLANS, "declare_tie")
    _expect_player(state, player)
    out = state.clone(share_cards=True)
    out.side(player).tie_consent = True
    if all(p.tie_consent for p in out.players):
        out.phase = Phase.ROUND_OVER
        out.pending_result = RoundResult(out.round, None, "tie")
        for side in out.players:
            side.plan = None
    return out


def forfeit(state: MatchState, player: int) -> MatchState:
    """End the round immediately as a loss for the caller."""
    _expect_phase(state, Phase.AWAIT_PLANS, "forfeit")
    _expect_player(state, player)
    out = state.clone(share_cards=True)
    out.phase = Phase.ROUND_OVER
    out.pending_result = RoundResult(out.round, 1 - player, "forfeit")
    for side in out.players:
        side.plan = None
    return out


def conclude_round(state: MatchState) -> MatchState:
    """Credit the finished round and advance to the next round or match end."""
    _expect_phase(state, Phase.ROUND_OVER, "conclude_round")
    out = state.clone()
    result = out.pending_result
    out.round_results.append(result)
    out.pending_result = None
    if result.winner is not None:
        out.side(result.winner).round_wins += 1
    for side in out.players:
        side.plan = None
        side.tie_consent = False
    if out.round >= FINAL_ROUND:
        out.phase = Phase.MATCH_OVER
        wins = [out.players[0].round_wins, out.players[1].round_wins]
        out.winner = None if wins[0] == wins[1] else (0 if wins[0] > wins[1] else 1)
    else:
        out.round += 1
        out.turn = 1
        for side in out.players:
            side.attached_this_round = False
            for card in side.cards:
                card.hp = card.max_hp
        out.phase = Phase.CUSTOMIZE
    return out


def _enter_illustrate(state: MatchState) -> None:
    state.phase = Phase.ILLUSTRATE
    for side in state.players:
        side.attached_this_round = False


def _enter_battle(state: MatchState) -> None:
    state.phase = Phase.AWAIT_PLANS
    state.turn = 1
    for side in state.players:
        side.plan = None
        side.tie_consent = False
