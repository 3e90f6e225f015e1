"""Static game content: character prompts, archetypes, moves, premade cards.

Catalogs load from a versioned JSON document (see docs/catalog-format.md),
are validated against the rule engine's type invariants, and are immutable
after load so one instance can back any number of concurrent matches.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources

from .errors import ParseError, UnknownContent, ValidationError

ROUNDS = (1, 2, 3)
DEFAULT_TIMER_SCHEDULE = (1080, 600, 420)


class MoveKind(str, Enum):
    ATTACK = "attack"
    DODGE = "dodge"
    REFLECT = "reflect"

    @property
    def is_defensive(self) -> bool:
        return self is not MoveKind.ATTACK


@dataclass(frozen=True)
class CharacterPrompt:
    id: str
    name: str
    description: str
    keywords: tuple[str, ...] = ()


@dataclass(frozen=True)
class MoveSpec:
    id: str
    display_name: str
    kind: MoveKind
    magnitude: int  # damage; 0 for dodge/reflect
    dice_window: int  # d10 faces 1..window succeed; 0 for attacks
    activation_round: int
    effect_text: str = ""


@dataclass(frozen=True)
class Archetype:
    id: str
    name: str
    base_hp: int
    move_pool: tuple[str, ...]


@dataclass(frozen=True)
class PremadeCard:
    id: str
    name: str
    max_hp: int
    move_ids: tuple[str, ...]  # exactly 3, activation rounds {1,2,3}
    cover_art: str
    illustrator: str


@dataclass(frozen=True)
class Catalog:
    version: int
    prompts: tuple[CharacterPrompt, ...]
    archetypes: tuple[Archetype, ...]
    moves: dict[str, MoveSpec]
    premade_cards: tuple[PremadeCard, ...]
    placeholder_asset: str
    timer_schedule: tuple[int, int, int] = DEFAULT_TIMER_SCHEDULE
    _digest: str = field(default="", compare=False, repr=False)

    def prompt(self, prompt_id: str) -> CharacterPrompt:
        for p in self.prompts:
            if p.id == prompt_id:
                return p
        raise UnknownContent(prompt_id, "prompt")

    def archetype(self, archetype_id: str) -> Archetype:
        for a in self.archetypes:
            if a.id == archetype_id:
                return a
        raise UnknownContent(archetype_id, "archetype")

    def move(self, move_id: str) -> MoveSpec:
        try:
            return self.moves[move_id]
        except KeyError:
            raise UnknownContent(move_id, "move") from None

    def premade(self, card_id: str) -> PremadeCard:
        for c in self.premade_cards:
            if c.id == card_id:
                return c
        raise UnknownContent(card_id, "premade card")

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "prompts": [
                {"id": p.id, "name": p.name, "description": p.description, "keywords": list(p.keywords)}
                for p in self.prompts
            ],
            "moves": [
                {
                    "id": m.id,
                    "display_name": m.display_name,
                    "kind": m.kind.value,
                    "magnitude": m.magnitude,
                    "dice_window": m.dice_window,
                    "activation_round": m.activation_round,
                    "effect_text": m.effect_text,
                }
                for m in self.moves.values()
            ],
            "archetypes": [
                {"id": a.id, "name": a.name, "base_hp": a.base_hp, "move_pool": list(a.move_pool)}
                for a in self.archetypes
            ],
            "premade_cards": [
                {
                    "id": c.id,
                    "name": c.name,
                    "max_hp": c.max_hp,
                    "moves": list(c.move_ids),
                    "cover_art": c.cover_art,
                    "illustrator": c.illustrator,
                }
                for c in self.premade_cards
            ],
            "placeholder_asset": self.placeholder_asset,
            "timer_schedule": list(self.timer_schedule),
        }

    def serialize(self) -> bytes:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":")).encode()

    @property
    def digest(self) -> str:
        """Stable content hash; two catalogs with equal content share it."""
        if not self._digest:
            object.__setattr__(self, "_digest", hashlib.sha256(self.serialize()).hexdigest())
        return self._digest


def _require(obj: dict, key: str, kind: type, where: str):
    if key not in obj:
        raise ParseError(0, f"{where}: missing field {key!r}")
    value = obj[key]
    if kind is int and isinstance(value, bool):
        raise ParseError(0, f"{where}: field {key!r} must be {kind.__name__}")
    if not isinstance(value, kind):
        raise ParseError(0, f"{where}: field {key!r} must be {kind.__name__}")
    return value


def catalog_from_dict(doc: dict) -> Catalog:
    """Build a Catalog from parsed JSON; raises ParseError on shape problems."""
    version = _require(doc, "version", int, "catalog")
    prompts = tuple(
        CharacterPrompt(
            id=_require(p, "id", str, "prompt"),
            name=_require(p, "name", str, "prompt"),
            description=_require(p, "description", str, "prompt"),
            keywords=tuple(p.get("keywords", [])),
        )
        for p in _require(doc, "prompts", list, "catalog")
    )
    moves: dict[str, MoveSpec] = {}
    for m in _require(doc, "moves", list, "catalog"):
        kind_raw = _require(m, "kind", str, "move")
        try:
            kind = MoveKind(kind_raw)
        except ValueError:
            raise ParseError(0, f"move {m.get('id')!r}: unknown kind {kind_raw!r}") from None
        spec = MoveSpec(
            id=_require(m, "id", str, "move"),
            display_name=_require(m, "display_name", str, "move"),
            kind=kind,
            magnitude=_require(m, "magnitude", int, "move"),
            dice_window=_require(m, "dice_window", int, "move"),
            activation_round=_require(m, "activation_round", int, "move"),
            effect_text=m.get("effect_text", ""),
        )
        moves[spec.id] = spec
    archetypes = tuple(
        Archetype(
            id=_require(a, "id", str, "archetype"),
            name=_require(a, "name", str, "archetype"),
            base_hp=_require(a, "base_hp", int, "archetype"),
            move_pool=tuple(_require(a, "move_pool", list, "archetype")),
        )
        for a in _require(doc, "archetypes", list, "catalog")
    )
    premades = tuple(
        PremadeCard(
            id=_require(c, "id", str, "premade card"),
            name=_require(c, "name", str, "premade card"),
            max_hp=_require(c, "max_hp", int, "premade card"),
            move_ids=tuple(_require(c, "moves", list, "premade card")),
            cover_art=_require(c, "cover_art", str, "premade card"),
            illustrator=c.get("illustrator", ""),
        )
        for c in _require(doc, "premade_cards", list, "catalog")
    )
    schedule = _require(doc, "timer_schedule", list, "catalog")
    if len(schedule) != 3 or not all(isinstance(s, int) and not isinstance(s, bool) for s in schedule):
        raise ParseError(0, "catalog: timer_schedule must be 3 integers (seconds)")
    return Catalog(
        version=version,
        prompts=prompts,
        archetypes=archetypes,
        moves=moves,
        premade_cards=premades,
        placeholder_asset=_require(doc, "placeholder_asset", str, "catalog"),
        timer_schedule=(schedule[0], schedule[1], schedule[2]),
    )


def load_catalog(data: bytes | str) -> Catalog:
    """Parse, resolve, and validate a catalog document.

    Raises ParseError for malformed JSON/shapes, UnknownContent for the first
    dangling reference, ValidationError when any type invariant is breached.
    """
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.lineno, exc.msg) from None
    if not isinstance(doc, dict):
        raise ParseError(0, "catalog document must be a JSON object")
    catalog = catalog_from_dict(doc)
    for archetype in catalog.archetypes:
        for move_id in archetype.move_pool:
            if move_id not in catalog.moves:
                raise UnknownContent(move_id, f"archetype {archetype.id} move_pool")
    for card in catalog.premade_cards:
        for move_id in card.move_ids:
            if move_id not in catalog.moves:
                raise UnknownContent(move_id, f"premade card {card.id}")
    violations = validate_catalog(catalog)
    if violations:
        raise ValidationError(violations)
    return catalog


def validate_catalog(catalog: Catalog) -> list[str]:
    """Report every type-invariant violation; empty means playable.

    Enforces the invariants every match relies on (move shape, referential
    integrity, per-round availability, liveness minima). The builtin deck's
    larger content-scale floors are asserted by its own tests, not here, so
    purpose-built small catalogs stay valid.
    """
    v: list[str] = []
    seen_ids: set[str] = set()

    def check_id(raw: str, what: str) -> None:
        if not raw:
            v.append(f"{what} has an empty id")
        elif raw in seen_ids:
            v.append(f"duplicate id {raw!r}")
        seen_ids.add(raw)

    if catalog.version < 1:
        v.append(f"version must be >= 1, got {catalog.version}")

    for p in catalog.prompts:
        check_id(p.id, "prompt")
        if not p.name or not p.description:
            v.append(f"prompt {p.id!r} needs a non-empty name and description")

    for m in catalog.moves.values():
        check_id(m.id, "move")
        if not m.display_name:
            v.append(f"move {m.id!r} needs a display name")
        if m.activation_round not in ROUNDS:
            v.append(f"move {m.id!r} activation_round must be 1..3, got {m.activation_round}")
        if m.kind is MoveKind.ATTACK:
            if m.magnitude < 1:
                v.append(f"attack {m.id!r} must have magnitude >= 1")
            if m.dice_window != 0:
                v.append(f"attack {m.id!r} must have dice_window 0 (attacks are deterministic)")
        else:
            if m.magnitude != 0:
                v.append(f"{m.kind.value} {m.id!r} must have magnitude 0")
            if not 1 <= m.dice_window <= 10:
                v.append(f"{m.kind.value} {m.id!r} dice_window must be 1..10, got {m.dice_window}")

    for a in catalog.archetypes:
        check_id(a.id, "archetype")
        if a.base_hp < 1:
            v.append(f"archetype {a.id!r} base_hp must be >= 1")
        if len(a.move_pool) < 4:
            v.append(f"archetype {a.id!r} move_pool needs >= 4 moves, got {len(a.move_pool)}")
        if len(set(a.move_pool)) != len(a.move_pool):
            v.append(f"archetype {a.id!r} move_pool has duplicates")
        pool = [catalog.moves[mid] for mid in a.move_pool if mid in catalog.moves]
        for mid in a.move_pool:
            if mid not in catalog.moves:
                v.append(f"archetype {a.id!r} references unknown move {mid!r}")
        for r in ROUNDS:
            if not any(m.activation_round <= r for m in pool):
                v.append(f"archetype {a.id!r} offers no move usable in round {r}")

    for c in catalog.premade_cards:
        check_id(c.id, "premade card")
        if not c.name:
            v.append(f"premade card {c.id!r} needs a name")
        if c.max_hp < 1:
            v.append(f"premade card {c.id!r} max_hp must be >= 1")
        if len(c.move_ids) != 3:
            v.append(f"premade card {c.id!r} must list exactly 3 moves")
        else:
            rounds = sorted(
                catalog.moves[mid].activation_round for mid in c.move_ids if mid in catalog.moves
            )
            for mid in c.move_ids:
                if mid not in catalog.moves:
                    v.append(f"premade card {c.id!r} references unknown move {mid!r}")
            if len(rounds) == 3 and rounds != [1, 2, 3]:
                v.append(f"premade card {c.id!r} moves must cover activation rounds 1, 2, 3")
        if not c.cover_art:
            v.append(f"premade card {c.id!r} needs cover art")

    if not catalog.prompts:
        v.append("catalog needs at least one prompt")
    if not catalog.archetypes:
        v.append("catalog needs at least one archetype")
    if len(catalog.premade_cards) < 2:
        v.append("catalog needs at least two premade cards (a hand takes two)")
    if not catalog.placeholder_asset:
        v.append("catalog needs a placeholder asset for missed uploads")
    if any(s <= 0 for s in catalog.timer_schedule):
        v.append("timer_schedule durations must be positive seconds")

    return v


_BUILTIN: Catalog | None = None


def builtin_catalog() -> Catalog:
    """The deck shipped with the build (loaded once from packaged data)."""
    global _BUILTIN
    if _BUILTIN is None:
        data = resources.files("inkduel.data").joinpath("catalog.json").read_bytes()
        _BUILTIN = load_catalog(data)
    return _BUILTIN
