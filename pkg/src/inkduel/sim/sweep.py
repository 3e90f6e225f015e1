"""Dice-window sensitivity: how defensive win rates move with the window size."""
from __future__ import annotations

from ..catalog import Catalog, MoveKind, catalog_from_dict, validate_catalog
from .bots import make_bot
from .runner import run_games


def rewrite_windows(catalog: Catalog, window: int) -> Catalog:
    """A copy of the catalog with every dodge/reflect window set to `window`."""
    if not 1 <= window <= 10:
        raise ValueError(f"defensive windows live in 1..10, got {window}")
    doc = catalog.to_dict()
    for move in doc["moves"]:
        if move["kind"] != MoveKind.ATTACK.value:
            move["dice_window"] = window
    rewritten = catalog_from_dict(doc)
    violations = validate_catalog(rewritten)
    assert not violations, violations
    return rewritten


def window_sweep(
    catalog: Catalog,
    window_values: list[int],
    n_per_value: int,
    seed: int,
    *,
    bot_a: str = "defense-biased",
    bot_b: str = "greedy-damage",
    max_turns: int = 30,
    workers: int | None = None,
) -> list[dict]:
    """Win-rate table for the defense-side bot as windows are rewritten.

    Game seeds are shared across window values (common random numbers), so
    rows differ only through the window rewrite.
    """
    if n_per_value < 1:
        raise ValueError(f"n_per_value must be >= 1, got {n_per_value}")
    bad = [w for w in window_values if not 1 <= w <= 10]
    if bad:
        raise ValueError(f"defensive windows live in 1..10, got {bad}")
    rows = []
    for window in window_values:
        report = run_games(
            rewrite_windows(catalog, window),
            make_bot(bot_a, seed),
            make_bot(bot_b, seed + 1),
            n_per_value,
            seed,
            max_turns=max_turns,
            verify_replays=False,
            workers=workers,
        )
        rows.append(
            {
                "window": window,
                "games": report.games,
                "wins": report.wins[0],
                "draws": report.draws,
                "losses": report.wins[1],
                "win_rate": report.wins[0] / report.games,
            }
        )
    return rows
