"""Bot-vs-bot match runner and balance aggregation."""
from __future__ import annotations

import time
from collections import defaultdict
from dataclasses import dataclass, field

from ..catalog import Catalog
from ..core import MatchState, Phase, apply_command, new_match, replay, state_hash
from ..core.types import DiceRolled
from .bots import Bot
from .checks import check_state_invariants


@dataclass
class GameRecord:
    index: int
    seed: int
    match_id: str
    winner: int | None  # player index, None = drawn match
    round_outcomes: list[dict]
    turns: int
    archetypes: tuple[str, str]
    moves_planned: tuple[dict[str, int], dict[str, int]]
    roll_stats: dict[int, list[int]]  # window -> [rolls, successes]
    final_hash: str
    journal: list[dict] | None = None


@dataclass
class BalanceReport:
    games: int
    wins: tuple[int, int]
    draws: int
    per_archetype: dict[str, dict]
    per_move: dict[str, dict]
    window_rolls: dict[int, dict]
    avg_turns_per_round: float
    illegal_states: int
    elapsed_s: float
    records: list[GameRecord] = field(repr=False, default_factory=list)
    window_sensitivity: list[dict] = field(default_factory=list)

    @property
    def decided(self) -> int:
        return self.wins[0] + self.wins[1]

    @property
    def decided_win_ratio_a(self) -> float:
        return self.wins[0] / self.decided if self.decided else 0.0

    @property
    def games_per_minute(self) -> float:
        return self.games / (self.elapsed_s / 60) if self.elapsed_s else float("inf")

    def summary_lines(self) -> list[str]:
        lines = [
            f"games: {self.games}",
            f"wins A/B/draws: {self.wins[0]}/{self.wins[1]}/{self.draws}",
            f"decided-game win ratio (A): {self.decided_win_ratio_a:.4f}",
            f"avg turns per round: {self.avg_turns_per_round:.2f}",
            f"illegal states: {self.illegal_states}",
            f"throughput: {self.games_per_minute:.0f} games/min",
        ]
        if self.window_sensitivity:
            lines.append("window sweep (defense-side win rate):")
            for row in self.window_sensitivity:
                lines.append(
                    f"  w={row['window']:2d}  win_rate={row['win_rate']:.3f}"
                    f"  (w/d/l {row['wins']}/{row['draws']}/{row['losses']})"
                )
        return lines


def play_game(
    catalog: Catalog,
    bots: tuple[Bot, Bot],
    seed: int,
    *,
    game_index: int = 0,
    mirror: bool = False,
    max_turns: int = 30,
    keep_journal: bool = False,
) -> GameRecord:
    """Run one full match; asserts engine invariants after every command."""
    match_id = f"sim-{seed & 0xFFFFFFFFFFFFFFFF:016x}"
    journal: list[dict] = []
    state = new_match(catalog, seed, match_id=match_id, max_turns=max_turns)
    rngs = (bots[0].game_rng(game_index, 0), bots[1].game_rng(game_index, 1))
    roll_stats: dict[int, list[int]] = defaultdict(lambda: [0, 0])

    def do(command: dict):
        nonlocal state
        state, log = apply_command(state, command)
        journal.append(command)
        check_state_invariants(state)
        return log

    setup_a = bots[0].setup(catalog, rngs[0])
    setup_b = setup_a if mirror else bots[1].setup(catalog, rngs[1])
    for player, choice in ((0, setup_a), (1, setup_b)):
        do(
            {
                "op": "select_hand",
                "player": player,
                "prompt_id": choice.prompt_id,
                "archetype_id": choice.archetype_id,
                "first_move_id": choice.first_move_id,
                "premade_ids": list(choice.premade_ids),
            }
        )

    turns = 0
    moves_planned = (defaultdict(int), defaultdict(int))
    battle_hp: list[int] | None = None
    while state.phase is not Phase.MATCH_OVER:
        if state.phase is Phase.CUSTOMIZE:
            for player in (0, 1):
                do({"op": "select_round_move", "player": player,
                    "move_id": bots[player].round_move(state, player, rngs[player])})
        elif state.phase is Phase.ILLUSTRATE:
            # bots attach the placeholder instantly; illustration takes no time
            for player in (0, 1):
                do({"op": "attach_illustration", "player": player, "round": state.round,
                    "asset": catalog.placeholder_asset})
            battle_hp = _hp_vector(state)
        elif state.phase is Phase.AWAIT_PLANS:
            for player in (0, 1):
                plan = bots[player].plan(state, player, rngs[player])
                for entry in plan.entries:
                    moves_planned[player][entry.move_id] += 1
                do({"op": "submit_plan", "player": player, "plan": plan.to_dict()})
            log = do({"op": "resolve_turn"})
            turns += 1
            for step in log.steps:
                if isinstance(step, DiceRolled):
                    stats = roll_stats[catalog.move(step.move_id).dice_window]
                    stats[0] += 1
                    stats[1] += int(step.success)
            after = _hp_vector(state)
            if battle_hp is not None:
                assert all(b <= a for a, b in zip(battle_hp, after)), "healing observed"
            battle_hp = after
        elif state.phase is Phase.ROUND_OVER:
            do({"op": "conclude_round"})
            battle_hp = None
        else:  # pragma: no cover - SETUP is consumed above
            raise AssertionError(f"unexpected phase {state.phase}")

    return GameRecord(
        index=game_index,
        seed=seed,
        match_id=match_id,
        winner=state.winner,
        round_outcomes=[r.to_dict() for r in state.round_results],
        turns=turns,
        archetypes=(setup_a.archetype_id, setup_b.archetype_id),
        moves_planned=(dict(moves_planned[0]), dict(moves_planned[1])),
        roll_stats=dict(roll_stats),
        final_hash=state_hash(state),
        journal=journal if keep_journal else None,
    )


def _hp_vector(state: MatchState) -> list[int]:
    return [c.hp for side in state.players for c in side.cards]


def _play_range(args) -> list[GameRecord]:
    """Worker entry: play a contiguous index range and return its records."""
    catalog, bots, base_seed, start, count, mirror, max_turns, verify, keep = args
    records = []
    for index in range(start, start + count):
        seed = base_seed + index
        record = play_game(
            catalog, bots, seed,
            game_index=index, mirror=mirror, max_turns=max_turns,
            keep_journal=keep or verify,
        )
        if verify:
            replayed = replay(catalog, seed, record.journal, match_id=record.match_id, max_turns=max_turns)
            if state_hash(replayed) != record.final_hash:
                raise AssertionError(f"journal replay mismatch for game {index} (seed {seed})")
        if not keep:
            record.journal = None
        records.append(record)
    return records


def run_games(
    catalog: Catalog,
    bot_a: Bot,
    bot_b: Bot,
    n: int,
    base_seed: int,
    *,
    mirror: bool = False,
    max_turns: int = 30,
    verify_replays: bool = True,
    keep_journals: bool = False,
    workers: int | None = None,
) -> BalanceReport:
    """Play n seeded matches and aggregate a balance report.

    Deterministic in (catalog, bots, n, base_seed): games are seeded
    base_seed + index and aggregation is a fold over per-game records, so
    the report is identical however the games are scheduled across workers.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    started = time.perf_counter()
    bots = (bot_a, bot_b)

    if workers and workers > 1 and n >= workers * 4:
        import multiprocessing

        chunk = (n + workers - 1) // workers
        jobs = [
            (catalog, bots, base_seed, start, min(chunk, n - start),
             mirror, max_turns, verify_replays, keep_journals)
            for start in range(0, n, chunk)
        ]
        with multiprocessing.Pool(workers) as pool:
            parts = pool.map(_play_range, jobs)
        records = [record for part in parts for record in part]
    else:
        records = _play_range(
            (catalog, bots, base_seed, 0, n, mirror, max_turns, verify_replays, keep_journals)
        )

    wins = [0, 0]
    draws = 0
    turns_total = 0
    rounds_total = 0
    archetype_stats: dict[str, dict] = defaultdict(lambda: {"games": 0, "wins": 0, "draws": 0, "losses": 0})
    move_stats: dict[str, dict] = defaultdict(lambda: {"planned": 0, "player_games": 0, "score": 0.0})
    window_rolls: dict[int, list[int]] = defaultdict(lambda: [0, 0])

    for record in records:
        if record.winner is None:
            draws += 1
        else:
            wins[record.winner] += 1
        turns_total += record.turns
        rounds_total += len(record.round_outcomes)
        for window, (rolls, successes) in record.roll_stats.items():
            window_rolls[window][0] += rolls
            window_rolls[window][1] += successes
        for player in (0, 1):
            score = 0.5 if record.winner is None else (1.0 if record.winner == player else 0.0)
            arch = archetype_stats[record.archetypes[player]]
            arch["games"] += 1
            if record.winner is None:
                arch["draws"] += 1
            elif record.winner == player:
                arch["wins"] += 1
            else:
                arch["losses"] += 1
            for move_id, count in record.moves_planned[player].items():
                move_stats[move_id]["planned"] += count
                move_stats[move_id]["player_games"] += 1
                move_stats[move_id]["score"] += score

    total_player_games = 2 * n
    overall_avg = (wins[0] + wins[1] + draws * 2 * 0.5) / total_player_games

    per_archetype = {}
    for arch_id, s in sorted(archetype_stats.items()):
        games = s["games"]
        per_archetype[arch_id] = {
            **s,
            "win_rate": s["wins"] / games,
            "draw_rate": s["draws"] / games,
            "loss_rate": s["losses"] / games,
        }
    per_move = {}
    for move_id, s in sorted(move_stats.items()):
        usage_avg = s["score"] / s["player_games"] if s["player_games"] else 0.0
        per_move[move_id] = {
            "planned": s["planned"],
            "player_games": s["player_games"],
            "pick_rate": s["player_games"] / total_player_games,
            "win_rate_delta": usage_avg - overall_avg,
        }
    windows = {
        w: {"rolls": rolls, "successes": successes,
            "success_rate": successes / rolls if rolls else 0.0}
        for w, (rolls, successes) in sorted(window_rolls.items())
    }

    return BalanceReport(
        games=n,
        wins=(wins[0], wins[1]),
        draws=draws,
        per_archetype=per_archetype,
        per_move=per_move,
        window_rolls=windows,
        avg_turns_per_round=turns_total / rounds_total if rounds_total else 0.0,
        illegal_states=0,  # any violation raises before we get here
        elapsed_s=time.perf_counter() - started,
        records=records,
    )
