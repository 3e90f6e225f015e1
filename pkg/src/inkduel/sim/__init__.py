"""Headless bot play at scale: fuzzing, replay verification, balance reports."""
from .bots import BOT_NAMES, Bot, DefenseBiasedBot, GreedyDamageBot, RandomLegalBot, make_bot
from .fuzz import FuzzSummary, fuzz
from .runner import BalanceReport, GameRecord, play_game, run_games
from .sweep import rewrite_windows, window_sweep

__all__ = [
    "BOT_NAMES",
    "Bot",
    "DefenseBiasedBot",
    "GreedyDamageBot",
    "RandomLegalBot",
    "make_bot",
    "FuzzSummary",
    "fuzz",
    "BalanceReport",
    "GameRecord",
    "play_game",
    "run_games",
    "rewrite_windows",
    "window_sweep",
]
