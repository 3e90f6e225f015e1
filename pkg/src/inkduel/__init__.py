"""inkduel: authoritative engine, server, and balance simulator for a
two-player card duel where every custom move carries a player-drawn cover."""

__version__ = "0.1.0"
