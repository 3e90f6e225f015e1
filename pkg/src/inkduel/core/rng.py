"""Counter-based random stream for matches.

A splitmix64-style mixer applied to (seed, counter) gives a stateless stream:
any draw is a pure function of the seed and its position, so a match only has
to persist its cursor to be perfectly replayable.
"""
from __future__ import annotations

_MASK = 0xFFFFFFFFFFFFFFFF
_GAMMA = 0x9E3779B97F4A7C15
# d10 uses rejection sampling: 2**64 % 10 == 6, so the top 6 values of the
# 64-bit range are re-drawn to keep all ten faces exactly equiprobable.
_D10_BOUND = (1 << 64) - ((1 << 64) % 10)


def stream_value(seed: int, cursor: int) -> int:
    """Return the uniform 64-bit value at position `cursor` of the stream."""
    z = (seed + (cursor + 1) * _GAMMA) & _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def draw(seed: int, cursor: int) -> tuple[int, int]:
    """Draw one 64-bit value; returns (value, next_cursor)."""
    return stream_value(seed & _MASK, cursor), cursor + 1


def d10(seed: int, cursor: int) -> tuple[int, int]:
    """Roll one ten-sided die face (1..10); returns (face, next_cursor)."""
    seed &= _MASK
    while True:
        value = stream_value(seed, cursor)
        cursor += 1
        if value < _D10_BOUND:
            return 1 + value % 10, cursor


class DiceStream:
    """Convenience iterator over consecutive d10 faces of one seeded stream."""

    def __init__(self, seed: int, cursor: int = 0):
        self.seed = seed & _MASK
        self.cursor = cursor

    def roll(self) -> int:
        face, self.cursor = d10(self.seed, self.cursor)
        return face
