"""Typed error taxonomy shared by the engine, catalog, server, and simulator.

Every rejected operation raises one of these; callers rely on the guarantee
that a raised GameError leaves the input state untouched.
"""
from __future__ import annotations

import re


class GameError(Exception):
    """Base class for every rule/protocol rejection."""

    @property
    def code(self) -> str:
        # CamelCase class name -> snake_case wire code, e.g. PhaseViolation -> phase_violation
        return re.sub(r"(?<!^)(?=[A-Z])", "_", type(self).__name__).lower()


class CatalogError(GameError):
    pass


class ParseError(CatalogError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class ValidationError(CatalogError):
    def __init__(self, violations: list[str]):
        super().__init__("; ".join(violations))
        self.violations = violations


class UnknownContent(GameError):
    def __init__(self, content_id: str, detail: str = ""):
        super().__init__(f"unknown content id {content_id!r}" + (f" ({detail})" if detail else ""))
        self.content_id = content_id


class InvalidSelection(GameError):
    pass


class PhaseViolation(GameError):
    pass


class AlreadyAttached(GameError):
    pass


class InvalidPlan(GameError):
    pass


class AlreadySubmitted(GameError):
    pass


class NotReady(GameError):
    pass


class ReplayMismatch(GameError):
    def __init__(self, index: int, detail: str):
        super().__init__(f"replay diverged at command {index}: {detail}")
        self.index = index


class NameTaken(GameError):
    pass


class ProtocolError(GameError):
    pass


class TooLarge(GameError):
    pass


class BadMedia(GameError):
    pass


class SessionNotFound(GameError):
    pass
