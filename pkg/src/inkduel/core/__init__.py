"""Pure, seedable rule engine for the duel: no I/O, no clocks, no sockets."""
from .engine import (
    PlanChoice,
    attach_illustration,
    conclude_round,
    declare_tie,
    expire_illustration,
    forfeit,
    legal_plans,
    new_match,
    ready_to_resolve,
    resolve_turn,
    round_end_outcome,
    select_hand,
    select_round_move,
    submit_plan,
)
from .projection import project_for
from .replay import apply_command, apply_log, replay
from .types import (
    CardInstance,
    CardMove,
    CardOrigin,
    MatchState,
    Phase,
    PlanEntry,
    PlayerSide,
    ResolutionLog,
    RoundResult,
    TurnPlan,
    state_hash,
)

__all__ = [
    "PlanChoice",
    "attach_illustration",
    "conclude_round",
    "declare_tie",
    "expire_illustration",
    "forfeit",
    "legal_plans",
    "new_match",
    "ready_to_resolve",
    "resolve_turn",
    "round_end_outcome",
    "select_hand",
    "select_round_move",
    "submit_plan",
    "project_for",
    "apply_command",
    "apply_log",
    "replay",
    "CardInstance",
    "CardMove",
    "CardOrigin",
    "MatchState",
    "Phase",
    "PlanEntry",
    "PlayerSide",
    "ResolutionLog",
    "RoundResult",
    "TurnPlan",
    "state_hash",
]
