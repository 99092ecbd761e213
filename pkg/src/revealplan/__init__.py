"""Planner, simulator, and live-session harness for repeated leader-follower
games in which the follower best-responds to a privately held, stochastically
evolving picture of the payoffs."""

from .belief_solver import (
    BeliefPlan,
    Cell,
    CompletePlan,
    belief_transition,
    decode_belief,
    encode_belief,
    fresh_belief,
    observe_belief,
    solve_belief,
    solve_complete,
)
from .follower import FollowerKnowledge, RoundOutcome, play_round, respond
from .full_solver import FullObsState, PlanResult, solve_full
from .game import (
    CapacityError,
    GameSpec,
    RowStats,
    SpecError,
    load_spec,
    load_spec_file,
    row_stats,
    save_spec,
    spec_from_dict,
    spec_to_dict,
    validate,
)
from .oracle import HistoryNode, oracle_policy_check, oracle_value
from .policies import (
    BeliefPolicy,
    CompletePolicy,
    FixedPlanPolicy,
    FullObsPolicy,
    Observation,
    policy_for,
)
from .presets import PRESETS, TABLE_CLEARING, get_preset
from .simulate import SimConfig, SimReport, generate_instance, simulate, study

__version__ = "0.1.0"

__all__ = [
    "BeliefPlan",
    "BeliefPolicy",
    "CapacityError",
    "Cell",
    "CompletePlan",
    "CompletePolicy",
    "FixedPlanPolicy",
    "FollowerKnowledge",
    "FullObsPolicy",
    "FullObsState",
    "GameSpec",
    "HistoryNode",
    "Observation",
    "PRESETS",
    "PlanResult",
    "RoundOutcome",
    "RowStats",
    "SimConfig",
    "SimReport",
    "SpecError",
    "TABLE_CLEARING",
    "belief_transition",
    "decode_belief",
    "encode_belief",
    "fresh_belief",
    "generate_instance",
    "get_preset",
    "load_spec",
    "load_spec_file",
    "observe_belief",
    "oracle_policy_check",
    "oracle_value",
    "play_round",
    "policy_for",
    "respond",
    "row_stats",
    "save_spec",
    "simulate",
    "solve_belief",
    "solve_complete",
    "solve_full",
    "spec_from_dict",
    "spec_to_dict",
    "study",
    "validate",
]
