"""Deterministic agent-based evacuation simulator with emotional contagion."""

from .emotion import EmotionalState, classify_state, contagion_delta, interact_all
from .engine import (
    RunStats,
    SimConfig,
    SimState,
    Snapshot,
    run_to_completion,
    setup,
    snapshot,
    tick,
)
from .experiments import ExperimentPlan, ExperimentReport, run_experiment, write_report
from .movement import Authority, Citizen, SpeedProfile
from .scenarios import ScenarioPreset, load_preset
from .world import PatchKind, World, nearest_exit, parse_world, serialize_world, set_patch, validate

__version__ = "0.1.0"

__all__ = [
    "Authority",
    "Citizen",
    "EmotionalState",
    "ExperimentPlan",
    "ExperimentReport",
    "PatchKind",
    "RunStats",
    "ScenarioPreset",
    "SimConfig",
    "SimState",
    "Snapshot",
    "SpeedProfile",
    "World",
    "classify_state",
    "contagion_delta",
    "interact_all",
    "load_preset",
    "nearest_exit",
    "parse_world",
    "run_experiment",
    "run_to_completion",
    "serialize_world",
    "set_patch",
    "setup",
    "snapshot",
    "tick",
    "validate",
    "write_report",
]
