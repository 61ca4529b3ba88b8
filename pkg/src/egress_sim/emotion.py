"""Mood, emotional state classification, and the emotional-contagion step.

Mood is a real number, initialized as a uniform integer in [0, 99] and left
unclamped afterwards: contagion deltas (some fractional) may push it outside
that range. The three emotional states are a pure function of mood.

The contagion step uses snapshot semantics: every citizen's neighborhood is
evaluated against the state flags as they were at the start of the pass, so
the result is independent of iteration order.
"""
from __future__ import annotations

from enum import Enum
from random import Random
from typing import TYPE_CHECKING, NamedTuple, Sequence

from .neighbors import StatePresenceIndex

if TYPE_CHECKING:
    from .movement import Citizen


class EmotionalState(Enum):
    CALM = "calm"
    ALERTED = "alerted"
    PANICKED = "panicked"


# thresholds: panicked at mood <= 15, calm at mood >= 69, alerted between
PANIC_THRESHOLD = 15.0
CALM_THRESHOLD = 69.0


def classify_state(mood: float) -> EmotionalState:
    """Map a mood value to its emotional state (panic wins at the low end)."""
    if mood <= PANIC_THRESHOLD:
        return EmotionalState.PANICKED
    if mood >= CALM_THRESHOLD:
        return EmotionalState.CALM
    return EmotionalState.ALERTED


def catastrophe_occurs(citizen: "Citizen", rng: Random) -> "Citizen":
    """Assign the run-start mood (uniform integer in [0, 99]) and state."""
    citizen.mood = float(rng.randrange(100))
    citizen.state = classify_state(citizen.mood)
    return citizen


class NeighborhoodSummary(NamedTuple):
    """Which states are present within the contagion radius, self excluded."""

    panicked_present: bool
    alerted_present: bool
    calm_present: bool


def contagion_delta(
    state: EmotionalState, nbhd: NeighborhoodSummary
) -> tuple[float, int]:
    """Mood delta and contagion event count for one citizen for one tick.

    Each satisfied presence condition contributes its delta and exactly one
    event, so a citizen logs at most 3 events per tick. Panicked citizens are
    not swayed by calmer neighbors, but the encounters still count as events.
    """
    delta = 0.0
    events = 0
    if state is EmotionalState.ALERTED:
        if nbhd.panicked_present:
            delta -= 1.0
            events += 1
        if nbhd.calm_present:
            delta += 1.0
            events += 1
        if nbhd.alerted_present:
            events += 1
    elif state is EmotionalState.CALM:
        if nbhd.alerted_present:
            delta -= 1.5
            events += 1
        if nbhd.panicked_present:
            delta -= 4.0
            events += 1
        if nbhd.calm_present:
            delta += 0.5
            events += 1
    else:  # panicked
        if nbhd.panicked_present:
            delta -= 2.0
            events += 1
        if nbhd.alerted_present:
            events += 1
        if nbhd.calm_present:
            events += 1
    return delta, events


_PANICKED = EmotionalState.PANICKED
_ALERTED = EmotionalState.ALERTED


def interact_all(citizens: Sequence["Citizen"], radius: float = 2.0) -> int:
    """Run one contagion pass over all citizens; returns total new events.

    Mutates moods in place. States are read but never written here, so the
    presence flags are effectively frozen for the whole pass; reclassification
    is a separate engine phase.
    """
    n = len(citizens)
    if n < 2:
        return 0
    index = StatePresenceIndex(radius)
    for i, c in enumerate(citizens):
        state = c.state
        if state is _PANICKED:
            s = 0
        elif state is _ALERTED:
            s = 1
        else:
            s = 2
        index.insert(s, i, c.x, c.y)
    r2 = radius * radius
    total_events = 0
    presence = index.presence
    for i, c in enumerate(citizens):
        p, a, k = presence(c.x, c.y, r2, i)
        if p or a or k:
            delta, events = contagion_delta(
                c.state, NeighborhoodSummary(p, a, k)
            )
            c.mood += delta
            total_events += events
    return total_events
