"""Agent locomotion: wandering search, obstacle avoidance, guidance, exits.

Citizens do a correlated random walk (heading plus per-state jitter) until
they either stumble onto an exit patch or receive evacuation directions from
an authority, after which they steer toward the nearest exit. Structure
patches and the world boundary are the only obstacles; agents may overlap.

Headings are degrees in [0, 360) over the world's (x, y) axes: a heading h
moves by (cos h, sin h) per unit speed. "Left" is +90 degrees, "right" -90.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from random import Random
from typing import Iterable, Optional, Sequence

from .emotion import EmotionalState
from .world import PatchKind, World, nearest_exit, patch_at

# citizen lifecycle markers, managed by the engine
ACTIVE = "active"
ESCAPED = "escaped"
FAILED = "failed"

# optional slow wander for authorities (stationary by default)
AUTHORITY_SPEED = 0.5
AUTHORITY_JITTER = 20.0

# turn_check debug codes
TURN_NONE = 0
TURN_RIGHT = 1
TURN_LEFT = 2
TURN_REVERSE = 3
TURN_STUCK = 4


@dataclass(frozen=True)
class SpeedProfile:
    """Per-state speeds (patches/tick) and heading wobble (max degrees/tick).

    Panic moves faster but more erratically; the jitter is the half-width of
    the uniform per-tick heading perturbation.
    """

    calm_speed: float = 1.0
    alerted_speed: float = 1.2
    panicked_speed: float = 1.5
    calm_jitter: float = 10.0
    alerted_jitter: float = 30.0
    panicked_jitter: float = 60.0

    def __post_init__(self) -> None:
        for name in ("calm_speed", "alerted_speed", "panicked_speed"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        for name in ("calm_jitter", "alerted_jitter", "panicked_jitter"):
            if not 0 <= getattr(self, name) <= 180:
                raise ValueError(f"{name} must be in [0, 180]")

    def speed_for(self, state: EmotionalState) -> float:
        if state is EmotionalState.CALM:
            return self.calm_speed
        if state is EmotionalState.ALERTED:
            return self.alerted_speed
        return self.panicked_speed

    def jitter_for(self, state: EmotionalState) -> float:
        if state is EmotionalState.CALM:
            return self.calm_jitter
        if state is EmotionalState.ALERTED:
            return self.alerted_jitter
        return self.panicked_jitter


class Citizen:
    """A mobile evacuee. Position is continuous over the patch grid."""

    __slots__ = (
        "id",
        "x",
        "y",
        "heading",
        "mood",
        "state",
        "evacuation_directions",
        "turn_check",
        "status",
    )

    def __init__(self, id: int, x: float, y: float, heading: float = 0.0):
        self.id = id
        self.x = x
        self.y = y
        self.heading = heading
        self.mood = 0.0
        self.state = EmotionalState.ALERTED
        self.evacuation_directions = False
        self.turn_check = TURN_NONE
        self.status = ACTIVE

    def __repr__(self) -> str:
        return (
            f"Citizen(id={self.id}, x={self.x:.2f}, y={self.y:.2f}, "
            f"mood={self.mood}, state={self.state.value}, status={self.status})"
        )


class Authority:
    """A helper agent that grants evacuation directions; never evacuates."""

    __slots__ = ("id", "x", "y", "heading", "stationary")

    def __init__(self, id: int, x: float, y: float, stationary: bool = True):
        self.id = id
        self.x = x
        self.y = y
        self.heading = 0.0
        self.stationary = stationary

    def __repr__(self) -> str:
        return f"Authority(id={self.id}, x={self.x:.2f}, y={self.y:.2f})"


def bearing(x0: float, y0: float, x1: float, y1: float) -> float:
    """Heading from (x0, y0) toward (x1, y1), degrees in [0, 360)."""
    return math.degrees(math.atan2(y1 - y0, x1 - x0)) % 360.0


def propose_heading(
    citizen: Citizen,
    world: World,
    rng: Random,
    profile: SpeedProfile,
    target: Optional[tuple[int, int]] = None,
) -> float:
    """Next heading: exit-directed when guided, correlated wander otherwise.

    `target` short-circuits the nearest-exit lookup for callers that cache it.
    One uniform jitter draw is consumed per call.
    """
    if citizen.evacuation_directions:
        if target is None:
            target = nearest_exit(world, (citizen.x, citizen.y))[0]
        base = bearing(citizen.x, citizen.y, target[0], target[1])
    else:
        base = citizen.heading
    j = profile.jitter_for(citizen.state)
    return (base + rng.uniform(-j, j)) % 360.0


def _free(world: World, x: float, y: float) -> bool:
    # a position is admissible if it stays in bounds and its patch is not a
    # structure; world edges therefore act like walls
    if not (0.0 <= x <= world.width - 1 and 0.0 <= y <= world.height - 1):
        return False
    return not world.is_blocked(math.floor(x + 0.5), math.floor(y + 0.5))


def collision_check(
    citizen: Citizen,
    world: World,
    heading: float,
    speed: float,
    rng: Random,
) -> tuple[float, float, float, int]:
    """Resolve one step against structures and the boundary.

    Tries the proposed heading, then a uniformly chosen 90-degree side turn,
    then the other side, then the reverse; if all four directions are blocked
    the citizen stays put. Returns (x, y, heading, turn_check); one RNG draw
    is consumed only when the forward candidate is blocked.
    """
    x = citizen.x
    y = citizen.y
    h = heading % 360.0
    rad = math.radians(h)
    nx = x + speed * math.cos(rad)
    ny = y + speed * math.sin(rad)
    if _free(world, nx, ny):
        return nx, ny, h, TURN_NONE
    if rng.random() < 0.5:
        attempts = ((-90.0, TURN_RIGHT), (90.0, TURN_LEFT), (180.0, TURN_REVERSE))
    else:
        attempts = ((90.0, TURN_LEFT), (-90.0, TURN_RIGHT), (180.0, TURN_REVERSE))
    for offset, code in attempts:
        h2 = (h + offset) % 360.0
        rad = math.radians(h2)
        nx = x + speed * math.cos(rad)
        ny = y + speed * math.sin(rad)
        if _free(world, nx, ny):
            return nx, ny, h2, code
    return x, y, citizen.heading, TURN_STUCK


def authority_guidance(
    citizens: Iterable[Citizen],
    authorities: Sequence[Authority],
    guidance_radius: float = 2.0,
) -> None:
    """Grant evacuation directions to citizens near any authority.

    The flag is monotone: once granted it is never revoked.
    """
    if not authorities:
        return
    r2 = guidance_radius * guidance_radius
    for c in citizens:
        if c.evacuation_directions:
            continue
        cx = c.x
        cy = c.y
        for a in authorities:
            dx = a.x - cx
            dy = a.y - cy
            if dx * dx + dy * dy <= r2:
                c.evacuation_directions = True
                break


def exit_check(citizen: Citizen, world: World) -> bool:
    """True when the citizen's containing patch is an exit."""
    px, py = patch_at(citizen.x, citizen.y)
    return world.patches[py * world.width + px] is PatchKind.EXIT


def wander_authorities(
    authorities: Sequence[Authority], world: World, rng: Random
) -> None:
    """Optional slow wander for non-stationary authorities (id order)."""
    for a in authorities:
        if a.stationary:
            continue
        h = (a.heading + rng.uniform(-AUTHORITY_JITTER, AUTHORITY_JITTER)) % 360.0
        rad = math.radians(h)
        nx = a.x + AUTHORITY_SPEED * math.cos(rad)
        ny = a.y + AUTHORITY_SPEED * math.sin(rad)
        if _free(world, nx, ny):
            a.x = nx
            a.y = ny
            a.heading = h
        else:
            a.heading = (h + 180.0) % 360.0
