"""Simulation engine: setup, the fixed-order tick loop, stats, snapshots.

One tick is one reported second of evacuation. Phase order is fixed:

  1. authority guidance           4. movement (seeded-shuffled order)
  2. emotional contagion          5. exit check and removal
  3. state reclassification       6. deadline / end-of-run check
                                  7. stats and history update

Determinism contract: a (config, seed) pair fully determines the run. All
stochastic choices draw from one generator in documented order: at setup the
spawn patch sample (citizens then authorities), the exit-authority patch, the
hazard patches, then per-citizen moods and headings in id order; during each
tick the movement shuffle, then per-citizen jitter and turn draws in shuffled
order, then authority wander draws.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from random import Random
from typing import Optional

from .emotion import EmotionalState, catastrophe_occurs, classify_state, interact_all
from .movement import (
    ACTIVE,
    ESCAPED,
    FAILED,
    Authority,
    Citizen,
    SpeedProfile,
    authority_guidance,
    collision_check,
    exit_check,
    propose_heading,
    wander_authorities,
)
from .world import NoExit, PatchKind, World, nearest_of, set_patch, validate

RUNNING = "running"
PAUSED = "paused"
ENDED = "ended"

STATE_COLORS = {
    EmotionalState.CALM: "green",
    EmotionalState.ALERTED: "yellow",
    EmotionalState.PANICKED: "red",
}


class EngineError(Exception):
    pass


class NotEnoughEmptyPatches(EngineError):
    def __init__(self, needed: int, available: int):
        super().__init__(
            f"need {needed} empty patches for spawning, world has {available}"
        )


@dataclass(frozen=True)
class SimConfig:
    world: World
    initial_population: int = 15
    initial_authorities: int = 0
    spawn_exit_authority: bool = True
    deadline: int = 1000
    contagion_radius: float = 2.0
    guidance_radius: float = 2.0
    speed_profile: SpeedProfile = field(default_factory=SpeedProfile)
    seed: int = 0
    hazards: int = 0
    authorities_wander: bool = False

    def __post_init__(self) -> None:
        if self.initial_population < 0:
            raise ValueError("initial_population must be >= 0")
        if self.initial_authorities < 0:
            raise ValueError("initial_authorities must be >= 0")
        if self.deadline < 1:
            raise ValueError("deadline must be >= 1")
        if self.contagion_radius <= 0 or self.guidance_radius <= 0:
            raise ValueError("radii must be positive")
        if self.hazards < 0:
            raise ValueError("hazards must be >= 0")


@dataclass
class RunStats:
    total_citizens: int = 0
    active: int = 0
    successful_escapes: int = 0
    failed_evacuations: int = 0
    total_contagions: int = 0
    pct_panicked: float = 0.0
    pct_alerted: float = 0.0
    pct_calm: float = 0.0
    duration: Optional[int] = None
    # one (pct_panicked, pct_alerted, pct_calm) triple at setup and per tick
    history: list[tuple[float, float, float]] = field(default_factory=list)


@dataclass
class SimState:
    config: SimConfig
    world: World  # run world: config world plus any hazard paint
    tick: int
    citizens: list[Citizen]
    authorities: list[Authority]
    stats: RunStats
    rng: Random
    phase: str
    world_changes: tuple[tuple[int, int, PatchKind], ...] = ()
    _actives: list[Citizen] = field(default_factory=list, repr=False)
    _exits: list[tuple[int, int]] = field(default_factory=list, repr=False)
    _exit_cache: dict[tuple[int, int], tuple[int, int]] = field(
        default_factory=dict, repr=False
    )

    def replace_world(self, world: World) -> None:
        """Swap the run world (paused mid-run edits); resets exit caches."""
        self.world = world
        self._exits = world.coords_of(PatchKind.EXIT)
        self._exit_cache.clear()


def setup(config: SimConfig) -> SimState:
    """Spawn agents, assign initial moods, zero the counters."""
    violations = validate(config.world)
    if violations:
        raise NoExit()
    world = config.world
    empties = world.coords_of(PatchKind.EMPTY)
    pop = config.initial_population
    need = pop + config.initial_authorities
    if need > len(empties):
        raise NotEnoughEmptyPatches(need, len(empties))
    if config.hazards > len(empties):
        raise NotEnoughEmptyPatches(config.hazards, len(empties))

    rng = Random(config.seed)
    spawn = rng.sample(empties, need) if need else []
    citizens = [Citizen(i, float(x), float(y)) for i, (x, y) in enumerate(spawn[:pop])]
    authorities = [
        Authority(pop + i, float(x), float(y), stationary=not config.authorities_wander)
        for i, (x, y) in enumerate(spawn[pop:])
    ]
    if config.spawn_exit_authority:
        ex, ey = rng.choice(world.coords_of(PatchKind.EXIT))
        authorities.append(Authority(pop + len(authorities), float(ex), float(ey)))

    changes: list[tuple[int, int, PatchKind]] = []
    if config.hazards:
        # hazard paint may land under a spawned agent; hazards are inert so
        # that is harmless (matches sampling patches, not free patches)
        for hx, hy in rng.sample(empties, config.hazards):
            world = set_patch(world, (hx, hy), PatchKind.HAZARD)
            changes.append((hx, hy, PatchKind.HAZARD))

    for c in citizens:
        catastrophe_occurs(c, rng)
    for c in citizens:
        c.heading = rng.uniform(0.0, 360.0) % 360.0
    if config.authorities_wander:
        for a in authorities:
            a.heading = rng.uniform(0.0, 360.0) % 360.0

    stats = RunStats(total_citizens=pop, active=pop)
    state = SimState(
        config=config,
        world=world,
        tick=0,
        citizens=citizens,
        authorities=authorities,
        stats=stats,
        rng=rng,
        phase=RUNNING if pop else ENDED,
        world_changes=tuple(changes),
        _actives=list(citizens),
    )
    state._exits = world.coords_of(PatchKind.EXIT)
    if not pop:
        stats.duration = 0
    _update_percentages(state)
    stats.history.append((stats.pct_panicked, stats.pct_alerted, stats.pct_calm))
    return state


def _update_percentages(state: SimState) -> None:
    actives = state._actives
    stats = state.stats
    n = len(actives)
    stats.active = n
    if n == 0:
        stats.pct_panicked = stats.pct_alerted = stats.pct_calm = 0.0
        return
    panicked = alerted = 0
    for c in actives:
        if c.state is EmotionalState.PANICKED:
            panicked += 1
        elif c.state is EmotionalState.ALERTED:
            alerted += 1
    stats.pct_panicked = 100.0 * panicked / n
    stats.pct_alerted = 100.0 * alerted / n
    stats.pct_calm = 100.0 * (n - panicked - alerted) / n


def _exit_target(state: SimState, c: Citizen) -> tuple[int, int]:
    # nearest exit resolved at patch granularity and memoized; guided agents
    # on the same patch share one target
    key = (math.floor(c.x + 0.5), math.floor(c.y + 0.5))
    target = state._exit_cache.get(key)
    if target is None:
        target = nearest_of(state._exits, key)[0]
        state._exit_cache[key] = target
    return target


def tick(state: SimState) -> SimState:
    """Advance one tick through the fixed phase order."""
    if state.phase != RUNNING:
        raise EngineError(f"tick on a {state.phase} run")
    config = state.config
    world = state.world
    rng = state.rng
    stats = state.stats
    actives = state._actives
    t = state.tick

    # 1. guidance
    authority_guidance(actives, state.authorities, config.guidance_radius)

    # 2. contagion (snapshot semantics; states frozen for the pass)
    stats.total_contagions += interact_all(actives, config.contagion_radius)

    # 3. reclassify states from moods
    for c in actives:
        c.state = classify_state(c.mood)

    # 4. movement, in a fresh seeded-shuffled order each tick
    profile = config.speed_profile
    order = list(actives)
    rng.shuffle(order)
    for c in order:
        target = _exit_target(state, c) if c.evacuation_directions else None
        heading = propose_heading(c, world, rng, profile, target)
        x, y, heading, turn = collision_check(
            c, world, heading, profile.speed_for(c.state), rng
        )
        c.x = x
        c.y = y
        c.heading = heading
        c.turn_check = turn
    if config.authorities_wander:
        wander_authorities(state.authorities, world, rng)

    # 5. exits
    remaining = []
    for c in actives:
        if exit_check(c, world):
            c.status = ESCAPED
            stats.successful_escapes += 1
        else:
            remaining.append(c)
    state._actives = remaining

    # 6. deadline / end of run
    if t + 1 >= config.deadline and remaining:
        for c in remaining:
            c.status = FAILED
        stats.failed_evacuations += len(remaining)
        state._actives = []
        state.phase = ENDED
        stats.duration = config.deadline
    elif not remaining:
        state.phase = ENDED
        stats.duration = t + 1

    # 7. stats / history
    _update_percentages(state)
    stats.history.append((stats.pct_panicked, stats.pct_alerted, stats.pct_calm))
    state.tick = t + 1
    return state


def run_to_completion(config: SimConfig) -> RunStats:
    state = setup(config)
    while state.phase == RUNNING:
        tick(state)
    return state.stats


@dataclass(frozen=True)
class AgentView:
    id: int
    kind: str  # "citizen" | "authority"
    x: float
    y: float
    state: Optional[str]
    color: str
    guided: bool
    status: str


@dataclass(frozen=True)
class StatsView:
    total_citizens: int
    active: int
    successful_escapes: int
    failed_evacuations: int
    total_contagions: int
    pct_panicked: float
    pct_alerted: float
    pct_calm: float
    duration: Optional[int]


@dataclass(frozen=True)
class Snapshot:
    """Immutable view of one instant; later ticks never mutate it."""

    tick: int
    phase: str
    agents: tuple[AgentView, ...]
    stats: StatsView
    world_changes: tuple[tuple[int, int, PatchKind], ...]


def snapshot(state: SimState) -> Snapshot:
    """Value copy of the current tick: agents, stats, hazard paint.

    Escaped citizens are gone from the world; failed ones stay, marked.
    """
    agents = [
        AgentView(
            id=c.id,
            kind="citizen",
            x=c.x,
            y=c.y,
            state=c.state.value,
            color=STATE_COLORS[c.state],
            guided=c.evacuation_directions,
            status=c.status,
        )
        for c in state.citizens
        if c.status != ESCAPED
    ]
    agents.extend(
        AgentView(
            id=a.id,
            kind="authority",
            x=a.x,
            y=a.y,
            state=None,
            color="orange",
            guided=False,
            status=ACTIVE,
        )
        for a in state.authorities
    )
    s = state.stats
    return Snapshot(
        tick=state.tick,
        phase=state.phase,
        agents=tuple(agents),
        stats=StatsView(
            total_citizens=s.total_citizens,
            active=s.active,
            successful_escapes=s.successful_escapes,
            failed_evacuations=s.failed_evacuations,
            total_contagions=s.total_contagions,
            pct_panicked=s.pct_panicked,
            pct_alerted=s.pct_alerted,
            pct_calm=s.pct_calm,
            duration=s.duration,
        ),
        world_changes=state.world_changes,
    )
