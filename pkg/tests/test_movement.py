from __future__ import annotations

import math
from random import Random

from egress_sim.emotion import EmotionalState
from egress_sim.movement import (
    TURN_LEFT,
    TURN_NONE,
    TURN_REVERSE,
    TURN_RIGHT,
    TURN_STUCK,
    Authority,
    Citizen,
    SpeedProfile,
    authority_guidance,
    bearing,
    collision_check,
    exit_check,
    propose_heading,
)
from egress_sim.world import PatchKind, World, parse_world, patch_at, set_patch

ZERO_JITTER = SpeedProfile(
    calm_jitter=0.0, alerted_jitter=0.0, panicked_jitter=0.0
)


def _guided(x, y, heading=0.0):
    c = Citizen(0, x, y, heading)
    c.evacuation_directions = True
    c.state = EmotionalState.CALM
    return c


def test_guided_heading_points_at_exit():
    w = set_patch(World.empty(61, 61), (60, 30), PatchKind.EXIT)
    c = _guided(0.0, 30.0)
    h = propose_heading(c, w, Random(1), ZERO_JITTER)
    assert h == 0.0  # due +x


def test_unguided_zero_jitter_keeps_heading():
    w = World.empty(9, 9)
    c = Citizen(0, 4.0, 4.0, 123.25)
    h = propose_heading(c, w, Random(1), ZERO_JITTER)
    assert h == 123.25


def test_jitter_stays_within_state_bound():
    w = World.empty(9, 9)
    profile = SpeedProfile()  # calm ±10°
    rng = Random(42)
    c = Citizen(0, 4.0, 4.0, 90.0)
    c.state = EmotionalState.CALM
    for _ in range(10_000):
        h = propose_heading(c, w, rng, profile)
        diff = (h - 90.0 + 180.0) % 360.0 - 180.0
        assert abs(diff) <= 10.0


def test_bearing_quadrants():
    assert bearing(0, 0, 1, 0) == 0.0
    assert bearing(0, 0, 0, 1) == 90.0
    assert bearing(0, 0, -1, 0) == 180.0
    assert bearing(0, 0, 0, -1) == 270.0


def test_open_step_accepted_with_exact_speed():
    w = World.empty(21, 21)
    c = Citizen(0, 10.0, 10.0, 37.0)
    x, y, h, turn = collision_check(c, w, 37.0, 1.2, Random(5))
    assert turn == TURN_NONE
    assert h == 37.0
    assert math.isclose(math.hypot(x - 10.0, y - 10.0), 1.2, rel_tol=1e-12)


def test_zero_speed_is_a_no_op_step():
    w = World.empty(9, 9)
    c = Citizen(0, 4.0, 4.0, 0.0)
    x, y, h, turn = collision_check(c, w, 0.0, 0.0, Random(5))
    assert (x, y, turn) == (4.0, 4.0, TURN_NONE)


def test_wall_ahead_turns_left_or_right_evenly():
    # wall directly east of the citizen, both sides open
    w = set_patch(World.empty(9, 9), (5, 4), PatchKind.STRUCTURE)
    counts = {TURN_RIGHT: 0, TURN_LEFT: 0}
    for seed in range(2000):
        c = Citizen(0, 4.0, 4.0, 0.0)
        x, y, h, turn = collision_check(c, w, 0.0, 1.0, Random(seed))
        counts[turn] += 1
        assert h in (90.0, 270.0)
    total = counts[TURN_RIGHT] + counts[TURN_LEFT]
    assert total == 2000
    assert 0.45 < counts[TURN_RIGHT] / total < 0.55


def test_corridor_forces_reverse():
    # structures east, north and south: only the way back is open
    w = World.empty(9, 9)
    for coord in [(5, 4), (4, 5), (4, 3)]:
        w = set_patch(w, coord, PatchKind.STRUCTURE)
    c = Citizen(0, 4.0, 4.0, 0.0)
    x, y, h, turn = collision_check(c, w, 0.0, 1.0, Random(0))
    assert turn == TURN_REVERSE
    assert h == 180.0
    assert patch_at(x, y) == (3, 4)


def test_fully_enclosed_citizen_is_stuck():
    # four cardinal structures block all four tried directions of a
    # cardinal heading
    w = World.empty(9, 9)
    for coord in [(5, 4), (3, 4), (4, 5), (4, 3)]:
        w = set_patch(w, coord, PatchKind.STRUCTURE)
    c = Citizen(0, 4.0, 4.0, 0.0)
    x, y, h, turn = collision_check(c, w, 0.0, 1.0, Random(3))
    assert turn == TURN_STUCK
    assert (x, y) == (4.0, 4.0)
    assert h == 0.0  # heading kept for the next attempt


def test_ring_of_structures_traps_any_heading():
    w = World.empty(9, 9)
    for dx in (-1, 0, 1):
        for dy in (-1, 0, 1):
            if (dx, dy) != (0, 0):
                w = set_patch(w, (4 + dx, 4 + dy), PatchKind.STRUCTURE)
    c = Citizen(0, 4.0, 4.0, 77.0)
    x, y, h, turn = collision_check(c, w, 77.0, 1.0, Random(3))
    assert turn == TURN_STUCK
    assert (x, y) == (4.0, 4.0)


def test_world_edge_acts_as_wall():
    w = World.empty(9, 9)
    c = Citizen(0, 8.0, 4.0, 0.0)  # facing out of bounds
    x, y, h, turn = collision_check(c, w, 0.0, 1.0, Random(11))
    assert turn in (TURN_RIGHT, TURN_LEFT)
    assert 0.0 <= x <= 8.0 and 0.0 <= y <= 8.0


def test_diagonal_straddling_blocked_patch_is_rejected():
    # candidate lands on a structure patch even though the position is legal
    # world-bounds-wise
    w = set_patch(World.empty(9, 9), (5, 5), PatchKind.STRUCTURE)
    c = Citizen(0, 4.2, 4.2, 45.0)
    x, y, h, turn = collision_check(c, w, 45.0, 1.0, Random(2))
    assert turn != TURN_NONE
    assert patch_at(x, y) != (5, 5)


def test_guidance_within_radius():
    citizens = [Citizen(0, 10.0, 10.0), Citizen(1, 14.0, 10.0)]
    posts = [Authority(10, 11.5, 10.0)]
    authority_guidance(citizens, posts, guidance_radius=2.0)
    assert citizens[0].evacuation_directions  # distance 1.5
    assert not citizens[1].evacuation_directions  # distance 2.5


def test_guidance_is_monotone():
    c = Citizen(0, 10.0, 10.0)
    c.evacuation_directions = True
    authority_guidance([c], [Authority(1, 50.0, 50.0)], guidance_radius=2.0)
    assert c.evacuation_directions


def test_guidance_at_exact_radius():
    c = Citizen(0, 10.0, 10.0)
    authority_guidance([c], [Authority(1, 12.0, 10.0)], guidance_radius=2.0)
    assert c.evacuation_directions


def test_exit_check_rounds_into_exit_patch():
    w = set_patch(World.empty(70, 70), (60, 30), PatchKind.EXIT)
    c = Citizen(0, 60.2, 30.1)
    assert exit_check(c, w)
    c2 = Citizen(1, 59.4, 30.0)
    assert not exit_check(c2, w)


def test_guided_citizen_reaches_exit_in_closed_form_steps():
    # 10x5 exit block on the east edge; a guided citizen 6 patches away with
    # zero jitter walks straight in and escapes within ceil(d/speed)+1 ticks
    w = World.empty(61, 61)
    for y in range(26, 36):
        for x in range(56, 61):
            w = set_patch(w, (x, y), PatchKind.EXIT)
    c = _guided(50.0, 30.0)
    rng = Random(9)
    distance = 6.0  # to nearest exit column at x=56
    speed = 1.0
    budget = math.ceil(distance / speed) + 1
    for steps in range(1, budget + 1):
        h = propose_heading(c, w, rng, ZERO_JITTER)
        c.x, c.y, c.heading, c.turn_check = collision_check(c, w, h, speed, rng)
        if exit_check(c, w):
            break
    assert steps <= budget
    assert exit_check(c, w)


def test_distance_to_exit_strictly_decreases_when_guided():
    w = set_patch(World.empty(61, 61), (60, 30), PatchKind.EXIT)
    c = _guided(10.0, 12.0)
    rng = Random(1)
    speed = 1.0
    last = math.hypot(60 - c.x, 30 - c.y)
    for _ in range(20):
        h = propose_heading(c, w, rng, ZERO_JITTER)
        c.x, c.y, c.heading, c.turn_check = collision_check(c, w, h, speed, rng)
        d = math.hypot(60 - c.x, 30 - c.y)
        assert d < last
        assert math.isclose(last - d, speed, rel_tol=1e-9)
        last = d


def test_random_walk_never_enters_structures_or_leaves_bounds():
    rng = Random(77)
    world_text = (
        "..........\n"
        "..##...#..\n"
        "..##......\n"
        ".....##..E\n"
        "..#..##..E\n"
        "..........\n"
    )
    w = parse_world(world_text)
    profile = SpeedProfile()
    for trial in range(50):
        c = Citizen(trial, 0.0, 0.0, rng.uniform(0, 360))
        c.state = [EmotionalState.CALM, EmotionalState.ALERTED, EmotionalState.PANICKED][
            trial % 3
        ]
        for _ in range(200):
            h = propose_heading(c, w, rng, profile)
            speed = profile.speed_for(c.state)
            c.x, c.y, c.heading, c.turn_check = collision_check(c, w, h, speed, rng)
            assert 0.0 <= c.x <= w.width - 1
            assert 0.0 <= c.y <= w.height - 1
            px, py = patch_at(c.x, c.y)
            assert not w.is_blocked(px, py)
