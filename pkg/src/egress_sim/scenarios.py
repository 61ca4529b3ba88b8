"""Scenario presets: open field, village, town, city.

Every preset is a 61x61 world with a single 10x5 exit block on the east edge
and 0/3/6/9 rectangular buildings. The shipped ``.world`` fixtures are the
source of truth (results stay stable even if the generator evolves); the
generator documents the layout and is used to (re)create the fixtures.
"""
from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

from .world import PatchKind, World, parse_world

WORLD_SIZE = 61

# one 10x5 exit block centered on the east edge: inclusive patch rect
EXIT_RECT = (56, 26, 60, 35)  # (x0, y0, x1, y1)

# building anchors on a 3x3 grid of slot centers, row-major
_SLOT_CENTERS = [(x, y) for y in (12, 30, 48) for x in (12, 30, 48)]
# per-slot (width, height), all within the 6..10 x 6..8 envelope
_SLOT_SIZES = [
    (8, 6), (6, 8), (10, 6),
    (6, 6), (8, 8), (10, 8),
    (7, 6), (6, 7), (9, 6),
]
_PRESET_SLOTS = {
    "open_field": (),
    "village": (0, 4, 8),            # NW / center / SE diagonal
    "town": (0, 2, 3, 5, 6, 8),      # all but the middle column
    "city": tuple(range(9)),
}
PRESET_NAMES = tuple(_PRESET_SLOTS)

BUILDING_COUNTS = {
    "open_field": 0,
    "village": 3,
    "town": 6,
    "city": 9,
}


class UnknownPreset(Exception):
    def __init__(self, name: str):
        super().__init__(f"unknown preset {name!r}; expected one of {PRESET_NAMES}")
        self.name = name


@dataclass(frozen=True)
class ScenarioPreset:
    name: str
    world: World
    building_count: int
    exit_blocks: tuple[tuple[int, int, int, int], ...]


def building_rects(name: str) -> list[tuple[int, int, int, int]]:
    """Inclusive (x0, y0, x1, y1) rects of the preset's buildings."""
    if name not in _PRESET_SLOTS:
        raise UnknownPreset(name)
    rects = []
    for slot in _PRESET_SLOTS[name]:
        cx, cy = _SLOT_CENTERS[slot]
        w, h = _SLOT_SIZES[slot]
        x0 = cx - w // 2
        y0 = cy - h // 2
        rects.append((x0, y0, x0 + w - 1, y0 + h - 1))
    return rects


def generate_preset(name: str) -> World:
    """Build a preset world from the documented layout (fixture generator)."""
    patches = [PatchKind.EMPTY] * (WORLD_SIZE * WORLD_SIZE)
    x0, y0, x1, y1 = EXIT_RECT
    for y in range(y0, y1 + 1):
        for x in range(x0, x1 + 1):
            patches[y * WORLD_SIZE + x] = PatchKind.EXIT
    for bx0, by0, bx1, by1 in building_rects(name):
        for y in range(by0, by1 + 1):
            for x in range(bx0, bx1 + 1):
                patches[y * WORLD_SIZE + x] = PatchKind.STRUCTURE
    return World(WORLD_SIZE, WORLD_SIZE, tuple(patches))


def load_preset(name: str) -> ScenarioPreset:
    """Load the frozen golden fixture for a preset."""
    if name not in _PRESET_SLOTS:
        raise UnknownPreset(name)
    text = (
        resources.files("egress_sim")
        .joinpath("worlds", f"{name}.world")
        .read_text(encoding="utf-8")
    )
    return ScenarioPreset(
        name=name,
        world=parse_world(text),
        building_count=BUILDING_COUNTS[name],
        exit_blocks=(EXIT_RECT,),
    )
