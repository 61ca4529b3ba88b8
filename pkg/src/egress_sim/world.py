"""Patch world: geometry, patch kinds, text format, editing and exit queries.

The world is a bounded, non-wrapping rectangular grid of patches. Structure
patches are the only ones that block movement; hazard patches are inert
debug paint. Worlds are immutable values: ``set_patch`` returns a new world.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum


class PatchKind(IntEnum):
    EMPTY = 0
    STRUCTURE = 1
    EXIT = 2
    AUTHORITY_POST = 3
    HAZARD = 4


GLYPHS = {
    ".": PatchKind.EMPTY,
    "#": PatchKind.STRUCTURE,
    "E": PatchKind.EXIT,
    "A": PatchKind.AUTHORITY_POST,
    "H": PatchKind.HAZARD,
}
GLYPH_OF = {kind: glyph for glyph, kind in GLYPHS.items()}


class WorldError(Exception):
    """Base class for world parsing/editing errors."""


class EmptyWorld(WorldError):
    pass


class RaggedGrid(WorldError):
    def __init__(self, row: int, got: int, expected: int):
        super().__init__(f"row {row} has length {got}, expected {expected}")
        self.row = row


class BadGlyph(WorldError):
    def __init__(self, x: int, y: int, glyph: str):
        super().__init__(f"unknown glyph {glyph!r} at ({x}, {y})")
        self.position = (x, y)
        self.glyph = glyph


class OutOfBounds(WorldError):
    def __init__(self, x: int, y: int):
        super().__init__(f"({x}, {y}) is outside the world")
        self.position = (x, y)


class NoExit(WorldError):
    def __init__(self) -> None:
        super().__init__("world has no exit patch")


@dataclass(frozen=True)
class World:
    """Dense row-major patch grid. Row 0 is the top row of the text format."""

    width: int
    height: int
    patches: tuple[PatchKind, ...]

    def __post_init__(self) -> None:
        if self.width < 1 or self.height < 1:
            raise WorldError("world dimensions must be positive")
        if len(self.patches) != self.width * self.height:
            raise WorldError("patch buffer does not match dimensions")

    @classmethod
    def empty(cls, width: int = 61, height: int = 61) -> World:
        return cls(width, height, (PatchKind.EMPTY,) * (width * height))

    def kind_at(self, x: int, y: int) -> PatchKind:
        if not self.in_bounds(x, y):
            raise OutOfBounds(x, y)
        return self.patches[y * self.width + x]

    def in_bounds(self, x: int, y: int) -> bool:
        return 0 <= x < self.width and 0 <= y < self.height

    def is_blocked(self, x: int, y: int) -> bool:
        """Structure is the only blocking kind; bounds are handled by movement."""
        return self.patches[y * self.width + x] is PatchKind.STRUCTURE

    def count(self, kind: PatchKind) -> int:
        return sum(1 for k in self.patches if k is kind)

    def coords_of(self, kind: PatchKind) -> list[tuple[int, int]]:
        """All coordinates of a kind, scanned row-major (sorted by (y, x))."""
        w = self.width
        return [
            (i % w, i // w)
            for i, k in enumerate(self.patches)
            if k is kind
        ]


def patch_at(x: float, y: float) -> tuple[int, int]:
    """Containing patch of a continuous position (round half up, both axes)."""
    return (math.floor(x + 0.5), math.floor(y + 0.5))


def parse_world(text: str) -> World:
    """Parse the line-oriented ``.world`` format (row 0 of the file on top)."""
    lines = text.splitlines()
    while lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise EmptyWorld()
    width = len(lines[0])
    if width == 0:
        raise EmptyWorld()
    patches: list[PatchKind] = []
    for y, line in enumerate(lines):
        if len(line) != width:
            raise RaggedGrid(y, len(line), width)
        for x, glyph in enumerate(line):
            kind = GLYPHS.get(glyph)
            if kind is None:
                raise BadGlyph(x, y, glyph)
            patches.append(kind)
    return World(width, len(lines), tuple(patches))


def serialize_world(world: World) -> str:
    """Inverse of parse_world; ends with a trailing newline."""
    w = world.width
    rows = (
        "".join(GLYPH_OF[k] for k in world.patches[y * w : (y + 1) * w])
        for y in range(world.height)
    )
    return "\n".join(rows) + "\n"


def set_patch(world: World, coord: tuple[int, int], kind: PatchKind) -> World:
    """Replace one patch's kind, returning a new world."""
    x, y = coord
    if not world.in_bounds(x, y):
        raise OutOfBounds(x, y)
    i = y * world.width + x
    if world.patches[i] is kind:
        return world
    patches = list(world.patches)
    patches[i] = kind
    return World(world.width, world.height, tuple(patches))


def validate(world: World) -> list[str]:
    """Runnability violations; empty list means the world can host a run."""
    violations = []
    if world.count(PatchKind.EXIT) == 0:
        violations.append("NoExit")
    return violations


def nearest_exit(world: World, p: tuple[float, float]) -> tuple[tuple[int, int], float]:
    """Exit patch center closest to p (Euclidean); ties go to lowest (y, x)."""
    exits = world.coords_of(PatchKind.EXIT)
    if not exits:
        raise NoExit()
    return nearest_of(exits, p)


def nearest_of(
    coords: list[tuple[int, int]], p: tuple[float, float]
) -> tuple[tuple[int, int], float]:
    """Closest coordinate to p from a row-major sorted list; first wins ties."""
    px, py = p
    best = None
    best_d2 = math.inf
    for c in coords:
        dx = c[0] - px
        dy = c[1] - py
        d2 = dx * dx + dy * dy
        if d2 < best_d2:
            best_d2 = d2
            best = c
    assert best is not None
    return best, math.sqrt(best_d2)
