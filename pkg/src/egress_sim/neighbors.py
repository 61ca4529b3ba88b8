"""Uniform-grid spatial hash for fixed-radius neighbor presence queries.

Specialized for the contagion step: it answers "is any agent of emotional
state S within radius r of this point, excluding the agent itself" for the
three states at once, with early exit. Rebuilt each tick from agent
positions; cell side must be >= the query radius so a 3x3 cell block covers
the disc.
"""
from __future__ import annotations

import math
from collections import defaultdict


class StatePresenceIndex:
    __slots__ = ("inv_cell", "cells")

    def __init__(self, cell_size: float):
        if cell_size <= 0:
            raise ValueError("cell_size must be positive")
        self.inv_cell = 1.0 / cell_size
        # cell key -> ([points of state 0], [state 1], [state 2]);
        # a point is (x, y, agent index)
        self.cells: dict[tuple[int, int], tuple[list, list, list]] = defaultdict(
            lambda: ([], [], [])
        )

    def insert(self, state_idx: int, agent_idx: int, x: float, y: float) -> None:
        key = (math.floor(x * self.inv_cell), math.floor(y * self.inv_cell))
        self.cells[key][state_idx].append((x, y, agent_idx))

    def presence(
        self, x: float, y: float, r2: float, exclude_idx: int
    ) -> tuple[bool, bool, bool]:
        """Presence of each state within sqrt(r2) of (x, y), excluding one agent."""
        found0 = found1 = found2 = False
        cells = self.cells
        cx = math.floor(x * self.inv_cell)
        cy = math.floor(y * self.inv_cell)
        for kx in (cx - 1, cx, cx + 1):
            for ky in (cy - 1, cy, cy + 1):
                triple = cells.get((kx, ky))
                if triple is None:
                    continue
                if not found0:
                    for px, py, pi in triple[0]:
                        if pi != exclude_idx:
                            dx = px - x
                            dy = py - y
                            if dx * dx + dy * dy <= r2:
                                found0 = True
                                break
                if not found1:
                    for px, py, pi in triple[1]:
                        if pi != exclude_idx:
                            dx = px - x
                            dy = py - y
                            if dx * dx + dy * dy <= r2:
                                found1 = True
                                break
                if not found2:
                    for px, py, pi in triple[2]:
                        if pi != exclude_idx:
                            dx = px - x
                            dy = py - y
                            if dx * dx + dy * dy <= r2:
                                found2 = True
                                break
                if found0 and found1 and found2:
                    return (True, True, True)
        return (found0, found1, found2)
