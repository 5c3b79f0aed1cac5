"""4-connected grid navigation."""

from __future__ import annotations

import random
import struct
from collections import deque

from ..statespace import StateSpace, zero_heuristic

# (label, dx, dy); y grows downwards.
MOVES = (("U", 0, -1), ("D", 0, 1), ("L", -1, 0), ("R", 1, 0))


class GridDomain(StateSpace):
    def __init__(self, width: int, height: int, obstacles=(), start=(0, 0), goal=None):
        if width < 1 or height < 1:
            raise ValueError("grid must be at least 1x1")
        self.width = width
        self.height = height
        self.obstacles = frozenset(tuple(c) for c in obstacles)
        self.initial = tuple(start)
        self.goal = (width - 1, height - 1) if goal is None else tuple(goal)
        for cell in (self.initial, self.goal):
            if not self.free(cell):
                raise ValueError(f"cell {cell} is blocked or out of bounds")

    def free(self, cell) -> bool:
        x, y = cell
        return 0 <= x < self.width and 0 <= y < self.height and cell not in self.obstacles

    def is_goal(self, state) -> bool:
        return state == self.goal

    def successors(self, state):
        x, y = state
        out = []
        for label, dx, dy in MOVES:
            cell = (x + dx, y + dy)
            if self.free(cell):
                out.append((label, cell))
        return out

    def encode(self, state) -> bytes:
        return struct.pack(">ii", *state)

    def manhattan(self, state) -> float:
        return float(abs(state[0] - self.goal[0]) + abs(state[1] - self.goal[1]))

    def anti_manhattan(self, state) -> float:
        return float(self.width + self.height - 2) - self.manhattan(state)

    def heuristics(self):
        return {"manhattan": self.manhattan, "zero": zero_heuristic,
                "anti-manhattan": self.anti_manhattan}

    def connected(self) -> bool:
        return bfs_distance(self, self.initial, self.goal) is not None


def bfs_distance(space: GridDomain, source, target):
    seen = {source}
    queue = deque([(source, 0)])
    while queue:
        cell, d = queue.popleft()
        if cell == target:
            return d
        for _, nxt in space.successors(cell):
            if nxt not in seen:
                seen.add(nxt)
                queue.append((nxt, d + 1))
    return None


def generate(params: dict, seed: int) -> GridDomain:
    width = int(params.get("width", 8))
    height = int(params.get("height", width))
    density = float(params.get("obstacle_density", 0.0))
    start = tuple(params.get("start", (0, 0)))
    goal = tuple(params.get("goal", (width - 1, height - 1)))
    rng = random.Random(seed)
    cells = [(x, y) for y in range(height) for x in range(width) if (x, y) not in (start, goal)]
    for _ in range(100):
        blocked = [c for c in cells if rng.random() < density]
        grid = GridDomain(width, height, blocked, start, goal)
        if grid.connected():
            return grid
    raise UnsolvableParams(f"no connected {width}x{height} grid at density {density}")


class UnsolvableParams(ValueError):
    pass
