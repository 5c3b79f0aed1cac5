"""Layered graphs whose layers are heuristic plateaus.

Layer ``j`` holds ``width`` states sharing heuristic value ``depth - j``.
Inside a layer the states form a ring with extra random chords; one
randomly placed exit state per layer leads to the entry (index 0) of the
next layer, and the last layer's exit leads to the single goal.
"""

from __future__ import annotations

import random
import struct

from ..statespace import StateSpace, digest, zero_heuristic


class PlateauDomain(StateSpace):
    def __init__(self, width: int, depth: int, chords: int = 2, seed: int = 0):
        if width < 3 or depth < 1:
            raise ValueError("need width >= 3 and depth >= 1")
        self.width = width
        self.depth = depth
        self.seed = seed
        self.initial = (0, 0)
        self.goal = (depth, 0)
        rng = random.Random(seed)
        self.exits = [rng.randrange(1, width) for _ in range(depth)]
        self._adj: list[list[list[int]]] = []
        for _ in range(depth):
            layer = []
            for i in range(width):
                ring = [(i + 1) % width, (i - 1) % width]
                targets = []
                candidates = [t for t in range(width) if t != i and t not in ring]
                targets = rng.sample(candidates, min(chords, len(candidates)))
                layer.append(ring + targets)
            self._adj.append(layer)

    def is_goal(self, state) -> bool:
        return state == self.goal

    def successors(self, state):
        layer, i = state
        if layer >= self.depth:
            return []
        out = [(f"to{t}", (layer, t)) for t in self._adj[layer][i]]
        if self.exits[layer] == i:
            out.append(("up", (layer + 1, 0)))
        return out

    def encode(self, state) -> bytes:
        return struct.pack(">ii", *state)

    def n_states(self) -> int:
        return self.width * self.depth + 1

    def layer_h(self, state) -> float:
        return float(self.depth - state[0])

    def noisy_layer_h(self, state) -> float:
        if state == self.goal:
            return 0.0
        # Deterministic per-state noise in [0, 0.5) breaks ties inside a layer.
        noise = (digest(self.encode(state) + struct.pack(">q", self.seed)) & 0xFFFF) / 131072
        return self.layer_h(state) + noise

    def heuristics(self):
        return {"layer": self.layer_h, "noisy-layer": self.noisy_layer_h, "zero": zero_heuristic}


def generate(params: dict, seed: int) -> PlateauDomain:
    return PlateauDomain(int(params.get("width", params.get("W", 100))),
                         int(params.get("depth", params.get("D", 4))),
                         int(params.get("chords", 2)), seed)
