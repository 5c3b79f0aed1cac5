"""Integer counters that must end up strictly increasing."""

from __future__ import annotations

import random
import struct
from collections.abc import Mapping

from ..statespace import StateSpace, zero_heuristic


class CountersDomain(StateSpace):
    """``n`` counters in ``[0, max_value]``; goal is ``c[i] < c[i+1]`` for all i."""

    def __init__(self, n: int, max_value: int, initial):
        if n < 1:
            raise ValueError("need at least one counter")
        self.n = n
        self.max_value = max_value
        self.initial = self.make_state(initial)

    def make_state(self, values):
        """Build a state from a sequence or an ``{index: value}`` mapping."""
        if isinstance(values, Mapping):
            if sorted(values) != list(range(self.n)):
                raise ValueError("mapping must cover counters 0..n-1")
            values = [values[i] for i in range(self.n)]
        state = tuple(int(v) for v in values)
        if len(state) != self.n or not all(0 <= v <= self.max_value for v in state):
            raise ValueError(f"invalid counters state {state}")
        return state

    def is_goal(self, state) -> bool:
        return all(a < b for a, b in zip(state, state[1:]))

    def successors(self, state):
        out = []
        for i, v in enumerate(state):
            if v < self.max_value:
                out.append((f"inc{i}", state[:i] + (v + 1,) + state[i + 1:]))
            if v > 0:
                out.append((f"dec{i}", state[:i] + (v - 1,) + state[i + 1:]))
        return out

    def encode(self, state) -> bytes:
        return struct.pack(f">{self.n}i", *state)

    def witness(self):
        """A goal state, proving solvability; None if none exists."""
        if self.max_value < self.n - 1:
            return None
        return tuple(range(self.n))

    def violations(self, state) -> float:
        return float(sum(max(0, a - b + 1) for a, b in zip(state, state[1:])))

    def violated_pairs(self, state) -> float:
        return float(sum(a >= b for a, b in zip(state, state[1:])))

    def heuristics(self):
        return {"violations": self.violations, "violated-pairs": self.violated_pairs,
                "zero": zero_heuristic}


def generate(params: dict, seed: int) -> CountersDomain:
    from .grid import UnsolvableParams

    n = int(params.get("n", 4))
    max_value = int(params.get("max_value", 2 * n))
    if max_value < n - 1:
        raise UnsolvableParams(f"{n} counters cannot be strictly ordered within [0, {max_value}]")
    rng = random.Random(seed)
    initial = [rng.randint(0, max_value) for _ in range(n)]
    return CountersDomain(n, max_value, initial)
