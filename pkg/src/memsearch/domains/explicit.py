"""Explicit graphs read from a small line-oriented text format.

Grammar (one directive per line, ``#`` starts a comment)::

    graph <name>
    vertex <id> h=<float> [goal]
    edge <src> <label> <dst>
    init <id>

Vertices may be declared after the edges that use them. Edge order is the
successor order. Unknown directives, duplicate vertices, duplicate labels
out of one vertex and a missing ``init`` are parse errors.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from pathlib import Path

from ..statespace import StateSpace, zero_heuristic


class GraphFormatError(ValueError):
    pass


class ParseError(GraphFormatError):
    def __init__(self, line: int, msg: str):
        super().__init__(f"line {line}: {msg}")
        self.line = line


class DanglingVertex(GraphFormatError):
    def __init__(self, name: str):
        super().__init__(f"undeclared vertex {name!r}")
        self.name = name


class NegativeH(GraphFormatError):
    def __init__(self, vertex: str, value: float):
        super().__init__(f"vertex {vertex!r} has invalid heuristic {value}")
        self.vertex = vertex


@dataclass
class ExplicitGraph(StateSpace):
    name: str = "graph"
    initial: str | None = None
    h_values: dict[str, float] = field(default_factory=dict)
    goals: set[str] = field(default_factory=set)
    adjacency: dict[str, list[tuple[str, str]]] = field(default_factory=dict)

    def is_goal(self, state) -> bool:
        return state in self.goals

    def successors(self, state):
        return list(self.adjacency.get(state, ()))

    def encode(self, state) -> bytes:
        return state.encode("utf-8")

    def h(self, state) -> float:
        return self.h_values[state]

    def heuristics(self):
        return {"file": self.h, "zero": zero_heuristic}

    @property
    def vertices(self) -> list[str]:
        return list(self.h_values)

    def n_edges(self) -> int:
        return sum(len(v) for v in self.adjacency.values())


def parse_explicit_graph(text: str) -> ExplicitGraph:
    g = ExplicitGraph()
    edges: list[tuple[int, str, str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kind = parts[0]
        if kind == "graph":
            if len(parts) != 2:
                raise ParseError(lineno, "expected 'graph <name>'")
            g.name = parts[1]
        elif kind == "vertex":
            if len(parts) not in (3, 4) or not parts[2].startswith("h="):
                raise ParseError(lineno, "expected 'vertex <id> h=<float> [goal]'")
            vid = parts[1]
            if vid in g.h_values:
                raise ParseError(lineno, f"vertex {vid!r} declared twice")
            try:
                value = float(parts[2][2:])
            except ValueError:
                raise ParseError(lineno, f"bad heuristic value {parts[2]!r}") from None
            if not (0.0 <= value < math.inf):
                raise NegativeH(vid, value)
            g.h_values[vid] = value
            g.adjacency.setdefault(vid, [])
            if len(parts) == 4:
                if parts[3] != "goal":
                    raise ParseError(lineno, f"unexpected token {parts[3]!r}")
                g.goals.add(vid)
        elif kind == "edge":
            if len(parts) != 4:
                raise ParseError(lineno, "expected 'edge <src> <label> <dst>'")
            edges.append((lineno, parts[1], parts[2], parts[3]))
        elif kind == "init":
            if len(parts) != 2:
                raise ParseError(lineno, "expected 'init <id>'")
            if g.initial is not None:
                raise ParseError(lineno, "init given twice")
            g.initial = parts[1]
        else:
            raise ParseError(lineno, f"unknown directive {kind!r}")

    if g.initial is None:
        raise ParseError(0, "missing init")
    if g.initial not in g.h_values:
        raise DanglingVertex(g.initial)
    for lineno, src, label, dst in edges:
        for v in (src, dst):
            if v not in g.h_values:
                raise DanglingVertex(v)
        out = g.adjacency[src]
        if any(lbl == label for lbl, _ in out):
            raise ParseError(lineno, f"label {label!r} repeated on vertex {src!r}")
        out.append((label, dst))
    return g


def load_explicit_graph(path) -> tuple[ExplicitGraph, callable]:
    """Load a graph file; returns the state space and its stored heuristic."""
    g = parse_explicit_graph(Path(path).read_text())
    return g, g.h


def dump_explicit_graph(g: ExplicitGraph) -> str:
    lines = [f"graph {g.name}"]
    for v, value in g.h_values.items():
        lines.append(f"vertex {v} h={value!r}" + (" goal" if v in g.goals else ""))
    for src, out in g.adjacency.items():
        for label, dst in out:
            lines.append(f"edge {src} {label} {dst}")
    lines.append(f"init {g.initial}")
    return "\n".join(lines) + "\n"


def chain_graph(n: int) -> ExplicitGraph:
    """``v0 -> v1 -> ... -> v{n-1}``; the last vertex is the goal."""
    g = ExplicitGraph(name=f"chain{n}", initial="v0")
    for i in range(n):
        g.h_values[f"v{i}"] = float(n - 1 - i)
        g.adjacency[f"v{i}"] = [(f"a{i}", f"v{i + 1}")] if i + 1 < n else []
    g.goals.add(f"v{n - 1}")
    return g


def random_graph(n: int, seed: int, out_degree: float = 2.0, goal_fraction: float = 0.02,
                 h_noise: float = 1.0) -> ExplicitGraph:
    """Random directed graph; may or may not be solvable.

    Heuristic values are the exact reverse-BFS goal distance (or ``n`` when
    no goal is reachable) plus uniform noise in ``[0, h_noise)``.
    """
    rng = random.Random(seed)
    names = [f"s{i}" for i in range(n)]
    g = ExplicitGraph(name=f"random{n}_{seed}", initial=names[0])
    for v in names:
        g.adjacency[v] = []
    for i, v in enumerate(names):
        k = min(n - 1, int(rng.expovariate(1.0 / out_degree)) if out_degree > 0 else 0)
        targets = rng.sample([t for t in names if t != v], k)
        g.adjacency[v] = [(f"e{j}", t) for j, t in enumerate(targets)]
    n_goals = max(1, int(goal_fraction * n)) if rng.random() < 0.85 else 0
    g.goals = set(rng.sample(names[1:], min(n_goals, n - 1)))
    dist = _reverse_distances(g)
    for v in names:
        g.h_values[v] = float(dist.get(v, n)) + rng.random() * h_noise
    return g


def _reverse_distances(g: ExplicitGraph) -> dict[str, int]:
    rev: dict[str, list[str]] = {v: [] for v in g.adjacency}
    for src, out in g.adjacency.items():
        for _, dst in out:
            rev[dst].append(src)
    dist = {v: 0 for v in g.goals}
    frontier = list(g.goals)
    while frontier:
        nxt = []
        for v in frontier:
            for u in rev[v]:
                if u not in dist:
                    dist[u] = dist[v] + 1
                    nxt.append(u)
        frontier = nxt
    return dist


def generate_chain(params: dict, seed: int) -> ExplicitGraph:
    return chain_graph(int(params.get("n", 50)))


def generate_random(params: dict, seed: int) -> ExplicitGraph:
    return random_graph(int(params.get("n", 200)), seed,
                        float(params.get("out_degree", 2.0)),
                        float(params.get("goal_fraction", 0.02)),
                        float(params.get("h_noise", 1.0)))


def generate_file(params: dict, seed: int) -> ExplicitGraph:
    return load_explicit_graph(params["path"])[0]
