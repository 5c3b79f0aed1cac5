"""Built-in benchmark domains and the instance generator."""

from __future__ import annotations

from ..statespace import StateSpace
from . import counters, explicit, grid, plateau, puzzle
from .counters import CountersDomain
from .explicit import (
    DanglingVertex,
    ExplicitGraph,
    GraphFormatError,
    NegativeH,
    ParseError,
    chain_graph,
    dump_explicit_graph,
    load_explicit_graph,
    parse_explicit_graph,
    random_graph,
)
from .grid import GridDomain, UnsolvableParams
from .plateau import PlateauDomain
from .puzzle import SlidingPuzzleDomain

GENERATORS = {
    "grid": grid.generate,
    "counters": counters.generate,
    "puzzle": puzzle.generate,
    "plateau": plateau.generate,
    "chain": explicit.generate_chain,
    "random-graph": explicit.generate_random,
    "explicit": explicit.generate_file,
}

DEFAULT_HEURISTIC = {
    "grid": "manhattan",
    "counters": "violations",
    "puzzle": "manhattan",
    "plateau": "layer",
    "chain": "file",
    "random-graph": "file",
    "explicit": "file",
}


def build_space(domain: str, params: dict | None = None, seed: int = 0) -> StateSpace:
    try:
        gen = GENERATORS[domain]
    except KeyError:
        raise ValueError(f"unknown domain {domain!r}; choose from {sorted(GENERATORS)}") from None
    return gen(dict(params or {}), seed)


def generate_instance(domain: str, params: dict | None = None, seed: int = 0,
                      heuristic: str | None = None):
    """Deterministic ``(space, heuristic)`` for ``(domain, params, seed)``."""
    space = build_space(domain, params, seed)
    name = heuristic or DEFAULT_HEURISTIC[domain]
    table = space.heuristics()
    if name not in table:
        raise ValueError(f"domain {domain!r} has no heuristic {name!r}; have {sorted(table)}")
    return space, table[name]


__all__ = [
    "CountersDomain", "DanglingVertex", "ExplicitGraph", "GraphFormatError", "GridDomain",
    "NegativeH", "ParseError", "PlateauDomain", "SlidingPuzzleDomain", "UnsolvableParams",
    "build_space", "chain_graph", "dump_explicit_graph", "generate_instance",
    "load_explicit_graph", "parse_explicit_graph", "random_graph",
]
