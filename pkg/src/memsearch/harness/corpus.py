"""Desk-scale benchmark corpora used by the acceptance suite and examples.

Budgets are node counts calibrated for a laptop, not the paper-scale
RAM limits: each corpus entry carries the live-node budget ``L`` that
forces memory pressure on that instance family.
"""

from __future__ import annotations

from dataclasses import dataclass

from .runner import RunSpec


@dataclass(frozen=True)
class CorpusEntry:
    domain: str
    params: dict
    instance_seeds: tuple[int, ...]
    heuristics: tuple[str, ...]
    node_budget: int


DESK_CORPUS = (
    CorpusEntry("grid", {"width": 12, "height": 12, "obstacle_density": 0.25}, (0, 1, 2),
                ("manhattan", "anti-manhattan"), 40),
    CorpusEntry("counters", {"n": 4, "max_value": 6}, (0, 1, 2),
                ("violations", "violated-pairs"), 60),
    CorpusEntry("puzzle", {"k": 3, "scramble": 18}, (0, 1, 2), ("manhattan", "misplaced"), 80),
    CorpusEntry("plateau", {"width": 60, "depth": 3}, (0, 1, 2), ("layer", "noisy-layer"), 80),
    CorpusEntry("chain", {"n": 50}, (0,), ("file", "zero"), 10),
)

# Plateau family for the coverage-direction check: wide layers, budget near
# the median node count plain GBFS needs.
PLATEAU_CORPUS = CorpusEntry("plateau", {"width": 200, "depth": 3}, tuple(range(20)),
                             ("layer", "noisy-layer"), 460)


def corpus_specs(entries=DESK_CORPUS, algos=("gbfs", "gbfs-u", "gbfs-r", "gondor"),
                 closed=("exact", "bloom"), seeds=range(10), budgeted: bool = True,
                 **overrides) -> list[RunSpec]:
    specs = []
    for e in entries:
        for iseed in e.instance_seeds:
            for hname in e.heuristics:
                for algo in algos:
                    for c in closed:
                        for seed in seeds:
                            fields = dict(algo=algo, domain=e.domain, params=dict(e.params),
                                          instance_seed=iseed, heuristic=hname, closed=c,
                                          seed=seed,
                                          node_budget=e.node_budget if budgeted else None)
                            fields.update(overrides)
                            specs.append(RunSpec(**fields))
    return specs
