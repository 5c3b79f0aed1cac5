"""Coverage tables and pairwise scatter data from run records."""

from __future__ import annotations

import csv
import io
import json
from collections import defaultdict
from dataclasses import dataclass, field

from .runner import RunRecord


class ShapeMismatch(ValueError):
    pass


@dataclass
class CoverageCell:
    per_heuristic: dict[str, int]
    runs_per_heuristic: int

    @property
    def max(self) -> int:
        return max(self.per_heuristic.values(), default=0)

    @property
    def sum(self) -> int:
        return sum(self.per_heuristic.values())


@dataclass
class CoverageTable:
    configs: list[str]
    domains: list[str]
    cells: dict[tuple[str, str], CoverageCell] = field(default_factory=dict)

    def total(self, config: str) -> tuple[int, int]:
        """(Max, Sum) over all domains for one config."""
        cells = [self.cells[(d, config)] for d in self.domains if (d, config) in self.cells]
        return sum(c.max for c in cells), sum(c.sum for c in cells)

    def capacity(self, domain: str) -> tuple[int, int]:
        cell = next(c for (d, _), c in self.cells.items() if d == domain)
        return cell.runs_per_heuristic, cell.runs_per_heuristic * len(cell.per_heuristic)

    def to_text(self) -> str:
        head = ["domain", "metric"] + self.configs
        rows = []
        for d in self.domains:
            max_cap, sum_cap = self.capacity(d)
            rows.append([d, f"Max ({max_cap})"] + [str(self.cells[(d, c)].max) for c in self.configs])
            rows.append(["", f"Sum ({sum_cap})"] + [str(self.cells[(d, c)].sum) for c in self.configs])
        max_cap = sum(self.capacity(d)[0] for d in self.domains)
        sum_cap = sum(self.capacity(d)[1] for d in self.domains)
        rows.append(["total", f"Max ({max_cap})"] + [str(self.total(c)[0]) for c in self.configs])
        rows.append(["", f"Sum ({sum_cap})"] + [str(self.total(c)[1]) for c in self.configs])
        widths = [max(len(r[i]) for r in [head] + rows) for i in range(len(head))]
        lines = ["  ".join(v.ljust(w) if i < 2 else v.rjust(w) for i, (v, w) in enumerate(zip(r, widths)))
                 for r in [head] + rows]
        lines.insert(1, "-" * len(lines[0]))
        return "\n".join(lines) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["domain", "config", "heuristics", "runs_per_heuristic", "max", "sum"])
        for d in self.domains:
            for c in self.configs:
                cell = self.cells[(d, c)]
                w.writerow([d, c, len(cell.per_heuristic), cell.runs_per_heuristic, cell.max, cell.sum])
        for c in self.configs:
            mx, sm = self.total(c)
            w.writerow(["total", c, "", "", mx, sm])
        return buf.getvalue()


def _problem_key(r: RunRecord) -> tuple:
    s = r.spec
    return (json.dumps(s.params, sort_keys=True), s.instance_seed, s.heuristic, s.seed)


def coverage(records: list[RunRecord], *, allow_ragged: bool = False) -> CoverageTable:
    """Solved counts per (domain, config) with Max and Sum over heuristics.

    Every config within a domain must cover the same problems. Domains with
    different heuristic counts are rejected unless ``allow_ragged``.
    """
    problems: dict[tuple[str, str], set] = defaultdict(set)
    solved: dict[tuple[str, str], dict[str, int]] = defaultdict(lambda: defaultdict(int))
    configs: list[str] = []
    domains: list[str] = []
    for r in records:
        d, c = r.spec.domain, r.spec.config
        if c not in configs:
            configs.append(c)
        if d not in domains:
            domains.append(d)
        key = _problem_key(r)
        if key in problems[(d, c)]:
            raise ShapeMismatch(f"duplicate run for {d}/{c}: {key}")
        problems[(d, c)].add(key)
        solved[(d, c)][r.spec.heuristic] += r.solved
    table = CoverageTable(configs, domains)
    n_heuristics = set()
    for d in domains:
        shapes = {c: problems.get((d, c), set()) for c in configs}
        first = next(iter(shapes.values()))
        for c, shape in shapes.items():
            if shape != first:
                raise ShapeMismatch(f"domain {d}: config {c} covers different problems")
        heuristics = sorted({k[2] for k in first})
        runs = {h: sum(1 for k in first if k[2] == h) for h in heuristics}
        if len(set(runs.values())) > 1:
            raise ShapeMismatch(f"domain {d}: heuristics have unequal run counts {runs}")
        n_heuristics.add(len(heuristics))
        for c in configs:
            per = {h: solved[(d, c)].get(h, 0) for h in heuristics}
            table.cells[(d, c)] = CoverageCell(per, next(iter(runs.values())))
    if len(n_heuristics) > 1 and not allow_ragged:
        raise ShapeMismatch(f"heuristic counts differ across domains: {sorted(n_heuristics)}")
    return table


def failure_times(records: list[RunRecord]) -> dict[str, float]:
    """Mean wall time of unsolved runs per config."""
    acc: dict[str, list[float]] = defaultdict(list)
    for r in records:
        if not r.solved:
            acc[r.spec.config].append(r.wall_time)
    return {c: sum(v) / len(v) for c, v in acc.items()}


SCATTER_FIELDS = ["domain", "params", "instance_seed", "heuristic", "seed",
                  "x", "y", "category", "x_status", "y_status"]
METRICS = ("wall_time", "expanded", "generated", "plan_length")


def scatter_rows(records: list[RunRecord], x_config: str, y_config: str, metric: str
                 ) -> tuple[list[dict], list[tuple]]:
    """Pair runs of two configs on the same problem.

    Unsolved runs are clipped to a ceiling: the time limit for ``wall_time``
    when one is set, otherwise the largest value seen in the pairing.
    Returns the rows and the problem keys that lacked a partner.
    """
    if metric not in METRICS:
        raise ValueError(f"metric must be one of {METRICS}")
    xs, ys = {}, {}
    for r in records:
        key = (r.spec.domain,) + _problem_key(r)
        if r.spec.config == x_config:
            xs[key] = r
        if r.spec.config == y_config:
            ys[key] = r
    missing = sorted(set(xs) ^ set(ys))
    pairs = [(k, xs[k], ys[k]) for k in sorted(set(xs) & set(ys))]

    def value(r):
        return float(getattr(r, metric))

    seen = [value(r) for _, a, b in pairs for r in (a, b) if r.solved]
    ceiling = max(seen, default=0.0)
    limits = [r.spec.time_limit for _, a, b in pairs for r in (a, b) if r.spec.time_limit]
    if metric == "wall_time" and limits:
        ceiling = max(limits)

    rows = []
    for key, a, b in pairs:
        category = {(True, True): "both", (True, False): "x-only",
                    (False, True): "y-only", (False, False): "neither"}[(a.solved, b.solved)]
        rows.append({
            "domain": key[0], "params": key[1], "instance_seed": key[2], "heuristic": key[3],
            "seed": key[4],
            "x": value(a) if a.solved else ceiling,
            "y": value(b) if b.solved else ceiling,
            "category": category, "x_status": a.status, "y_status": b.status,
        })
    return rows, missing


def scatter_csv(records: list[RunRecord], x_config: str, y_config: str, metric: str) -> str:
    rows, missing = scatter_rows(records, x_config, y_config, metric)
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=SCATTER_FIELDS, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    for key in missing:
        buf.write(f"# MISSING_PAIR {json.dumps(list(key))}\n")
    return buf.getvalue()
