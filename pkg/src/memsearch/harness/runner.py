"""Run specifications, per-run records and the parallel matrix runner."""

from __future__ import annotations

import csv
import io
import itertools
import json
import logging
import traceback
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

from ..core import Limits, Status, gbfs, make_closed
from ..domains import DEFAULT_HEURISTIC, generate_instance
from ..gondor import OutpostPolicy, beacons_in_order, gondor
from ..statespace import Plan, validate_plan
from ..variants import gbfs_retrace, gbfs_unlimited, surviving_suffix

log = logging.getLogger(__name__)

ALGOS = ("gbfs", "gbfs-u", "gbfs-r", "gondor")


@dataclass(frozen=True)
class RunSpec:
    algo: str
    domain: str
    params: dict = field(default_factory=dict, hash=False)
    instance_seed: int = 0
    heuristic: str | None = None
    closed: str = "exact"
    bloom_capacity: int = 10**6
    bloom_fpr: float = 1e-6
    outpost_p: float = 0.01
    seed: int = 0
    node_budget: int | None = None
    time_limit: float | None = None
    max_expansions: int | None = None
    reconstruct: str = "gondor"
    segment_heuristic: str = "goal"

    def __post_init__(self):
        if self.algo not in ALGOS:
            raise ValueError(f"unknown algo {self.algo!r}")
        if self.closed not in ("exact", "bloom"):
            raise ValueError(f"unknown closed list {self.closed!r}")
        if self.heuristic is None:
            object.__setattr__(self, "heuristic", DEFAULT_HEURISTIC.get(self.domain))

    @property
    def config(self) -> str:
        """Column label such as ``gondor`` or ``gondor_bf``."""
        return self.algo + ("_bf" if self.closed == "bloom" else "")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> RunSpec:
        names = {f.name for f in fields(cls)}
        unknown = set(d) - names
        if unknown:
            raise ValueError(f"unknown RunSpec fields {sorted(unknown)}")
        return cls(**d)


# Column order of every record CSV.
RECORD_FIELDS = [
    "algo", "closed", "domain", "params", "instance_seed", "heuristic", "bloom_capacity",
    "bloom_fpr", "outpost_p", "seed", "node_budget", "time_limit", "max_expansions",
    "reconstruct", "segment_heuristic",
    "status", "plan_length", "expanded", "generated", "duplicates_pruned", "cleanups",
    "outposts_created", "reconstruction_expanded", "peak_live_nodes", "evicted",
    "closed_bytes", "max_phase_generated", "saturated", "beacons_ok", "detail", "wall_time",
]


@dataclass
class RunRecord:
    spec: RunSpec
    status: str
    plan_length: int = -1
    expanded: int = 0
    generated: int = 0
    duplicates_pruned: int = 0
    cleanups: int = 0
    outposts_created: int = 0
    reconstruction_expanded: int = 0
    peak_live_nodes: int = 0
    evicted: int = 0
    closed_bytes: int = 0
    max_phase_generated: int = 0
    saturated: bool = False
    beacons_ok: bool | None = None
    detail: str = ""
    wall_time: float = 0.0
    plan: Plan | None = field(default=None, repr=False, compare=False)

    @property
    def solved(self) -> bool:
        return self.status == "SOLVED"

    def row(self) -> dict:
        d = self.spec.to_dict()
        d["params"] = json.dumps(d["params"], sort_keys=True)
        for name in RECORD_FIELDS[15:]:
            d[name] = getattr(self, name)
        return {k: d[k] for k in RECORD_FIELDS}

    def comparable(self) -> dict:
        """Every field except wall time."""
        d = self.row()
        d.pop("wall_time")
        return d

    @classmethod
    def from_row(cls, row: dict) -> RunRecord:
        spec = RunSpec.from_dict({
            "algo": row["algo"], "closed": row["closed"], "domain": row["domain"],
            "params": json.loads(row["params"]), "instance_seed": int(row["instance_seed"]),
            "heuristic": row["heuristic"], "bloom_capacity": int(row["bloom_capacity"]),
            "bloom_fpr": float(row["bloom_fpr"]), "outpost_p": float(row["outpost_p"]),
            "seed": int(row["seed"]), "node_budget": _opt(row["node_budget"], int),
            "time_limit": _opt(row["time_limit"], float),
            "max_expansions": _opt(row["max_expansions"], int),
            "reconstruct": row["reconstruct"], "segment_heuristic": row["segment_heuristic"],
        })
        ints = ["plan_length", "expanded", "generated", "duplicates_pruned", "cleanups",
                "outposts_created", "reconstruction_expanded", "peak_live_nodes", "evicted",
                "closed_bytes", "max_phase_generated"]
        kw = {k: int(row[k]) for k in ints}
        return cls(spec, row["status"], saturated=row["saturated"] == "True",
                   beacons_ok=None if row["beacons_ok"] in ("", "None") else row["beacons_ok"] == "True",
                   detail=row["detail"], wall_time=float(row["wall_time"]), **kw)


def _opt(text: str, conv):
    return None if text in ("", "None") else conv(text)


def run_one(spec: RunSpec) -> RunRecord:
    """Execute one run. Exceptions become an ERROR record."""
    try:
        return _run(spec)
    except Exception as exc:  # noqa: BLE001 - failures are records
        log.debug("run failed: %s", traceback.format_exc())
        return RunRecord(spec, Status.ERROR.value, detail=f"{type(exc).__name__}: {exc}")


def _run(spec: RunSpec) -> RunRecord:
    space, h = generate_instance(spec.domain, spec.params, spec.instance_seed, spec.heuristic)
    closed = make_closed(spec.closed, spec.bloom_capacity, spec.bloom_fpr)
    limits = Limits(None, spec.time_limit, spec.max_expansions)
    L = spec.node_budget
    beacons = None
    saturated = False
    max_phase = 0
    detail = ""

    if spec.algo == "gbfs":
        out = gbfs(space, h, closed, Limits(L, spec.time_limit, spec.max_expansions))
        status, plan, stats = out.status.value, out.plan, out.stats
    elif spec.algo == "gbfs-u":
        res = gbfs_unlimited(space, None, h, L, limits, closed=closed)
        stats, plan = res.stats, None
        if res.status == "SUCCESS":
            actions, root = surviving_suffix(res.terminal)
            if root.state == space.initial:
                status, plan = "SOLVED", Plan(actions)
            else:
                status = Status.VERIFIED.value
        elif res.status == "FAILURE":
            status = "EXHAUSTED" if stats.evicted == 0 else Status.INCOMPLETE.value
        else:
            status = res.status
    elif spec.algo == "gbfs-r":
        out = gbfs_retrace(space, h, L, limits,
                           closed_factory=lambda: make_closed(spec.closed, spec.bloom_capacity,
                                                              spec.bloom_fpr))
        status, plan, stats, detail = out.status.value, out.plan, out.stats, out.detail
    else:
        policy = OutpostPolicy.bernoulli(spec.outpost_p, spec.seed)
        out = gondor(space, h, policy, closed, L, limits, reconstruct=spec.reconstruct,
                     segment_heuristic=spec.segment_heuristic)
        status, plan, stats, detail = out.status.value, out.plan, out.stats, out.detail
        saturated = out.saturated
        max_phase = max((e.generated_in_phase for e in out.cleanup_events), default=0)
        if out.solved:
            beacons = out.beacons

    record = RunRecord(spec, status, -1, stats.expanded, stats.generated,
                       stats.duplicates_pruned, stats.cleanups, stats.outposts_created,
                       stats.reconstruction_expanded, stats.peak_live_nodes, stats.evicted,
                       stats.closed_bytes, max_phase, saturated, None, detail,
                       stats.wall_time, plan)
    if status == "SOLVED":
        report = validate_plan(space, space.initial, plan, warn=False)
        if not report.valid:
            record.status = Status.ERROR.value
            record.detail = f"plan failed validation: {report.error} at {report.index}"
            return record
        record.plan_length = len(plan)
        if beacons is not None:
            record.beacons_ok = beacons_in_order(report.path, beacons)
            if not record.beacons_ok:
                record.status = Status.ERROR.value
                record.detail = "beacons out of order"
    return record


def run_matrix(specs: list[RunSpec], workers: int = 1) -> list[RunRecord]:
    """Run every spec in isolation; records come back in spec order."""
    if not specs:
        raise ValueError("empty run matrix")
    if workers <= 1:
        return [run_one(s) for s in specs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run_one, specs, chunksize=max(1, len(specs) // (8 * workers))))


def expand_config(config: dict) -> list[RunSpec]:
    """Turn a matrix config document into RunSpecs.

    Keys: ``defaults`` (RunSpec fields), ``runs`` (explicit RunSpec dicts),
    ``instances`` (each with ``domain``, optional ``params``,
    ``instance_seeds`` and ``heuristics``) and ``grid`` (RunSpec fields
    mapped to lists, expanded as a cartesian product).
    """
    defaults = dict(config.get("defaults", {}))
    specs = [RunSpec.from_dict({**defaults, **r}) for r in config.get("runs", [])]
    grid = config.get("grid", {})
    keys = sorted(grid)
    for inst in config.get("instances", []):
        inst = dict(inst)
        domain = inst.pop("domain")
        params = inst.pop("params", {})
        seeds = inst.pop("instance_seeds", [inst.pop("instance_seed", 0)])
        heuristics = inst.pop("heuristics", [inst.pop("heuristic", None)])
        for iseed, hname, combo in itertools.product(
                seeds, heuristics, itertools.product(*(grid[k] for k in keys))):
            d = {**defaults, **inst, **dict(zip(keys, combo)), "domain": domain,
                 "params": params, "instance_seed": iseed, "heuristic": hname}
            specs.append(RunSpec.from_dict(d))
    if not specs:
        raise ValueError("config produced no runs")
    return specs


def records_to_csv(records, stream=None) -> str | None:
    own = stream is None
    stream = io.StringIO() if own else stream
    writer = csv.DictWriter(stream, fieldnames=RECORD_FIELDS, lineterminator="\n")
    writer.writeheader()
    for r in records:
        writer.writerow(r.row())
    return stream.getvalue() if own else None


def read_records(path) -> list[RunRecord]:
    """Read a merged CSV, or every ``*.csv`` under a directory's ``runs/``."""
    path = Path(path)
    if path.is_dir():
        merged = path / "records.csv"
        files = [merged] if merged.exists() else sorted((path / "runs").glob("*.csv"))
    else:
        files = [path]
    out = []
    for f in files:
        with open(f, newline="") as fh:
            out.extend(RunRecord.from_row(row) for row in csv.DictReader(fh))
    return out


def write_matrix_output(records, out_dir) -> Path:
    out = Path(out_dir)
    (out / "runs").mkdir(parents=True, exist_ok=True)
    for i, r in enumerate(records):
        (out / "runs" / f"run_{i:05d}.csv").write_text(records_to_csv([r]))
    merged = out / "records.csv"
    merged.write_text(records_to_csv(records))
    return merged
