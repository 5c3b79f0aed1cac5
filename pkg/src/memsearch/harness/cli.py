"""``search`` command line: single runs, run matrices and reports."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .report import METRICS, ShapeMismatch, coverage, failure_times, scatter_csv
from .runner import (
    ALGOS,
    RunSpec,
    expand_config,
    read_records,
    records_to_csv,
    run_matrix,
    run_one,
    write_matrix_output,
)

EXIT_OK, EXIT_USAGE, EXIT_RUN = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="search", description="Memory-bounded greedy search experiments.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="run one solver on one instance")
    run.add_argument("--algo", choices=ALGOS, required=True)
    run.add_argument("--domain", required=True)
    run.add_argument("--params", default="{}", help="domain parameters as JSON")
    run.add_argument("--instance-seed", type=int, default=0)
    run.add_argument("--heuristic")
    run.add_argument("--closed", choices=("exact", "bloom"), default="exact")
    run.add_argument("--bloom-capacity", type=int, default=10**6)
    run.add_argument("--bloom-fpr", type=float, default=1e-6)
    run.add_argument("--node-budget", type=int)
    run.add_argument("--time-limit", type=float)
    run.add_argument("--max-expansions", type=int)
    run.add_argument("--outpost-p", type=float, default=0.01)
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--reconstruct", choices=("plain", "gondor"), default="gondor")
    run.add_argument("--segment-heuristic", choices=("goal", "zero"), default="goal")
    run.add_argument("--show-plan", action="store_true", help="print the plan after the record")

    mat = sub.add_parser("matrix", help="run a JSON-configured matrix")
    mat.add_argument("--config", required=True, type=Path)
    mat.add_argument("--out", required=True, type=Path)
    mat.add_argument("--workers", type=int, default=1)

    rep = sub.add_parser("report", help="summarise recorded runs")
    rsub = rep.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    cov = rsub.add_parser("coverage")
    cov.add_argument("--records", required=True, type=Path)
    cov.add_argument("--csv", type=Path, help="also write the table as CSV")
    cov.add_argument("--allow-ragged", action="store_true")
    sc = rsub.add_parser("scatter")
    sc.add_argument("--records", required=True, type=Path)
    sc.add_argument("--x", required=True, help="config label, e.g. gbfs")
    sc.add_argument("--y", required=True, help="config label, e.g. gondor_bf")
    sc.add_argument("--metric", choices=METRICS, default="wall_time")
    sc.add_argument("--out", type=Path)
    return p


def _cmd_run(args) -> int:
    try:
        params = json.loads(args.params)
        spec = RunSpec(algo=args.algo, domain=args.domain, params=params,
                       instance_seed=args.instance_seed, heuristic=args.heuristic,
                       closed=args.closed, bloom_capacity=args.bloom_capacity,
                       bloom_fpr=args.bloom_fpr, outpost_p=args.outpost_p, seed=args.seed,
                       node_budget=args.node_budget, time_limit=args.time_limit,
                       max_expansions=args.max_expansions, reconstruct=args.reconstruct,
                       segment_heuristic=args.segment_heuristic)
    except (ValueError, json.JSONDecodeError) as exc:
        print(f"search: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    record = run_one(spec)
    sys.stdout.write(records_to_csv([record]))
    if args.show_plan and record.plan is not None:
        print(" ".join(record.plan.actions))
    return EXIT_RUN if record.status == "ERROR" else EXIT_OK


def _cmd_matrix(args) -> int:
    try:
        specs = expand_config(json.loads(args.config.read_text()))
    except (OSError, ValueError, TypeError, KeyError) as exc:
        print(f"search: error: bad config: {exc}", file=sys.stderr)
        return EXIT_USAGE
    records = run_matrix(specs, args.workers)
    merged = write_matrix_output(records, args.out)
    errors = sum(r.status == "ERROR" for r in records)
    solved = sum(r.solved for r in records)
    print(f"{len(records)} runs, {solved} solved, {errors} errors -> {merged}")
    return EXIT_OK


def _cmd_report(args) -> int:
    try:
        records = read_records(args.records)
    except (OSError, KeyError, ValueError) as exc:
        print(f"search: error: cannot read records: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if not records:
        print("search: error: no records found", file=sys.stderr)
        return EXIT_USAGE
    if args.kind == "coverage":
        try:
            table = coverage(records, allow_ragged=args.allow_ragged)
        except ShapeMismatch as exc:
            print(f"search: error: SHAPE_MISMATCH: {exc}", file=sys.stderr)
            return EXIT_RUN
        sys.stdout.write(table.to_text())
        times = failure_times(records)
        if times:
            print("mean wall time of failed runs: "
                  + ", ".join(f"{c}={t:.3f}s" for c, t in sorted(times.items())))
        if args.csv:
            args.csv.write_text(table.to_csv())
        return EXIT_OK
    try:
        text = scatter_csv(records, args.x, args.y, args.metric)
    except ValueError as exc:
        print(f"search: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.out:
        args.out.write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    handler = {"run": _cmd_run, "matrix": _cmd_matrix, "report": _cmd_report}[args.command]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())
