"""Command-line front end.

Subcommands: generate, partition, place, evaluate, experiment, oracle.
Errors print a one-line JSON object to stderr and exit nonzero.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__
from .algorithms import ALGORITHMS
from .experiment import (
    OUTPUT_DIR_ENV,
    ExperimentConfig,
    evaluate_placement,
    load_experiment_config,
    run_experiment,
)
from .hgr import load_hgr, save_hgr
from .hypergraph import min_partitions_needed, total_weight
from .partitioner import PartitionConfig, enforce_capacity, hpa_partition
from .placement import (
    Placement,
    save_placement,
    write_placement_pairs,
)
from .spans import average_span, get_query_span
from .workloads import generate_workload, load_workload_spec


def _out_dir(args) -> str:
    return args.out or os.environ.get(OUTPUT_DIR_ENV, ".")


def _resolve_capacity(h, args) -> int:
    if getattr(args, "capacity_for_ne", None):
        total = total_weight(h.all_item_ids(), h)
        return -(-total // args.capacity_for_ne)
    if args.c is None:
        raise ValueError("--c (capacity) is required unless --capacity-for-ne is given")
    return args.c


def cmd_generate(args) -> int:
    spec = load_workload_spec(args.spec)
    if args.seed is not None:
        spec.seed = args.seed
    graph, h = generate_workload(spec)
    prefix = args.prefix
    save_hgr(h, prefix + ".hgr")
    with open(prefix + ".weights", "w", encoding="utf-8") as fh:
        for w in graph.weights:
            fh.write(f"{w}\n")
    print(
        json.dumps(
            {
                "hgr": prefix + ".hgr",
                "weights": prefix + ".weights",
                "items": h.num_items,
                "edges": h.num_edges,
                "queries": h.query_count,
            }
        )
    )
    return 0


def cmd_partition(args) -> int:
    h = load_hgr(args.workload)
    capacity = _resolve_capacity(h, args)
    config = PartitionConfig(
        k=args.n, capacity=capacity, ubfactor=args.ubfactor, seed=args.seed
    )
    placement = enforce_capacity(hpa_partition(h, config), h)
    with open(args.assignment, "w", encoding="utf-8") as fh:
        part_of = {}
        for pid, part in enumerate(placement.partitions):
            for v in part:
                part_of[v] = pid
        for v in range(h.num_items):
            fh.write(f"{part_of[v]}\n")
    report = average_span(placement, h)
    print(json.dumps({"assignment": args.assignment, **report.summary()}))
    return 0


def cmd_place(args) -> int:
    h = load_hgr(args.workload)
    capacity = _resolve_capacity(h, args)
    fn = ALGORITHMS[args.algo]
    placement = fn(h, args.n, capacity, args.seed)
    save_placement(placement, args.placement)
    if args.pairs:
        with open(args.pairs, "w", encoding="utf-8") as fh:
            write_placement_pairs(placement, fh)
    report = average_span(placement, h)
    summary = {
        "algorithm": args.algo,
        "placement": args.placement,
        "n_partitions": placement.num_partitions,
        "replicas": placement.replica_count(h),
        "max_load": placement.max_load(h),
        **report.summary(),
    }
    print(json.dumps(summary))
    return 0


def cmd_evaluate(args) -> int:
    report = evaluate_placement(args.placement, args.workload)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            report.write_csv(fh)
    if args.format == "json":
        print(json.dumps(report.summary()))
    else:
        print("edge_id,multiplicity,span")
        for eid, mult, span in report.edge_spans:
            print(f"{eid},{mult},{span}")
    return 0


def cmd_experiment(args) -> int:
    config = load_experiment_config(args.config)
    if args.jobs is not None:
        config.jobs = args.jobs
    if args.workload_files:
        config.workload_files = args.workload_files
        config.sweep_values = args.workload_files
    result = run_experiment(config)
    paths = result.write_outputs(_out_dir(args))
    print(
        json.dumps(
            {"rows": len(result.rows), "errors": len(result.errors), **paths}
        )
    )
    return 0


def cmd_oracle(args) -> int:
    from .exact import exact_min_bins, exact_min_span
    from .placement import load_placement

    h = load_hgr(args.workload)
    if args.what == "span":
        placement = load_placement(args.placement)
        print("edge_id,greedy_span,exact_span")
        for e in h.edges:
            print(f"{e.id},{get_query_span(placement, e)},{exact_min_span(placement, e)}")
        return 0
    if args.what == "pack":
        weights = h.weights()
        bound = min_partitions_needed(h, args.c)
        exact = exact_min_bins(weights, args.c)
        print(json.dumps({"weight_lower_bound": bound, "exact_min_partitions": exact}))
        return 0
    raise ValueError(f"unknown oracle {args.what!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spanplace",
        description="Replicated data placement minimizing average query span",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate a workload from a spec file")
    p.add_argument("--spec", required=True, help="workload spec (JSON or key=value)")
    p.add_argument("--seed", type=int, default=None, help="override the spec seed")
    p.add_argument("--prefix", required=True, help="output path prefix")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("partition", help="disjoint partitioning only (no replication)")
    p.add_argument("workload", help=".hgr workload file")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--c", type=int, default=None, help="partition capacity")
    p.add_argument(
        "--capacity-for-ne",
        type=int,
        default=None,
        help="derive capacity so this many partitions are minimally needed",
    )
    p.add_argument("--ubfactor", type=float, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--assignment", required=True, help="output assignment file")
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("place", help="run one placement algorithm")
    p.add_argument("workload", help=".hgr workload file")
    p.add_argument("--algo", required=True, choices=sorted(ALGORITHMS))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--c", type=int, default=None)
    p.add_argument("--capacity-for-ne", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--placement", required=True, help="output placement JSON")
    p.add_argument("--pairs", default=None, help="also write flat item/partition pairs")
    p.set_defaults(func=cmd_place)

    p = sub.add_parser("evaluate", help="replay a stored placement")
    p.add_argument("placement", help="placement JSON")
    p.add_argument("workload", help=".hgr workload file")
    p.add_argument("--csv", default=None, help="write per-edge spans CSV here")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("experiment", help="run a full sweep experiment")
    p.add_argument("--config", required=True, help="experiment config JSON")
    p.add_argument("--out", default=None, help=f"output dir (default ${OUTPUT_DIR_ENV} or .)")
    p.add_argument("--jobs", type=int, default=None, help="parallel trial workers")
    p.add_argument(
        "workload_files", nargs="*", help="benchmark .hgr files for a files sweep"
    )
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("oracle", help="brute-force validators for micro instances")
    p.add_argument("what", choices=("span", "pack"))
    p.add_argument("workload", help=".hgr workload file")
    p.add_argument("--placement", default=None, help="placement JSON (span oracle)")
    p.add_argument("--c", type=int, default=None, help="capacity (pack oracle)")
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:  # machine-parsable failure contract
        print(
            json.dumps({"error": type(exc).__name__, "message": str(exc)}),
            file=sys.stderr,
        )
        return 1


if __name__ == "__main__":
    sys.exit(main())
