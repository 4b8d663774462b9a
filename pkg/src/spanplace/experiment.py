"""Sweep experiment driver: generate workloads, run algorithms, tabulate spans.

Emits a fixed CSV schema
(``algorithm,sweep_axis,sweep_value,seed,avg_span,replicas,max_load,runtime_ms``)
plus per-cell aggregates and a sidecar of row-level errors.  Identical configs
and seeds reproduce identical CSVs except for the runtime column.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import IO

from .algorithms import ALGORITHMS
from .hgr import load_hgr
from .hypergraph import Hypergraph, InfeasibleError
from .placement import Placement, load_placement
from .spans import SpanReport, average_span
from .workloads import WorkloadSpec, generate_workload

SWEEP_AXES = ("partitions", "query_size", "query_count", "density", "3way", "files")
CSV_COLUMNS = [
    "algorithm",
    "sweep_axis",
    "sweep_value",
    "seed",
    "avg_span",
    "replicas",
    "max_load",
    "runtime_ms",
]
OUTPUT_DIR_ENV = "SPANPLACE_OUT"


@dataclass
class ExperimentConfig:
    algorithms: list[str]
    sweep_axis: str
    sweep_values: list
    trials: int
    n_partitions: int
    capacity: int
    workload: WorkloadSpec | None = None
    workload_files: list[str] = field(default_factory=list)
    base_seed: int = 0
    jobs: int = 1

    def __post_init__(self) -> None:
        if self.sweep_axis not in SWEEP_AXES:
            raise ValueError(f"sweep_axis must be one of {SWEEP_AXES}")
        if not self.sweep_values:
            raise ValueError("sweep_values must be non-empty")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        for name in self.algorithms:
            if name not in ALGORITHMS:
                raise ValueError(f"unknown algorithm {name!r}; known: {sorted(ALGORITHMS)}")
        if self.sweep_axis == "files":
            if not self.workload_files:
                raise ValueError("files sweep needs workload_files")
        elif self.workload is None:
            raise ValueError("non-file sweeps need a workload spec")


def load_experiment_config(path: str) -> ExperimentConfig:
    with open(path, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    workload = None
    if raw.get("workload") is not None:
        workload = WorkloadSpec(**raw["workload"])
    return ExperimentConfig(
        algorithms=list(raw["algorithms"]),
        sweep_axis=raw["sweep_axis"],
        sweep_values=list(raw["sweep_values"]),
        trials=int(raw["trials"]),
        n_partitions=int(raw["n_partitions"]),
        capacity=int(raw["capacity"]),
        workload=workload,
        workload_files=list(raw.get("workload_files", [])),
        base_seed=int(raw.get("base_seed", 0)),
        jobs=int(raw.get("jobs", 1)),
    )


@dataclass(frozen=True)
class ResultRow:
    algorithm: str
    sweep_axis: str
    sweep_value: object
    seed: int
    avg_span: float
    replicas: int
    max_load: int
    runtime_ms: float

    def as_csv(self) -> list:
        return [
            self.algorithm,
            self.sweep_axis,
            self.sweep_value,
            self.seed,
            repr(self.avg_span),
            self.replicas,
            self.max_load,
            f"{self.runtime_ms:.3f}",
        ]


def _specialize(spec: WorkloadSpec, axis: str, value, seed: int) -> WorkloadSpec:
    out = dataclasses.replace(spec, seed=seed)
    if axis in ("query_count", "3way"):
        out = dataclasses.replace(out, query_count=int(value))
    elif axis == "query_size":
        out = dataclasses.replace(out, min_query_size=int(value), max_query_size=int(value))
    elif axis == "density":
        out = dataclasses.replace(out, density=float(value))
    return out


def _cell_workload(config: ExperimentConfig, value, seed: int) -> tuple[Hypergraph, int]:
    """Workload and partition count for one (sweep value, seed) cell."""
    if config.sweep_axis == "files":
        return load_hgr(str(value)), config.n_partitions
    spec = _specialize(config.workload, config.sweep_axis, value, seed)
    _, h = generate_workload(spec)
    n = int(value) if config.sweep_axis == "partitions" else config.n_partitions
    return h, n


def _run_cell(config: ExperimentConfig, value, seed: int) -> tuple[list[ResultRow], list[dict]]:
    rows: list[ResultRow] = []
    errors: list[dict] = []
    h, n = _cell_workload(config, value, seed)
    label = os.path.basename(str(value)) if config.sweep_axis == "files" else value
    for name in config.algorithms:
        fn = ALGORITHMS[name]
        t0 = time.perf_counter()
        try:
            placement = fn(h, n, config.capacity, seed)
        except InfeasibleError as exc:
            errors.append(
                {"algorithm": name, "sweep_value": label, "seed": seed, "error": str(exc)}
            )
            continue
        runtime_ms = (time.perf_counter() - t0) * 1000.0
        report = average_span(placement, h)
        rows.append(
            ResultRow(
                algorithm=name,
                sweep_axis=config.sweep_axis,
                sweep_value=label,
                seed=seed,
                avg_span=float(report.average),
                replicas=placement.replica_count(h),
                max_load=placement.max_load(h),
                runtime_ms=runtime_ms,
            )
        )
    return rows, errors


def _run_cell_star(args) -> tuple[list[ResultRow], list[dict]]:
    return _run_cell(*args)


@dataclass
class ExperimentResult:
    rows: list[ResultRow]
    errors: list[dict]

    def aggregates(self) -> list[dict]:
        """Mean avg_span and runtime per (algorithm, sweep value) cell."""
        cells: dict[tuple, list[ResultRow]] = {}
        for row in self.rows:
            cells.setdefault((row.algorithm, row.sweep_value), []).append(row)
        out = []
        for (algo, value), rows in sorted(cells.items(), key=lambda kv: (kv[0][0], str(kv[0][1]))):
            out.append(
                {
                    "algorithm": algo,
                    "sweep_value": value,
                    "trials": len(rows),
                    "mean_avg_span": sum(r.avg_span for r in rows) / len(rows),
                    "mean_runtime_ms": sum(r.runtime_ms for r in rows) / len(rows),
                }
            )
        return out

    def write_csv(self, stream: IO[str]) -> None:
        writer = csv.writer(stream)
        writer.writerow(CSV_COLUMNS)
        for row in self.rows:
            writer.writerow(row.as_csv())

    def write_outputs(self, out_dir: str) -> dict[str, str]:
        os.makedirs(out_dir, exist_ok=True)
        paths = {
            "results": os.path.join(out_dir, "results.csv"),
            "summary": os.path.join(out_dir, "summary.csv"),
            "errors": os.path.join(out_dir, "errors.json"),
        }
        with open(paths["results"], "w", encoding="utf-8", newline="") as fh:
            self.write_csv(fh)
        with open(paths["summary"], "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["algorithm", "sweep_value", "trials", "mean_avg_span", "mean_runtime_ms"])
            for agg in self.aggregates():
                writer.writerow(
                    [
                        agg["algorithm"],
                        agg["sweep_value"],
                        agg["trials"],
                        repr(agg["mean_avg_span"]),
                        f"{agg['mean_runtime_ms']:.3f}",
                    ]
                )
        with open(paths["errors"], "w", encoding="utf-8") as fh:
            json.dump(self.errors, fh, indent=1, sort_keys=True)
            fh.write("\n")
        return paths


def run_experiment(config: ExperimentConfig) -> ExperimentResult:
    """Run every (sweep value, seed, algorithm) cell and collect rows.

    Infeasible combinations become error records, never run aborts.  Trials
    within a sweep cell run concurrently when ``jobs > 1``; rows come back in
    a deterministic order regardless.
    """
    tasks = [
        (config, value, config.base_seed + t)
        for value in config.sweep_values
        for t in range(config.trials)
    ]
    rows: list[ResultRow] = []
    errors: list[dict] = []
    if config.jobs > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            for cell_rows, cell_errors in pool.map(_run_cell_star, tasks):
                rows.extend(cell_rows)
                errors.extend(cell_errors)
    else:
        for task in tasks:
            cell_rows, cell_errors = _run_cell_star(task)
            rows.extend(cell_rows)
            errors.extend(cell_errors)
    rows.sort(key=lambda r: (r.algorithm, str(r.sweep_value), r.seed))
    errors.sort(key=lambda e: (e["algorithm"], str(e["sweep_value"]), e["seed"]))
    return ExperimentResult(rows=rows, errors=errors)


def evaluate_placement(placement_path: str, hypergraph_path: str) -> SpanReport:
    """Replay a stored placement against a stored workload."""
    h = load_hgr(hypergraph_path)
    placement = load_placement(placement_path)
    missing = set(h.all_item_ids()) - placement.placed_items()
    if missing:
        raise ValueError(f"placement does not cover item {min(missing)}")
    return average_span(placement, h)


def evaluate(placement: Placement, h: Hypergraph) -> SpanReport:
    return average_span(placement, h)
