"""Workload-driven data placement and replication minimizing average query span."""

__version__ = "0.1.0"

from .hypergraph import (
    DataItem,
    Hyperedge,
    Hypergraph,
    InfeasibleError,
    avg_items_per_query,
    build_hypergraph,
    first_fit_partition_count,
    min_partitions_needed,
    total_weight,
)
from .hgr import ParseError, load_hgr, parse_benchmark_hypergraph, save_hgr, write_benchmark_hypergraph
from .placement import Placement, ReplicaLedger, import_external_partition, load_placement, save_placement
from .partitioner import PartitionConfig, compute_ubfactor, enforce_capacity, hpa_partition
from .spans import (
    SpanReport,
    average_span,
    get_accessed_items,
    get_query_span,
    get_spanning_partitions,
    hitting_set,
    k_densest_nodes,
    prune_by_span,
    prune_to_size,
)
from .algorithms import (
    ALGORITHMS,
    MoveCandidate,
    baseline_partition,
    ds,
    ihpa,
    ihpa_3way,
    lmbr,
    lmbr_max_gain,
    pra,
    pra_3way,
    random_placement,
    sda_3way,
)
from .workloads import (
    DataItemGraph,
    WorkloadSpec,
    gen_item_graph,
    gen_random_queries,
    gen_snowflake,
    gen_tpch_weights,
    generate_workload,
)
from .experiment import (
    ExperimentConfig,
    ExperimentResult,
    ResultRow,
    evaluate_placement,
    run_experiment,
)

__all__ = [
    "ALGORITHMS",
    "DataItem",
    "DataItemGraph",
    "ExperimentConfig",
    "ExperimentResult",
    "Hyperedge",
    "Hypergraph",
    "InfeasibleError",
    "MoveCandidate",
    "ParseError",
    "PartitionConfig",
    "Placement",
    "ReplicaLedger",
    "ResultRow",
    "SpanReport",
    "WorkloadSpec",
    "avg_items_per_query",
    "average_span",
    "baseline_partition",
    "build_hypergraph",
    "compute_ubfactor",
    "ds",
    "enforce_capacity",
    "evaluate_placement",
    "first_fit_partition_count",
    "gen_item_graph",
    "gen_random_queries",
    "gen_snowflake",
    "gen_tpch_weights",
    "generate_workload",
    "get_accessed_items",
    "get_query_span",
    "get_spanning_partitions",
    "hitting_set",
    "hpa_partition",
    "ihpa",
    "ihpa_3way",
    "import_external_partition",
    "k_densest_nodes",
    "lmbr",
    "lmbr_max_gain",
    "load_hgr",
    "load_placement",
    "min_partitions_needed",
    "parse_benchmark_hypergraph",
    "pra",
    "pra_3way",
    "prune_by_span",
    "prune_to_size",
    "random_placement",
    "run_experiment",
    "save_hgr",
    "save_placement",
    "sda_3way",
    "total_weight",
    "write_benchmark_hypergraph",
]
