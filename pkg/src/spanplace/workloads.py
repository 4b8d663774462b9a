"""Synthetic query workload generators.

Three families: ``random`` (queries are connected subgraphs of a random
data-item graph of chosen density), ``snowflake`` (the item graph is a tree of
tables, each a star of attribute items), and ``tpch`` (the snowflake shape of
a TPC-H-like schema with heterogeneous column weights).
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field, fields

from .hypergraph import Hypergraph, build_hypergraph

KINDS = ("random", "snowflake", "tpch")


@dataclass
class WorkloadSpec:
    """Generator parameters; not every field applies to every kind."""

    kind: str = "random"
    item_count: int = 1000
    query_count: int = 4000
    min_query_size: int = 3
    max_query_size: int = 11
    density: float = 20.0  # item-graph edges per node (random kind)
    levels: int = 3  # snowflake: table-tree tiers
    degree: int = 5  # snowflake: children per table
    attrs_per_table: int = 15
    scale: float = 25.0  # tpch: scale factor
    seed: int = 0

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown workload kind {self.kind!r}; expected one of {KINDS}")
        if not (1 <= self.min_query_size <= self.max_query_size):
            raise ValueError("need 1 <= min_query_size <= max_query_size")
        if self.kind == "random":
            if self.max_query_size > self.item_count:
                raise ValueError("max_query_size exceeds the item count")
            if self.density < 1:
                raise ValueError("density must be >= 1 to keep the item graph connected")
        if self.query_count < 1:
            raise ValueError("query_count must be >= 1")


def load_workload_spec(path: str) -> WorkloadSpec:
    """Read a spec from JSON or ``key = value`` text."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        raw = json.loads(text)
    else:
        raw = {}
        for line in text.splitlines():
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"expected 'key = value', got {line!r}")
            key, val = (part.strip() for part in line.split("=", 1))
            raw[key] = val
    known = {f.name: f.type for f in fields(WorkloadSpec)}
    kwargs = {}
    for key, val in raw.items():
        if key not in known:
            raise ValueError(f"unknown workload spec key {key!r}")
        if key == "kind":
            kwargs[key] = str(val)
        elif key in ("density", "scale"):
            kwargs[key] = float(val)
        else:
            kwargs[key] = int(val)
    return WorkloadSpec(**kwargs)


@dataclass
class DataItemGraph:
    """Simple undirected graph over data items, with per-item weights."""

    num_nodes: int
    edges: list[tuple[int, int]]
    weights: list[int] = field(default_factory=list)

    def __post_init__(self) -> None:
        if not self.weights:
            self.weights = [1] * self.num_nodes
        seen = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop at node {u}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ValueError(f"duplicate edge {key}")
            seen.add(key)
        self.adjacency: list[list[int]] = [[] for _ in range(self.num_nodes)]
        for u, v in self.edges:
            self.adjacency[u].append(v)
            self.adjacency[v].append(u)
        for nbrs in self.adjacency:
            nbrs.sort()


def gen_item_graph(spec: WorkloadSpec) -> DataItemGraph:
    """Connected simple graph with floor(density * |D|) edges.

    A random spanning tree guarantees connectivity; the remaining edges are
    drawn uniformly without replacement from the absent pairs.
    """
    n = spec.item_count
    target = int(spec.density * n)
    max_edges = n * (n - 1) // 2
    if target > max_edges:
        raise ValueError(
            f"density {spec.density} asks for {target} edges but only {max_edges} exist"
        )
    if n > 1 and target < n - 1:
        raise ValueError("density too low for a connected graph")
    rng = random.Random(spec.seed)
    order = list(range(n))
    rng.shuffle(order)
    chosen: set[tuple[int, int]] = set()
    for i in range(1, n):
        u, v = order[i], order[rng.randrange(i)]
        chosen.add((min(u, v), max(u, v)))
    need = target - len(chosen)
    if need > 0:
        if target > 0.5 * max_edges:
            pool = [
                (u, v) for u in range(n) for v in range(u + 1, n) if (u, v) not in chosen
            ]
            rng.shuffle(pool)
            chosen.update(pool[:need])
        else:
            while need > 0:
                u = rng.randrange(n)
                v = rng.randrange(n)
                if u == v:
                    continue
                key = (min(u, v), max(u, v))
                if key not in chosen:
                    chosen.add(key)
                    need -= 1
    return DataItemGraph(num_nodes=n, edges=sorted(chosen))


def _grow_connected(graph: DataItemGraph, size: int, rng: random.Random) -> set[int]:
    start = rng.randrange(graph.num_nodes)
    chosen = {start}
    frontier = set(graph.adjacency[start])
    while len(chosen) < size:
        if not frontier:
            raise ValueError("graph too small or disconnected for the requested query size")
        pick = rng.choice(sorted(frontier))
        chosen.add(pick)
        frontier.discard(pick)
        frontier.update(v for v in graph.adjacency[pick] if v not in chosen)
    return chosen


def gen_random_queries(graph: DataItemGraph, spec: WorkloadSpec) -> Hypergraph:
    """Sample query_count connected subgraphs, sizes uniform in the size bounds."""
    if spec.max_query_size > graph.num_nodes:
        raise ValueError("max_query_size exceeds the item-graph size")
    rng = random.Random(spec.seed + 0x5EED)
    queries = [
        _grow_connected(graph, rng.randint(spec.min_query_size, spec.max_query_size), rng)
        for _ in range(spec.query_count)
    ]
    return build_hypergraph(queries, weights=graph.weights)


# -- snowflake ---------------------------------------------------------------


def _snowflake_tables(spec: WorkloadSpec) -> list[int]:
    """Sizes of each table (attribute counts), summing exactly to item_count."""
    full, rem = divmod(spec.item_count, spec.attrs_per_table)
    sizes = [spec.attrs_per_table] * full + ([rem] if rem else [])
    if not sizes:
        raise ValueError("item_count must be >= 1")
    return sizes


def _snowflake_tree(num_tables: int, levels: int, degree: int) -> list[int]:
    """Parent index per table (root: -1), filled tier by tier.

    The leaf tier absorbs any tables beyond the nominal per-tier capacity so
    that a fixed tier count can still host the full table set.
    """
    if levels < 1 or degree < 1:
        raise ValueError("levels and degree must be >= 1")
    if levels == 1:
        if num_tables > 1:
            raise ValueError(
                f"single-level schema cannot hold {num_tables} tables: raise levels, "
                "attrs_per_table, or lower item_count"
            )
        return [-1]
    parents = [-1]
    tier = [0]
    placed = 1
    for depth in range(1, levels):
        width = min(len(tier) * degree, num_tables - placed)
        if depth == levels - 1:
            width = num_tables - placed  # leaf tier stretches past the nominal degree
        nxt = []
        for i in range(width):
            parents.append(tier[i % len(tier)])
            nxt.append(placed)
            placed += 1
        tier = nxt
        if placed == num_tables:
            break
    if placed != num_tables:
        raise ValueError("internal: table tree construction fell short")
    return parents


def gen_snowflake(spec: WorkloadSpec) -> tuple[DataItemGraph, Hypergraph]:
    """Tree-of-tables schema; queries are connected subgraphs of the item tree.

    Each table is a star of attribute items around its first attribute; child
    tables hang off their parent through a hub-to-hub link, so every query's
    table set induces a connected chain.
    """
    sizes = _snowflake_tables(spec)
    parents = _snowflake_tree(len(sizes), spec.levels, spec.degree)
    hubs: list[int] = []
    edges: list[tuple[int, int]] = []
    next_id = 0
    for t, size in enumerate(sizes):
        hub = next_id
        hubs.append(hub)
        for a in range(1, size):
            edges.append((hub, hub + a))
        next_id += size
        if parents[t] >= 0:
            u, v = hubs[parents[t]], hub
            edges.append((min(u, v), max(u, v)))
    graph = DataItemGraph(num_nodes=next_id, edges=sorted(edges))
    return graph, gen_random_queries(graph, spec)


# -- tpch-style weights -------------------------------------------------------
#
# Column size model: weight(column) = width_bytes * rows(scale).  The row
# bases follow the TPC-H table cardinalities; all tables scale linearly.
# Key columns are left off the item list (modeled as row identifiers carried
# with every column chunk) and the two width outliers (nation name, lineitem
# comment) are calibrated so that scale factor 25 reproduces the published
# size range of this model: smallest item 25KB, largest 28GB.

TPCH_TABLES: list[tuple[str, int, list[tuple[str, int]]]] = [
    # (table, rows per unit scale, [(column, width bytes)])
    (
        "lineitem",
        6_000_000,
        [
            ("quantity", 8),
            ("extendedprice", 8),
            ("discount", 8),
            ("tax", 8),
            ("returnflag", 1),
            ("linestatus", 1),
            ("shipdate", 4),
            ("commitdate", 4),
            ("receiptdate", 4),
            ("shipinstruct", 25),
            ("shipmode", 10),
            ("comment", 187),
        ],
    ),
    (
        "orders",
        1_500_000,
        [
            ("orderstatus", 1),
            ("totalprice", 8),
            ("orderdate", 4),
            ("orderpriority", 15),
            ("clerk", 15),
            ("shippriority", 4),
            ("comment", 79),
        ],
    ),
    (
        "partsupp",
        800_000,
        [("availqty", 4), ("supplycost", 8), ("comment", 199)],
    ),
    (
        "part",
        200_000,
        [
            ("name", 55),
            ("mfgr", 25),
            ("brand", 10),
            ("type", 25),
            ("size", 4),
            ("container", 10),
            ("retailprice", 8),
            ("comment", 23),
        ],
    ),
    (
        "customer",
        150_000,
        [
            ("name", 25),
            ("address", 40),
            ("phone", 15),
            ("acctbal", 8),
            ("mktsegment", 10),
            ("comment", 117),
        ],
    ),
    (
        "supplier",
        10_000,
        [("name", 25), ("address", 40), ("phone", 15), ("acctbal", 8), ("comment", 101)],
    ),
    ("nation", 25, [("name", 40), ("comment", 152)]),
]

# join tree (child -> parent) over the tables above
TPCH_JOINS = [
    ("lineitem", "orders"),
    ("orders", "customer"),
    ("customer", "nation"),
    ("supplier", "nation"),
    ("partsupp", "lineitem"),
    ("part", "partsupp"),
]


def tpch_column_names() -> list[str]:
    return [f"{table}.{col}" for table, _, cols in TPCH_TABLES for col, _ in cols]


def gen_tpch_weights(scale: float) -> list[int]:
    """Integer byte weights for every modeled column at the given scale factor."""
    if scale <= 0:
        raise ValueError(f"scale must be positive, got {scale}")
    weights = []
    for _, rows, cols in TPCH_TABLES:
        for _, width in cols:
            weights.append(max(1, round(width * rows * scale)))
    return weights


def gen_tpch_workload(spec: WorkloadSpec) -> tuple[DataItemGraph, Hypergraph]:
    """Snowflake-style queries over the TPC-H column graph with size weights."""
    weights = gen_tpch_weights(spec.scale)
    hub_of: dict[str, int] = {}
    edges: list[tuple[int, int]] = []
    next_id = 0
    for table, _, cols in TPCH_TABLES:
        hub_of[table] = next_id
        for a in range(1, len(cols)):
            edges.append((next_id, next_id + a))
        next_id += len(cols)
    for child, parent in TPCH_JOINS:
        u, v = hub_of[child], hub_of[parent]
        edges.append((min(u, v), max(u, v)))
    graph = DataItemGraph(num_nodes=next_id, edges=sorted(edges), weights=weights)
    sized = WorkloadSpec(
        kind="random",
        item_count=next_id,
        query_count=spec.query_count,
        min_query_size=min(spec.min_query_size, next_id),
        max_query_size=min(spec.max_query_size, next_id),
        density=1.0,
        seed=spec.seed,
    )
    return graph, gen_random_queries(graph, sized)


def generate_workload(spec: WorkloadSpec) -> tuple[DataItemGraph, Hypergraph]:
    """Dispatch on spec.kind; returns the item graph and the query hypergraph."""
    if spec.kind == "random":
        graph = gen_item_graph(spec)
        return graph, gen_random_queries(graph, spec)
    if spec.kind == "snowflake":
        return gen_snowflake(spec)
    if spec.kind == "tpch":
        return gen_tpch_workload(spec)
    raise ValueError(f"unknown workload kind {spec.kind!r}")
