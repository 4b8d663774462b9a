"""Query span computation and the combinatorial subroutines built on it.

The span of a query is the number of partitions a greedy set cover needs to
assemble all of its items under a given placement.  Ties in the greedy choice
always break toward the lowest partition id, which keeps every downstream
algorithm deterministic.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import IO, Iterable, Sequence

from .hypergraph import Hyperedge, Hypergraph, restrict_to_edges
from .placement import Placement

CoverEntry = list[tuple[int, frozenset[int]]]


def get_spanning_partitions(p: Placement, e: Hyperedge) -> CoverEntry:
    """Greedy minimal partition cover of edge ``e``.

    Repeatedly picks the partition with the largest overlap with the still
    uncovered items (lowest partition id on ties) and credits those items to
    it.  Returns the picked partitions in pick order with the items each one
    serves.
    """
    remaining = set(e.items)
    cover: CoverEntry = []
    while remaining:
        best_pid = -1
        best_overlap: set[int] = set()
        for pid, part in enumerate(p.partitions):
            overlap = remaining & part
            if len(overlap) > len(best_overlap):
                best_pid, best_overlap = pid, overlap
        if best_pid < 0:
            missing = min(remaining)
            raise ValueError(f"item {missing} of edge {e.id} is not placed on any partition")
        cover.append((best_pid, frozenset(best_overlap)))
        remaining -= best_overlap
    return cover


def get_query_span(p: Placement, e: Hyperedge) -> int:
    """Number of partitions the greedy cover touches for edge ``e``."""
    return len(get_spanning_partitions(p, e))


def get_accessed_items(p: Placement, e: Hyperedge, partition_id: int) -> frozenset[int]:
    """Items the query fetches from one partition under the greedy cover.

    Empty when the partition is not picked, even if it physically holds some
    of the edge's items.
    """
    for pid, accessed in get_spanning_partitions(p, e):
        if pid == partition_id:
            return accessed
    return frozenset()


@dataclass
class SpanReport:
    """Per-edge spans plus the multiplicity-weighted aggregate view."""

    edge_spans: list[tuple[int, int, int]]  # (edge id, multiplicity, span)
    average: Fraction
    histogram: dict[int, int]  # span -> number of queries (multiplicity-weighted)
    timings: dict[str, float] = field(default_factory=dict)

    @property
    def query_count(self) -> int:
        return sum(self.histogram.values())

    def write_csv(self, stream: IO[str]) -> None:
        writer = csv.writer(stream)
        writer.writerow(["edge_id", "multiplicity", "span"])
        for row in self.edge_spans:
            writer.writerow(row)

    def summary(self) -> dict:
        return {
            "average_span": float(self.average),
            "average_span_exact": f"{self.average.numerator}/{self.average.denominator}",
            "query_count": self.query_count,
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
            "timings": self.timings,
        }

    def write_summary_json(self, stream: IO[str]) -> None:
        json.dump(self.summary(), stream, indent=1, sort_keys=True)
        stream.write("\n")


def average_span(p: Placement, h: Hypergraph) -> SpanReport:
    """Multiplicity-weighted mean greedy span over all edges."""
    import time

    t0 = time.perf_counter()
    edge_spans = []
    histogram: dict[int, int] = {}
    total = 0
    for e in h.edges:
        s = get_query_span(p, e)
        edge_spans.append((e.id, e.multiplicity, s))
        histogram[s] = histogram.get(s, 0) + e.multiplicity
        total += s * e.multiplicity
    elapsed = time.perf_counter() - t0
    return SpanReport(
        edge_spans=edge_spans,
        average=Fraction(total, h.query_count),
        histogram=histogram,
        timings={"span_eval_s": elapsed},
    )


def prune_by_span(
    p: Placement, h: Hypergraph, min_span: float
) -> tuple[Hypergraph, list[int]]:
    """Residual hypergraph of the edges whose span exceeds ``min_span``.

    Edges with span <= min_span are removed, then items left with no incident
    edge are dropped and the survivors re-numbered densely.  Returns the
    residual graph and the new-id -> old-id table.
    """
    keep = {e.id for e in h.edges if get_query_span(p, e) > min_span}
    if not keep:
        return Hypergraph(items=[], edges=[]), []
    return restrict_to_edges(h, keep)


def _peel_until(h: Hypergraph, budget: int) -> set[int]:
    """Greedy low-degree peel: survivors once total weight fits the budget.

    Degree counts surviving incident edges weighted by multiplicity; removing
    a node kills every edge still incident on it.  Ties peel the lowest id.
    """
    alive = set(h.all_item_ids())
    edge_alive = [True] * h.num_edges
    degree = [h.degree(v) for v in h.all_item_ids()]
    remaining_weight = sum(it.weight for it in h.items)
    while alive and remaining_weight > budget:
        victim = min(alive, key=lambda v: (degree[v], v))
        alive.discard(victim)
        remaining_weight -= h.weight(victim)
        for eid in h.incident[victim]:
            if edge_alive[eid]:
                edge_alive[eid] = False
                for u in h.edges[eid].items:
                    if u in alive:
                        degree[u] -= h.edges[eid].multiplicity
    return alive


def k_densest_nodes(h: Hypergraph, budget: int) -> set[int]:
    """Dense node group of total weight at most ``budget``.

    Peels the minimum-degree node (and its incident edges) until the
    surviving weight fits.  A budget below every item weight yields the empty
    set rather than an error.
    """
    if h.num_items == 0:
        return set()
    return _peel_until(h, budget)


def prune_to_size(h: Hypergraph, budget: int) -> tuple[Hypergraph, list[int]]:
    """Induced sub-hypergraph on :func:`k_densest_nodes`, edges fully inside."""
    from .hypergraph import subhypergraph

    survivors = k_densest_nodes(h, budget)
    return subhypergraph(h, survivors)


def hitting_set(sets: Sequence[Iterable[int]]) -> set[int]:
    """Greedy hitting set: intersects every input set.

    Picks the element common to the most not-yet-hit sets (lowest id on
    ties), drops the sets it hits, repeats.
    """
    pending: list[set[int]] = []
    for i, s in enumerate(sets):
        s = set(s)
        if not s:
            raise ValueError(f"input set {i} is empty: nothing can hit it")
        pending.append(s)
    chosen: set[int] = set()
    while pending:
        freq: dict[int, int] = {}
        for s in pending:
            for x in s:
                freq[x] = freq.get(x, 0) + 1
        pick = min(freq, key=lambda x: (-freq[x], x))
        chosen.add(pick)
        pending = [s for s in pending if pick not in s]
    return chosen
