"""Weighted hypergraph model of a query workload.

Nodes are data items (with integer storage weights), hyperedges are queries.
Identical queries are collapsed into a single edge with a multiplicity count,
and every span statistic downstream weights edges by that multiplicity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence


class InfeasibleError(ValueError):
    """A requested layout cannot exist under the given capacity budget."""


@dataclass(frozen=True)
class DataItem:
    """A unit of placement: dense 0-based id plus a positive storage weight."""

    id: int
    weight: int = 1

    def __post_init__(self) -> None:
        if self.weight < 1:
            raise ValueError(f"item {self.id}: weight must be >= 1, got {self.weight}")


@dataclass(frozen=True)
class Hyperedge:
    """A query over a non-empty set of items; multiplicity counts collapsed duplicates."""

    id: int
    items: frozenset[int]
    multiplicity: int = 1

    def __post_init__(self) -> None:
        if not self.items:
            raise ValueError(f"edge {self.id}: empty item set")
        if self.multiplicity < 1:
            raise ValueError(f"edge {self.id}: multiplicity must be >= 1")

    def size(self) -> int:
        return len(self.items)


@dataclass
class Hypergraph:
    """Immutable-by-convention workload hypergraph with a per-item incidence index.

    ``incident[v]`` lists the ids of edges containing item ``v``; it always
    mirrors ``edges`` exactly (see :meth:`rebuilt_incidence`).
    """

    items: list[DataItem]
    edges: list[Hyperedge]
    incident: list[list[int]] = field(repr=False, default_factory=list)

    def __post_init__(self) -> None:
        n = len(self.items)
        for e in self.edges:
            for v in e.items:
                if not (0 <= v < n):
                    raise ValueError(f"edge {e.id} references unknown item {v}")
        if not self.incident:
            self.incident = self.rebuilt_incidence()

    # -- derived views -------------------------------------------------

    @property
    def num_items(self) -> int:
        return len(self.items)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def query_count(self) -> int:
        """Number of queries represented, counting collapsed duplicates."""
        return sum(e.multiplicity for e in self.edges)

    def weight(self, item: int) -> int:
        return self.items[item].weight

    def weights(self) -> list[int]:
        return [it.weight for it in self.items]

    def all_item_ids(self) -> range:
        return range(len(self.items))

    def rebuilt_incidence(self) -> list[list[int]]:
        index: list[list[int]] = [[] for _ in self.items]
        for e in self.edges:
            for v in sorted(e.items):
                index[v].append(e.id)
        return index

    def degree(self, item: int) -> int:
        """Multiplicity-weighted count of edges incident on ``item``."""
        return sum(self.edges[eid].multiplicity for eid in self.incident[item])


def build_hypergraph(
    queries: Iterable[Iterable[int]],
    weights: Sequence[int] | None = None,
) -> Hypergraph:
    """Build a hypergraph from raw query item sets.

    Identical item sets are merged with summed multiplicity.  Item ids must be
    dense: the item universe is ``0..max_referenced`` (or ``0..len(weights)-1``
    when a weight list is supplied, which must cover every referenced id).
    """
    merged: dict[frozenset[int], int] = {}
    max_id = -1
    for qi, q in enumerate(queries):
        fs = frozenset(q)
        if not fs:
            raise ValueError(f"query {qi} is empty")
        for v in fs:
            if v < 0:
                raise ValueError(f"query {qi} references negative item id {v}")
            max_id = max(max_id, v)
        merged[fs] = merged.get(fs, 0) + 1
    if not merged:
        raise ValueError("no queries given")

    if weights is not None:
        if max_id >= len(weights):
            raise ValueError(
                f"item {max_id} referenced by a query but weight list has "
                f"only {len(weights)} entries"
            )
        items = [DataItem(i, int(w)) for i, w in enumerate(weights)]
    else:
        items = [DataItem(i, 1) for i in range(max_id + 1)]

    # dict preserves first-appearance order, so edge ids follow the input
    edges = [Hyperedge(eid, fs, mult) for eid, (fs, mult) in enumerate(merged.items())]
    return Hypergraph(items=items, edges=edges)


def subhypergraph(h: Hypergraph, keep_items: set[int]) -> tuple[Hypergraph, list[int]]:
    """Induced sub-hypergraph on ``keep_items`` with dense re-numbered ids.

    Keeps only edges fully inside the survivor set.  Returns the new graph and
    the new-id -> old-id table.
    """
    new_to_old = sorted(keep_items)
    old_to_new = {old: new for new, old in enumerate(new_to_old)}
    items = [DataItem(new, h.weight(old)) for new, old in enumerate(new_to_old)]
    edges = []
    for e in h.edges:
        if e.items <= keep_items:
            edges.append(
                Hyperedge(len(edges), frozenset(old_to_new[v] for v in e.items), e.multiplicity)
            )
    return Hypergraph(items=items, edges=edges), new_to_old


def restrict_to_edges(h: Hypergraph, keep_edges: set[int]) -> tuple[Hypergraph, list[int]]:
    """Sub-hypergraph on a subset of edges, dropping items left with no edge.

    Returns the residual graph (dense ids) and the new-id -> old-id table.
    """
    used: set[int] = set()
    for eid in keep_edges:
        used |= h.edges[eid].items
    new_to_old = sorted(used)
    old_to_new = {old: new for new, old in enumerate(new_to_old)}
    items = [DataItem(new, h.weight(old)) for new, old in enumerate(new_to_old)]
    edges = [
        Hyperedge(i, frozenset(old_to_new[v] for v in h.edges[eid].items), h.edges[eid].multiplicity)
        for i, eid in enumerate(sorted(keep_edges))
    ]
    return Hypergraph(items=items, edges=edges), new_to_old


def avg_items_per_query(h: Hypergraph) -> float:
    """Mean query size, weighting collapsed duplicates by multiplicity."""
    if not h.edges:
        raise ValueError("hypergraph has no edges")
    total = sum(e.multiplicity * len(e.items) for e in h.edges)
    return total / h.query_count


def total_weight(items: Iterable[int], h: Hypergraph) -> int:
    """Sum of item weights; empty input sums to 0."""
    out = 0
    for v in items:
        if not (0 <= v < h.num_items):
            raise ValueError(f"unknown item id {v}")
        out += h.weight(v)
    return out


def min_partitions_needed(h: Hypergraph, capacity: int) -> int:
    """Weight lower bound on the partition count able to hold every item once.

    For unit weights this is exact; for heterogeneous weights it is a lower
    bound and actual feasibility is a packing question (see
    :func:`first_fit_partition_count`).
    """
    heaviest = max(it.weight for it in h.items)
    if capacity < heaviest:
        raise InfeasibleError(
            f"capacity {capacity} below heaviest item weight {heaviest}: unplaceable"
        )
    total = total_weight(h.all_item_ids(), h)
    return -(-total // capacity)


def first_fit_partition_count(h: Hypergraph, capacity: int) -> int:
    """Partition count achieved by first-fit-decreasing packing.

    An upper bound on the true minimum; pairs with
    :func:`min_partitions_needed` to bracket feasibility for weighted items.
    """
    heaviest = max(it.weight for it in h.items)
    if capacity < heaviest:
        raise InfeasibleError(
            f"capacity {capacity} below heaviest item weight {heaviest}: unplaceable"
        )
    loads: list[int] = []
    for w in sorted((it.weight for it in h.items), reverse=True):
        for i, load in enumerate(loads):
            if load + w <= capacity:
                loads[i] += w
                break
        else:
            loads.append(w)
    return len(loads)
