"""Exhaustive reference solvers for micro instances.

These validate the greedy production code on small inputs (CLI ``oracle``
subcommand and the test suite).  None of the placement pipelines call them.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .hypergraph import Hyperedge, Hypergraph
from .placement import Placement

_MAX_EDGE = 16
_MAX_PARTS = 14


def exact_min_span(p: Placement, e: Hyperedge) -> int:
    """Minimum number of partitions jointly covering edge ``e`` (exhaustive)."""
    if len(e.items) > _MAX_EDGE:
        raise ValueError(f"edge size {len(e.items)} too large for the exhaustive solver")
    useful = [
        (pid, part & e.items) for pid, part in enumerate(p.partitions) if part & e.items
    ]
    if len(useful) > _MAX_PARTS:
        raise ValueError(f"{len(useful)} candidate partitions too many for the exhaustive solver")
    covered_union = set()
    for _, overlap in useful:
        covered_union |= overlap
    if covered_union != set(e.items):
        missing = min(set(e.items) - covered_union)
        raise ValueError(f"item {missing} of edge {e.id} is not placed on any partition")
    target = set(e.items)
    for size in range(1, len(useful) + 1):
        for combo in combinations(useful, size):
            got: set[int] = set()
            for _, overlap in combo:
                got |= overlap
            if got >= target:
                return size
    raise AssertionError("unreachable: full candidate set covers the edge")


def exact_min_average_span(p: Placement, h: Hypergraph) -> Fraction:
    """Multiplicity-weighted mean of exact per-edge minimum spans."""
    total = sum(exact_min_span(p, e) * e.multiplicity for e in h.edges)
    return Fraction(total, h.query_count)


def exact_min_hitting_set(sets: Sequence[Iterable[int]]) -> set[int]:
    """Smallest set intersecting every input set (exhaustive over the union)."""
    pools = [set(s) for s in sets]
    for i, s in enumerate(pools):
        if not s:
            raise ValueError(f"input set {i} is empty: nothing can hit it")
    universe = sorted(set().union(*pools))
    for size in range(1, len(universe) + 1):
        for combo in combinations(universe, size):
            picked = set(combo)
            if all(picked & s for s in pools):
                return picked
    raise AssertionError("unreachable: the full universe hits everything")


def exact_densest_nodes(h: Hypergraph, budget: int) -> tuple[set[int], int]:
    """Node group of weight <= budget maximizing fully-contained edge count.

    Returns (best node set, contained edge count weighted by multiplicity).
    Exhaustive over all node subsets; micro instances only.
    """
    n = h.num_items
    if n > 16:
        raise ValueError(f"{n} items too many for the exhaustive solver")
    best: set[int] = set()
    best_edges = 0
    ids = list(h.all_item_ids())
    for size in range(0, n + 1):
        for combo in combinations(ids, size):
            group = set(combo)
            if sum(h.weight(v) for v in group) > budget:
                continue
            contained = sum(e.multiplicity for e in h.edges if e.items <= group)
            if contained > best_edges or (contained == best_edges and len(group) < len(best)):
                best, best_edges = group, contained
    return best, best_edges


def exact_best_bisection(h: Hypergraph, capacity: int) -> tuple[list[set[int]], int]:
    """Optimal 2-way disjoint split under the capacity bound, minimizing cut edges.

    Cut counts edges touching both sides, weighted by multiplicity.
    Exhaustive over 2^|V| assignments; micro instances only.
    """
    n = h.num_items
    if n > 20:
        raise ValueError(f"{n} items too many for the exhaustive solver")
    weights = h.weights()
    total = sum(weights)
    if total > 2 * capacity:
        raise ValueError("no bisection fits the capacity")
    best_cut = None
    best_parts: list[set[int]] = []
    for mask in range(1 << n):
        a = {v for v in range(n) if mask & (1 << v)}
        wa = sum(weights[v] for v in a)
        if wa > capacity or total - wa > capacity:
            continue
        cut = 0
        for e in h.edges:
            inside_a = e.items <= a
            inside_b = e.items.isdisjoint(a)
            if not inside_a and not inside_b:
                cut += e.multiplicity
        if best_cut is None or cut < best_cut:
            best_cut = cut
            best_parts = [a, set(range(n)) - a]
    if best_cut is None:
        raise ValueError("no bisection fits the capacity")
    return best_parts, best_cut


def exact_min_bins(weights: Sequence[int], capacity: int) -> int:
    """Minimum bin count packing all weights (branch and bound; small inputs)."""
    items = sorted(weights, reverse=True)
    if any(w > capacity for w in items):
        raise ValueError("an item exceeds the bin capacity")
    if not items:
        return 0
    best = len(items)

    def place(idx: int, bins: list[int]) -> None:
        nonlocal best
        if len(bins) >= best:
            return
        if idx == len(items):
            best = min(best, len(bins))
            return
        w = items[idx]
        seen_loads = set()
        for i in range(len(bins)):
            if bins[i] + w <= capacity and bins[i] not in seen_loads:
                seen_loads.add(bins[i])
                bins[i] += w
                place(idx + 1, bins)
                bins[i] -= w
        bins.append(w)
        place(idx + 1, bins)
        bins.pop()

    place(0, [])
    return best
