"""Balanced k-way hypergraph partitioning without replication.

A multilevel scheme: connectivity-driven matching coarsens the hypergraph,
a greedy affinity pass seeds the coarsest level, and move-based refinement
(minimizing sum-over-edges of partitions-touched-minus-one) runs at every
level on the way back up.  Deterministic for a fixed seed; ties always break
toward the lowest node or partition id.

``enforce_capacity`` is the post-pass that repairs any partition left above
the hard capacity by relocating single items with the least span damage.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .hypergraph import Hypergraph, InfeasibleError, total_weight
from .placement import Placement

DEFAULT_MIN_UBFACTOR = 1.0


@dataclass(frozen=True)
class PartitionConfig:
    """Knobs for one partitioning run."""

    k: int
    capacity: int
    ubfactor: float | None = None  # None: computed from the capacity formula
    seed: int = 0
    refinement_passes: int = 4

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if self.capacity < 1:
            raise ValueError(f"capacity must be >= 1, got {self.capacity}")
        if self.ubfactor is not None and self.ubfactor < 0:
            raise ValueError(f"ubfactor must be >= 0, got {self.ubfactor}")
        if self.refinement_passes < 1:
            raise ValueError("refinement_passes must be >= 1")


def compute_ubfactor(
    capacity: int, k: int, total_items: int, minimum: float = DEFAULT_MIN_UBFACTOR
) -> float:
    """Percent slack allowed in partition sizes for a given capacity budget.

    100 * (capacity*k - total) / (total*k), clamped below at ``minimum``.
    """
    if total_items <= 0:
        raise ValueError("total_items must be positive")
    if k < 1:
        raise ValueError("k must be >= 1")
    if capacity * k < total_items:
        raise InfeasibleError(
            f"{k} partitions of capacity {capacity} cannot hold total weight {total_items}"
        )
    value = 100.0 * (capacity * k - total_items) / (total_items * k)
    return max(value, minimum)


# -- objective helpers --------------------------------------------------


def edge_partition_multiset(p: Placement, items: frozenset[int]) -> set[int]:
    return {pid for pid, part in enumerate(p.partitions) if part & items}


def connectivity_cost(p: Placement, h: Hypergraph) -> int:
    """Sum over edges of multiplicity * (partitions touched - 1); disjoint placements."""
    return sum(
        e.multiplicity * (len(edge_partition_multiset(p, e.items)) - 1) for e in h.edges
    )


def cut_edge_count(p: Placement, h: Hypergraph) -> int:
    """Multiplicity-weighted count of edges touching more than one partition."""
    return sum(
        e.multiplicity for e in h.edges if len(edge_partition_multiset(p, e.items)) > 1
    )


# -- multilevel machinery ------------------------------------------------


class _Level:
    """One coarsening level: plain arrays for nodes, edges, and adjacency."""

    def __init__(self, weights: list[int], raw_edges: list[tuple[frozenset[int], int]]):
        self.weights = weights
        merged: dict[frozenset[int], int] = {}
        for nodes, mult in raw_edges:
            if len(nodes) < 2:
                continue  # invisible to the cut at this level
            merged[nodes] = merged.get(nodes, 0) + mult
        self.edges: list[tuple[tuple[int, ...], int]] = [
            (tuple(sorted(nodes)), mult) for nodes, mult in merged.items()
        ]
        self.edges.sort()
        self.node_edges: list[list[int]] = [[] for _ in weights]
        for eid, (nodes, _) in enumerate(self.edges):
            for v in nodes:
                self.node_edges[v].append(eid)

    @property
    def n(self) -> int:
        return len(self.weights)


def _coarsen(level: _Level, max_cluster: int, rng: random.Random) -> tuple[_Level, list[int]]:
    """One matching pass; returns the coarse level and node -> cluster map."""
    n = level.n
    order = list(range(n))
    rng.shuffle(order)
    cluster_of = [-1] * n
    next_cluster = 0
    for u in order:
        if cluster_of[u] >= 0:
            continue
        best_v = -1
        best_score = 0.0
        scores: dict[int, float] = {}
        for eid in level.node_edges[u]:
            nodes, mult = level.edges[eid]
            share = mult / (len(nodes) - 1)
            for v in nodes:
                if v != u and cluster_of[v] < 0:
                    scores[v] = scores.get(v, 0.0) + share
        for v, sc in scores.items():
            if level.weights[u] + level.weights[v] > max_cluster:
                continue
            if sc > best_score or (sc == best_score and (best_v < 0 or v < best_v)):
                best_score, best_v = sc, v
        cluster_of[u] = next_cluster
        if best_v >= 0:
            cluster_of[best_v] = next_cluster
        next_cluster += 1
    weights = [0] * next_cluster
    for v in range(n):
        weights[cluster_of[v]] += level.weights[v]
    raw = [
        (frozenset(cluster_of[v] for v in nodes), mult) for nodes, mult in level.edges
    ]
    return _Level(weights, raw), cluster_of


def _greedy_initial(level: _Level, k: int, init_cap: int, cap: int, rng: random.Random) -> list[int]:
    """Seed partition: heavy nodes first, toward the part with most edge affinity.

    ``init_cap`` (about the average load) keeps the seed balanced; ``cap`` is
    the hard fallback before spilling to the lightest part.
    """
    order = sorted(range(level.n), key=lambda v: (-level.weights[v], v))
    part_of = [-1] * level.n
    loads = [0] * k
    # affinity[p] via edges that already touch p
    edge_counts: list[dict[int, int]] = [dict() for _ in level.edges]
    for v in order:
        w = level.weights[v]
        affinity = [0] * k
        for eid in level.node_edges[v]:
            _, mult = level.edges[eid]
            for pid in edge_counts[eid]:
                affinity[pid] += mult
        best = -1
        for bound in (init_cap, cap):
            for pid in range(k):
                if loads[pid] + w > bound:
                    continue
                if best < 0 or (affinity[pid], -loads[pid]) > (affinity[best], -loads[best]):
                    best = pid
            if best >= 0:
                break
        if best < 0:
            best = min(range(k), key=lambda pid: (loads[pid], pid))  # spill; repaired later
        part_of[v] = best
        loads[best] += w
        for eid in level.node_edges[v]:
            cnt = edge_counts[eid]
            cnt[best] = cnt.get(best, 0) + 1
    return part_of


class _RefineState:
    def __init__(self, level: _Level, k: int, part_of: list[int]):
        self.level = level
        self.k = k
        self.part_of = part_of
        self.loads = [0] * k
        for v in range(level.n):
            self.loads[part_of[v]] += level.weights[v]
        self.edge_counts: list[dict[int, int]] = []
        for nodes, _ in level.edges:
            cnt: dict[int, int] = {}
            for v in nodes:
                p = part_of[v]
                cnt[p] = cnt.get(p, 0) + 1
            self.edge_counts.append(cnt)

    def move_delta(self, v: int, dest: int) -> int:
        """Connectivity change if v moves to dest (negative is better)."""
        src = self.part_of[v]
        if src == dest:
            return 0
        delta = 0
        for eid in self.level.node_edges[v]:
            _, mult = self.level.edges[eid]
            cnt = self.edge_counts[eid]
            if cnt[src] == 1:
                delta -= mult
            if cnt.get(dest, 0) == 0:
                delta += mult
        return delta

    def apply(self, v: int, dest: int) -> None:
        src = self.part_of[v]
        if src == dest:
            return
        w = self.level.weights[v]
        self.part_of[v] = dest
        self.loads[src] -= w
        self.loads[dest] += w
        for eid in self.level.node_edges[v]:
            cnt = self.edge_counts[eid]
            cnt[src] -= 1
            if cnt[src] == 0:
                del cnt[src]
            cnt[dest] = cnt.get(dest, 0) + 1

    def candidate_parts(self, v: int) -> set[int]:
        cands: set[int] = set()
        for eid in self.level.node_edges[v]:
            cands.update(self.edge_counts[eid])
        cands.add(min(range(self.k), key=lambda pid: (self.loads[pid], pid)))
        cands.discard(self.part_of[v])
        return cands


def _repair_overfull(state: _RefineState, cap: int) -> bool:
    """Force items out of partitions above cap, preferring least cut damage."""
    ok = True
    guard = 4 * state.level.n + 16
    while guard > 0:
        guard -= 1
        over = [pid for pid in range(state.k) if state.loads[pid] > cap]
        if not over:
            return True
        src = max(over, key=lambda pid: (state.loads[pid], -pid))
        best: tuple[int, int, int] | None = None  # (delta, item, dest)
        for v in sorted(range(state.level.n)):
            if state.part_of[v] != src:
                continue
            w = state.level.weights[v]
            for dest in range(state.k):
                if dest == src or state.loads[dest] + w > cap:
                    continue
                delta = state.move_delta(v, dest)
                cand = (delta, v, dest)
                if best is None or cand < best:
                    best = cand
        if best is None:
            ok = False
            break
        _, v, dest = best
        state.apply(v, dest)
    return ok


def _refine_moves(state: _RefineState, cap: int, passes: int, rng: random.Random) -> None:
    n = state.level.n
    for _ in range(passes):
        order = list(range(n))
        rng.shuffle(order)
        improved = False
        for v in order:
            w = state.level.weights[v]
            src = state.part_of[v]
            best_dest = -1
            best_delta = 0
            for dest in sorted(state.candidate_parts(v)):
                if state.loads[dest] + w > cap:
                    continue
                delta = state.move_delta(v, dest)
                better = delta < best_delta or (
                    delta == best_delta
                    and delta < 0
                    and best_dest >= 0
                    and state.loads[dest] < state.loads[best_dest]
                )
                if delta < 0 and (best_dest < 0 or better):
                    best_delta, best_dest = delta, dest
                elif (
                    delta == 0
                    and best_dest < 0
                    and state.loads[src] - state.loads[dest] > 2 * w
                ):
                    # pure balance move; the strict margin prevents oscillation
                    best_delta, best_dest = delta, dest
            if best_dest >= 0:
                state.apply(v, best_dest)
                improved = True
        if not improved:
            break


_SWAP_LIMIT = 64


def _refine_swaps(state: _RefineState, cap: int) -> None:
    """Pairwise exchanges for small levels where tight caps block single moves.

    Candidate pairs come from nodes sharing a cut edge; first the best swap is
    applied, repeating until no exchange helps.
    """
    n = state.level.n
    if n > _SWAP_LIMIT:
        return
    for _ in range(2 * n):
        pairs: set[tuple[int, int]] = set()
        for eid, (nodes, _) in enumerate(state.level.edges):
            if len(state.edge_counts[eid]) < 2:
                continue
            for u in nodes:
                for v in nodes:
                    if u < v and state.part_of[u] != state.part_of[v]:
                        pairs.add((u, v))
        best: tuple[int, int, int] | None = None  # (delta, u, v)
        for u, v in sorted(pairs):
            pu, pv = state.part_of[u], state.part_of[v]
            wu, wv = state.level.weights[u], state.level.weights[v]
            if state.loads[pu] - wu + wv > cap or state.loads[pv] - wv + wu > cap:
                continue
            d1 = state.move_delta(u, pv)
            state.apply(u, pv)
            d2 = state.move_delta(v, pu)
            state.apply(u, pu)
            delta = d1 + d2
            if delta < 0 and (best is None or (delta, u, v) < best):
                best = (delta, u, v)
        if best is None:
            return
        _, u, v = best
        pu, pv = state.part_of[u], state.part_of[v]
        state.apply(u, pv)
        state.apply(v, pu)


def hpa_partition(h: Hypergraph, config: PartitionConfig) -> Placement:
    """Disjoint k-way partition of all items, each partition within the slack cap.

    Partitions respect capacity * (1 + ubfactor/100); run
    :func:`enforce_capacity` afterwards for the hard bound.
    """
    if h.num_items == 0:
        return Placement(partitions=[set() for _ in range(config.k)], capacity=config.capacity)
    total = total_weight(h.all_item_ids(), h)
    max_w = max(it.weight for it in h.items)
    if config.capacity < max_w:
        raise InfeasibleError(
            f"capacity {config.capacity} below heaviest item weight {max_w}"
        )
    ub = (
        config.ubfactor
        if config.ubfactor is not None
        else compute_ubfactor(config.capacity, config.k, total)
    )
    if config.capacity * config.k < total:
        raise InfeasibleError(
            f"{config.k} partitions of capacity {config.capacity} cannot hold weight {total}"
        )
    # hard bound from the published invariant; working bound from the
    # slack-over-average meaning of the formula (== capacity at the formula value)
    invariant_cap = max(int(config.capacity * (1.0 + ub / 100.0)), config.capacity)
    avg = -(-total // config.k)
    cap = max(avg, max_w, min(invariant_cap, int(total / config.k + ub * total / 100.0)))
    init_cap = max(avg, max_w)
    rng = random.Random(config.seed)

    base = _Level(h.weights(), [(e.items, e.multiplicity) for e in h.edges])
    levels = [base]
    maps: list[list[int]] = []
    target = max(16 * config.k, 64)
    max_cluster = max(max_w, min(cap, -(-total // (2 * config.k))))
    while levels[-1].n > target:
        coarse, cmap = _coarsen(levels[-1], max_cluster, rng)
        if coarse.n >= levels[-1].n * 0.95:
            break
        levels.append(coarse)
        maps.append(cmap)

    work_cap = cap + max_w  # extra headroom during passes; repaired before return
    part_of = _greedy_initial(levels[-1], config.k, init_cap, cap, rng)
    for depth in range(len(levels) - 1, -1, -1):
        level = levels[depth]
        state = _RefineState(level, config.k, part_of)
        _repair_overfull(state, cap)
        _refine_moves(state, work_cap, config.refinement_passes, rng)
        _repair_overfull(state, cap)
        _refine_swaps(state, cap)
        part_of = state.part_of
        if depth > 0:
            cmap = maps[depth - 1]
            part_of = [part_of[cmap[v]] for v in range(levels[depth - 1].n)]

    partitions: list[set[int]] = [set() for _ in range(config.k)]
    for v, pid in enumerate(part_of):
        partitions[pid].add(v)
    return Placement(partitions=partitions, capacity=config.capacity)


# -- hard-capacity repair -------------------------------------------------


def _is_disjoint(p: Placement, h: Hypergraph) -> bool:
    return sum(len(part) for part in p.partitions) == len(p.placed_items()) == h.num_items


def _span_damage(p: Placement, h: Hypergraph, v: int, src: int, dest: int) -> int:
    """Greedy span change over v's edges if its copy moves src -> dest."""
    from .spans import get_query_span

    before = sum(
        get_query_span(p, h.edges[eid]) * h.edges[eid].multiplicity for eid in h.incident[v]
    )
    p.partitions[src].discard(v)
    p.partitions[dest].add(v)
    after = sum(
        get_query_span(p, h.edges[eid]) * h.edges[eid].multiplicity for eid in h.incident[v]
    )
    p.partitions[dest].discard(v)
    p.partitions[src].add(v)
    return after - before


def enforce_capacity(p: Placement, h: Hypergraph) -> Placement:
    """Repair partitions above the hard capacity by single-item moves.

    Moves (never copies) the item whose relocation costs the least span
    increase, repeating until every partition fits.  The placed item multiset
    is unchanged.  Already-feasible placements come back as-is.
    """
    cap = p.capacity
    loads = p.loads(h)
    if all(load <= cap for load in loads):
        return p
    if sum(loads) > cap * p.num_partitions:
        raise InfeasibleError(
            f"total placed weight {sum(loads)} exceeds {p.num_partitions} x {cap}"
        )
    parts = [set(part) for part in p.partitions]
    repaired = Placement(partitions=parts, capacity=cap, ledger=p.ledger)
    disjoint = _is_disjoint(repaired, h)

    # connectivity bookkeeping for the fast disjoint path
    edge_counts: list[dict[int, int]] = []
    if disjoint:
        part_of = {}
        for pid, part in enumerate(parts):
            for v in part:
                part_of[v] = pid
        for e in h.edges:
            cnt: dict[int, int] = {}
            for v in e.items:
                cnt[part_of[v]] = cnt.get(part_of[v], 0) + 1
            edge_counts.append(cnt)

    def disjoint_delta(v: int, src: int, dest: int) -> int:
        delta = 0
        for eid in h.incident[v]:
            mult = h.edges[eid].multiplicity
            cnt = edge_counts[eid]
            if cnt[src] == 1:
                delta -= mult
            if cnt.get(dest, 0) == 0:
                delta += mult
        return delta

    loads = repaired.loads(h)
    guard = 4 * sum(len(part) for part in parts) + 16
    while guard > 0:
        guard -= 1
        over = [pid for pid in range(len(parts)) if loads[pid] > cap]
        if not over:
            break
        src = max(over, key=lambda pid: (loads[pid], -pid))
        best: tuple[int, int, int] | None = None  # (delta, item, dest)
        for v in sorted(parts[src]):
            w = h.weight(v)
            for dest in range(len(parts)):
                if dest == src or loads[dest] + w > cap or v in parts[dest]:
                    continue
                if disjoint:
                    delta = disjoint_delta(v, src, dest)
                else:
                    delta = _span_damage(repaired, h, v, src, dest)
                cand = (delta, v, dest)
                if best is None or cand < best:
                    best = cand
        if best is None:
            raise InfeasibleError(
                f"partition {src} over capacity and no single-item move fits anywhere"
            )
        _, v, dest = best
        parts[src].discard(v)
        parts[dest].add(v)
        loads[src] -= h.weight(v)
        loads[dest] += h.weight(v)
        if disjoint:
            for eid in h.incident[v]:
                cnt = edge_counts[eid]
                cnt[src] -= 1
                if cnt[src] == 0:
                    del cnt[src]
                cnt[dest] = cnt.get(dest, 0) + 1
    else:
        raise InfeasibleError("capacity repair did not converge")
    return repaired
