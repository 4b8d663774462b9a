"""Replicated data placement algorithms.

Six strategies over a shared contract ``fn(h, n_partitions, capacity, seed)
-> Placement``:

- ``random_placement``: one random copy of each item, leftover capacity filled
  with random replicas (the baseline to beat).
- ``baseline_partition``: the plain disjoint partitioner ("hpa"), ignoring
  extra partitions beyond the minimum; the no-replication reference line.
- ``ihpa``: iterative re-partitioning of the not-yet-colocated residual onto
  spare partitions.
- ``ds``: fills each spare partition with a greedily-extracted dense group of
  the residual workload.
- ``pra``: pre-replicates high-value nodes into the workload hypergraph,
  distributing copies to queries via a hitting set over their spanning
  partitions, then re-partitions the rewritten hypergraph.
- ``lmbr``: local move-based replication driven by a priority queue of
  copy-group moves between partition pairs, with per-query cover bookkeeping
  so a move's gain always reflects real span reduction.

Plus three variants that place exactly three copies of every item
(``pra_3way``, ``sda_3way``, ``ihpa_3way``).
"""

from __future__ import annotations

import heapq
import random
from dataclasses import dataclass
from fractions import Fraction

from .hypergraph import (
    DataItem,
    Hyperedge,
    Hypergraph,
    InfeasibleError,
    avg_items_per_query,
    min_partitions_needed,
    restrict_to_edges,
    total_weight,
)
from .partitioner import PartitionConfig, enforce_capacity, hpa_partition
from .placement import Placement, ReplicaLedger
from .spans import get_query_span, get_spanning_partitions, hitting_set


def _enforced_hpa(h: Hypergraph, k: int, capacity: int, seed: int) -> Placement:
    return enforce_capacity(hpa_partition(h, PartitionConfig(k=k, capacity=capacity, seed=seed)), h)


def _check_feasible(h: Hypergraph, n: int, capacity: int) -> int:
    n_min = min_partitions_needed(h, capacity)
    if n < n_min:
        raise InfeasibleError(f"{n} partitions cannot hold the items; at least {n_min} needed")
    return n_min


# -- random baseline ------------------------------------------------------


def random_placement(h: Hypergraph, n_partitions: int, capacity: int, seed: int) -> Placement:
    """Place each item once uniformly at random, then fill all leftover room
    with uniformly chosen replicas (never duplicating an item within one
    partition)."""
    _check_feasible(h, n_partitions, capacity)
    rng = random.Random(seed)
    weights = h.weights()

    parts: list[set[int]] | None = None
    for _ in range(64):  # weighted packing can dead-end; retry with fresh randomness
        attempt: list[set[int]] = [set() for _ in range(n_partitions)]
        loads = [0] * n_partitions
        order = list(h.all_item_ids())
        rng.shuffle(order)
        ok = True
        for v in order:
            fits = [pid for pid in range(n_partitions) if loads[pid] + weights[v] <= capacity]
            if not fits:
                ok = False
                break
            pid = rng.choice(fits)
            attempt[pid].add(v)
            loads[pid] += weights[v]
        if ok:
            parts = attempt
            break
    if parts is None:
        raise InfeasibleError("could not randomly pack the items under the capacity")

    loads = [sum(weights[v] for v in part) for part in parts]
    open_parts = [pid for pid in range(n_partitions) if loads[pid] < capacity]
    while open_parts:
        pid = rng.choice(open_parts)
        free = capacity - loads[pid]
        candidates = [v for v in h.all_item_ids() if v not in parts[pid] and weights[v] <= free]
        if not candidates:
            open_parts.remove(pid)
            continue
        v = rng.choice(candidates)
        parts[pid].add(v)
        loads[pid] += weights[v]
        if loads[pid] >= capacity:
            open_parts.remove(pid)
    return Placement(partitions=parts, capacity=capacity)


def baseline_partition(h: Hypergraph, n_partitions: int, capacity: int, seed: int) -> Placement:
    """Disjoint partition into the minimum partition count; no replication.

    Spare partitions beyond the minimum stay unused, which is why this curve
    is flat when the partition budget grows.
    """
    n_min = _check_feasible(h, n_partitions, capacity)
    return _enforced_hpa(h, n_min, capacity, seed)


# -- iterative re-partitioning --------------------------------------------


def _shrink_to_weight(
    h: Hypergraph, placement: Placement, keep: set[int], budget: int
) -> set[int]:
    """Drop lowest-span edges (then orphaned items) until the edge set's item
    weight fits the budget.  Returns the surviving edge ids."""
    keep = set(keep)
    spans = {eid: get_query_span(placement, h.edges[eid]) for eid in keep}
    while keep:
        used: set[int] = set()
        for eid in keep:
            used |= h.edges[eid].items
        if total_weight(used, h) <= budget:
            break
        victim = min(keep, key=lambda eid: (spans[eid], eid))
        keep.discard(victim)
    return keep


def ihpa(h: Hypergraph, n_partitions: int, capacity: int, seed: int) -> Placement:
    """Iteratively re-partition the residual workload onto spare partitions.

    Starting from the minimal disjoint layout, repeatedly collect the edges
    whose span still exceeds a falling threshold (starting at the mean query
    size), re-partition those edges' items into however many spare partitions
    they need, and append the result as replica partitions.
    """
    n_min = _check_feasible(h, n_partitions, capacity)
    base = _enforced_hpa(h, n_min, capacity, seed)
    parts = [set(p) for p in base.partitions]
    edge_cost = avg_items_per_query(h)
    while edge_cost > 0 and len(parts) != n_partitions:
        placement = Placement(partitions=parts, capacity=capacity)
        keep = {
            e.id for e in h.edges if get_query_span(placement, e) > edge_cost
        }
        if not keep:
            edge_cost -= 1
            continue
        used: set[int] = set()
        for eid in keep:
            used |= h.edges[eid].items
        w_res = total_weight(used, h)
        n_cur = min(-(-w_res // capacity), n_partitions - len(parts))
        if w_res > n_cur * capacity:
            keep = _shrink_to_weight(h, placement, keep, n_cur * capacity)
            if not keep:
                edge_cost -= 1
                continue
        residual, new_to_old = restrict_to_edges(h, keep)
        sub = _enforced_hpa(residual, n_cur, capacity, seed)
        for part in sub.partitions:
            parts.append({new_to_old[v] for v in part})
    return Placement(partitions=parts, capacity=capacity)


# -- dense-subgraph fill ----------------------------------------------------


def ds(h: Hypergraph, n_partitions: int, capacity: int, seed: int) -> Placement:
    """Fill each spare partition with a dense group of the uncolocated residual.

    After the minimal disjoint layout, repeatedly take the edges whose span
    is still above 1, peel the residual down to a capacity-sized dense node
    group, and dedicate a fresh partition to a copy of that group.
    """
    from .spans import k_densest_nodes, prune_by_span

    n_min = _check_feasible(h, n_partitions, capacity)
    base = _enforced_hpa(h, n_min, capacity, seed)
    parts = [set(p) for p in base.partitions]
    while len(parts) != n_partitions:
        placement = Placement(partitions=parts, capacity=capacity)
        residual, new_to_old = prune_by_span(placement, h, 1)
        if residual.num_edges == 0:
            break
        dense = k_densest_nodes(residual, capacity)
        if not dense:
            break
        parts.append({new_to_old[v] for v in dense})
    return Placement(partitions=parts, capacity=capacity)


# -- pre-replication --------------------------------------------------------


def distribute_edges_by_hitting_set(
    edge_span_sets: list[frozenset[int]], hitters: list[int]
) -> list[int]:
    """Assign each edge to the lowest-id hitting-set member inside its
    spanning-partition set.  Returns, per edge, an index into ``hitters``."""
    pos = {g: i for i, g in enumerate(hitters)}
    out = []
    for i, span_set in enumerate(edge_span_sets):
        inside = [g for g in hitters if g in span_set]
        if not inside:
            raise ValueError(f"edge {i}: no hitting-set member in its spanning set")
        out.append(pos[min(inside)])
    return out


@dataclass
class _Rewrite:
    """Mutable hypergraph-rewrite buffer: edges over original + copy ids."""

    h: Hypergraph

    def __post_init__(self) -> None:
        self.edge_sets: list[set[int]] = [set(e.items) for e in self.h.edges]
        self.orig_of: list[int] = list(self.h.all_item_ids())

    def new_copy(self, original: int) -> int:
        cid = len(self.orig_of)
        self.orig_of.append(original)
        return cid

    def reassign(self, eid: int, old: int, new: int) -> None:
        self.edge_sets[eid].discard(old)
        self.edge_sets[eid].add(new)

    def build(self) -> Hypergraph:
        items = [
            DataItem(i, self.h.weight(orig)) for i, orig in enumerate(self.orig_of)
        ]
        edges = [
            Hyperedge(eid, frozenset(s), self.h.edges[eid].multiplicity)
            for eid, s in enumerate(self.edge_sets)
        ]
        return Hypergraph(items=items, edges=edges)

    def collapse(self, p: Placement, capacity: int, ledger: ReplicaLedger | None) -> Placement:
        parts = [{self.orig_of[v] for v in part} for part in p.partitions]
        return Placement(partitions=parts, capacity=capacity, ledger=ledger)


def pra(h: Hypergraph, n_partitions: int, capacity: int, seed: int) -> Placement:
    """Pre-replicate the nodes whose replication helps the most, then re-partition.

    Nodes are scored by how many queries reach their partition only for them;
    in decreasing score order each node gets one copy per member of a greedy
    hitting set over its queries' spanning-partition sets, and each query is
    handed the copy matching its own spanning set.  Replication stops once the
    copies would no longer fit the spare capacity; a final partitioning of the
    rewritten hypergraph yields the layout.
    """
    n_min = _check_feasible(h, n_partitions, capacity)
    base = _enforced_hpa(h, n_min, capacity, seed)
    part_of = {}
    for pid, part in enumerate(base.partitions):
        for v in part:
            part_of[v] = pid

    cover_sets: list[frozenset[int]] = [
        frozenset(pid for pid, _ in get_spanning_partitions(base, e)) for e in h.edges
    ]

    # score: multiplicity-weighted count of edges meeting v's partition only at v
    in_part_count: list[dict[int, int]] = []
    for e in h.edges:
        cnt: dict[int, int] = {}
        for v in e.items:
            cnt[part_of[v]] = cnt.get(part_of[v], 0) + 1
        in_part_count.append(cnt)
    score = [0] * h.num_items
    for v in h.all_item_ids():
        pv = part_of[v]
        score[v] = sum(
            h.edges[eid].multiplicity
            for eid in h.incident[v]
            if in_part_count[eid][pv] == 1
        )

    rewrite = _Rewrite(h)
    ledger = ReplicaLedger()
    budget = (n_partitions - n_min) * capacity
    used = 0
    for v in sorted(h.all_item_ids(), key=lambda v: (-score[v], v)):
        edge_ids = h.incident[v]
        if not edge_ids:
            continue
        span_sets = [cover_sets[eid] for eid in edge_ids]
        hitters = sorted(hitting_set(span_sets))
        if len(hitters) <= 1:
            continue
        extra = (len(hitters) - 1) * h.weight(v)
        if used + extra > budget:
            break
        used += extra
        copy_ids = [v] + [rewrite.new_copy(v) for _ in hitters[1:]]
        which = distribute_edges_by_hitting_set(span_sets, hitters)
        groups: list[list[int]] = [[] for _ in hitters]
        for eid, gi in zip(edge_ids, which):
            groups[gi].append(eid)
            if copy_ids[gi] != v:
                rewrite.reassign(eid, v, copy_ids[gi])
        ledger.assignments[v] = groups

    final = _enforced_hpa(rewrite.build(), n_partitions, capacity, seed)
    return rewrite.collapse(final, capacity, ledger)


# -- local move-based replication -------------------------------------------


@dataclass(frozen=True)
class MoveCandidate:
    """A copy move between two partitions: span decrease per unit weight copied."""

    src: int
    dest: int
    items: frozenset[int]
    gain: Fraction


class _CoverState:
    """Maintained per-query covers plus reverse partition -> queries index."""

    def __init__(self, h: Hypergraph, p: Placement):
        self.h = h
        self.parts = p.partitions
        self.capacity = p.capacity
        self.loads = p.loads(h)
        self.item_parts: list[set[int]] = [set() for _ in h.all_item_ids()]
        for pid, part in enumerate(self.parts):
            for v in part:
                self.item_parts[v].add(pid)
        self.covers: list[dict[int, set[int]]] = []
        self.edges_by_part: list[set[int]] = [set() for _ in self.parts]
        self.total_span = 0
        for e in h.edges:
            cov = self._greedy_cover(e.items)
            self.covers.append(cov)
            for pid in cov:
                self.edges_by_part[pid].add(e.id)
            self.total_span += len(cov) * e.multiplicity

    def _greedy_cover(self, items: frozenset[int]) -> dict[int, set[int]]:
        candidates: set[int] = set()
        for v in items:
            if not self.item_parts[v]:
                raise ValueError(f"item {v} is not placed on any partition")
            candidates |= self.item_parts[v]
        remaining = set(items)
        cov: dict[int, set[int]] = {}
        while remaining:
            best_pid, best = -1, set()
            for pid in sorted(candidates):
                overlap = remaining & self.parts[pid]
                if len(overlap) > len(best):
                    best_pid, best = pid, overlap
            cov[best_pid] = best
            remaining -= best
        return cov

    def max_gain(self, src: int, dest: int) -> MoveCandidate | None:
        """Best copy group src -> dest by span-decrease per unit weight.

        Builds the local hypergraph of src-side accessed item groups for the
        queries currently served by both partitions, trims it to the free
        space of dest, then peels lowest-degree items tracking the ratio of
        fully-surviving groups to surviving weight.
        """
        free = self.capacity - self.loads[dest]
        if free <= 0:
            return None
        shared = self.edges_by_part[src] & self.edges_by_part[dest]
        if not shared:
            return None
        local_edges: list[tuple[frozenset[int], int]] = []
        nodes: set[int] = set()
        for eid in sorted(shared):
            acc = frozenset(self.covers[eid][src])
            local_edges.append((acc, self.h.edges[eid].multiplicity))
            nodes |= acc
        node_list = sorted(nodes)
        node_ids = {v: i for i, v in enumerate(node_list)}
        weights = [self.h.weight(v) for v in node_list]
        n = len(node_list)
        adj: list[list[int]] = [[] for _ in range(n)]
        for li, (acc, _) in enumerate(local_edges):
            for v in acc:
                adj[node_ids[v]].append(li)
        alive_node = [True] * n
        alive_edge = [True] * len(local_edges)
        degree = [0] * n
        for i in range(n):
            degree[i] = sum(local_edges[li][1] for li in adj[i])
        live_weight = sum(weights)
        live_gain = sum(mult for _, mult in local_edges)
        live_count = n

        def peel_min() -> None:
            nonlocal live_weight, live_gain, live_count
            victim = min(
                (i for i in range(n) if alive_node[i]), key=lambda i: (degree[i], i)
            )
            alive_node[victim] = False
            live_weight -= weights[victim]
            live_count -= 1
            for li in adj[victim]:
                if alive_edge[li]:
                    alive_edge[li] = False
                    live_gain -= local_edges[li][1]
                    for u in local_edges[li][0]:
                        ui = node_ids[u]
                        if alive_node[ui]:
                            degree[ui] -= local_edges[li][1]

        while live_count > 0 and live_weight > free:
            peel_min()
        best: tuple[int, int, frozenset[int]] | None = None  # (num, den, items)
        while live_count > 0:
            if live_gain > 0:
                num, den = live_gain, live_weight
                if best is None or num * best[1] > best[0] * den:
                    best = (
                        num,
                        den,
                        frozenset(node_list[i] for i in range(n) if alive_node[i]),
                    )
            peel_min()
        if best is None:
            return None
        return MoveCandidate(src=src, dest=dest, items=best[2], gain=Fraction(best[0], best[1]))

    def apply_move(self, cand: MoveCandidate) -> None:
        new_items = cand.items - self.parts[cand.dest]
        for v in new_items:
            self.parts[cand.dest].add(v)
            self.item_parts[v].add(cand.dest)
            self.loads[cand.dest] += self.h.weight(v)
        affected: set[int] = set()
        for v in cand.items:
            affected.update(self.h.incident[v])
        for eid in sorted(affected):
            cov = self.covers[eid]
            mult = self.h.edges[eid].multiplicity
            if cand.src in cov and cand.dest in cov and cov[cand.src] <= cand.items:
                cov[cand.dest] |= cov[cand.src]
                del cov[cand.src]
                self.edges_by_part[cand.src].discard(eid)
                self.total_span -= mult
            else:
                fresh = self._greedy_cover(self.h.edges[eid].items)
                if len(fresh) < len(cov):
                    for pid in cov:
                        self.edges_by_part[pid].discard(eid)
                    for pid in fresh:
                        self.edges_by_part[pid].add(eid)
                    self.total_span -= mult * (len(cov) - len(fresh))
                    self.covers[eid] = fresh


def lmbr_max_gain(
    p: Placement,
    h: Hypergraph,
    covers: list[dict[int, set[int]]] | None,
    src: int,
    dest: int,
) -> MoveCandidate | None:
    """Best single copy move from src to dest under the current covers.

    ``covers=None`` recomputes fresh greedy covers from the placement.
    """
    if src == dest:
        raise ValueError("src and dest must differ")
    state = _CoverState(h, p)
    if covers is not None:
        state.covers = covers
        state.edges_by_part = [set() for _ in p.partitions]
        for eid, cov in enumerate(covers):
            for pid in cov:
                state.edges_by_part[pid].add(eid)
    return state.max_gain(src, dest)


def lmbr(
    h: Hypergraph,
    n_partitions: int,
    capacity: int,
    seed: int,
    move_log: list | None = None,
) -> Placement:
    """Local move-based replication.

    Starts from a disjoint partition over all available partitions, then
    repeatedly executes the copy move with the best span-decrease-per-weight
    ratio, keeping per-query covers up to date so an already-served query
    never motivates a move twice.  Stops when no strictly positive move fits.

    ``move_log``, when given, collects ``(src, dest, items, gain,
    total_span_after)`` tuples for every executed move.
    """
    _check_feasible(h, n_partitions, capacity)
    base = _enforced_hpa(h, n_partitions, capacity, seed)
    state = _CoverState(h, base)
    n = n_partitions

    heap: list[tuple[float, int, int]] = []
    entries: dict[tuple[int, int], MoveCandidate] = {}

    def push(src: int, dest: int) -> None:
        cand = state.max_gain(src, dest)
        key = (src, dest)
        if cand is None:
            entries.pop(key, None)
            return
        entries[key] = cand
        heapq.heappush(heap, (-float(cand.gain), src, dest))

    for src in range(n):
        for dest in range(n):
            if src != dest:
                push(src, dest)

    while heap:
        _, src, dest = heapq.heappop(heap)
        key = (src, dest)
        queued = entries.get(key)
        if queued is None:
            continue
        fresh = state.max_gain(src, dest)
        if fresh != queued:
            # stale row: refresh lazily and look again
            entries.pop(key, None)
            if fresh is not None:
                entries[key] = fresh
                heapq.heappush(heap, (-float(fresh.gain), src, dest))
            continue
        entries.pop(key, None)
        state.apply_move(fresh)
        if move_log is not None:
            move_log.append((src, dest, fresh.items, fresh.gain, state.total_span))
        for g in range(n):
            if g != dest:
                push(g, dest)
                push(dest, g)

    return Placement(
        partitions=state.parts, capacity=capacity
    )


# -- exactly-three-copies variants ------------------------------------------


def _check_3way(h: Hypergraph, n: int, capacity: int) -> None:
    need = 3 * total_weight(h.all_item_ids(), h)
    if n * capacity < need:
        raise InfeasibleError(
            f"3 copies need total weight {need} but {n} x {capacity} available"
        )
    if capacity < max(it.weight for it in h.items):
        raise InfeasibleError("capacity below heaviest item weight")


def _ensure_exact_copies(
    parts: list[set[int]], h: Hypergraph, capacity: int, n_partitions: int, want: int = 3
) -> list[set[int]]:
    """Top up items short of ``want`` copies into least-loaded partitions."""
    counts = [0] * h.num_items
    for part in parts:
        for v in part:
            counts[v] += 1
    loads = [sum(h.weight(v) for v in part) for part in parts]
    for v in h.all_item_ids():
        while counts[v] < want:
            w = h.weight(v)
            options = [
                pid
                for pid in range(len(parts))
                if v not in parts[pid] and loads[pid] + w <= capacity
            ]
            if not options and len(parts) < n_partitions:
                parts.append(set())
                loads.append(0)
                options = [len(parts) - 1]
            if not options:
                raise InfeasibleError(
                    f"cannot reach {want} copies of item {v} under the capacity"
                )
            pid = min(options, key=lambda p: (loads[p], p))
            parts[pid].add(v)
            loads[pid] += w
            counts[v] += 1
    return parts


def _triple_groups_to_placement(
    h: Hypergraph,
    groups_per_item: list[list[list[int]]],
    n_partitions: int,
    capacity: int,
    seed: int,
) -> Placement:
    """Rewrite the hypergraph so every item has 3 copies with the given
    edge-group assignment, partition it, and collapse back to original ids."""
    rewrite = _Rewrite(h)
    ledger = ReplicaLedger()
    for v in h.all_item_ids():
        groups = groups_per_item[v]
        copy_ids = [v] + [rewrite.new_copy(v) for _ in range(2)]
        for gi, group in enumerate(groups):
            for eid in group:
                if copy_ids[gi] != v:
                    rewrite.reassign(eid, v, copy_ids[gi])
        ledger.assignments[v] = groups
    final = _enforced_hpa(rewrite.build(), n_partitions, capacity, seed)
    collapsed = rewrite.collapse(final, capacity, ledger)
    parts = _ensure_exact_copies(
        [set(p) for p in collapsed.partitions], h, capacity, n_partitions
    )
    return Placement(partitions=parts, capacity=capacity, ledger=ledger)


def sda_3way(h: Hypergraph, n_partitions: int, capacity: int, seed: int) -> Placement:
    """Three copies per item, incident queries split among them at random."""
    _check_3way(h, n_partitions, capacity)
    rng = random.Random(seed)
    groups_per_item: list[list[list[int]]] = []
    for v in h.all_item_ids():
        edge_ids = list(h.incident[v])
        rng.shuffle(edge_ids)
        k, rem = divmod(len(edge_ids), 3)
        groups: list[list[int]] = []
        start = 0
        for gi in range(3):
            size = k + (1 if gi < rem else 0)
            groups.append(sorted(edge_ids[start : start + size]))
            start += size
        groups_per_item.append(groups)
    return _triple_groups_to_placement(h, groups_per_item, n_partitions, capacity, seed)


def pra_3way(h: Hypergraph, n_partitions: int, capacity: int, seed: int) -> Placement:
    """Three copies per item, queries routed to copies by the hitting-set rule.

    The hitting set over each node's query spanning sets is truncated to the
    three most frequent partitions (extra query groups merge into the kept
    copy they co-occur with most) or padded by splitting the largest group.
    """
    _check_3way(h, n_partitions, capacity)
    n_min = min_partitions_needed(h, capacity)
    base = _enforced_hpa(h, n_min, capacity, seed)
    cover_sets: list[frozenset[int]] = [
        frozenset(pid for pid, _ in get_spanning_partitions(base, e)) for e in h.edges
    ]
    groups_per_item: list[list[list[int]]] = []
    for v in h.all_item_ids():
        edge_ids = list(h.incident[v])
        if not edge_ids:
            groups_per_item.append([[], [], []])
            continue
        span_sets = [cover_sets[eid] for eid in edge_ids]
        hitters = sorted(hitting_set(span_sets))
        which = distribute_edges_by_hitting_set(span_sets, hitters)
        groups: list[list[int]] = [[] for _ in hitters]
        for eid, gi in zip(edge_ids, which):
            groups[gi].append(eid)
        if len(groups) > 3:
            freq = {
                g: sum(1 for s in span_sets if g in s) for g in hitters
            }
            keep_idx = sorted(
                range(len(hitters)), key=lambda i: (-freq[hitters[i]], hitters[i])
            )[:3]
            keep_idx.sort()
            kept_groups = [groups[i] for i in keep_idx]
            for i in range(len(hitters)):
                if i in keep_idx or not groups[i]:
                    continue
                cooc = [
                    sum(1 for eid in groups[i] if hitters[kj] in cover_sets[eid])
                    for kj in keep_idx
                ]
                best = max(
                    range(3),
                    key=lambda j: (cooc[j], -len(kept_groups[j]), -j),
                )
                kept_groups[best].extend(groups[i])
            groups = [sorted(g) for g in kept_groups]
        while len(groups) < 3:
            big = max(range(len(groups)), key=lambda i: (len(groups[i]), -i))
            half = (len(groups[big]) + 1) // 2
            groups.append(groups[big][half:])
            groups[big] = groups[big][:half]
        groups_per_item.append(groups)
    return _triple_groups_to_placement(h, groups_per_item, n_partitions, capacity, seed)


def ihpa_3way(h: Hypergraph, n_partitions: int, capacity: int, seed: int) -> Placement:
    """Three rounds of disjoint partitioning over shrinking residuals.

    Each round re-partitions the items of the still-spanning queries onto
    fresh partitions; items that drop out of the residuals early are topped
    up into the least-loaded partitions to honor the exactly-three contract.
    """
    _check_3way(h, n_partitions, capacity)
    n_min = min_partitions_needed(h, capacity)
    base = _enforced_hpa(h, n_min, capacity, seed)
    parts = [set(p) for p in base.partitions]
    for _ in range(2):
        placement = Placement(partitions=parts, capacity=capacity)
        keep = {e.id for e in h.edges if get_query_span(placement, e) > 1}
        if not keep:
            break
        used: set[int] = set()
        for eid in keep:
            used |= h.edges[eid].items
        w_res = total_weight(used, h)
        room = n_partitions - len(parts)
        if room <= 0:
            break
        n_cur = min(-(-w_res // capacity), room)
        if w_res > n_cur * capacity:
            keep = _shrink_to_weight(h, placement, keep, n_cur * capacity)
            if not keep:
                break
        residual, new_to_old = restrict_to_edges(h, keep)
        sub = _enforced_hpa(residual, n_cur, capacity, seed)
        for part in sub.partitions:
            parts.append({new_to_old[v] for v in part})
    parts = _ensure_exact_copies(parts, h, capacity, n_partitions)
    return Placement(partitions=parts, capacity=capacity)


ALGORITHMS = {
    "random": random_placement,
    "hpa": baseline_partition,
    "ihpa": ihpa,
    "ds": ds,
    "pra": pra,
    "lmbr": lmbr,
    "pra_3way": pra_3way,
    "sda_3way": sda_3way,
    "ihpa_3way": ihpa_3way,
}
