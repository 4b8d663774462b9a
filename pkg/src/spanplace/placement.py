"""Placement of item copies onto capacity-bounded partitions, plus file IO."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import IO

from .hypergraph import Hypergraph, InfeasibleError


@dataclass
class ReplicaLedger:
    """Per-item record of which copy serves which queries.

    ``assignments[item]`` is a list of edge-id lists, one per copy; the lists
    partition the item's incident edge set (an edge is served by exactly one
    copy).
    """

    assignments: dict[int, list[list[int]]] = field(default_factory=dict)

    def copies_of(self, item: int) -> int:
        return len(self.assignments.get(item, []))

    def validate(self, h: Hypergraph) -> None:
        for item, groups in self.assignments.items():
            seen: set[int] = set()
            for group in groups:
                for eid in group:
                    if eid in seen:
                        raise ValueError(f"item {item}: edge {eid} assigned to two copies")
                    seen.add(eid)
            incident = set(h.incident[item])
            if seen != incident:
                raise ValueError(
                    f"item {item}: copies cover edges {sorted(seen)} but incident set is "
                    f"{sorted(incident)}"
                )


@dataclass
class Placement:
    """Assignment of item copies to partitions; partitions may overlap (replication)."""

    partitions: list[set[int]]
    capacity: int
    ledger: ReplicaLedger | None = None

    @property
    def num_partitions(self) -> int:
        return len(self.partitions)

    def loads(self, h: Hypergraph) -> list[int]:
        return [sum(h.weight(v) for v in part) for part in self.partitions]

    def max_load(self, h: Hypergraph) -> int:
        loads = self.loads(h)
        return max(loads) if loads else 0

    def copy_count(self) -> int:
        """Total stored copies across partitions (>= num placed items)."""
        return sum(len(part) for part in self.partitions)

    def replica_count(self, h: Hypergraph) -> int:
        """Copies beyond the first for each item."""
        placed = set()
        for part in self.partitions:
            placed |= part
        return self.copy_count() - len(placed)

    def placed_items(self) -> set[int]:
        out: set[int] = set()
        for part in self.partitions:
            out |= part
        return out

    def copies_per_item(self, h: Hypergraph) -> list[int]:
        counts = [0] * h.num_items
        for part in self.partitions:
            for v in part:
                counts[v] += 1
        return counts

    def validate(self, h: Hypergraph, max_partitions: int | None = None) -> None:
        """Check capacity, full item coverage, and the partition-count bound."""
        if max_partitions is not None and self.num_partitions > max_partitions:
            raise ValueError(
                f"{self.num_partitions} partitions exceed the allowed {max_partitions}"
            )
        for pid, part in enumerate(self.partitions):
            load = sum(h.weight(v) for v in part)
            if load > self.capacity:
                raise InfeasibleError(
                    f"partition {pid} holds weight {load} > capacity {self.capacity}"
                )
            for v in part:
                if not (0 <= v < h.num_items):
                    raise ValueError(f"partition {pid} references unknown item {v}")
        missing = set(h.all_item_ids()) - self.placed_items()
        if missing:
            raise ValueError(f"items never placed: {sorted(missing)[:10]}")


# -- file formats ------------------------------------------------------


def placement_to_json(p: Placement) -> dict:
    doc = {
        "capacity": p.capacity,
        "partitions": [sorted(part) for part in p.partitions],
    }
    if p.ledger is not None:
        doc["ledger"] = {str(item): groups for item, groups in p.ledger.assignments.items()}
    return doc


def placement_from_json(doc: dict) -> Placement:
    ledger = None
    if "ledger" in doc:
        ledger = ReplicaLedger({int(k): v for k, v in doc["ledger"].items()})
    return Placement(
        partitions=[set(part) for part in doc["partitions"]],
        capacity=int(doc["capacity"]),
        ledger=ledger,
    )


def save_placement(p: Placement, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(placement_to_json(p), fh, indent=1, sort_keys=True)
        fh.write("\n")


def load_placement(path: str) -> Placement:
    with open(path, "r", encoding="utf-8") as fh:
        return placement_from_json(json.load(fh))


def write_placement_pairs(p: Placement, stream: IO[str]) -> None:
    """Flat text form: one ``item partition`` pair per line (replicas repeat the item)."""
    for pid, part in enumerate(p.partitions):
        for v in sorted(part):
            stream.write(f"{v} {pid}\n")


def read_partition_assignment(stream: IO[str]) -> list[int]:
    """Read a disjoint assignment file: line i holds the partition of vertex i."""
    out = []
    for i, raw in enumerate(stream):
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        try:
            out.append(int(line))
        except ValueError:
            raise ValueError(f"line {i + 1}: expected a partition index, got {line!r}") from None
    return out


def import_external_partition(
    h: Hypergraph, stream: IO[str], num_partitions: int, capacity: int
) -> Placement:
    """Build a validated disjoint Placement from a third-party assignment file."""
    assignment = read_partition_assignment(stream)
    if len(assignment) < h.num_items:
        raise ValueError(f"vertex {len(assignment)} unassigned (file has too few lines)")
    if len(assignment) > h.num_items:
        raise ValueError(
            f"file assigns {len(assignment)} vertices but hypergraph has {h.num_items}"
        )
    parts: list[set[int]] = [set() for _ in range(num_partitions)]
    for v, pid in enumerate(assignment):
        if not (0 <= pid < num_partitions):
            raise ValueError(f"vertex {v}: partition index {pid} outside 0..{num_partitions - 1}")
        parts[pid].add(v)
    p = Placement(partitions=parts, capacity=capacity)
    p.validate(h, max_partitions=num_partitions)
    return p
