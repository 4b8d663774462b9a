"""Text format for benchmark hypergraphs (hMETIS-style .hgr files).

Layout: a header line ``|E| |V| [fmt]`` followed by one line per hyperedge
listing 1-based vertex indices.  fmt flags: 1 = the first token of each edge
line is an integer edge weight, 10 = |V| trailing lines carry vertex weights,
11 = both.  Lines starting with ``%`` are comments.  Vertex indices are
converted to the internal 0-based convention on parse; edge weights become
edge multiplicities.
"""

from __future__ import annotations

from typing import IO, Iterable

from .hypergraph import DataItem, Hyperedge, Hypergraph


class ParseError(ValueError):
    """Malformed benchmark file; carries the 1-based offending line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


def _content_lines(stream: Iterable[str]):
    for i, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        yield i, line


def _ints(line_no: int, line: str) -> list[int]:
    out = []
    for tok in line.split():
        try:
            out.append(int(tok))
        except ValueError:
            raise ParseError(line_no, f"non-numeric token {tok!r}") from None
    return out


def parse_benchmark_hypergraph(stream: IO[str] | Iterable[str]) -> Hypergraph:
    """Parse an .hgr stream into a Hypergraph.

    The parsed edge count (header |E|) is preserved as total multiplicity:
    duplicate nets collapse into one edge with a higher multiplicity, so
    ``h.query_count`` always equals the header edge count (scaled by edge
    weights when present).
    """
    lines = _content_lines(stream)
    try:
        line_no, header = next(lines)
    except StopIteration:
        raise ParseError(1, "empty file: missing header") from None
    fields = _ints(line_no, header)
    if len(fields) not in (2, 3):
        raise ParseError(line_no, f"header must be '|E| |V| [fmt]', got {len(fields)} fields")
    num_edges, num_items = fields[0], fields[1]
    fmt = fields[2] if len(fields) == 3 else 0
    if fmt not in (0, 1, 10, 11):
        raise ParseError(line_no, f"unsupported fmt flag {fmt}")
    if num_edges < 1 or num_items < 1:
        raise ParseError(line_no, f"non-positive sizes in header: {num_edges} {num_items}")
    has_edge_weights = fmt in (1, 11)
    has_item_weights = fmt in (10, 11)

    merged: dict[frozenset[int], int] = {}
    for _ in range(num_edges):
        try:
            line_no, line = next(lines)
        except StopIteration:
            raise ParseError(line_no, f"expected {num_edges} edge lines, file ended early") from None
        vals = _ints(line_no, line)
        mult = 1
        if has_edge_weights:
            if len(vals) < 2:
                raise ParseError(line_no, "edge line with weight flag needs weight + vertices")
            mult, vals = vals[0], vals[1:]
            if mult < 1:
                raise ParseError(line_no, f"edge weight must be >= 1, got {mult}")
        if not vals:
            raise ParseError(line_no, "edge with no vertices")
        for v in vals:
            if not (1 <= v <= num_items):
                raise ParseError(line_no, f"vertex index {v} out of range 1..{num_items}")
        fs = frozenset(v - 1 for v in vals)
        merged[fs] = merged.get(fs, 0) + mult

    weights = [1] * num_items
    if has_item_weights:
        for v in range(num_items):
            try:
                line_no, line = next(lines)
            except StopIteration:
                raise ParseError(
                    line_no, f"expected {num_items} vertex weight lines, file ended early"
                ) from None
            vals = _ints(line_no, line)
            if len(vals) != 1:
                raise ParseError(line_no, "vertex weight line must hold one integer")
            if vals[0] < 1:
                raise ParseError(line_no, f"vertex weight must be >= 1, got {vals[0]}")
            weights[v] = vals[0]

    for line_no, _ in lines:
        raise ParseError(line_no, "trailing content after declared edges and weights")

    items = [DataItem(i, w) for i, w in enumerate(weights)]
    # edge ids follow file order (first appearance for collapsed duplicates)
    edges = [Hyperedge(eid, fs, mult) for eid, (fs, mult) in enumerate(merged.items())]
    return Hypergraph(items=items, edges=edges)


def write_benchmark_hypergraph(h: Hypergraph, stream: IO[str]) -> None:
    """Serialize a Hypergraph to the .hgr text format (round-trips with parse)."""
    has_mult = any(e.multiplicity != 1 for e in h.edges)
    has_weights = any(it.weight != 1 for it in h.items)
    fmt = (1 if has_mult else 0) + (10 if has_weights else 0)
    header = f"{h.num_edges} {h.num_items}"
    if fmt:
        header += f" {fmt}"
    stream.write(header + "\n")
    for e in h.edges:
        pins = " ".join(str(v + 1) for v in sorted(e.items))
        if has_mult:
            stream.write(f"{e.multiplicity} {pins}\n")
        else:
            stream.write(pins + "\n")
    if has_weights:
        for it in h.items:
            stream.write(f"{it.weight}\n")


def load_hgr(path: str) -> Hypergraph:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_benchmark_hypergraph(fh)


def save_hgr(h: Hypergraph, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        write_benchmark_hypergraph(h, fh)
