"""graph6, DOT and JSON serialisation."""

from __future__ import annotations

import json
from typing import Iterable, Iterator, Optional, Sequence

from .graph import Graph, GraphError


class Graph6Error(GraphError):
    pass


def _encode_n(n: int) -> bytes:
    if n < 63:
        return bytes([n + 63])
    if n < 258048:
        return bytes([126] + [((n >> s) & 63) + 63 for s in (12, 6, 0)])
    return bytes([126, 126] + [((n >> s) & 63) + 63 for s in (30, 24, 18, 12, 6, 0)])


def to_graph6_bytes(g: Graph) -> bytes:
    out = bytearray(_encode_n(g.n))
    acc = 0
    nbits = 0
    for j in range(1, g.n):
        row = g.adj[j]
        for i in range(j):
            acc = (acc << 1) | (row >> i & 1)
            nbits += 1
            if nbits == 6:
                out.append(acc + 63)
                acc = nbits = 0
    if nbits:
        out.append((acc << (6 - nbits)) + 63)
    return bytes(out)


def to_graph6(g: Graph) -> str:
    return to_graph6_bytes(g).decode("ascii")


def from_graph6(text: str | bytes) -> Graph:
    if isinstance(text, str):
        text = text.encode("ascii")
    data = text.strip()
    if data.startswith(b">>graph6<<"):
        data = data[10:]
    if not data or any(b < 63 or b > 126 for b in data):
        raise Graph6Error(f"malformed graph6 string {data!r}")
    vals = [b - 63 for b in data]
    if vals[0] < 63:
        n, body = vals[0], vals[1:]
    elif len(vals) >= 4 and vals[1] < 63:
        n = (vals[1] << 12) | (vals[2] << 6) | vals[3]
        body = vals[4:]
    elif len(vals) >= 8:
        n = 0
        for v in vals[2:8]:
            n = (n << 6) | v
        body = vals[8:]
    else:
        raise Graph6Error(f"malformed graph6 header {data!r}")
    nbits = n * (n - 1) // 2
    if len(body) != (nbits + 5) // 6:
        raise Graph6Error(f"graph6 body has {len(body)} bytes, expected {(nbits + 5) // 6}")
    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            if body[k // 6] >> (5 - k % 6) & 1:
                edges.append((i, j))
            k += 1
    return Graph(n, edges)


def read_graph6_lines(lines: Iterable[str]) -> Iterator[Graph]:
    for line in lines:
        line = line.strip()
        if line:
            yield from_graph6(line)


def to_dot(g: Graph, name: str = "G", labels: Optional[Sequence[str]] = None) -> str:
    lines = [f"graph {name} {{"]
    for v in range(g.n):
        lab = f' [label="{labels[v]}"]' if labels else ""
        lines.append(f"  {v}{lab};")
    for u, v in g.sorted_edges():
        lines.append(f"  {u} -- {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def graph_to_json(g: Graph, name: Optional[str] = None, labels: Optional[Sequence[str]] = None) -> dict:
    doc = {"n": g.n, "edges": [list(e) for e in g.sorted_edges()], "graph6": to_graph6(g)}
    if name is not None:
        doc["name"] = name
    if labels is not None:
        doc["labels"] = list(labels)
    return doc


def graph_from_json(doc: dict) -> Graph:
    if "edges" in doc:
        return Graph(int(doc["n"]), [tuple(e) for e in doc["edges"]])
    if "graph6" in doc:
        return from_graph6(doc["graph6"])
    raise GraphError("JSON graph needs 'edges' or 'graph6'")


def parse_graphs(text: str) -> list[Graph]:
    """Read graph6 lines, a JSON graph, a JSON list of graphs, or JSON lines."""
    stripped = text.strip()
    if not stripped:
        return []
    if stripped[0] in "[{":
        try:
            doc = json.loads(stripped)
        except json.JSONDecodeError:
            return [graph_from_json(json.loads(line)) for line in stripped.splitlines() if line.strip()]
        if isinstance(doc, list):
            return [graph_from_json(d) for d in doc]
        for key in ("graphs", "catalog"):
            if key in doc:
                return [graph_from_json(d) for d in doc[key]]
        return [graph_from_json(doc)]
    return list(read_graph6_lines(stripped.splitlines()))
