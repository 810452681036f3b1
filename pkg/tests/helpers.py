from __future__ import annotations

import networkx as nx
from hypothesis import strategies as st

from subcubic_gap.graph import Graph


def to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges)
    return h


def from_nx(h: nx.Graph) -> Graph:
    index = {v: i for i, v in enumerate(h.nodes)}
    return Graph(len(index), [(index[u], index[v]) for u, v in h.edges])


def nx_iso(g: Graph, h: Graph) -> bool:
    return nx.is_isomorphic(to_nx(g), to_nx(h))


@st.composite
def graphs(draw, min_n=1, max_n=9, p=None):
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph(n, [e for e, keep in zip(pairs, mask) if keep])


@st.composite
def connected_subcubic(draw, min_n=1, max_n=12):
    """Random spanning tree with degree <= 3, then random extra edges respecting the bound."""
    n = draw(st.integers(min_n, max_n))
    deg = [0] * n
    edges = set()
    for v in range(1, n):
        options = [u for u in range(v) if deg[u] < 3]
        u = draw(st.sampled_from(options))
        edges.add((u, v))
        deg[u] += 1
        deg[v] += 1
    extra = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=2 * n))
    for u, v in extra:
        if u == v:
            continue
        e = (min(u, v), max(u, v))
        if e in edges or deg[u] >= 3 or deg[v] >= 3:
            continue
        edges.add(e)
        deg[u] += 1
        deg[v] += 1
    return Graph(n, edges)


@st.composite
def permutations_of(draw, n):
    return draw(st.permutations(list(range(n))))
