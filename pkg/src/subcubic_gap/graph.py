"""Graph and multigraph types plus the basic constructions built on them.

Vertices are always ``0..n-1``.  Adjacency is kept as a tuple of Python
ints used as bitsets, which keeps refinement and enumeration cheap.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np


class GraphError(ValueError):
    """Raised when a graph argument violates an operation's precondition."""


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Graph:
    """Immutable simple undirected graph on vertices ``0..n-1``."""

    __slots__ = ("n", "edges", "adj")

    def __init__(self, n: int, edges: Iterable[Sequence[int]] = ()):
        if n < 0:
            raise GraphError("vertex count must be non-negative")
        adj = [0] * n
        normalized = set()
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if u == v:
                raise GraphError(f"loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge {(u, v)} out of range for n={n}")
            if u > v:
                u, v = v, u
            normalized.add((u, v))
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", frozenset(normalized))
        object.__setattr__(self, "adj", tuple(adj))

    def __setattr__(self, name, value):
        raise AttributeError("Graph is immutable")

    @classmethod
    def from_adjacency(cls, adj: Sequence[int]) -> "Graph":
        n = len(adj)
        return cls(n, ((u, v) for u in range(n) for v in _bits(adj[u]) if u < v))

    @classmethod
    def from_matrix(cls, matrix) -> "Graph":
        m = np.asarray(matrix)
        n = m.shape[0]
        return cls(n, ((u, v) for u in range(n) for v in range(u + 1, n) if m[u, v]))

    def __eq__(self, other):
        return isinstance(other, Graph) and self.n == other.n and self.edges == other.edges

    def __hash__(self):
        return hash((self.n, self.edges))

    def __repr__(self):
        return f"Graph(n={self.n}, m={len(self.edges)})"

    @property
    def m(self) -> int:
        return len(self.edges)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def neighbors(self, v: int) -> list[int]:
        return list(_bits(self.adj[v]))

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def degrees(self) -> list[int]:
        return [a.bit_count() for a in self.adj]

    def max_degree(self) -> int:
        return max(self.degrees(), default=0)

    def min_degree(self) -> int:
        return min(self.degrees(), default=0)

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def is_regular(self, k: int) -> bool:
        return all(d == k for d in self.degrees())

    def adjacency_matrix(self, dtype=np.int64) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=dtype)
        for u, v in self.edges:
            a[u, v] = a[v, u] = 1
        return a

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Return the graph with vertex ``v`` renamed to ``perm[v]``."""
        return Graph(self.n, ((perm[u], perm[v]) for u, v in self.edges))

    def induced_subgraph(self, vertices: Iterable[int]) -> "Graph":
        keep = sorted(set(vertices))
        index = {v: i for i, v in enumerate(keep)}
        return Graph(len(keep), ((index[u], index[v]) for u, v in self.edges if u in index and v in index))

    def delete_vertices(self, vertices: Iterable[int]) -> "Graph":
        gone = set(vertices)
        return self.induced_subgraph(v for v in range(self.n) if v not in gone)

    def add_edges(self, extra: Iterable[Sequence[int]]) -> "Graph":
        return Graph(self.n, list(self.edges) + [tuple(e) for e in extra])

    def complement(self) -> "Graph":
        return Graph(self.n, ((u, v) for u, v in combinations(range(self.n), 2) if not self.has_edge(u, v)))

    def disjoint_union(self, other: "Graph") -> "Graph":
        k = self.n
        return Graph(k + other.n, list(self.edges) + [(u + k, v + k) for u, v in other.edges])


# ---------------------------------------------------------------------------
# small named graphs used throughout


def complete_graph(n: int) -> Graph:
    return Graph(n, combinations(range(n), 2))


def path_graph(n: int) -> Graph:
    return Graph(n, ((i, i + 1) for i in range(n - 1)))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise GraphError("cycles need at least 3 vertices")
    return Graph(n, ((i, (i + 1) % n) for i in range(n)))


def star_graph(leaves: int) -> Graph:
    return Graph(leaves + 1, ((0, i) for i in range(1, leaves + 1)))


def empty_graph(n: int) -> Graph:
    return Graph(n)


# ---------------------------------------------------------------------------
# structural predicates


def components(g: Graph) -> list[list[int]]:
    """Connected components, each sorted, ordered by smallest vertex."""
    seen = 0
    out = []
    for s in range(g.n):
        if seen >> s & 1:
            continue
        comp = 1 << s
        frontier = 1 << s
        while frontier:
            nxt = 0
            for v in _bits(frontier):
                nxt |= g.adj[v]
            frontier = nxt & ~comp
            comp |= frontier
        seen |= comp
        out.append(list(_bits(comp)))
    return out


def is_connected(g: Graph) -> bool:
    if g.n == 0:
        return False
    return len(components(g)) == 1


def girth(g: Graph) -> Optional[int]:
    """Length of a shortest cycle, or ``None`` for a forest."""
    best = None
    for s in range(g.n):
        dist = {s: 0}
        parent = {s: -1}
        queue = deque([s])
        while queue:
            u = queue.popleft()
            if best is not None and 2 * dist[u] + 1 >= best:
                break
            for w in _bits(g.adj[u]):
                if w not in dist:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
                elif parent[u] != w:
                    length = dist[u] + dist[w] + 1
                    if best is None or length < best:
                        best = length
    return best


def bipartition(g: Graph) -> Optional[tuple[list[int], list[int]]]:
    """Two-colouring of a connected graph; the part holding vertex 0 comes first."""
    if not is_connected(g):
        raise GraphError("bipartition requires a connected graph")
    color = [-1] * g.n
    color[0] = 0
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for w in _bits(g.adj[u]):
            if color[w] < 0:
                color[w] = 1 - color[u]
                queue.append(w)
            elif color[w] == color[u]:
                return None
    return [v for v in range(g.n) if color[v] == 0], [v for v in range(g.n) if color[v] == 1]


def is_bipartite(g: Graph) -> bool:
    return all(bipartition(g.induced_subgraph(c)) is not None for c in components(g))


def cut_vertices(g: Graph) -> set[int]:
    """Articulation points (iterative Tarjan)."""
    n = g.n
    disc = [-1] * n
    low = [0] * n
    cuts: set[int] = set()
    timer = 0
    for root in range(n):
        if disc[root] >= 0:
            continue
        disc[root] = low[root] = timer
        timer += 1
        root_children = 0
        stack = [(root, -1, iter(g.neighbors(root)))]
        while stack:
            u, parent, it = stack[-1]
            advanced = False
            for w in it:
                if disc[w] < 0:
                    disc[w] = low[w] = timer
                    timer += 1
                    if u == root:
                        root_children += 1
                    stack.append((w, u, iter(g.neighbors(w))))
                    advanced = True
                    break
                if w != parent:
                    low[u] = min(low[u], disc[w])
            if advanced:
                continue
            stack.pop()
            if parent >= 0:
                low[parent] = min(low[parent], low[u])
                if parent != root and low[u] >= disc[parent]:
                    cuts.add(parent)
        if root_children > 1:
            cuts.add(root)
    return cuts


def is_chordal(g: Graph) -> bool:
    """Maximum cardinality search followed by a perfect-elimination check."""
    n = g.n
    weight = [0] * n
    order = []
    numbered = 0
    for _ in range(n):
        v = max((u for u in range(n) if not numbered >> u & 1), key=lambda u: (weight[u], -u))
        order.append(v)
        numbered |= 1 << v
        for w in _bits(g.adj[v] & ~numbered):
            weight[w] += 1
    position = {v: i for i, v in enumerate(order)}
    # Reverse of MCS order is a perfect elimination ordering iff g is chordal.
    for v in order:
        earlier = [w for w in _bits(g.adj[v]) if position[w] < position[v]]
        if not earlier:
            continue
        parent = max(earlier, key=position.__getitem__)
        for w in earlier:
            if w != parent and not g.has_edge(parent, w):
                return False
    return True


def has_induced_diamond(g: Graph) -> bool:
    """True if some edge uv has two non-adjacent common neighbours (K4 minus an edge)."""
    for u, v in g.edges:
        common = list(_bits(g.adj[u] & g.adj[v]))
        for x, y in combinations(common, 2):
            if not g.has_edge(x, y):
                return True
    return False


def clique_number(g: Graph) -> int:
    best = 0

    def grow(size: int, cand: int):
        nonlocal best
        if cand == 0:
            best = max(best, size)
            return
        if size + cand.bit_count() <= best:
            return
        for v in _bits(cand):
            grow(size + 1, cand & g.adj[v] & ~((1 << (v + 1)) - 1))

    grow(0, (1 << g.n) - 1)
    return best


# ---------------------------------------------------------------------------
# multigraphs


@dataclass(frozen=True)
class Multigraph:
    """Symmetric non-negative integer multiplicities with a zero diagonal."""

    n: int
    mult: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.mult) != self.n or any(len(r) != self.n for r in self.mult):
            raise GraphError("multiplicity matrix has the wrong shape")
        for u in range(self.n):
            if self.mult[u][u] != 0:
                raise GraphError("multigraph diagonal must be zero")
            for v in range(u + 1, self.n):
                if self.mult[u][v] != self.mult[v][u] or self.mult[u][v] < 0:
                    raise GraphError("multiplicities must be symmetric and non-negative")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int, int]]) -> "Multigraph":
        m = [[0] * n for _ in range(n)]
        for u, v, k in edges:
            m[u][v] += k
            m[v][u] += k
        return cls(n, tuple(tuple(r) for r in m))

    @classmethod
    def from_graph(cls, g: Graph) -> "Multigraph":
        return cls.from_edges(g.n, ((u, v, 1) for u, v in g.edges))

    def is_simple(self) -> bool:
        return all(x <= 1 for row in self.mult for x in row)

    def to_graph(self) -> Graph:
        if not self.is_simple():
            raise GraphError("multigraph has multi-edges")
        return Graph(self.n, ((u, v) for u in range(self.n) for v in range(u + 1, self.n) if self.mult[u][v]))

    def support(self) -> Graph:
        return Graph(self.n, ((u, v) for u in range(self.n) for v in range(u + 1, self.n) if self.mult[u][v]))

    def induced(self, vertices: Sequence[int]) -> "Multigraph":
        vs = list(vertices)
        return Multigraph(len(vs), tuple(tuple(self.mult[u][v] for v in vs) for u in vs))


@dataclass(frozen=True)
class RootedMultigraph:
    """A multigraph with a distinguished root set."""

    base: Multigraph
    roots: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "roots", frozenset(self.roots))
        if any(not (0 <= r < self.base.n) for r in self.roots):
            raise GraphError("roots must be vertices of the base multigraph")

    @classmethod
    def from_graph(cls, g: Graph, roots: Iterable[int] = ()) -> "RootedMultigraph":
        return cls(Multigraph.from_graph(g), frozenset(roots))

    @property
    def n(self) -> int:
        return self.base.n

    def graph(self) -> Graph:
        return self.base.to_graph()

    def induced(self, vertices: Sequence[int]) -> "RootedMultigraph":
        vs = list(vertices)
        index = {v: i for i, v in enumerate(vs)}
        return RootedMultigraph(self.base.induced(vs), frozenset(index[r] for r in self.roots if r in index))


@dataclass(frozen=True)
class GraphWithPetals:
    """A simple graph plus pendant double edges ("petals").

    ``petals`` lists the attachment vertex of each petal; a vertex may carry
    several.  Each petal implicitly owns a fresh leaf vertex, so two petals
    never share their leaf.
    """

    base: Graph
    petals: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "petals", tuple(sorted(self.petals)))
        if any(not (0 <= p < self.base.n) for p in self.petals):
            raise GraphError("petal attachment outside the base graph")


@dataclass(frozen=True)
class Involution:
    perm: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "perm", tuple(self.perm))
        p = self.perm
        if sorted(p) != list(range(len(p))) or any(p[p[i]] != i for i in range(len(p))):
            raise GraphError("not an involution")

    def __call__(self, v: int) -> int:
        return self.perm[v]


# ---------------------------------------------------------------------------
# constructions


def bipartite_double(g: Graph) -> Graph:
    n = g.n
    return Graph(2 * n, [e for u, v in g.edges for e in ((u, v + n), (v, u + n))])


def distance_two_multigraph(g: Graph) -> Multigraph:
    """Multiplicity of uv = number of common neighbours of u and v."""
    n = g.n
    mult = [[0] * n for _ in range(n)]
    for u in range(n):
        for v in range(u + 1, n):
            c = (g.adj[u] & g.adj[v]).bit_count()
            mult[u][v] = mult[v][u] = c
    return Multigraph(n, tuple(tuple(r) for r in mult))


def _check_degrees_2_3(g: Graph) -> None:
    if g.n and (g.min_degree() < 2 or g.max_degree() > 3):
        raise GraphError("requires minimum degree >= 2 and maximum degree <= 3")


def rooted_distance_two_subgraph(g: Graph, u_set: Iterable[int]) -> RootedMultigraph:
    """Distance-two multigraph restricted to ``u_set``; roots are the degree-2 vertices.

    Vertices of the result follow the sorted order of ``u_set``.
    """
    _check_degrees_2_3(g)
    us = sorted(set(u_set))
    d2 = distance_two_multigraph(g).induced(us)
    return RootedMultigraph(d2, frozenset(i for i, v in enumerate(us) if g.degree(v) == 2))


def distance_two_component_sets(g: Graph) -> list[list[int]]:
    return components(distance_two_multigraph(g).support())


def rooted_distance_two_components(g: Graph) -> list[RootedMultigraph]:
    if not is_connected(g):
        raise GraphError("requires a connected graph")
    _check_degrees_2_3(g)
    return [rooted_distance_two_subgraph(g, c) for c in distance_two_component_sets(g)]


def line_graph(f: GraphWithPetals) -> tuple[Graph, list[tuple]]:
    """Generalized line graph of a graph with petals.

    Returns the graph and a label per vertex: ``("edge", u, v)`` for a base
    edge and ``("petal", i, side)`` for side 0/1 of petal ``i``.  Two
    vertices are adjacent iff their edges share exactly one endpoint, so the
    two edges of one petal are never adjacent.
    """
    base = f.base
    labels: list[tuple] = [("edge", u, v) for u, v in base.sorted_edges()]
    ends: list[frozenset] = [frozenset((u, v)) for _, u, v in labels]
    leaf = base.n
    for i, p in enumerate(f.petals):
        for side in (0, 1):
            labels.append(("petal", i, side))
            ends.append(frozenset((p, leaf)))
        leaf += 1
    k = len(labels)
    edges = [(i, j) for i in range(k) for j in range(i + 1, k) if len(ends[i] & ends[j]) == 1]
    return Graph(k, edges), labels


def attach_cliques(gr: RootedMultigraph, k: int) -> Graph:
    """Hang a fresh ``K_k`` off every root, each clique vertex joined to its root."""
    if k < 1:
        raise GraphError("clique order must be positive")
    if not gr.base.is_simple():
        raise GraphError("attach_cliques needs a simple base graph")
    g = gr.base.to_graph()
    edges = list(g.edges)
    nxt = g.n
    for r in sorted(gr.roots):
        block = list(range(nxt, nxt + k))
        edges.extend((r, v) for v in block)
        edges.extend(combinations(block, 2))
        nxt += k
    return Graph(nxt, edges)
