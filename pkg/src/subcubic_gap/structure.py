"""Line graphs, generalized line graphs, decompositions and forbidden patterns.

Everything here is exhaustive backtracking; inputs are small.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterator, Optional, Sequence

from .graph import (
    Graph,
    GraphError,
    GraphWithPetals,
    Multigraph,
    RootedMultigraph,
    _bits,
    components,
    is_connected,
    line_graph,
)

ROOT, NON_ROOT, EITHER = "root", "non_root", "either"


# ---------------------------------------------------------------------------
# forbidden rooted patterns


@dataclass(frozen=True)
class RootedPattern:
    """A small rooted multigraph used as a forbidden configuration.

    ``exact`` patterns must match multiplicities exactly on every pair
    (including absent edges); the others only need at least the pattern's
    multiplicity on each pair.
    """

    pattern_id: str
    n: int
    edges: tuple[tuple[int, int, int], ...]
    roles: tuple[str, ...]
    exact: bool

    def multigraph(self) -> Multigraph:
        return Multigraph.from_edges(self.n, self.edges)

    def mult(self, u: int, v: int) -> int:
        return self.multigraph().mult[u][v]

    def worst_case(self) -> RootedMultigraph:
        """The rooting with every undecided vertex a non-root."""
        return RootedMultigraph(self.multigraph(), frozenset(i for i, r in enumerate(self.roles) if r == ROOT))


# Vertex order follows the letters of each drawing.  Adding roots only lowers
# the associated matrix, so undecided vertices may take either rooting.
FORBIDDEN_PATTERNS: tuple[RootedPattern, ...] = (
    RootedPattern("a", 2, ((0, 1, 2),), (ROOT, EITHER), exact=False),
    RootedPattern("c", 2, ((0, 1, 3),), (NON_ROOT, NON_ROOT), exact=False),
    RootedPattern("x", 3, ((1, 0, 1), (0, 2, 1)), (ROOT, ROOT, ROOT), exact=True),
    RootedPattern("e", 3, ((0, 1, 2), (1, 2, 1)), (EITHER, NON_ROOT, EITHER), exact=True),
    RootedPattern("d", 3, ((0, 2, 1), (0, 1, 2), (1, 2, 2)), (EITHER, EITHER, EITHER), exact=True),
    RootedPattern("i", 4, ((0, 1, 1), (1, 2, 1), (2, 3, 1)), (EITHER, ROOT, NON_ROOT, EITHER), exact=True),
    RootedPattern("j", 4, ((0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1)), (EITHER, ROOT, NON_ROOT, NON_ROOT), exact=True),
)

PATTERNS_BY_ID = {p.pattern_id: p for p in FORBIDDEN_PATTERNS}


@dataclass(frozen=True)
class ForbiddenWitness:
    """Pattern ``pattern_id`` found at host vertices ``embedding`` (pattern vertex i -> embedding[i])."""

    pattern_id: str
    embedding: tuple[int, ...]
    kind: str = "rooted"

    def to_json(self) -> dict:
        return {"kind": self.kind, "pattern_id": self.pattern_id, "embedding": list(self.embedding)}


def _role_ok(role: str, is_root: bool) -> bool:
    return role == EITHER or (role == ROOT) == is_root


def _embeddings(p: RootedPattern, gr: RootedMultigraph) -> Iterator[tuple[int, ...]]:
    pm = p.multigraph().mult
    hm = gr.base.mult
    n = gr.n
    emb: list[int] = []

    def fits(pv: int, hv: int) -> bool:
        for qv, hq in enumerate(emb):
            want, have = pm[pv][qv], hm[hv][hq]
            if p.exact:
                if want != have:
                    return False
            elif have < want:
                return False
        return True

    def grow():
        k = len(emb)
        if k == p.n:
            yield tuple(emb)
            return
        for hv in range(n):
            if hv in emb or not _role_ok(p.roles[k], hv in gr.roots) or not fits(k, hv):
                continue
            emb.append(hv)
            yield from grow()
            emb.pop()

    yield from grow()


def scan_forbidden_rooted(gr: RootedMultigraph) -> Optional[ForbiddenWitness]:
    """First embedding of a forbidden pattern, patterns tried in table order."""
    for p in FORBIDDEN_PATTERNS:
        for emb in _embeddings(p, gr):
            return ForbiddenWitness(p.pattern_id, emb)
    return None


# ---------------------------------------------------------------------------
# Beineke graphs and line-graph recognition

BEINEKE_EDGES = {
    "a": [(0, 1), (0, 2), (0, 3)],
    "b": [(1, 2), (0, 2), (0, 3), (1, 3), (0, 4), (2, 4), (3, 4)],
    "c": [(u, v) for u, v in combinations(range(5), 2) if (u, v) != (1, 4)],
    "d": [(0, 2), (1, 2), (0, 3), (0, 4), (4, 5), (2, 3), (3, 4)],
    "e": [(0, 1), (0, 2), (0, 3), (2, 3), (2, 4), (3, 4), (2, 5), (3, 5), (4, 5)],
    "f": [(0, 1), (1, 2), (0, 2), (0, 3), (1, 3), (2, 3), (2, 4), (3, 4), (2, 5), (3, 5), (4, 5)],
    "g": [(0, 2), (1, 2), (0, 3), (0, 4), (4, 5), (2, 3), (3, 4), (1, 5)],
    "h": [(0, 2), (1, 2), (0, 3), (0, 4), (4, 5), (2, 3), (3, 4), (0, 1), (3, 5)],
    "i": [(0, v) for v in range(1, 6)] + [(1, 2), (2, 3), (3, 4), (4, 5), (5, 1)],
}


def beineke_graph(tag: str) -> Graph:
    edges = BEINEKE_EDGES[tag]
    return Graph(1 + max(max(e) for e in edges), edges)


def beineke_graphs() -> list[tuple[str, Graph]]:
    return [(t, beineke_graph(t)) for t in sorted(BEINEKE_EDGES)]


def find_induced(pattern: Graph, g: Graph) -> Optional[tuple[int, ...]]:
    """An injective map pattern -> g preserving adjacency and non-adjacency."""
    order = sorted(range(pattern.n), key=lambda v: -pattern.degree(v))
    # put each vertex after one of its already placed neighbours when possible
    placed: list[int] = []
    rest = list(order)
    while rest:
        pick = next((v for v in rest if any(pattern.has_edge(v, u) for u in placed)), rest[0])
        placed.append(pick)
        rest.remove(pick)
    emb: dict[int, int] = {}
    used = 0

    def grow(k: int) -> bool:
        nonlocal used
        if k == len(placed):
            return True
        pv = placed[k]
        anchor = next((u for u in placed[:k] if pattern.has_edge(pv, u)), None)
        cands = _bits(g.adj[emb[anchor]]) if anchor is not None else range(g.n)
        for hv in cands:
            if used >> hv & 1 or g.degree(hv) < pattern.degree(pv):
                continue
            if all(pattern.has_edge(pv, u) == g.has_edge(hv, emb[u]) for u in placed[:k]):
                emb[pv] = hv
                used |= 1 << hv
                if grow(k + 1):
                    return True
                used &= ~(1 << hv)
                del emb[pv]
        return False

    if grow(0):
        return tuple(emb[v] for v in range(pattern.n))
    return None


def _krausz_partitions(g: Graph) -> Iterator[list[tuple[int, ...]]]:
    """Edge partitions into cliques with every vertex in at most two cliques."""
    edges = g.sorted_edges()
    covered: set[tuple[int, int]] = set()
    count = [0] * g.n
    chosen: list[tuple[int, ...]] = []

    def uncovered_at(v: int) -> list[int]:
        return [w for w in g.neighbors(v) if (min(v, w), max(v, w)) not in covered]

    def dead() -> bool:
        for v in range(g.n):
            rest = uncovered_at(v)
            if not rest:
                continue
            if count[v] >= 2:
                return True
            if count[v] == 1 and any(not g.has_edge(x, y) for x, y in combinations(rest, 2)):
                return True
        return False

    def search(start: int):
        i = start
        while i < len(edges) and edges[i] in covered:
            i += 1
        if i == len(edges):
            yield list(chosen)
            return
        u, v = edges[i]
        if count[u] >= 2 or count[v] >= 2:
            return
        common = [w for w in g.neighbors(u) if g.has_edge(v, w) and count[w] < 2
                  and (min(u, w), max(u, w)) not in covered and (min(v, w), max(v, w)) not in covered]
        for size in range(len(common), -1, -1):
            for extra in combinations(common, size):
                if any(not g.has_edge(x, y) or (x, y) in covered for x, y in combinations(extra, 2)):
                    continue
                clique = tuple(sorted((u, v) + extra))
                new = [(x, y) for x, y in combinations(clique, 2)]
                covered.update(new)
                for x in clique:
                    count[x] += 1
                chosen.append(clique)
                if not dead():
                    yield from search(i + 1)
                chosen.pop()
                for x in clique:
                    count[x] -= 1
                covered.difference_update(new)

    yield from search(0)


def _root_from_partition(g: Graph, cliques: list[tuple[int, ...]]) -> tuple[Graph, list[tuple[int, int]]]:
    ends: list[list[int]] = [[] for _ in range(g.n)]
    for c, clique in enumerate(cliques):
        for v in clique:
            ends[v].append(c)
    nxt = len(cliques)
    for v in range(g.n):
        while len(ends[v]) < 2:
            ends[v].append(nxt)
            nxt += 1
    edge_map = [(min(e), max(e)) for e in ends]
    return Graph(nxt, edge_map), edge_map


def _is_k3(g: Graph) -> bool:
    return g.n == 3 and g.m == 3


def root_graph(g: Graph, star: bool = False) -> Optional[tuple[Graph, list[tuple[int, int]]]]:
    """A graph ``f`` with ``L(f) = g`` and the map vertex of ``g`` -> edge of ``f``.

    For ``K3`` the triangle is returned; ``star=True`` selects ``K_{1,3}``
    instead.  ``None`` when ``g`` is not a line graph.
    """
    if not is_connected(g):
        raise GraphError("root_graph requires a connected graph")
    if _is_k3(g):
        cliques = [(0, 1, 2)] if star else [(0, 1), (0, 2), (1, 2)]
        return _root_from_partition(g, cliques)
    for part in _krausz_partitions(g):
        return _root_from_partition(g, part)
    return None


def all_root_graphs(g: Graph) -> Iterator[tuple[Graph, list[tuple[int, int]]]]:
    """Root graphs from every Krausz partition (duplicates up to isomorphism possible)."""
    for part in _krausz_partitions(g):
        yield _root_from_partition(g, part)


def is_line_graph(g: Graph) -> Optional[ForbiddenWitness]:
    """``None`` when ``g`` is a line graph, else an induced Beineke graph."""
    for comp in components(g):
        h = g.induced_subgraph(comp)
        if root_graph(h) is not None:
            continue
        for tag, b in beineke_graphs():
            emb = find_induced(b, h)
            if emb is not None:
                return ForbiddenWitness(tag, tuple(comp[i] for i in emb), kind="beineke")
        raise AssertionError("non-line graph without an induced Beineke graph")
    return None


# ---------------------------------------------------------------------------
# generalized line graphs with pendant roots


@dataclass(frozen=True)
class RootGraphWitness:
    """``line_graph(f)`` equals the host with vertex ``v`` sent to ``edge_map[v]``.

    ``edge_map`` entries are line-graph labels (``("edge", x, y)`` or
    ``("petal", i, side)``); ``pendant_roots`` sends each root to its pendant
    edge ``(x, leaf)`` of ``f``.
    """

    f: GraphWithPetals
    edge_map: tuple[tuple, ...]
    pendant_roots: dict = field(default_factory=dict)

    def verify(self, gr: RootedMultigraph) -> bool:
        g = gr.base.to_graph()
        lg, labels = line_graph(self.f)
        index = {lab: i for i, lab in enumerate(labels)}
        if lg.n != g.n or sorted(self.edge_map) != sorted(labels):
            return False
        img = [index[lab] for lab in self.edge_map]
        if any(lg.has_edge(img[u], img[v]) != g.has_edge(u, v) for u in range(g.n) for v in range(u + 1, g.n)):
            return False
        base = self.f.base

        def degree(x):
            return base.degree(x) + 2 * self.f.petals.count(x)

        for r in gr.roots:
            lab = self.edge_map[r]
            if lab[0] != "edge" or min(degree(lab[1]), degree(lab[2])) != 1:
                return False
        return True

    def to_json(self) -> dict:
        return {
            "f": {"n": self.f.base.n, "edges": [list(e) for e in self.f.base.sorted_edges()], "petals": list(self.f.petals)},
            "edge_map": [list(lab) for lab in self.edge_map],
            "pendant_roots": {str(k): list(v) for k, v in sorted(self.pendant_roots.items())},
        }


def _star_partitions(g: Graph, roots: frozenset) -> Iterator[tuple[list[tuple[int, ...]], list[tuple[int, int]]]]:
    """Stars (edge sets at one vertex of ``F``) covering every edge of ``g`` once.

    A vertex may lie in two stars, a root in one.  Two non-adjacent vertices
    in one star are the two edges of a petal: their neighbourhoods are the
    rest of that star and they join no other star.
    """
    n = g.n
    adj = g.adj
    edges = g.sorted_edges()
    covered: set[tuple[int, int]] = set()
    count = [0] * n
    cap = [1 if v in roots else 2 for v in range(n)]
    stars: list[tuple[int, ...]] = []
    petals: list[tuple[int, int]] = []

    def key(x, y):
        return (x, y) if x < y else (y, x)

    def valid_star(s: tuple[int, ...]) -> Optional[list[tuple[int, int]]]:
        mask = 0
        for x in s:
            mask |= 1 << x
        pairs = []
        partner: dict[int, int] = {}
        for x, y in combinations(s, 2):
            if adj[x] >> y & 1:
                if key(x, y) in covered:
                    return None
                continue
            if x in partner or y in partner:
                return None
            partner[x], partner[y] = y, x
            pairs.append((x, y))
        for x, y in pairs:
            want = mask & ~(1 << x) & ~(1 << y)
            if adj[x] != want or adj[y] != want or count[x] or count[y] or cap[x] < 2 or cap[y] < 2:
                return None
        return pairs

    def search(start: int):
        i = start
        while i < len(edges) and edges[i] in covered:
            i += 1
        if i == len(edges):
            yield list(stars), list(petals)
            return
        u, v = edges[i]
        if count[u] >= cap[u] or count[v] >= cap[v]:
            return
        cand = sorted(w for w in set(_bits(adj[u] | adj[v])) - {u, v} if count[w] < cap[w])
        for size in range(len(cand), -1, -1):
            for extra in combinations(cand, size):
                s = tuple(sorted((u, v) + extra))
                pairs = valid_star(s)
                if pairs is None:
                    continue
                new = [key(x, y) for x, y in combinations(s, 2) if adj[x] >> y & 1]
                covered.update(new)
                for x in s:
                    count[x] += 1
                for x, y in pairs:
                    count[x] = count[y] = 2
                stars.append(s)
                petals.extend(pairs)
                yield from search(i + 1)
                del petals[len(petals) - len(pairs):]
                stars.pop()
                for x, y in pairs:
                    count[x] = count[y] = 1
                for x in s:
                    count[x] -= 1
                covered.difference_update(new)

    yield from search(0)


def generalized_line_graph_witness(gr: RootedMultigraph) -> Optional[RootGraphWitness]:
    """A graph with petals whose line graph is the host, roots as pendant edges."""
    if not gr.base.is_simple():
        raise GraphError("generalized_line_graph_witness needs a simple base")
    g = gr.base.to_graph()
    if not is_connected(g):
        raise GraphError("generalized_line_graph_witness needs a connected base")
    if not gr.roots:
        raise GraphError("generalized_line_graph_witness needs at least one root")
    for stars, pairs in _star_partitions(g, gr.roots):
        w = _witness_from_stars(g, gr.roots, stars, pairs)
        if w.verify(gr):
            return w
    return None


def _witness_from_stars(g: Graph, roots, stars, pairs) -> RootGraphWitness:
    ends: list[list[int]] = [[] for _ in range(g.n)]
    for c, s in enumerate(stars):
        for v in s:
            ends[v].append(c)
    pairs = sorted(pairs)
    petal_at = [next(c for c, s in enumerate(stars) if x in s and y in s) for x, y in pairs]
    # GraphWithPetals keeps attachments sorted; number the petals the same way
    order = sorted(range(len(pairs)), key=lambda i: (petal_at[i], i))
    labels: list = [None] * g.n
    for rank, i in enumerate(order):
        x, y = pairs[i]
        labels[x] = ("petal", rank, 0)
        labels[y] = ("petal", rank, 1)
    nxt = len(stars)
    base_edges = []
    pendant = {}
    for v in range(g.n):
        if labels[v] is not None:
            continue
        e = list(ends[v])
        while len(e) < 2:
            e.append(nxt)
            nxt += 1
        x, y = min(e), max(e)
        base_edges.append((x, y))
        labels[v] = ("edge", x, y)
        if v in roots:
            pendant[v] = (e[0], e[1])
    f = GraphWithPetals(Graph(nxt, base_edges), tuple(petal_at))
    return RootGraphWitness(f, tuple(labels), pendant)


# ---------------------------------------------------------------------------
# valid decompositions


@dataclass(frozen=True)
class Decomposition:
    """Triangle and edge parts of a rooted simple graph."""

    host: RootedMultigraph
    parts: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(sorted(tuple(sorted(p)) for p in self.parts)))

    @property
    def triangle_parts(self) -> list[tuple[int, ...]]:
        return [p for p in self.parts if len(p) == 3]

    @property
    def edge_parts(self) -> list[tuple[int, ...]]:
        return [p for p in self.parts if len(p) == 2]

    def part_counts(self) -> list[int]:
        cnt = [0] * self.host.n
        for p in self.parts:
            for v in p:
                cnt[v] += 1
        return cnt

    def is_valid(self) -> bool:
        g = self.host.base
        if not g.is_simple():
            return False
        seen = set()
        for p in self.parts:
            if len(p) not in (2, 3) or len(set(p)) != len(p):
                return False
            for x, y in combinations(p, 2):
                if not g.mult[x][y] or (x, y) in seen:
                    return False
                seen.add((x, y))
        if seen != set(g.to_graph().edges):
            return False
        want = [2 if v in self.host.roots else 3 for v in range(self.host.n)]
        return self.part_counts() == want

    def to_json(self) -> dict:
        return {
            "n": self.host.n,
            "roots": sorted(self.host.roots),
            "parts": [list(p) for p in self.parts],
        }


def valid_decompositions(gr: RootedMultigraph) -> list[Decomposition]:
    """Every valid decomposition, found by backtracking over edges in order."""
    if not gr.base.is_simple():
        raise GraphError("valid_decompositions needs a simple base")
    g = gr.base.to_graph()
    n = g.n
    want = [2 if v in gr.roots else 3 for v in range(n)]
    if any(g.degree(v) > 2 * want[v] or (g.degree(v) == 0 and want[v]) for v in range(n)):
        return []
    edges = g.sorted_edges()
    used: set[tuple[int, int]] = set()
    cnt = [0] * n
    # edges still unassigned at each vertex, to bound the parts it can still get
    free = [g.degree(v) for v in range(n)]
    parts: list[tuple[int, ...]] = []
    out: list[Decomposition] = []

    def feasible(vs) -> bool:
        for v in vs:
            if cnt[v] > want[v] or cnt[v] + free[v] < want[v] or 2 * (want[v] - cnt[v]) < free[v]:
                return False
        return True

    def place(part, sign):
        for x, y in combinations(part, 2):
            if sign > 0:
                used.add((x, y))
            else:
                used.discard((x, y))
            free[x] -= sign
            free[y] -= sign
        for v in part:
            cnt[v] += sign

    def search(i: int):
        while i < len(edges) and edges[i] in used:
            i += 1
        if i == len(edges):
            if cnt == want:
                out.append(Decomposition(gr, tuple(parts)))
            return
        u, v = edges[i]
        options = [(u, v)]
        for w in sorted(set(g.neighbors(u)) & set(g.neighbors(v))):
            if (min(u, w), max(u, w)) not in used and (min(v, w), max(v, w)) not in used:
                options.append(tuple(sorted((u, v, w))))
        for part in options:
            place(part, 1)
            if feasible(part):
                parts.append(part)
                search(i + 1)
                parts.pop()
            place(part, -1)

    search(0)
    return out


def _require_valid(d: Decomposition) -> None:
    if not d.is_valid():
        raise GraphError("decomposition is not valid")


def intersection_graph(d: Decomposition) -> tuple[Graph, frozenset]:
    """Parts adjacent when they meet; the roots are the edge parts."""
    _require_valid(d)
    k = len(d.parts)
    sets = [set(p) for p in d.parts]
    g = Graph(k, [(i, j) for i in range(k) for j in range(i + 1, k) if sets[i] & sets[j]])
    return g, frozenset(i for i, p in enumerate(d.parts) if len(p) == 2)


def incidence_graph(d: Decomposition) -> Graph:
    """Host vertices ``0..n-1`` then parts ``n..n+|D|-1``; ``a ~ alpha`` iff ``a in alpha``."""
    _require_valid(d)
    n = d.host.n
    return Graph(n + len(d.parts), [(v, n + j) for j, p in enumerate(d.parts) for v in p])


def check_decomposition_counts(d: Decomposition) -> tuple[int, int, bool]:
    """Triangle count, edge-part count and whether both incidence identities hold."""
    alpha = len(d.triangle_parts)
    beta = len(d.edge_parts)
    roots = len(d.host.roots)
    non_roots = d.host.n - roots
    incidences = sum(len(p) for p in d.parts)
    m = d.host.base.support().m
    return alpha, beta, incidences == 3 * non_roots + 2 * roots and m == 3 * alpha + beta


def decomposition_from_letters(parts: Sequence[str], roots: str = "") -> Decomposition:
    """Build a decomposition from parts such as ``"abc"``; the host is the union of part cliques."""
    letters = sorted({ch for p in parts for ch in p})
    index = {ch: i for i, ch in enumerate(letters)}
    edges = {tuple(sorted((index[x], index[y]))) for p in parts for x, y in combinations(p, 2)}
    host = RootedMultigraph.from_graph(Graph(len(letters), edges), {index[ch] for ch in roots})
    return Decomposition(host, tuple(tuple(index[ch] for ch in p) for p in parts))


__all__ = [
    "BEINEKE_EDGES",
    "Decomposition",
    "FORBIDDEN_PATTERNS",
    "ForbiddenWitness",
    "RootGraphWitness",
    "RootedPattern",
    "all_root_graphs",
    "beineke_graph",
    "beineke_graphs",
    "check_decomposition_counts",
    "decomposition_from_letters",
    "find_induced",
    "generalized_line_graph_witness",
    "incidence_graph",
    "intersection_graph",
    "is_line_graph",
    "root_graph",
    "scan_forbidden_rooted",
    "valid_decompositions",
]
