"""Canonical labelling, automorphisms and involution quotients.

Canonical forms use colour refinement plus individualisation with
backtracking.  Every leaf of the search tree is a discrete ordered partition;
the canonical labelling is the leaf with the largest adjacency certificate.
Leaves that tie with the first or best leaf yield automorphisms, which prune
sibling subtrees lying in the same orbit of the current pointwise stabiliser.
The automorphisms found this way generate the whole group.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .formats import to_graph6_bytes
from .graph import Graph, GraphError, Involution, _bits, bipartition, is_connected

MAX_CANON_VERTICES = 64


def refine(adj: Sequence[int], cells: list[list[int]]) -> list[list[int]]:
    """Coarsest equitable refinement of an ordered partition.

    A cell splits by the vector of neighbour counts into every cell; the
    pieces are ordered by that vector, so the result does not depend on the
    vertex names.
    """
    n = len(adj)
    while len(cells) < n:
        masks = []
        for c in cells:
            m = 0
            for v in c:
                m |= 1 << v
            masks.append(m)
        out = []
        split = False
        for c in cells:
            if len(c) == 1:
                out.append(c)
                continue
            groups: dict[tuple, list[int]] = {}
            for v in c:
                a = adj[v]
                groups.setdefault(tuple((a & m).bit_count() for m in masks), []).append(v)
            if len(groups) == 1:
                out.append(c)
            else:
                split = True
                out.extend(groups[k] for k in sorted(groups))
        cells = out
        if not split:
            break
    return cells


def _initial_cells(adj: Sequence[int], colors: Optional[Sequence[int]]) -> list[list[int]]:
    n = len(adj)
    if colors is None:
        colors = [0] * n
    groups: dict[int, list[int]] = {}
    for v in range(n):
        groups.setdefault(colors[v], []).append(v)
    return [groups[k] for k in sorted(groups)]


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


@dataclass
class Labelling:
    """Result of the canonical search.

    ``lab[i]`` is the vertex placed at canonical position ``i`` and ``pos`` is
    its inverse.  ``generators`` generate the (colour-preserving)
    automorphism group.
    """

    lab: list[int]
    pos: list[int]
    generators: list[tuple[int, ...]]

    def orbits(self) -> list[int]:
        """Orbit representative (smallest vertex) for every vertex."""
        n = len(self.lab)
        uf = _UnionFind(range(n))
        for g in self.generators:
            for v in range(n):
                uf.union(v, g[v])
        return [uf.find(v) for v in range(n)]


def canonical_labelling(adj: Sequence[int], colors: Optional[Sequence[int]] = None) -> Labelling:
    n = len(adj)
    if n > MAX_CANON_VERTICES:
        raise GraphError(f"canonical forms are limited to {MAX_CANON_VERTICES} vertices")
    if n == 0:
        return Labelling([], [], [])

    state = {"first": None, "best": None}
    generators: list[tuple[int, ...]] = []

    def certificate(lab):
        pos = [0] * n
        for i, v in enumerate(lab):
            pos[v] = i
        rows = []
        for v in lab:
            r = 0
            for u in _bits(adj[v]):
                r |= 1 << pos[u]
            rows.append(r)
        return tuple(rows), pos

    def record(lab) -> bool:
        """Process a leaf; True when it produced a new automorphism."""
        cert, pos = certificate(lab)
        first = state["first"]
        if first is None:
            state["first"] = state["best"] = (cert, lab, pos)
            return False
        for ref in (first, state["best"]):
            if cert == ref[0]:
                perm = [0] * n
                for i in range(n):
                    perm[ref[1][i]] = lab[i]
                generators.append(tuple(perm))
                return True
        if cert > state["best"][0]:
            state["best"] = (cert, lab, pos)
        return False

    def equivalent(v, explored, fixed, target) -> bool:
        stab = [g for g in generators if all(g[x] == x for x in fixed)]
        if not stab:
            return False
        uf = _UnionFind(target)
        for g in stab:
            for x in target:
                uf.union(x, g[x])
        rv = uf.find(v)
        return any(uf.find(w) == rv for w in explored)

    # per depth: (individualised prefix, target cell, explored siblings, current child)
    frames: list[list] = []

    def visit(cells, fixed) -> Optional[int]:
        """Explore a node; a returned depth means "abandon up to that depth"."""
        if len(cells) == n:
            if record([c[0] for c in cells]):
                # A subtree whose root child is now equivalent to an explored
                # sibling holds nothing new.
                for depth, (pre, target, explored, child) in enumerate(frames):
                    if explored and equivalent(child, explored, pre, target):
                        return depth
            return None
        ti = min((i for i, c in enumerate(cells) if len(c) > 1), key=lambda i: (len(cells[i]), i))
        target = cells[ti]
        explored: list[int] = []
        frame = [fixed, target, explored, None]
        frames.append(frame)
        depth = len(frames) - 1
        try:
            for v in sorted(target):
                if explored and equivalent(v, explored, fixed, target):
                    continue
                frame[3] = v
                rest = [w for w in target if w != v]
                jump = visit(refine(adj, cells[:ti] + [[v], rest] + cells[ti + 1:]), fixed + [v])
                explored.append(v)
                if jump is not None and jump < depth:
                    return jump
        finally:
            frames.pop()
        return None

    visit(refine(adj, _initial_cells(adj, colors)), [])
    _, lab, pos = state["best"]
    return Labelling(list(lab), list(pos), generators)


def canonical_form(g: Graph, colors: Optional[Sequence[int]] = None) -> bytes:
    """Byte string equal for two graphs exactly when they are isomorphic.

    With ``colors`` the isomorphism must also preserve vertex colours.
    """
    res = canonical_labelling(g.adj, colors)
    form = to_graph6_bytes(g.relabel(res.pos))
    if colors is not None:
        form += b"|" + ",".join(str(colors[v]) for v in res.lab).encode()
    return form


def canonical_graph(g: Graph) -> Graph:
    return g.relabel(canonical_labelling(g.adj).pos)


def is_isomorphic(g: Graph, h: Graph) -> bool:
    if g.n != h.n or g.m != h.m or sorted(g.degrees()) != sorted(h.degrees()):
        return False
    return canonical_form(g) == canonical_form(h)


def find_isomorphism(g: Graph, h: Graph) -> Optional[list[int]]:
    """A map ``phi`` with ``uv in E(g)`` iff ``phi[u]phi[v] in E(h)``, or ``None``."""
    if g.n != h.n or g.m != h.m:
        return None
    lg = canonical_labelling(g.adj)
    lh = canonical_labelling(h.adj)
    if g.relabel(lg.pos) != h.relabel(lh.pos):
        return None
    return [lh.lab[lg.pos[v]] for v in range(g.n)]


def rooted_canonical_form(g: Graph, roots) -> bytes:
    roots = set(roots)
    return canonical_form(g, [1 if v in roots else 0 for v in range(g.n)])


def automorphism_orbits(g: Graph, colors: Optional[Sequence[int]] = None) -> list[int]:
    return canonical_labelling(g.adj, colors).orbits()


# ---------------------------------------------------------------------------
# involutions of bipartite graphs


def free_involutions(g: Graph) -> list[Involution]:
    """All part-swapping automorphic involutions with ``v sigma(v)`` never an edge."""
    if not is_connected(g):
        raise GraphError("free_involutions requires a connected graph")
    parts = bipartition(g)
    if parts is None:
        raise GraphError("free_involutions requires a bipartite graph")
    n = g.n
    side = [0] * n
    for v in parts[1]:
        side[v] = 1
    if len(parts[0]) != len(parts[1]):
        return []
    cell_of = [0] * n
    for i, c in enumerate(refine(g.adj, _initial_cells(g.adj, None))):
        for v in c:
            cell_of[v] = i

    order = []
    seen = {0}
    queue = [0]
    while queue:
        u = queue.pop(0)
        order.append(u)
        for w in g.neighbors(u):
            if w not in seen:
                seen.add(w)
                queue.append(w)

    sigma = [-1] * n
    found: list[tuple[int, ...]] = []
    adj = g.adj

    def consistent(x, y):
        # sigma(x) = y and sigma(y) = x, checked against every assigned vertex
        for z in range(n):
            sz = sigma[z]
            if sz < 0:
                continue
            if (adj[x] >> z & 1) != (adj[y] >> sz & 1):
                return False
            if (adj[y] >> z & 1) != (adj[x] >> sz & 1):
                return False
        return True

    def extend(k):
        while k < n and sigma[order[k]] >= 0:
            k += 1
        if k == n:
            found.append(tuple(sigma))
            return
        x = order[k]
        anchors = [z for z in _bits(adj[x]) if sigma[z] >= 0]
        if anchors:
            candidates = list(_bits(adj[sigma[anchors[0]]]))
        else:
            candidates = range(n)
        for y in candidates:
            if sigma[y] >= 0 or side[y] == side[x] or cell_of[y] != cell_of[x]:
                continue
            if adj[x] >> y & 1:
                continue
            if not consistent(x, y):
                continue
            sigma[x], sigma[y] = y, x
            extend(k + 1)
            sigma[x] = sigma[y] = -1

    extend(0)
    return [Involution(p) for p in sorted(found)]


def is_automorphism(g: Graph, perm: Sequence[int]) -> bool:
    return all(g.has_edge(perm[u], perm[v]) for u, v in g.edges) and sorted(perm) == list(range(g.n))


def quotient(g: Graph, s: Involution) -> Graph:
    """Graph on the orbits of a fixed-point-free involution ``s``."""
    p = s.perm
    if len(p) != g.n:
        raise GraphError("involution size does not match the graph")
    if not is_automorphism(g, p):
        raise GraphError("involution is not an automorphism")
    for v in range(g.n):
        if p[v] == v or g.has_edge(v, p[v]):
            raise GraphError(f"vertex {v} violates the free-involution condition")
    reps = sorted({min(v, p[v]) for v in range(g.n)})
    index = {}
    for i, r in enumerate(reps):
        index[r] = index[p[r]] = i
    return Graph(len(reps), ((index[u], index[v]) for u, v in g.edges))


def doubling_involution(n: int) -> Involution:
    """The swap ``v <-> v + n`` on a bipartite double of an ``n``-vertex graph."""
    return Involution(tuple(list(range(n, 2 * n)) + list(range(n))))
