"""Constructors for every named graph of the classification.

Labelling schemes are frozen; golden graph6 strings in the test suite depend
on them.

Twisted ladder on ``n`` rungs: rung ``i`` (0-based) owns vertices
``4i+0..4i+3`` named ``a_i, b_i, c_i, d_i`` with the 4-cycle
``a_i c_i b_i d_i`` and the links ``c_i a_{i+1}``, ``d_i b_{i+1}``.  The
degree-2 pairs are ``(a_0, b_0)`` and ``(c_{n-1}, d_{n-1})``; the ends are
lettered ``b = a_0``, ``a = b_0``, ``z = c_{n-1}``, ``y = d_{n-1}``.

The HJ graphs append their extra vertices after the ladder: the left
attachment is the path ``b_0 - L0 - L1 - L2 - a_0`` (``L1`` is the new
degree-2 vertex), the right attachment is ``c_{n-1} - R0 - R1 - R2 - d_{n-1}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .canon import canonical_form
from .graph import Graph, GraphError, complete_graph, cycle_graph

SPORADIC_G6_DECOMPOSITIONS = {
    "a": ["ab", "bc", "ca"],
    "b": ["abc", "ad", "bd", "cd"],
    "c": ["abc", "adg", "aef", "be", "bf", "cd", "cg"],
    "d": ["abf", "ace", "def", "bcg", "cdh", "bdi", "ag", "eh", "fi"],
}

FAMILIES = ("twisted_ladder", "ks", "gm", "hj", "hj_prime", "hj_plus", "sporadic_g6", "k2", "k3", "classic_cubic")
CLASSIC_CUBIC = ("petersen", "heawood", "mobius_kantor", "desargues")


@dataclass(frozen=True)
class FamilySpec:
    family: str
    parameter: Union[int, str, None] = None

    def build(self) -> Graph:
        return build(self.family, self.parameter)

    @property
    def name(self) -> str:
        return family_name(self.family, self.parameter)


def _rung(i: int) -> tuple[int, int, int, int]:
    return 4 * i, 4 * i + 1, 4 * i + 2, 4 * i + 3


def _ladder_edges(n: int) -> list[tuple[int, int]]:
    edges = []
    for i in range(n):
        a, b, c, d = _rung(i)
        edges += [(a, c), (c, b), (b, d), (d, a)]
        if i + 1 < n:
            a2, b2, _, _ = _rung(i + 1)
            edges += [(c, a2), (d, b2)]
    return edges


def _need(cond: bool, msg: str) -> None:
    if not cond:
        raise GraphError(msg)


def ladder_labels(n: int) -> list[str]:
    return [f"{ch}{i}" for i in range(n) for ch in "abcd"]


def twisted_ladder(n: int) -> Graph:
    _need(n >= 1, "twisted_ladder needs n >= 1")
    return Graph(4 * n, _ladder_edges(n))


def ladder_ends(n: int) -> dict[str, int]:
    """Letter names (a, b, y, z) of the four degree-2 vertices of the twisted ladder."""
    a0, b0, _, _ = _rung(0)
    _, _, cl, dl = _rung(n - 1)
    return {"a": b0, "b": a0, "y": dl, "z": cl}


def ks(n: int) -> Graph:
    _need(n >= 1, "ks needs n >= 1")
    e = ladder_ends(n)
    return Graph(4 * n, _ladder_edges(n) + [(e["a"], e["b"]), (e["y"], e["z"])])


def gm(n: int) -> Graph:
    _need(n >= 2, "gm needs n >= 2")
    e = ladder_ends(n)
    return Graph(4 * n, _ladder_edges(n) + [(e["a"], e["y"]), (e["b"], e["z"])])


def _left_attachment(n: int, start: int) -> list[tuple[int, int]]:
    a0, b0, _, _ = _rung(0)
    l0, l1, l2 = start, start + 1, start + 2
    return [(b0, l0), (l0, l1), (l1, l2), (l2, a0)]


def _right_attachment(n: int, start: int) -> list[tuple[int, int]]:
    _, _, c, d = _rung(n - 1)
    r0, r1, r2 = start, start + 1, start + 2
    return [(c, r0), (r0, r1), (r1, r2), (r2, d)]


def hj(n: int) -> Graph:
    _need(n >= 1, "hj needs n >= 1")
    base = 4 * n
    return Graph(base + 6, _ladder_edges(n) + _left_attachment(n, base) + _right_attachment(n, base + 3))


def hj_degree_two_vertices(n: int) -> tuple[int, int]:
    """The middle vertices of the two attachments, the only degree-2 vertices of hj(n)."""
    return 4 * n + 1, 4 * n + 4


def hj_labels(n: int) -> list[str]:
    return ladder_labels(n) + ["L0", "L1", "L2", "R0", "R1", "R2"]


def hj_prime(n: int) -> Graph:
    _need(n >= 1, "hj_prime needs n >= 1")
    base = 4 * n
    _, _, c, d = _rung(n - 1)
    return Graph(base + 3, _ladder_edges(n) + _left_attachment(n, base) + [(c, d)])


def hj_prime_labels(n: int) -> list[str]:
    return ladder_labels(n) + ["L0", "L1", "L2"]


def hj_plus(n: int) -> Graph:
    _need(n in (1, 2), "hj_plus is defined only for n in {1, 2}")
    return hj(n).add_edges([hj_degree_two_vertices(n)])


def incidence_from_parts(parts: list[str]) -> tuple[Graph, list[str]]:
    """Incidence graph of letter-named parts: letters first (sorted), then parts."""
    letters = sorted({ch for p in parts for ch in p})
    index = {ch: i for i, ch in enumerate(letters)}
    k = len(letters)
    edges = [(index[ch], k + j) for j, p in enumerate(parts) for ch in p]
    return Graph(k + len(parts), edges), letters + list(parts)


def sporadic_g6(tag: str) -> Graph:
    if tag not in SPORADIC_G6_DECOMPOSITIONS:
        raise GraphError(f"unknown girth-6 sporadic tag {tag!r}")
    return incidence_from_parts(SPORADIC_G6_DECOMPOSITIONS[tag])[0]


def generalized_petersen(n: int, k: int) -> Graph:
    outer = [(i, (i + 1) % n) for i in range(n)]
    spokes = [(i, n + i) for i in range(n)]
    inner = [(n + i, n + (i + k) % n) for i in range(n)]
    return Graph(2 * n, outer + spokes + inner)


def heawood() -> Graph:
    edges = [(i, (i + 1) % 14) for i in range(14)]
    edges += [(i, (i + 5) % 14) for i in range(0, 14, 2)]
    return Graph(14, edges)


def classic_cubic(tag: str) -> Graph:
    if tag == "petersen":
        return generalized_petersen(5, 2)
    if tag == "heawood":
        return heawood()
    if tag == "mobius_kantor":
        return generalized_petersen(8, 3)
    if tag == "desargues":
        return generalized_petersen(10, 3)
    raise GraphError(f"unknown classic cubic tag {tag!r}")


_INT_FAMILIES = {
    "twisted_ladder": twisted_ladder,
    "ks": ks,
    "gm": gm,
    "hj": hj,
    "hj_prime": hj_prime,
    "hj_plus": hj_plus,
}


def build(family: str, parameter=None) -> Graph:
    if family in _INT_FAMILIES:
        if parameter is None:
            raise GraphError(f"{family} needs an integer parameter")
        return _INT_FAMILIES[family](int(parameter))
    if family == "sporadic_g6":
        return sporadic_g6(str(parameter))
    if family == "classic_cubic":
        return classic_cubic(str(parameter))
    if family == "k2":
        return complete_graph(2)
    if family == "k3":
        return complete_graph(3)
    raise GraphError(f"unknown family {family!r}")


def labels(family: str, parameter=None) -> list[str]:
    """Vertex names of the frozen labelling scheme."""
    if family in ("twisted_ladder", "ks", "gm"):
        return ladder_labels(int(parameter))
    if family in ("hj", "hj_plus"):
        return hj_labels(int(parameter))
    if family == "hj_prime":
        return hj_prime_labels(int(parameter))
    if family == "sporadic_g6":
        return incidence_from_parts(SPORADIC_G6_DECOMPOSITIONS[str(parameter)])[1]
    return [str(v) for v in range(build(family, parameter).n)]


def family_name(family: str, parameter=None) -> str:
    if family in ("k2", "k3"):
        return family.upper()
    if family == "sporadic_g6":
        return f"g6-{parameter}"
    if family == "classic_cubic":
        return str(parameter)
    return f"{family}({parameter})"


def catalog(max_n: int) -> list[tuple[Graph, str]]:
    """Non-cubic members of the classification with at most ``max_n`` vertices.

    Ordered by vertex count, then by name; duplicates up to isomorphism are
    dropped (the first name wins).
    """
    if max_n > 64:
        raise GraphError("catalog is limited to 64 vertices")
    entries: list[tuple[Graph, str]] = [
        (complete_graph(2), "K2"),
        (complete_graph(3), "K3"),
        (cycle_graph(6), "C6"),
        (sporadic_g6("b"), "g6-b"),
        (sporadic_g6("c"), "g6-c"),
        (sporadic_g6("d"), "g6-d"),
        (hj_plus(1), "hj_plus(1)"),
        (hj_plus(2), "hj_plus(2)"),
    ]
    n = 1
    while 4 * n + 3 <= max_n:
        entries.append((hj_prime(n), f"hj_prime({n})"))
        if 4 * n + 6 <= max_n:
            entries.append((hj(n), f"hj({n})"))
        n += 1
    entries = [(g, name) for g, name in entries if g.n <= max_n]
    entries.sort(key=lambda e: (e[0].n, e[1]))
    seen = set()
    out = []
    for g, name in entries:
        key = canonical_form(g)
        if key not in seen:
            seen.add(key)
            out.append((g, name))
    return out
