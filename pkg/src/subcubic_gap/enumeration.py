"""Exhaustive generation of connected graphs of bounded degree, and the census.

Generation is canonical augmentation by one vertex.  A child ``C`` of a
parent ``P`` is ``P`` plus a new vertex joined to an attachment set ``S``;
one ``S`` is kept per orbit of ``Aut(P)``.  The child is accepted when the
new vertex lies in the ``Aut(C)``-orbit of the canonical deletion vertex of
``C``: among vertices whose removal keeps ``C`` connected, those with the
smallest (degree, neighbour degrees) key, and among those the one placed
last by the canonical labelling.  Each isomorphism class then appears
exactly once.
"""

from __future__ import annotations

import hashlib
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, Optional

from .canon import canonical_form, canonical_labelling
from .families import CLASSIC_CUBIC, catalog, classic_cubic, gm, hj, hj_prime, ks
from .formats import from_graph6, to_graph6
from .graph import Graph, GraphError
from .spectral import eigenvalues, gap_avoids_unit_interval, gap_avoids_unit_interval_fast

MAX_EXHAUSTIVE_N = 14
FILTERS = ("all", "non_cubic", "min_deg_2")


def _connected_without(adj: list[int], v: int) -> bool:
    n = len(adj)
    if n <= 2:
        return True
    full = ((1 << n) - 1) & ~(1 << v)
    start = (full & -full).bit_length() - 1
    seen = 1 << start
    frontier = seen
    while frontier:
        nxt = 0
        f = frontier
        while f:
            low = f & -f
            nxt |= adj[low.bit_length() - 1]
            f ^= low
        nxt &= full & ~seen
        seen |= nxt
        frontier = nxt
    return seen == full


def _keys(adj: list[int]) -> list[tuple]:
    deg = [a.bit_count() for a in adj]
    out = []
    for v, a in enumerate(adj):
        nd = []
        while a:
            low = a & -a
            nd.append(deg[low.bit_length() - 1])
            a ^= low
        out.append((deg[v], tuple(sorted(nd))))
    return out


def _accept(adj: list[int]) -> bool:
    """Is the last vertex the canonical deletion vertex (up to automorphism)?"""
    n = len(adj)
    new = n - 1
    keys = _keys(adj)
    kn = keys[new]
    # the new vertex never disconnects the child, so the minimum key is <= kn
    if any(keys[v] < kn and _connected_without(adj, v) for v in range(new)):
        return False
    tied = [v for v in range(new) if keys[v] == kn and _connected_without(adj, v)]
    if not tied:
        return True
    lab = canonical_labelling(adj)
    tied.append(new)
    best = max(tied, key=lambda v: lab.pos[v])
    if best == new:
        return True
    orbit = lab.orbits()
    return orbit[best] == orbit[new]


def _attachment_sets(adj: list[int], max_degree: Optional[int]) -> Iterator[int]:
    """One attachment mask per orbit of the parent's automorphism group."""
    n = len(adj)
    free = [v for v in range(n) if max_degree is None or adj[v].bit_count() < max_degree]
    top = len(free) if max_degree is None else min(max_degree, len(free))
    gens = canonical_labelling(adj).generators if n > 1 else []
    seen: set[int] = set()
    for size in range(1, top + 1):
        for subset in combinations(free, size):
            mask = 0
            for v in subset:
                mask |= 1 << v
            if mask in seen:
                continue
            seen.add(mask)
            stack = [mask]
            while stack:
                m = stack.pop()
                for g in gens:
                    img = 0
                    x = m
                    while x:
                        low = x & -x
                        img |= 1 << g[low.bit_length() - 1]
                        x ^= low
                    if img not in seen:
                        seen.add(img)
                        stack.append(img)
            yield mask


def _children(adj: list[int], max_degree: Optional[int]) -> Iterator[list[int]]:
    n = len(adj)
    for mask in _attachment_sets(adj, max_degree):
        child = list(adj)
        x = mask
        while x:
            low = x & -x
            child[low.bit_length() - 1] |= 1 << n
            x ^= low
        child.append(mask)
        if _accept(child):
            yield child


def _descend(adj: list[int], target: int, max_degree: Optional[int]) -> Iterator[list[int]]:
    """All accepted descendants of ``adj`` (itself included) with at most ``target`` vertices, depth first."""
    yield adj
    if len(adj) < target:
        for child in _children(adj, max_degree):
            yield from _descend(child, target, max_degree)


def _check_n(n: int, max_degree: Optional[int]) -> None:
    if n < 1:
        raise GraphError("n must be at least 1")
    if max_degree == 3 and n > MAX_EXHAUSTIVE_N:
        raise GraphError(f"exhaustive generation is limited to {MAX_EXHAUSTIVE_N} vertices")


def enumerate_connected_subcubic(n: int, max_degree: Optional[int] = 3) -> Iterator[Graph]:
    """Every connected graph on ``n`` vertices with maximum degree at most ``max_degree``, once up to isomorphism.

    ``max_degree=None`` drops the degree bound.
    """
    _check_n(n, max_degree)
    for adj in _descend([0], n, max_degree):
        if len(adj) == n:
            yield Graph.from_adjacency(adj)


def enumerate_up_to(max_n: int, max_degree: Optional[int] = 3) -> Iterator[Graph]:
    """All orders ``1..max_n`` in one pass."""
    _check_n(max_n, max_degree)
    for adj in _descend([0], max_n, max_degree):
        yield Graph.from_adjacency(adj)


# ---------------------------------------------------------------------------
# census


@dataclass(frozen=True)
class EnumConfig:
    max_n: int = 12
    workers: int = 1
    filter: str = "all"
    output: Optional[str] = None
    split_level: int = 7
    spot_check_percent: float = 1.0

    def __post_init__(self):
        if not 1 <= self.max_n <= MAX_EXHAUSTIVE_N:
            raise GraphError(f"max_n must lie in 1..{MAX_EXHAUSTIVE_N}")
        if self.workers < 1:
            raise GraphError("workers must be positive")
        if self.filter not in FILTERS:
            raise GraphError(f"filter must be one of {FILTERS}")


@dataclass
class Survivor:
    n: int
    graph6: str
    name: Optional[str]
    cubic: bool
    certificate_ok: bool
    certificate_sha256: str = ""

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "graph6": self.graph6,
            "name": self.name if self.name is not None else "unmatched",
            "cubic": self.cubic,
            "certificate_ok": self.certificate_ok,
            "certificate_ref": self.certificate_sha256,
        }


@dataclass
class CensusReport:
    max_n: int
    generated: dict[int, int]
    checked: dict[int, int]
    survivors: list[Survivor]
    mismatches: list[dict]
    spot_checks: int = 0
    spot_check_failures: int = 0

    @property
    def non_cubic_names(self) -> list[str]:
        return [s.name or "unmatched" for s in self.survivors if not s.cubic]

    @property
    def cubic_names(self) -> list[str]:
        return [s.name or "unmatched" for s in self.survivors if s.cubic]

    @property
    def ok(self) -> bool:
        return not self.mismatches and self.spot_check_failures == 0 and all(s.certificate_ok for s in self.survivors)

    def to_json(self) -> dict:
        return {
            "n": self.max_n,
            "generated": {str(k): v for k, v in sorted(self.generated.items())},
            "checked": {str(k): v for k, v in sorted(self.checked.items())},
            "survivors": [s.to_json() for s in self.survivors],
            "mismatches": self.mismatches,
            "spot_checks": self.spot_checks,
            "spot_check_failures": self.spot_check_failures,
        }


def _wanted(adj: list[int], flt: str) -> bool:
    if flt == "all":
        return True
    degs = [a.bit_count() for a in adj]
    if flt == "non_cubic":
        return any(d != 3 for d in degs)
    return min(degs) >= 2


def _spot_pick(g6: str, percent: float) -> bool:
    h = int.from_bytes(hashlib.sha256(g6.encode()).digest()[:4], "big")
    return h % 10000 < percent * 100


def _census_subtree(args) -> tuple[dict, dict, list, int, int]:
    adj, max_n, flt, percent, root_only = args
    generated: dict[int, int] = {}
    checked: dict[int, int] = {}
    survivors: list[tuple[int, str]] = []
    spots = fails = 0
    it = [adj] if root_only else _descend(adj, max_n, 3)
    for a in it:
        n = len(a)
        generated[n] = generated.get(n, 0) + 1
        if not _wanted(a, flt):
            continue
        checked[n] = checked.get(n, 0) + 1
        g = Graph.from_adjacency(a)
        if gap_avoids_unit_interval_fast(g):
            survivors.append((n, to_graph6(g)))
        else:
            g6 = to_graph6(g)
            if _spot_pick(g6, percent):
                spots += 1
                ok, cert = gap_avoids_unit_interval(g)
                if ok or not cert.verify():
                    fails += 1
    return generated, checked, survivors, spots, fails


def _cubic_names(max_n: int) -> dict[bytes, str]:
    names: dict[bytes, str] = {}
    for tag in CLASSIC_CUBIC:
        g = classic_cubic(tag)
        if g.n <= max_n:
            names.setdefault(canonical_form(g), tag)
    for k in range(1, max_n // 4 + 1):
        names.setdefault(canonical_form(ks(k)), f"ks({k})")
        if k >= 2:
            names.setdefault(canonical_form(gm(k)), f"gm({k})")
    return names


def census(cfg: EnumConfig) -> CensusReport:
    """Gap-check every connected subcubic graph up to ``cfg.max_n`` and compare with the catalog."""
    split = min(cfg.split_level, cfg.max_n)
    # the tree above the split level is generated here; subtrees go to workers
    top: list[list[int]] = []
    jobs = []
    for a in _descend([0], split, 3):
        if len(a) == split:
            jobs.append((a, cfg.max_n, cfg.filter, cfg.spot_check_percent, False))
        else:
            top.append(a)
    jobs = [(a, cfg.max_n, cfg.filter, cfg.spot_check_percent, True) for a in top] + jobs

    results = []
    if cfg.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(_census_subtree, jobs, chunksize=max(1, len(jobs) // (8 * cfg.workers))))
    else:
        results = [_census_subtree(j) for j in jobs]

    generated: dict[int, int] = {}
    checked: dict[int, int] = {}
    found: list[tuple[int, str]] = []
    spots = fails = 0
    for gen, chk, surv, s, f in results:
        for k, v in gen.items():
            generated[k] = generated.get(k, 0) + v
        for k, v in chk.items():
            checked[k] = checked.get(k, 0) + v
        found.extend(surv)
        spots += s
        fails += f

    cat = {canonical_form(g): name for g, name in catalog(cfg.max_n)}
    cubic = _cubic_names(cfg.max_n)
    rows = []
    for n, g6 in found:
        g = from_graph6(g6)
        key = canonical_form(g)
        is_cubic = g.is_regular(3)
        ok, cert = gap_avoids_unit_interval(g)
        cert_ok = ok and cert.verify()
        digest = cert.sha256()
        name = (cubic if is_cubic else cat).get(key)
        rows.append((n, key, Survivor(n, to_graph6(g.relabel(canonical_labelling(g.adj).pos)), name, is_cubic, cert_ok, digest)))
    rows.sort(key=lambda r: (r[0], r[1]))
    survivors = [r[2] for r in rows]

    mismatches = []
    seen = {r[1] for r in rows if not r[2].cubic}
    for n, key, s in rows:
        if not s.cubic and s.name is None:
            mismatches.append({"kind": "unmatched_survivor", "n": n, "graph6": s.graph6})
    for g, name in catalog(cfg.max_n):
        if not _wanted(list(g.adj), cfg.filter):
            continue
        if canonical_form(g) not in seen:
            mismatches.append({"kind": "missing_catalog_member", "n": g.n, "name": name, "graph6": to_graph6(g)})
    return CensusReport(cfg.max_n, generated, checked, survivors, mismatches, spots, fails)


# ---------------------------------------------------------------------------
# probing enlarged intervals

PROBE_FAMILIES = {"gm": gm, "ks": ks, "hj": hj, "hj_prime": hj_prime}


def gap_probe(families=("gm", "ks", "hj", "hj_prime"), n_max: int = 40, interval=(1.0, 1.2), n_min: int = 1, tol: float = 1e-8) -> list[dict]:
    """Eigenvalues of the infinite families strictly inside ``interval``.

    One entry per (family, n) with the eigenvalues found (possibly none).
    """
    lo, hi = interval
    if not lo < hi:
        raise GraphError("interval must have lo < hi")
    out = []
    for fam in families:
        if fam not in PROBE_FAMILIES:
            raise GraphError(f"unknown family {fam!r}")
        start = max(n_min, 2 if fam == "gm" else 1)
        for n in range(start, n_max + 1):
            vals = eigenvalues(PROBE_FAMILIES[fam](n)).values
            inside = [x for x in vals if lo + tol < x < hi - tol]
            out.append({"family": fam, "n": n, "inside": inside})
    return out


def probe_summary(report: list[dict]) -> dict[str, list[int]]:
    """For each family, the values of ``n`` with at least one eigenvalue inside."""
    out: dict[str, list[int]] = {}
    for row in report:
        out.setdefault(row["family"], [])
        if row["inside"]:
            out[row["family"]].append(row["n"])
    return out


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get("WORKERS", "")))
    except ValueError:
        return max(1, os.cpu_count() or 1)
