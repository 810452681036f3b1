"""Command-line interface.

Exit codes: 0 success / property holds, 1 property fails, 2 usage or input
error.  Structured output is JSON on stdout (``--table`` prints a readable
table instead where it makes sense).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from importlib import resources
from typing import Optional, Sequence

from . import families as fam
from .canon import doubling_involution, free_involutions, is_isomorphic, quotient
from .enumeration import EnumConfig, census, default_workers, gap_probe, probe_summary
from .formats import graph_to_json, parse_graphs, to_dot, to_graph6
from .graph import (
    Graph,
    GraphError,
    RootedMultigraph,
    bipartite_double,
    distance_two_component_sets,
    is_connected,
    rooted_distance_two_components,
    rooted_distance_two_subgraph,
)
from .spectral import associated_matrix, eigenvalues, gap_avoids_unit_interval, psd_exact
from .structure import (
    generalized_line_graph_witness,
    incidence_graph,
    intersection_graph,
    is_line_graph,
    root_graph,
    scan_forbidden_rooted,
    valid_decompositions,
)

CERT_INLINE_LIMIT = 4096


def load_schema(name: str) -> dict:
    """JSON schema shipped with the package, e.g. ``load_schema("gapcheck")``."""
    return json.loads(resources.files("subcubic_gap").joinpath("schemas", f"{name}.json").read_text())


class UsageError(Exception):
    pass


def _dump(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _read_graphs(path: str) -> list[Graph]:
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="ascii").read()
    except OSError as exc:
        raise UsageError(str(exc)) from exc
    except UnicodeDecodeError as exc:
        raise UsageError(f"input is not ASCII: {exc}") from exc
    try:
        graphs = parse_graphs(text)
    except (GraphError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"cannot parse input: {exc}") from exc
    if not graphs:
        raise UsageError("no graphs in input")
    return graphs


def _int_list(text: Optional[str]) -> list[int]:
    if text is None or text.strip() == "":
        return []
    try:
        return [int(x) for x in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from exc


def _clean(x: float) -> float:
    x = round(float(x), 12)
    return 0.0 if x == 0 else x


# ---------------------------------------------------------------------------
# commands


def cmd_families(args, out) -> int:
    if args.action == "list":
        rows = [graph_to_json(g, name) for g, name in fam.catalog(args.max_n)]
        out.write(_dump({"catalog": rows}))
        return 0
    param = args.tag if args.tag is not None else args.n
    g = fam.build(args.family, param)
    labels = fam.labels(args.family, param)
    name = fam.family_name(args.family, param)
    if args.format == "graph6":
        out.write(to_graph6(g) + "\n")
    elif args.format == "dot":
        out.write(to_dot(g, name.replace("(", "_").replace(")", "").replace("-", "_"), labels))
    else:
        out.write(_dump(graph_to_json(g, name, labels)))
    return 0


def cmd_spectrum(args, out) -> int:
    graphs = _read_graphs(args.input)
    if args.csv:
        for g in graphs:
            out.write(eigenvalues(g).to_csv())
        return 0
    rows = []
    for g in graphs:
        sp = eigenvalues(g)
        rows.append({
            "graph6": to_graph6(g),
            "n": g.n,
            "eigenvalues": [_clean(x) for x in sp.values],
            "distinct": [{"value": _clean(v), "multiplicity": k} for v, k in sp.grouped(args.tol)],
        })
    if args.table:
        for r in rows:
            out.write(f"{r['graph6']}\n")
            for d in r["distinct"]:
                out.write(f"  {d['value']:>16.10f}  x{d['multiplicity']}\n")
    else:
        out.write(_dump({"graphs": rows}))
    return 0


def _certificate_entry(cert, cert_dir: str) -> dict:
    doc = cert.to_json()
    text = cert.dumps()
    digest = cert.sha256()
    entry = {"verdict": cert.verdict, "certificate_sha256": digest, "certificate_verified": cert.verify()}
    if len(text.encode()) <= CERT_INLINE_LIMIT:
        entry["certificate"] = doc
    else:
        os.makedirs(cert_dir, exist_ok=True)
        path = os.path.join(cert_dir, f"cert-{digest[:16]}.json")
        with open(path, "w", encoding="ascii") as fh:
            fh.write(text)
        entry["certificate_path"] = path
    return entry


def cmd_gapcheck(args, out) -> int:
    graphs = _read_graphs(args.input)
    rows = []
    for g in graphs:
        ok, cert = gap_avoids_unit_interval(g)
        row = {"graph6": to_graph6(g), "n": g.n, "gap": ok}
        row.update(_certificate_entry(cert, args.cert_dir))
        rows.append(row)
    if args.table:
        for r in rows:
            where = r.get("certificate_path", "inline")
            out.write(f"{r['graph6']}\t{'gap' if r['gap'] else 'no-gap'}\t{r['verdict']}\t{where}\t{r['certificate_sha256'][:16]}\n")
    else:
        out.write(_dump({"results": rows}))
    return 0 if all(r["gap"] for r in rows) else 1


def cmd_certify(args, out) -> int:
    graphs = _read_graphs(args.input)
    subset = _int_list(args.subset)
    rows = []
    for g in graphs:
        us = subset or list(range(g.n))
        if any(not (0 <= v < g.n) for v in us):
            raise UsageError("subset vertex out of range")
        try:
            gr = rooted_distance_two_subgraph(g, us)
        except GraphError as exc:
            raise UsageError(str(exc)) from exc
        m = associated_matrix(gr)
        cert = psd_exact(m)
        forb = scan_forbidden_rooted(gr)
        row = {
            "graph6": to_graph6(g),
            "subset": sorted(set(us)),
            "roots": sorted(sorted(set(us))[i] for i in gr.roots),
            "matrix": [[int(x) for x in r] for r in m.entries],
            "psd": cert.is_psd,
            "forbidden_pattern": None if forb is None else {
                "pattern_id": forb.pattern_id,
                "embedding": [sorted(set(us))[i] for i in forb.embedding],
            },
        }
        row.update(_certificate_entry(cert, args.cert_dir))
        rows.append(row)
    if args.table:
        for r in rows:
            out.write(f"{r['graph6']} subset={r['subset']} roots={r['roots']} {'PSD' if r['psd'] else 'NOT_PSD'}\n")
            for line in r["matrix"]:
                out.write("  " + " ".join(f"{x:>2}" for x in line) + "\n")
    else:
        out.write(_dump({"results": rows}))
    return 0 if all(r["psd"] for r in rows) else 1


def cmd_decompose(args, out) -> int:
    g = _read_graphs(args.input)[0]
    if args.roots is not None:
        roots = _int_list(args.roots)
        if any(not (0 <= v < g.n) for v in roots):
            raise UsageError("root out of range")
        gr = RootedMultigraph.from_graph(g, roots)
        names = list(range(g.n))
    else:
        try:
            comps = rooted_distance_two_components(g)
        except GraphError as exc:
            raise UsageError(str(exc)) from exc
        if not 0 <= args.component < len(comps):
            raise UsageError("component index out of range")
        gr = comps[args.component]
        if not gr.base.is_simple():
            raise UsageError("distance-two component has multi-edges (girth below 6)")
        names = distance_two_component_sets(g)[args.component]
    decs = valid_decompositions(gr)
    rows = []
    for d in decs:
        ig, iroots = intersection_graph(d)
        inc = incidence_graph(d)
        rows.append({
            "parts": [[names[v] for v in p] for p in d.parts],
            "intersection_graph": {"graph6": to_graph6(ig), "roots": sorted(iroots)},
            "incidence_graph": to_graph6(inc),
            "incidence_isomorphic_to_input": is_isomorphic(inc, g) if args.roots is None else None,
        })
    out.write(_dump({"roots": sorted(names[r] for r in gr.roots), "vertices": list(names), "decompositions": rows}))
    return 0 if rows else 1


def cmd_linegraph(args, out) -> int:
    graphs = _read_graphs(args.input)
    rows = []
    status = 0
    for g in graphs:
        row: dict = {"graph6": to_graph6(g)}
        if args.mode == "check":
            w = is_line_graph(g)
            row["line_graph"] = w is None
            row["witness"] = None if w is None else w.to_json()
            status |= w is not None
        elif args.mode == "root_graph":
            if not is_connected(g):
                raise UsageError("root graph needs a connected input")
            r = root_graph(g, star=args.star)
            row["line_graph"] = r is not None
            if r is not None:
                f, emap = r
                row["root_graph"] = {"graph6": to_graph6(f), "edges": [list(e) for e in f.sorted_edges()], "edge_map": [list(e) for e in emap]}
            status |= r is None
        else:
            roots = _int_list(args.roots)
            try:
                gr = RootedMultigraph.from_graph(g, roots)
                w = generalized_line_graph_witness(gr)
            except GraphError as exc:
                raise UsageError(str(exc)) from exc
            psd = psd_exact(associated_matrix(gr)).is_psd
            row["roots"] = sorted(roots)
            row["generalized_line_graph"] = w is not None
            row["associated_matrix_psd"] = psd
            row["witness"] = None if w is None else w.to_json()
            status |= w is None
        rows.append(row)
    out.write(_dump({"results": rows}))
    return 1 if status else 0


def cmd_double(args, out) -> int:
    for g in _read_graphs(args.input):
        out.write(to_graph6(bipartite_double(g)) + "\n")
    return 0


def cmd_quotient(args, out) -> int:
    rows = []
    for g in _read_graphs(args.input):
        try:
            if args.doubling:
                if g.n % 2:
                    raise UsageError("doubling involution needs an even vertex count")
                invs = [doubling_involution(g.n // 2)]
            else:
                invs = free_involutions(g)
            qs = [quotient(g, s) for s in invs]
        except GraphError as exc:
            raise UsageError(str(exc)) from exc
        rows.append({
            "graph6": to_graph6(g),
            "involutions": [list(s.perm) for s in invs],
            "quotients": [to_graph6(q) for q in qs],
        })
    out.write(_dump({"results": rows}))
    return 0 if all(r["involutions"] for r in rows) else 1


def cmd_census(args, out) -> int:
    cfg = EnumConfig(max_n=args.max_n, workers=args.workers, filter=args.filter, output=args.survivors)
    report = census(cfg)
    doc = report.to_json()
    if args.out:
        with open(args.out, "w", encoding="ascii") as fh:
            fh.write(_dump(doc))
    if args.survivors:
        with open(args.survivors, "w", encoding="ascii") as fh:
            for s in report.survivors:
                fh.write(s.graph6 + "\n")
    if args.table or args.out:
        for s in report.survivors:
            out.write(f"{s.n:>3}  {'cubic    ' if s.cubic else 'non-cubic'}  {s.name or 'UNMATCHED':<16} {s.graph6}\n")
        for m in report.mismatches:
            out.write(f"MISMATCH {m}\n")
    else:
        out.write(_dump(doc))
    return 0 if report.ok else 1


def cmd_probe(args, out) -> int:
    fams = [x for x in args.families.split(",") if x]
    rep = gap_probe(fams, n_max=args.n_max, interval=(args.lo, args.hi), n_min=args.n_min)
    summary = probe_summary(rep)
    out.write(_dump({"interval": [args.lo, args.hi], "rows": [{**r, "inside": [_clean(x) for x in r["inside"]]} for r in rep], "hits": summary}))
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="subcubic-gap", description="Subcubic graphs without eigenvalues in (-1, 1).")
    sub = p.add_subparsers(dest="command", required=True)

    def add_input(sp):
        sp.add_argument("--in", dest="input", default="-", help="graph6 lines or JSON; '-' for stdin")

    f = sub.add_parser("families", help="build named graphs")
    fsub = f.add_subparsers(dest="action", required=True)
    gen = fsub.add_parser("gen")
    gen.add_argument("--family", required=True, choices=fam.FAMILIES)
    gen.add_argument("--n", type=int)
    gen.add_argument("--tag")
    gen.add_argument("--format", choices=("graph6", "dot", "json"), default="graph6")
    lst = fsub.add_parser("list")
    lst.add_argument("--max-n", type=int, default=20)

    s = sub.add_parser("spectrum", help="adjacency eigenvalues")
    add_input(s)
    s.add_argument("--tol", type=float, default=1e-6, help="clustering tolerance for distinct eigenvalues")
    s.add_argument("--csv", action="store_true")
    s.add_argument("--table", action="store_true")

    gc = sub.add_parser("gapcheck", help="exact test for eigenvalues in (-1, 1)")
    add_input(gc)
    gc.add_argument("--cert-dir", default="certificates")
    gc.add_argument("--table", action="store_true")

    c = sub.add_parser("certify", help="associated matrix of a rooted distance-two subgraph")
    add_input(c)
    c.add_argument("--subset", help="comma-separated vertices (default: all)")
    c.add_argument("--cert-dir", default="certificates")
    c.add_argument("--table", action="store_true")

    d = sub.add_parser("decompose", help="valid decompositions")
    add_input(d)
    d.add_argument("--roots", help="treat the input as a rooted graph with these roots")
    d.add_argument("--component", type=int, default=0, help="distance-two component of the input host")

    lg = sub.add_parser("linegraph", help="line-graph tools")
    add_input(lg)
    mode = lg.add_mutually_exclusive_group(required=True)
    mode.add_argument("--check", dest="mode", action="store_const", const="check")
    mode.add_argument("--root-graph", dest="mode", action="store_const", const="root_graph")
    mode.add_argument("--generalized", dest="mode", action="store_const", const="generalized")
    lg.add_argument("--roots", help="roots for --generalized")
    lg.add_argument("--star", action="store_true", help="use the star root for K3")

    db = sub.add_parser("double", help="bipartite double")
    add_input(db)

    q = sub.add_parser("quotient", help="quotients by free part-swapping involutions")
    add_input(q)
    q.add_argument("--doubling", action="store_true", help="use the swap v <-> v + n/2")

    ce = sub.add_parser("census", help="exhaustive verification")
    ce.add_argument("--max-n", type=int, default=12)
    ce.add_argument("--workers", type=int, default=None)
    ce.add_argument("--filter", choices=("all", "non_cubic", "min_deg_2"), default="all")
    ce.add_argument("--out", help="write the JSON report here")
    ce.add_argument("--survivors", help="write survivors as graph6 lines here")
    ce.add_argument("--table", action="store_true")

    pr = sub.add_parser("probe", help="eigenvalues of the infinite families inside an interval")
    pr.add_argument("--families", default="gm,ks,hj,hj_prime")
    pr.add_argument("--n-min", type=int, default=1)
    pr.add_argument("--n-max", type=int, default=40)
    pr.add_argument("--lo", type=float, default=1.0)
    pr.add_argument("--hi", type=float, default=1.2)
    return p


COMMANDS = {
    "families": cmd_families,
    "spectrum": cmd_spectrum,
    "gapcheck": cmd_gapcheck,
    "certify": cmd_certify,
    "decompose": cmd_decompose,
    "linegraph": cmd_linegraph,
    "double": cmd_double,
    "quotient": cmd_quotient,
    "census": cmd_census,
    "probe": cmd_probe,
}


def run(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    if getattr(args, "workers", 0) is None:
        args.workers = default_workers()
    try:
        return COMMANDS[args.command](args, out)
    except (UsageError, GraphError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
