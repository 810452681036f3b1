from __future__ import annotations

import random

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import graphs, to_nx
from subcubic_gap import families as fam
from subcubic_gap.canon import is_isomorphic, rooted_canonical_form
from subcubic_gap.enumeration import enumerate_up_to
from subcubic_gap.graph import (
    Graph,
    GraphError,
    GraphWithPetals,
    Multigraph,
    RootedMultigraph,
    complete_graph,
    cycle_graph,
    girth,
    has_induced_diamond,
    is_chordal,
    is_connected,
    line_graph,
    path_graph,
    rooted_distance_two_components,
    star_graph,
)
from subcubic_gap.spectral import associated_matrix, psd_exact
from subcubic_gap.structure import (
    FORBIDDEN_PATTERNS,
    PATTERNS_BY_ID,
    Decomposition,
    all_root_graphs,
    beineke_graph,
    beineke_graphs,
    check_decomposition_counts,
    decomposition_from_letters,
    find_induced,
    generalized_line_graph_witness,
    incidence_graph,
    intersection_graph,
    is_line_graph,
    root_graph,
    scan_forbidden_rooted,
    valid_decompositions,
)

DETERMINANTS = {"a": -2, "c": -5, "x": -1, "e": -2, "d": -2, "i": -1, "j": -4}


def rooted(n, edges, roots=()):
    return RootedMultigraph(Multigraph.from_edges(n, edges), frozenset(roots))


# --- forbidden rooted patterns ---------------------------------------------


def test_pattern_table_order_and_determinants():
    assert [p.pattern_id for p in FORBIDDEN_PATTERNS] == list(DETERMINANTS)
    for p in FORBIDDEN_PATTERNS:
        m = associated_matrix(p.worst_case())
        assert m.det() == DETERMINANTS[p.pattern_id]
        cert = psd_exact(m)
        assert not cert.is_psd and cert.verify()


def test_patterns_match_themselves():
    for p in FORBIDDEN_PATTERNS:
        w = scan_forbidden_rooted(p.worst_case())
        assert w is not None


def test_scan_examples():
    assert scan_forbidden_rooted(rooted(2, [(0, 1, 2)], [0])).pattern_id == "a"
    assert scan_forbidden_rooted(rooted(3, [(0, 1, 1), (1, 2, 1)], [0, 1, 2])).pattern_id == "x"
    assert scan_forbidden_rooted(rooted(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)])) is None


def test_lower_bound_patterns_accept_larger_multiplicities():
    assert scan_forbidden_rooted(rooted(2, [(0, 1, 3)], [0])).pattern_id == "a"
    assert PATTERNS_BY_ID["a"].exact is False and PATTERNS_BY_ID["d"].exact is True


@st.composite
def rooted_multigraphs(draw, max_n=6, max_mult=3):
    n = draw(st.integers(1, max_n))
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            k = draw(st.integers(0, max_mult))
            if k:
                edges.append((u, v, k))
    roots = draw(st.sets(st.integers(0, n - 1)))
    return rooted(n, edges, roots)


@settings(max_examples=300, deadline=None)
@given(rooted_multigraphs())
def test_scan_is_sound(gr):
    w = scan_forbidden_rooted(gr)
    if w is not None:
        sub = gr.induced(list(w.embedding))
        assert not psd_exact(associated_matrix(sub)).is_psd
        assert not psd_exact(associated_matrix(gr)).is_psd


# --- line graphs -----------------------------------------------------------


def test_beineke_graphs_are_minimal_non_line_graphs():
    assert len(beineke_graphs()) == 9
    for tag, b in beineke_graphs():
        w = is_line_graph(b)
        assert w is not None and w.kind == "beineke" and len(w.embedding) == b.n
        for v in range(b.n):
            assert is_line_graph(b.delete_vertices([v])) is None


def test_beineke_graphs_are_pairwise_non_isomorphic():
    bs = [b for _, b in beineke_graphs()]
    assert all(not is_isomorphic(x, y) for i, x in enumerate(bs) for y in bs[i + 1:])


def test_is_line_graph_examples():
    w = is_line_graph(star_graph(3))
    assert w.pattern_id == "a" and sorted(w.embedding) == [0, 1, 2, 3]
    rng = random.Random(3)
    tree = Graph(9, [(v, rng.randrange(v)) for v in range(1, 9)])
    assert is_line_graph(line_graph(GraphWithPetals(tree))[0]) is None
    assert is_line_graph(fam.classic_cubic("petersen")) is not None


def test_root_graph_examples():
    f, _ = root_graph(cycle_graph(6))
    assert is_isomorphic(f, cycle_graph(6))
    f, _ = root_graph(complete_graph(3))
    assert is_isomorphic(f, complete_graph(3))
    f, _ = root_graph(complete_graph(3), star=True)
    assert is_isomorphic(f, star_graph(3))
    assert root_graph(star_graph(3)) is None
    with pytest.raises(GraphError):
        root_graph(Graph(2))


def _beineke_free(g: Graph) -> bool:
    h = to_nx(g)
    for _, b in beineke_graphs():
        if nx.algorithms.isomorphism.GraphMatcher(h, to_nx(b)).subgraph_is_isomorphic():
            return False
    return True


CONNECTED_UP_TO_7 = list(enumerate_up_to(7, max_degree=None))


@settings(max_examples=300, deadline=None)
@given(st.sampled_from(CONNECTED_UP_TO_7))
def test_line_graph_recognition_matches_induced_subgraph_oracle(g):
    w = is_line_graph(g)
    assert (w is None) == _beineke_free(g) == (root_graph(g) is not None)
    if w is not None:
        b = beineke_graph(w.pattern_id)
        assert is_isomorphic(g.induced_subgraph(w.embedding), b)


@settings(max_examples=150, deadline=None)
@given(graphs(min_n=2, max_n=7))
def test_whitney_reconstruction(f):
    if not is_connected(f) or f.m == 0:
        return
    lg, labels = line_graph(GraphWithPetals(f))
    got, edge_map = root_graph(lg)
    # the root graph reproduces the line graph through its edge map
    ends = [set(e) for e in edge_map]
    assert all(lg.has_edge(u, v) == (len(ends[u] & ends[v]) == 1) for u in range(lg.n) for v in range(u + 1, lg.n))
    if is_isomorphic(lg, complete_graph(3)):
        assert is_isomorphic(got, complete_graph(3))
    else:
        assert is_isomorphic(got, f)
        for other, _ in all_root_graphs(lg):
            assert is_isomorphic(other, f)


def test_find_induced_respects_non_edges():
    assert find_induced(path_graph(3), complete_graph(4)) is None
    assert find_induced(path_graph(3), cycle_graph(5)) is not None


# --- generalized line graphs ------------------------------------------------


def test_generalized_witness_examples():
    k4 = RootedMultigraph.from_graph(complete_graph(4), [0, 1, 2])
    w = generalized_line_graph_witness(k4)
    assert w is not None and w.verify(k4)
    assert set(w.pendant_roots) == {0, 1, 2}
    path = RootedMultigraph.from_graph(path_graph(3), [0, 1, 2])
    assert generalized_line_graph_witness(path) is None
    single = RootedMultigraph.from_graph(Graph(1), [0])
    w = generalized_line_graph_witness(single)
    assert w is not None and is_isomorphic(w.f.base, complete_graph(2)) and w.f.petals == ()


def test_generalized_witness_rejects_bad_input():
    with pytest.raises(GraphError):
        generalized_line_graph_witness(RootedMultigraph.from_graph(complete_graph(2)))
    with pytest.raises(GraphError):
        generalized_line_graph_witness(RootedMultigraph.from_graph(Graph(2), [0]))


def test_witness_json_shape():
    k4 = RootedMultigraph.from_graph(complete_graph(4), [0, 1, 2])
    doc = generalized_line_graph_witness(k4).to_json()
    assert set(doc) == {"f", "edge_map", "pendant_roots"} and len(doc["edge_map"]) == 4


@settings(max_examples=200, deadline=None)
@given(st.sampled_from([g for g in CONNECTED_UP_TO_7 if g.n <= 6]), st.data())
def test_generalized_witness_iff_psd(g, data):
    roots = data.draw(st.sets(st.integers(0, g.n - 1), min_size=1))
    gr = RootedMultigraph.from_graph(g, roots)
    w = generalized_line_graph_witness(gr)
    assert (w is not None) == psd_exact(associated_matrix(gr)).is_psd
    if w is not None:
        assert w.verify(gr)


# --- valid decompositions ---------------------------------------------------


def test_valid_decomposition_examples():
    k4 = RootedMultigraph.from_graph(complete_graph(4), [0, 1, 2])
    ds = valid_decompositions(k4)
    assert [d.parts for d in ds] == [((0, 1, 2), (0, 3), (1, 3), (2, 3))]
    k3 = RootedMultigraph.from_graph(complete_graph(3), [0, 1, 2])
    assert [d.parts for d in valid_decompositions(k3)] == [((0, 1), (0, 2), (1, 2))]
    assert not Decomposition(k3, ((0, 1, 2),)).is_valid()
    assert valid_decompositions(RootedMultigraph.from_graph(complete_graph(2))) == []


def test_intersection_graph_examples():
    d = decomposition_from_letters(["ab", "bc", "ca"], roots="abc")
    g, roots = intersection_graph(d)
    assert is_isomorphic(g, complete_graph(3)) and roots == frozenset(range(3))
    d = decomposition_from_letters(["abc", "ad", "bd", "cd"], roots="abc")
    g, roots = intersection_graph(d)
    assert is_isomorphic(g, complete_graph(4)) and len(roots) == 3
    assert all(len(d.parts[i]) == 2 for i in roots)


def test_incidence_graph_examples():
    d = decomposition_from_letters(["ab", "bc", "ca"], roots="abc")
    assert is_isomorphic(incidence_graph(d), cycle_graph(6))
    d = decomposition_from_letters(["abc", "ad", "bd", "cd"], roots="abc")
    assert is_isomorphic(incidence_graph(d), fam.sporadic_g6("b"))
    d = decomposition_from_letters(fam.SPORADIC_G6_DECOMPOSITIONS["c"], roots="defg")
    assert d.is_valid() and incidence_graph(d).n == 14
    assert is_isomorphic(incidence_graph(d), fam.sporadic_g6("c"))


def test_decomposition_counts():
    d = decomposition_from_letters(["ab", "bc", "ca"], roots="abc")
    assert check_decomposition_counts(d) == (0, 3, True)
    bad = Decomposition(RootedMultigraph.from_graph(complete_graph(3)), ((0, 1), (0, 2), (1, 2)))
    assert not bad.is_valid() and check_decomposition_counts(bad)[2] is False
    with pytest.raises(GraphError):
        intersection_graph(bad)


def _rooted_key(g: Graph, roots) -> bytes:
    return rooted_canonical_form(g, sorted(roots))


@pytest.mark.parametrize("tag", ["a", "b", "c", "d"])
def test_decomposition_round_trip_on_girth_six_graphs(tag):
    h = fam.sporadic_g6(tag)
    comps = rooted_distance_two_components(h)
    assert len(comps) == 2
    for mine, other in (comps, comps[::-1]):
        target = _rooted_key(other.graph(), other.roots)
        hits = []
        for d in valid_decompositions(mine):
            alpha, beta, ok = check_decomposition_counts(d)
            assert ok
            ig, roots = intersection_graph(d)
            if _rooted_key(ig, roots) == target and is_isomorphic(incidence_graph(d), h):
                hits.append(d)
        assert hits


@pytest.mark.parametrize("tag", ["a", "b", "c", "d"])
def test_girth_six_components_have_chordal_diamond_free_roots(tag):
    h = fam.sporadic_g6(tag)
    assert girth(h) == 6
    for comp in rooted_distance_two_components(h):
        f, _ = root_graph(comp.graph())
        assert is_chordal(f) and not has_induced_diamond(f)


def test_decompositions_of_pendant_rooted_line_graphs_use_edge_parts():
    rng = random.Random(11)
    corpus = [c for t in "abcd" for c in rooted_distance_two_components(fam.sporadic_g6(t))]
    while len(corpus) < 200:
        n = rng.randint(3, 10)
        tree = Graph(n, [(v, rng.randrange(v)) for v in range(1, n)])
        if tree.max_degree() > 3:
            continue
        lg, labels = line_graph(GraphWithPetals(tree))
        roots = [i for i, (_, u, v) in enumerate(labels) if min(tree.degree(u), tree.degree(v)) == 1]
        corpus.append(RootedMultigraph.from_graph(lg, roots))
    checked = 0
    for gr in corpus:
        for d in valid_decompositions(gr):
            checked += 1
            assert d.edge_parts
    assert checked >= 8
