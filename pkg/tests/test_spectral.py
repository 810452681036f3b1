from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import connected_subcubic, graphs
from subcubic_gap import families as fam
from subcubic_gap.graph import (
    Graph,
    GraphError,
    GraphWithPetals,
    Multigraph,
    RootedMultigraph,
    attach_cliques,
    bipartite_double,
    complete_graph,
    cycle_graph,
    line_graph,
    path_graph,
    rooted_distance_two_components,
    rooted_distance_two_subgraph,
)
from subcubic_gap.canon import is_isomorphic
from subcubic_gap.enumeration import enumerate_up_to
from subcubic_gap.spectral import (
    NOT_PSD,
    PSD,
    PsdCertificate,
    RationalSymMatrix,
    associated_matrix,
    eigenvalues,
    gap_avoids_unit_interval,
    gap_avoids_unit_interval_fast,
    gm_spectrum_closed_form,
    interlacing_check,
    is_psd_integer,
    min_eigenvalue,
    psd_exact,
    quadratic_form,
    square_minus_identity,
    verify_ks_gm_relation,
)


def sylvester_psd(rows) -> bool:
    """Independent oracle: every principal minor is non-negative."""
    n = len(rows)
    for k in range(1, n + 1):
        for idx in combinations(range(n), k):
            sub = [[Fraction(rows[i][j]) for j in idx] for i in idx]
            if _det(sub) < 0:
                return False
    return True


def _det(a):
    a = [r[:] for r in a]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            for k in range(c, n):
                a[r][k] -= f * a[c][k]
    return det


@st.composite
def symmetric_int_matrices(draw, max_n=6, lo=-3, hi=3):
    n = draw(st.integers(1, max_n))
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            rows[i][j] = rows[j][i] = draw(st.integers(lo, hi))
    return rows


@st.composite
def gram_matrices(draw, max_n=6):
    """Integer Gram matrices (always PSD), often singular."""
    n = draw(st.integers(1, max_n))
    k = draw(st.integers(1, n))
    vecs = [[draw(st.integers(-2, 2)) for _ in range(k)] for _ in range(n)]
    return [[sum(a * b for a, b in zip(u, v)) for v in vecs] for u in vecs]


# --- spectra ---------------------------------------------------------------


def test_eigenvalue_examples():
    assert np.allclose(eigenvalues(complete_graph(2)).values, [1, -1])
    assert np.allclose(eigenvalues(complete_graph(3)).values, [2, -1, -1])
    assert np.allclose(eigenvalues(cycle_graph(6)).values, [2, 1, 1, -1, -1, -2])
    with pytest.raises(GraphError):
        eigenvalues(Graph(0))


def test_min_eigenvalue_examples():
    lg, _ = line_graph(GraphWithPetals(path_graph(4)))
    assert abs(min_eigenvalue(lg) + math.sqrt(2)) < 1e-9
    assert abs(min_eigenvalue(complete_graph(3)) + 1) < 1e-9
    assert abs(min_eigenvalue(fam.classic_cubic("petersen")) + 2) < 1e-9


def test_spectrum_grouping_and_csv():
    sp = eigenvalues(fam.gm(2))
    assert [(round(v, 9), k) for v, k in sp.grouped()] == [(3.0, 1), (1.0, 3), (-1.0, 3), (-3.0, 1)]
    assert sp.count_in(-1, 1) == 0 and sp.count_in(0.5, 3.5) == 4
    csv_text = sp.to_csv()
    assert csv_text.splitlines()[0] == "index,eigenvalue" and len(csv_text.splitlines()) == 9


def test_gm_closed_form_examples():
    assert np.allclose(gm_spectrum_closed_form(2).values, [3, 1, 1, 1, -1, -1, -1, -3])
    assert np.allclose(gm_spectrum_closed_form(1).values, [3, 1, -1, -3])
    assert any(abs(x - math.sqrt(5)) < 1e-12 for x in gm_spectrum_closed_form(4).values)
    assert any(abs(x + math.sqrt(5)) < 1e-12 for x in gm_spectrum_closed_form(4).values)


@pytest.mark.parametrize("n", range(2, 13))
def test_gm_spectrum_matches_closed_form(n):
    assert np.allclose(eigenvalues(fam.gm(n)).values, gm_spectrum_closed_form(n).values, atol=1e-8, rtol=0)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_ks_gm_relation_holds(n):
    assert verify_ks_gm_relation(n)


def test_ks_gm_relation_fails_for_one_rung():
    # ks(1) is K4: distinct values {3, -1} plus -3 cannot produce the +1 of gm(2)
    assert is_isomorphic(fam.ks(1), complete_graph(4))
    assert np.allclose(eigenvalues(fam.gm(2)).distinct(), [3, 1, -1, -3])
    assert not verify_ks_gm_relation(1)


def _deletions_to(g, target, k):
    for dead in combinations(range(g.n), k):
        if is_isomorphic(g.delete_vertices(dead), target):
            return dead
    return None


def test_interlacing_examples():
    dead = _deletions_to(fam.ks(3), fam.hj(1), 2)
    assert dead is not None and interlacing_check(fam.ks(3), dead)
    dead = _deletions_to(fam.ks(2), fam.hj_prime(1), 1)
    assert dead is not None and interlacing_check(fam.ks(2), dead)
    assert interlacing_check(complete_graph(3), [0])


@settings(max_examples=60, deadline=None)
@given(graphs(min_n=2, max_n=9), st.data())
def test_interlacing_holds_for_random_deletions(g, data):
    dead = data.draw(st.sets(st.integers(0, g.n - 1), min_size=1, max_size=g.n - 1))
    assert interlacing_check(g, dead)


@settings(max_examples=80, deadline=None)
@given(connected_subcubic(max_n=12))
def test_bipartite_double_spectrum_is_plus_minus(g):
    lam = np.array(eigenvalues(g).values)
    expected = np.sort(np.concatenate([lam, -lam]))[::-1]
    assert np.allclose(eigenvalues(bipartite_double(g)).values, expected, atol=1e-8, rtol=0)


# --- matrices --------------------------------------------------------------


def test_rational_matrix_basics():
    m = RationalSymMatrix.from_rows([[1, 2], [2, 2]])
    assert m.det() == -2 and m.is_integral()
    assert RationalSymMatrix.from_json(m.to_json()) == m
    with pytest.raises(ValueError):
        RationalSymMatrix.from_rows([[1, 2], [3, 1]])


def test_associated_matrix_examples():
    one_root = RootedMultigraph(Multigraph.from_edges(2, [(0, 1, 2)]), frozenset({0}))
    assert associated_matrix(one_root).int_rows() == [[1, 2], [2, 2]]
    triple = RootedMultigraph(Multigraph.from_edges(2, [(0, 1, 3)]))
    m = associated_matrix(triple)
    assert m.int_rows() == [[2, 3], [3, 2]] and m.det() == -5
    assert associated_matrix(RootedMultigraph.from_graph(Graph(1), [0])).int_rows() == [[1]]


def test_psd_exact_examples():
    cert = psd_exact(RationalSymMatrix.from_rows([[1, 2], [2, 2]]))
    assert cert.verdict == NOT_PSD and cert.value < 0 and cert.verify()
    cert = psd_exact(RationalSymMatrix.from_rows([[1, 0, 0], [0, 1, 0], [0, 0, 1]]))
    assert cert.verdict == PSD and cert.verify()
    for comp in rooted_distance_two_components(fam.hj(3)):
        assert psd_exact(associated_matrix(comp)).is_psd


@settings(max_examples=300, deadline=None)
@given(st.one_of(symmetric_int_matrices(), gram_matrices()))
def test_psd_exact_agrees_with_principal_minors(rows):
    m = RationalSymMatrix.from_rows(rows)
    cert = psd_exact(m)
    assert cert.verify()
    assert cert.is_psd == sylvester_psd(rows)
    assert is_psd_integer(rows) == cert.is_psd
    back = PsdCertificate.from_json(cert.to_json())
    assert back.verify() and back.verdict == cert.verdict


@settings(max_examples=100, deadline=None)
@given(symmetric_int_matrices(max_n=5), st.integers(1, 4))
def test_psd_exact_on_rational_entries(rows, den):
    m = RationalSymMatrix.from_rows([[Fraction(x, den) for x in r] for r in rows])
    cert = psd_exact(m)
    assert cert.verify() and cert.is_psd == sylvester_psd(rows)


def test_tampered_certificates_fail_verification():
    cert = psd_exact(RationalSymMatrix.from_rows([[2, 1], [1, 2]]))
    bad = PsdCertificate(PSD, cert.matrix, cert.perm, cert.lower, (cert.diag[0], cert.diag[1] + 1))
    assert not bad.verify()
    neg = psd_exact(RationalSymMatrix.from_rows([[1, 2], [2, 1]]))
    assert not PsdCertificate(NOT_PSD, neg.matrix, vector=(Fraction(1), Fraction(0))).verify()
    assert quadratic_form(neg.matrix, neg.vector) == neg.value


def test_pivoting_is_deterministic():
    rows = [[2, 1, 1], [1, 2, 1], [1, 1, 2]]
    a = psd_exact(RationalSymMatrix.from_rows(rows))
    b = psd_exact(RationalSymMatrix.from_rows(rows))
    assert a == b and a.perm == (0, 1, 2)


# --- the gap test ----------------------------------------------------------


def test_gap_examples():
    assert gap_avoids_unit_interval(complete_graph(2))[0]
    assert not gap_avoids_unit_interval(Graph(1))[0]
    ok, cert = gap_avoids_unit_interval(path_graph(4))
    assert not ok and cert.verify()


def test_square_minus_identity_is_matrix_square():
    g = fam.hj(2)
    a = g.adjacency_matrix()
    assert np.array_equal(np.array(square_minus_identity(g)), a @ a - np.eye(g.n, dtype=np.int64))


@settings(max_examples=150, deadline=None)
@given(connected_subcubic(max_n=12))
def test_exact_gap_agrees_with_floating_spectrum(g):
    ok, cert = gap_avoids_unit_interval(g)
    assert cert.verify()
    assert gap_avoids_unit_interval_fast(g) == ok
    lam = np.abs(np.array(eigenvalues(g).values))
    assert ok == bool(lam.min() >= 1 - 1e-7)


MIN_DEG_2 = [g for g in enumerate_up_to(10) if g.n >= 3 and g.min_degree() >= 2]


@settings(max_examples=150, deadline=None)
@given(st.sampled_from(MIN_DEG_2), st.randoms(use_true_random=False))
def test_gap_matches_rooted_distance_two_psd(g, rnd):
    ok, _ = gap_avoids_unit_interval(g)
    comps_psd = all(psd_exact(associated_matrix(c)).is_psd for c in rooted_distance_two_components(g))
    subsets_psd = True
    for _ in range(200):
        us = [v for v in range(g.n) if rnd.random() < 0.5] or [0]
        if not psd_exact(associated_matrix(rooted_distance_two_subgraph(g, us))).is_psd:
            subsets_psd = False
            break
    assert ok == comps_psd
    if ok:
        assert subsets_psd


# --- cliques hung on roots -------------------------------------------------


@st.composite
def rooted_simple_graphs(draw, max_n=6):
    g = draw(graphs(min_n=1, max_n=max_n))
    roots = draw(st.sets(st.integers(0, g.n - 1)))
    return RootedMultigraph.from_graph(g, roots)


def _attached_min(gr, k):
    return min_eigenvalue(attach_cliques(gr, k))


@settings(max_examples=80, deadline=None)
@given(rooted_simple_graphs(max_n=8))
def test_associated_matrix_psd_iff_clique_attachments_stay_above_minus_two(gr):
    psd = psd_exact(associated_matrix(gr)).is_psd
    ks = range(1, 41)
    if psd:
        assert all(_attached_min(gr, k) >= -2 - 1e-8 for k in ks)
    else:
        failing = next((k for k in ks if _attached_min(gr, k) < -2 + 1e-8), None)
        assert failing is not None, "no clique order up to 40 drops below -2"
