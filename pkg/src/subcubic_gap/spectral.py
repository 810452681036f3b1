"""Exact positive-semidefinite decisions and floating-point spectra.

The gap test rests on one identity: a graph has no eigenvalue in the open
interval (-1, 1) exactly when ``A^2 - I`` is positive semidefinite.  That
matrix is decided with rational LDL^T, which yields a re-checkable
certificate either way.  Floating spectra are only used for display and for
cross-checks against closed forms.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from .graph import Graph, GraphError, RootedMultigraph

PSD = "PSD"
NOT_PSD = "NOT_PSD"


def _frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _parse_frac(s) -> Fraction:
    return Fraction(s)


@dataclass(frozen=True)
class RationalSymMatrix:
    """Exact symmetric matrix with rational entries."""

    n: int
    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(Fraction(x) for x in r) for r in self.entries)
        object.__setattr__(self, "entries", rows)
        if len(rows) != self.n or any(len(r) != self.n for r in rows):
            raise ValueError("matrix has the wrong shape")
        for i in range(self.n):
            for j in range(i + 1, self.n):
                if rows[i][j] != rows[j][i]:
                    raise ValueError("matrix is not symmetric")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "RationalSymMatrix":
        return cls(len(rows), tuple(tuple(r) for r in rows))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for r in self.entries for x in r)

    def int_rows(self) -> list[list[int]]:
        if not self.is_integral():
            raise ValueError("matrix has non-integer entries")
        return [[int(x) for x in r] for r in self.entries]

    def det(self) -> Fraction:
        """Exact determinant by fraction-free elimination."""
        n = self.n
        if n == 0:
            return Fraction(1)
        scale = 1
        for r in self.entries:
            for x in r:
                scale = scale * x.denominator // math.gcd(scale, x.denominator)
        a = [[int(x * scale) for x in r] for r in self.entries]
        return Fraction(_bareiss_det(a), scale**n)

    def principal(self, idx: Sequence[int]) -> "RationalSymMatrix":
        return RationalSymMatrix(len(idx), tuple(tuple(self.entries[i][j] for j in idx) for i in idx))

    def to_json(self) -> list[list[str]]:
        return [[_frac_str(x) for x in r] for r in self.entries]

    @classmethod
    def from_json(cls, rows) -> "RationalSymMatrix":
        return cls.from_rows([[_parse_frac(x) for x in r] for r in rows])


def _bareiss_det(a: list[list[int]]) -> int:
    n = len(a)
    a = [r[:] for r in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


# ---------------------------------------------------------------------------
# spectra


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues in non-increasing order."""

    values: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(sorted((float(x) for x in self.values), reverse=True)))

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def grouped(self, tol: float = 1e-6) -> list[tuple[float, int]]:
        """(value, multiplicity) pairs; consecutive values within ``tol`` merge."""
        out: list[list] = []
        for x in self.values:
            if out and out[-1][2] - x <= tol:
                out[-1][1] += 1
                out[-1][2] = x
                out[-1][3] += x
            else:
                out.append([x, 1, x, x])
        return [(s / k, k) for _, k, _, s in out]

    def distinct(self, tol: float = 1e-6) -> list[float]:
        return [v for v, _ in self.grouped(tol)]

    def min(self) -> float:
        return self.values[-1]

    def max(self) -> float:
        return self.values[0]

    def count_in(self, lo: float, hi: float, tol: float = 1e-8) -> int:
        """Eigenvalues strictly inside (lo, hi), with ``tol`` of slack at both ends."""
        return sum(1 for x in self.values if lo + tol < x < hi - tol)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["index", "eigenvalue"])
        for i, x in enumerate(self.values):
            w.writerow([i, repr(x)])
        return buf.getvalue()


def eigenvalues(g: Graph) -> Spectrum:
    if g.n == 0:
        raise GraphError("the empty graph has no spectrum")
    return Spectrum(tuple(np.linalg.eigvalsh(g.adjacency_matrix(dtype=float))))


def min_eigenvalue(g: Graph) -> float:
    return eigenvalues(g).min()


def gm_spectrum_closed_form(n: int) -> Spectrum:
    """Eigenvalues of ``gm(n)`` in closed form."""
    if n < 1:
        raise GraphError("n must be positive")
    vals = [1.0] * n + [-1.0] * n
    for i in range(n):
        r = math.sqrt(5 + 4 * math.cos(2 * math.pi * i / n))
        vals += [r, -r]
    return Spectrum(tuple(vals))


def _same_sets(xs: list[float], ys: list[float], tol: float) -> bool:
    return len(xs) == len(ys) and all(abs(x - y) <= tol for x, y in zip(xs, ys))


def verify_ks_gm_relation(n: int, tol: float = 1e-6) -> bool:
    """Distinct eigenvalues of gm(2n) equal those of ks(n) together with -3."""
    from .families import gm, ks

    left = eigenvalues(gm(2 * n)).distinct(tol)
    right = Spectrum(eigenvalues(ks(n)).values + (-3.0,)).distinct(tol)
    return _same_sets(left, right, tol)


def interlacing_check(g: Graph, deleted: Iterable[int], tol: float = 1e-8) -> bool:
    """Cauchy interlacing between ``g`` and ``g`` minus ``deleted``."""
    deleted = sorted(set(deleted))
    if any(not (0 <= v < g.n) for v in deleted):
        raise GraphError("deleted vertices must belong to the graph")
    k = len(deleted)
    if k == g.n:
        return True
    lam = eigenvalues(g).values
    mu = eigenvalues(g.delete_vertices(deleted)).values
    return all(lam[i] + tol >= mu[i] >= lam[i + k] - tol for i in range(len(mu)))


# ---------------------------------------------------------------------------
# exact PSD decision


@dataclass(frozen=True)
class PsdCertificate:
    """Outcome of :func:`psd_exact` together with its witness.

    PSD: ``perm`` lists the pivot order, ``lower`` is unit lower triangular
    and ``diag`` non-negative, with ``M[perm[a]][perm[b]] = (L D L^T)[a][b]``.
    NOT_PSD: ``vector`` is an exact ``x`` with ``x^T M x < 0``.
    """

    verdict: str
    matrix: RationalSymMatrix
    perm: tuple[int, ...] = ()
    lower: tuple[tuple[Fraction, ...], ...] = ()
    diag: tuple[Fraction, ...] = ()
    vector: tuple[Fraction, ...] = ()
    value: Optional[Fraction] = field(default=None)

    @property
    def is_psd(self) -> bool:
        return self.verdict == PSD

    def verify(self) -> bool:
        """Re-check the witness in exact arithmetic."""
        m = self.matrix
        n = m.n
        if self.verdict == NOT_PSD:
            x = self.vector
            if len(x) != n:
                return False
            return quadratic_form(m, x) < 0
        if self.verdict != PSD:
            return False
        if sorted(self.perm) != list(range(n)) or len(self.diag) != n or len(self.lower) != n:
            return False
        L, D = self.lower, self.diag
        if any(d < 0 for d in D):
            return False
        for a in range(n):
            if L[a][a] != 1 or any(L[a][b] != 0 for b in range(a + 1, n)):
                return False
        for a in range(n):
            for b in range(a + 1):
                s = sum(L[a][k] * D[k] * L[b][k] for k in range(b + 1))
                if s != m[self.perm[a], self.perm[b]]:
                    return False
        return True

    def to_json(self) -> dict:
        doc = {"verdict": self.verdict, "n": self.matrix.n, "matrix": self.matrix.to_json()}
        if self.verdict == PSD:
            doc["perm"] = list(self.perm)
            doc["L"] = [[_frac_str(x) for x in r] for r in self.lower]
            doc["D"] = [_frac_str(x) for x in self.diag]
        else:
            doc["x"] = [_frac_str(x) for x in self.vector]
            doc["xMx"] = _frac_str(self.value)
        return doc

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2) + "\n"

    def sha256(self) -> str:
        return hashlib.sha256(self.dumps().encode()).hexdigest()

    @classmethod
    def from_json(cls, doc: dict) -> "PsdCertificate":
        m = RationalSymMatrix.from_json(doc["matrix"])
        if doc["verdict"] == PSD:
            return cls(
                PSD,
                m,
                perm=tuple(doc["perm"]),
                lower=tuple(tuple(_parse_frac(x) for x in r) for r in doc["L"]),
                diag=tuple(_parse_frac(x) for x in doc["D"]),
            )
        x = tuple(_parse_frac(v) for v in doc["x"])
        return cls(NOT_PSD, m, vector=x, value=quadratic_form(m, x))


def quadratic_form(m: RationalSymMatrix, x: Sequence) -> Fraction:
    n = m.n
    return sum((m.entries[i][j] * x[i] * x[j] for i in range(n) for j in range(n) if x[i] and x[j]), Fraction(0))


def psd_exact(m: RationalSymMatrix) -> PsdCertificate:
    """Decide ``m >= 0`` exactly by symmetrically pivoted rational LDL^T.

    The pivot is the largest remaining diagonal entry, ties going to the
    lowest original index.  A negative reduced diagonal entry, or a zero one
    facing a non-zero off-diagonal entry, gives a vector ``y`` with negative
    form on the Schur complement; back-substitution through the partial
    factor lifts it to ``x`` with ``x^T m x = y^T S y < 0``.
    """
    n = m.n
    S = {i: {j: m.entries[i][j] for j in range(n)} for i in range(n)}
    remaining = list(range(n))
    order: list[int] = []
    cols: list[dict[int, Fraction]] = []  # column k of L, keyed by original index
    diag: list[Fraction] = []

    def witness(y: dict[int, Fraction]) -> PsdCertificate:
        # order so far, then the remaining indices; solve L^T x' = (0, y)
        full = order + remaining
        pos = {v: a for a, v in enumerate(full)}
        k = len(order)
        xp = [Fraction(0)] * n
        for v, val in y.items():
            xp[pos[v]] = val
        for a in range(k - 1, -1, -1):
            col = cols[a]
            s = sum((col[full[b]] * xp[b] for b in range(a + 1, n) if xp[b] and full[b] in col), Fraction(0))
            xp[a] = -s
        x = [Fraction(0)] * n
        for a, v in enumerate(full):
            x[v] = xp[a]
        q = quadratic_form(m, x)
        return PsdCertificate(NOT_PSD, m, vector=tuple(x), value=q)

    while remaining:
        neg = next((i for i in remaining if S[i][i] < 0), None)
        if neg is not None:
            return witness({neg: Fraction(1)})
        p = max(remaining, key=lambda i: (S[i][i], -i))
        d = S[p][p]
        if d == 0:
            for i in remaining:
                for j in remaining:
                    if i != j and S[i][j] != 0:
                        t = -(S[j][j] + 1) / (2 * S[i][j])
                        return witness({i: t, j: Fraction(1)})
            break  # the reduced matrix is zero
        remaining.remove(p)
        col = {p: Fraction(1)}
        for i in remaining:
            col[i] = S[i][p] / d
        for i in remaining:
            li = col[i]
            if li == 0:
                continue
            row = S[i]
            for j in remaining:
                if S[p][j]:
                    row[j] -= li * S[p][j]
        order.append(p)
        cols.append(col)
        diag.append(d)

    full = order + remaining
    k = len(order)
    lower = []
    for a in range(n):
        row = []
        for b in range(n):
            if b < k:
                row.append(cols[b].get(full[a], Fraction(0)) if a >= b else Fraction(0))
            else:
                row.append(Fraction(1) if a == b else Fraction(0))
        lower.append(tuple(row))
    diag += [Fraction(0)] * (n - k)
    return PsdCertificate(PSD, m, perm=tuple(full), lower=tuple(lower), diag=tuple(diag))


def is_psd_integer(rows: Sequence[Sequence[int]]) -> bool:
    """Fast exact PSD test for integer matrices (fraction-free elimination).

    Uses the same pivot rule as :func:`psd_exact`.  After ``k`` positive
    pivots every entry is a ``(k+1)``-minor of the input, so all arithmetic
    stays in integers and divisions by the previous pivot are exact; signs
    match those of the rational Schur complement.
    """
    n = len(rows)
    a = [list(r) for r in rows]
    remaining = list(range(n))
    prev = 1
    while remaining:
        best = None
        for i in remaining:
            d = a[i][i]
            if d < 0:
                return False
            if best is None or d > a[best][best]:
                best = i
        p = best
        d = a[p][p]
        if d == 0:
            return not any(a[i][j] for i in remaining for j in remaining if i != j)
        remaining.remove(p)
        rp = a[p]
        for i in remaining:
            ri = a[i]
            lip = ri[p]
            for j in remaining:
                ri[j] = (ri[j] * d - lip * rp[j]) // prev
        prev = d
    return True


# ---------------------------------------------------------------------------
# matrices of the gap test


def associated_matrix(gr: RootedMultigraph) -> RationalSymMatrix:
    """Multiplicity matrix plus ``2I``, with root diagonal entries lowered to 1."""
    n = gr.n
    rows = [[gr.base.mult[i][j] for j in range(n)] for i in range(n)]
    for i in range(n):
        rows[i][i] = 1 if i in gr.roots else 2
    return RationalSymMatrix.from_rows(rows)


def square_minus_identity(g: Graph) -> list[list[int]]:
    """``A^2 - I`` as integer rows, computed from common-neighbour counts."""
    n = g.n
    adj = g.adj
    return [[(adj[i] & adj[j]).bit_count() - (1 if i == j else 0) for j in range(n)] for i in range(n)]


def gap_avoids_unit_interval(g: Graph) -> tuple[bool, PsdCertificate]:
    """True iff no eigenvalue of ``g`` lies in the open interval (-1, 1)."""
    cert = psd_exact(RationalSymMatrix.from_rows(square_minus_identity(g)))
    return cert.is_psd, cert


def gap_avoids_unit_interval_fast(g: Graph) -> bool:
    """Verdict of :func:`gap_avoids_unit_interval` without building a certificate."""
    return is_psd_integer(square_minus_identity(g))
