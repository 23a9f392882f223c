"""Exact linear algebra over QQ for the rank oracles.

Vectors are sparse mappings from hashable coordinates (usually words) to Fractions;
sympy's sparse ``DomainMatrix`` does the elimination.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Dict, Hashable, List, Mapping, Optional, Sequence

from sympy import Matrix, Rational
from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.sdm import SDM

Vector = Mapping[Hashable, Fraction]


def to_qq(c: Fraction):
    return QQ(c.numerator, c.denominator)


def from_qq(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


def _matrix(rows: Sequence[Vector], columns: Dict[Hashable, int]) -> DomainMatrix:
    sdm: Dict[int, Dict[int, object]] = {}
    for i, row in enumerate(rows):
        entries = {columns[k]: to_qq(Fraction(v)) for k, v in row.items() if v}
        if entries:
            sdm[i] = entries
    return DomainMatrix.from_rep(SDM(sdm, (len(rows), len(columns)), QQ))


def _columns(rows: Sequence[Vector]) -> Dict[Hashable, int]:
    cols: Dict[Hashable, int] = {}
    for row in rows:
        for k, v in row.items():
            if v and k not in cols:
                cols[k] = len(cols)
    return cols


def rank(rows: Sequence[Vector]) -> int:
    cols = _columns(rows)
    if not rows or not cols:
        return 0
    return int(_matrix(rows, cols).rank())


class RowSpace:
    """Reduced row echelon basis of a span of sparse vectors."""

    def __init__(self, rows: Sequence[Vector]):
        self.columns = _columns(rows)
        self.basis: List[Dict[Hashable, Fraction]] = []
        self.pivots: List[Hashable] = []
        if rows and self.columns:
            keys = list(self.columns)
            reduced, pivots = _matrix(rows, self.columns).rref()
            rep = reduced.to_sparse().rep
            for i, j in enumerate(pivots):
                row = rep.get(i, {})
                self.basis.append({keys[k]: from_qq(q) for k, q in row.items()})
                self.pivots.append(keys[j])

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def contains(self, vector: Vector) -> bool:
        return not self.reduce(vector)

    def reduce(self, vector: Vector) -> Dict[Hashable, Fraction]:
        """Normal form modulo the span; the result vanishes on every pivot."""
        out = {k: Fraction(v) for k, v in vector.items() if v}
        for p, row in zip(self.pivots, self.basis):
            c = out.get(p)
            if not c:
                continue
            for k, v in row.items():
                s = out.get(k, 0) - c * v
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
        return out


# dense helpers for finite-dimensional coordinates


def _rational(x) -> Rational:
    f = Fraction(x)
    return Rational(f.numerator, f.denominator)


def _dense(rows: Sequence[Sequence[Fraction]], n: int) -> Matrix:
    return Matrix(len(rows), n, lambda i, j: _rational(rows[i][j]))


def _fraction(q) -> Fraction:
    return Fraction(int(q.p), int(q.q))


def coordinates(rows: Sequence[Sequence[Fraction]], v: Sequence[Fraction]) -> Optional[List[Fraction]]:
    """Coefficients ``c`` with ``sum c_i rows_i == v``, or None when ``v`` is outside the span."""
    n = len(v)
    if not rows:
        return [] if not any(v) else None
    m = _dense(rows, n).T
    try:
        sol, params = m.gauss_jordan_solve(_dense([v], n).T)
    except ValueError:
        return None
    if params.shape[0]:
        sol = sol.subs({p: 0 for p in params})
    return [_fraction(q) for q in sol]


def intersection(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]], n: int) -> List[List[Fraction]]:
    """A basis (reduced row echelon form) of ``span(a) n span(b)``."""
    if not a or not b:
        return []
    stacked = _dense(list(a) + [[-Fraction(x) for x in row] for row in b], n).T
    vectors = []
    for null in stacked.nullspace():
        coeffs = [_fraction(q) for q in null]
        vec = [sum((coeffs[i] * Fraction(a[i][j]) for i in range(len(a))), Fraction(0)) for j in range(n)]
        vectors.append(vec)
    if not vectors:
        return []
    reduced, pivots = _dense(vectors, n).rref()
    return [[_fraction(q) for q in reduced.row(i)] for i in range(len(pivots))]
