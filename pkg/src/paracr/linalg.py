"""Small exact linear algebra over rationals and over the series ring.

Matrices here are tiny (at most 6 x 3 for jet Jacobians, 3 x 3 for the
elimination Jacobians), so plain cofactor / Gauss-Jordan code is enough.
"""

from __future__ import annotations

import itertools
from typing import Sequence

import gmpy2

from .series import NonUnitDivisor, Rational, Series, rational


def rational_rank(rows: Sequence[Sequence[object]]) -> int:
    """Rank of a rational matrix by exact Gaussian elimination."""
    m = [[rational(v) for v in row] for row in rows]
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(m)) if m[r][col]), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        p = m[rank][col]
        for r in range(len(m)):
            if r != rank and m[r][col]:
                f = m[r][col] / p
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
        if rank == len(m):
            break
    return rank


def rational_det(rows: Sequence[Sequence[object]]) -> Rational:
    m = [[rational(v) for v in row] for row in rows]
    n = len(m)
    det = gmpy2.mpq(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col]), None)
        if pivot is None:
            return gmpy2.mpq(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        p = m[col][col]
        det *= p
        for r in range(col + 1, n):
            if m[r][col]:
                f = m[r][col] / p
                m[r] = [a - f * b for a, b in zip(m[r], m[col])]
    return det


def rational_inverse(rows: Sequence[Sequence[object]]) -> list[list[Rational]]:
    n = len(rows)
    m = [[rational(v) for v in row] + [gmpy2.mpq(int(i == j)) for j in range(n)] for i, row in enumerate(rows)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col]), None)
        if pivot is None:
            raise ZeroDivisionError("singular rational matrix")
        m[col], m[pivot] = m[pivot], m[col]
        p = m[col][col]
        m[col] = [v / p for v in m[col]]
        for r in range(n):
            if r != col and m[r][col]:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[col])]
    return [row[n:] for row in m]


def series_det(m: Sequence[Sequence[Series]]) -> Series:
    """Determinant by cofactor expansion along the first row."""
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    total = None
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = m[0][j] * series_det(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return total


def series_inverse(m: Sequence[Sequence[Series]]) -> list[list[Series]]:
    """Inverse of a square series matrix whose constant-term matrix is invertible.

    Gauss-Jordan elimination choosing unit pivots (nonzero constant term);
    such a pivot exists in every column exactly when the constant matrix is
    invertible.
    """
    n = len(m)
    first = m[0][0]
    one = Series.constant(first.space, 1, first.trunc)
    zero = Series.zero(first.space, first.trunc)
    aug = [list(row) + [one if i == j else zero for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col].constant_term()), None)
        if pivot is None:
            raise NonUnitDivisor("series matrix is not invertible at the origin")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = aug[col][col].reciprocal()
        aug[col] = [v * inv for v in aug[col]]
        for r in range(n):
            if r != col and not aug[r][col].is_zero():
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def minors(m: Sequence[Sequence[Series]], size: int):
    """Yield ``(rows, cols, determinant)`` for every ``size x size`` minor."""
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    for rows in itertools.combinations(range(nrows), size):
        for cols in itertools.combinations(range(ncols), size):
            sub = [[m[r][c] for c in cols] for r in rows]
            yield rows, cols, series_det(sub)


def series_generic_rank(m: Sequence[Sequence[Series]]) -> tuple[int, list[Series]]:
    """Largest ``s`` with some ``s x s`` minor nonzero through its reliable degree.

    Returns the rank and the nonzero minors of that size (used for sampling).
    """
    if not m or not m[0]:
        return 0, []
    best = 0
    witnesses: list[Series] = []
    for size in range(1, min(len(m), len(m[0])) + 1):
        nonzero = [det for _, _, det in minors(m, size) if not det.is_zero()]
        if not nonzero:
            break
        best = size
        witnesses = nonzero
    return best, witnesses


def evaluate_matrix(m: Sequence[Sequence[Series]], point) -> list[list[Rational]]:
    return [[entry.evaluate(point) for entry in row] for row in m]
