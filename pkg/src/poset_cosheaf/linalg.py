"""Exact fraction-free Gauss-Jordan elimination over the rationals.

Rows are lists of ``Fraction`` (or ``int``).  Each row is first scaled to a
primitive integer vector; all elimination then runs on Python integers, with
row contents divided out after every step to keep entries small.  Fractions
only reappear when a caller asks for normalized coordinates.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Sequence


def primitive(row: Sequence[Fraction | int]) -> list[int]:
    """Scale a rational row to integers with content 1 (zero rows stay zero)."""
    den = 1
    for x in row:
        if isinstance(x, Fraction) and x.denominator != 1:
            den = lcm(den, x.denominator)
    ints = [int(x * den) for x in row]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g > 1:
        ints = [v // g for v in ints]
    return ints


def _reduce(row: list[int]) -> list[int]:
    g = 0
    for v in row:
        g = gcd(g, v)
    if g > 1:
        return [v // g for v in row]
    return row


def echelon(rows: Sequence[Sequence[Fraction | int]], ncols: int) -> list[tuple[int, list[int]]]:
    """Reduced echelon form of the row space, as (pivot column, integer row) pairs.

    Every returned row is zero in the pivot columns of the other rows; pivots
    are sorted increasingly.  The pivot entry itself is a non-zero integer, not
    necessarily 1.
    """
    work = [primitive(r) for r in rows]
    work = [r for r in work if any(r)]
    done: list[tuple[int, list[int]]] = []
    for col in range(ncols):
        pick = next((i for i, r in enumerate(work) if r[col]), None)
        if pick is None:
            continue
        prow = work.pop(pick)
        a = prow[col]
        if a < 0:
            prow = [-v for v in prow]
            a = -a

        def clear(r):
            c = r[col]
            if not c:
                return r
            return _reduce([a * x - c * y for x, y in zip(r, prow)])

        work = [r for r in map(clear, work) if any(r)]
        done = [(pc, clear(r)) for pc, r in done]
        done.append((col, prow))
        if not work:
            break
    return done


def rank(rows: Sequence[Sequence[Fraction | int]], ncols: int) -> int:
    return len(echelon(rows, ncols))


def determinant(rows: Sequence[Sequence[Fraction | int]]) -> Fraction:
    """Bareiss determinant of a square rational matrix."""
    n = len(rows)
    if n == 0:
        return Fraction(1)
    den = 1
    for r in rows:
        for x in r:
            if isinstance(x, Fraction) and x.denominator != 1:
                den = lcm(den, x.denominator)
    m = [[int(x * den) for x in r] for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k]), None)
            if swap is None:
                return Fraction(0)
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return Fraction(sign * m[n - 1][n - 1], den ** n)


def nullspace(rows: Sequence[Sequence[Fraction | int]], ncols: int) -> list[list[Fraction]]:
    """Basis of {x : A x = 0}, one vector per non-pivot column."""
    ech = echelon(rows, ncols)
    pivots = {pc for pc, _ in ech}
    basis = []
    for f in range(ncols):
        if f in pivots:
            continue
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for pc, r in ech:
            x[pc] = Fraction(-r[f], r[pc])
        basis.append(x)
    return basis


def solve(rows: Sequence[Sequence[Fraction | int]], rhs: Sequence[Fraction | int],
          ncols: int) -> list[Fraction] | None:
    """One solution x of A x = rhs, or None when the system is inconsistent."""
    augmented = [list(r) + [b] for r, b in zip(rows, rhs)]
    ech = echelon(augmented, ncols + 1)
    x = [Fraction(0)] * ncols
    for pc, r in ech:
        if pc == ncols:
            return None
        x[pc] = Fraction(r[ncols], r[pc])
    return x
