"""Exact linear algebra over the rationals.

Ranks use fraction-free (Bareiss) elimination on integer rows obtained by
clearing denominators; kernels use reduced row echelon form over
``Fraction``.  Nothing here ever touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence

Matrix = Sequence[Sequence[Fraction]]


def _integer_rows(rows: Matrix) -> list[list[int]]:
    out = []
    for row in rows:
        den = 1
        for x in row:
            den = lcm(den, Fraction(x).denominator)
        out.append([int(Fraction(x) * den) for x in row])
    return out


def rank(rows: Matrix) -> int:
    """Rank of a rational matrix by Bareiss elimination."""
    a = [r for r in _integer_rows(rows) if any(r)]
    if not a:
        return 0
    ncols = len(a[0])
    r = 0
    prev = 1
    for col in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][col] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][col]
        for i in range(r + 1, len(a)):
            ai = a[i]
            f = ai[col]
            ar = a[r]
            a[i] = [(p * ai[j] - f * ar[j]) // prev for j in range(ncols)]
        prev = p
        r += 1
        if r == len(a):
            break
    return r


def det(rows: Matrix) -> Fraction:
    """Determinant of a square rational matrix."""
    n = len(rows)
    a = [[Fraction(x) for x in row] for row in rows]
    if any(len(row) != n for row in a):
        raise ValueError("determinant needs a square matrix")
    sign = 1
    result = Fraction(1)
    for col in range(n):
        piv = next((i for i in range(col, n) if a[i][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            sign = -sign
        p = a[col][col]
        result *= p
        for i in range(col + 1, n):
            f = a[i][col] / p
            if f:
                a[i] = [a[i][j] - f * a[col][j] for j in range(n)]
    return sign * result


def rref(rows: Matrix, ncols: int | None = None) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot columns."""
    a = [[Fraction(x) for x in row] for row in rows]
    if ncols is None:
        ncols = len(a[0]) if a else 0
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][col] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][col]
        a[r] = [x / p for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][col] != 0:
                f = a[i][col]
                a[i] = [a[i][j] - f * a[r][j] for j in range(ncols)]
        pivots.append(col)
        r += 1
        if r == len(a):
            break
    return a[:r], pivots


def nullspace(rows: Matrix, ncols: int) -> list[list[Fraction]]:
    """A basis of the right kernel, one vector per free column."""
    red, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for row, pc in zip(red, pivots):
            v[pc] = -row[fc]
        basis.append(v)
    return basis


def mat_vec(rows: Matrix, v: Sequence[Fraction]) -> list[Fraction]:
    return [sum((x * y for x, y in zip(row, v)), Fraction(0)) for row in rows]


def dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def cross(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    """Cross product of two 3-vectors."""
    return [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
