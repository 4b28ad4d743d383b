"""Exact 2-extensors, screws and the pairing between them.

A 2-extensor ``a ^ b`` of two vectors of R^{d+1} is stored as its
``D = C(d+1, 2)`` signed 2x2 minors: slot ``(i, j)``, ``i < j`` in
lexicographic order (1-based), holds ``(-1)^{i+j+1} (a_i b_j - a_j b_i)``.

A screw ``s = (w, p)`` lists the ``C(d, 2)`` entries ``w_ij`` (same slot
order over ``1..d``) followed by the ``d`` entries of the translation
``p``.  Its velocity field is ``q -> p + A q`` with the skew matrix
``A_ij = (-1)^{i+j} w_ij`` for ``i < j``.

The pairing ``<s, x>`` is the bilinear form with
``<s2 - s1, (q2,1) ^ (q1,1)> = <q2 - q1, v2(q2) - v1(q1)>``, i.e. the
first-order change of the squared length of a bar between ``q1`` on one
body and ``q2`` on the other.  It is a signed permutation of coordinates;
:func:`pairing_table` derives it symbolically for each ``d``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb, gcd, lcm
from typing import Sequence

from .errors import InputError
from .linalg import cross

Vector = tuple  # tuple of Fraction


def screw_dim(d: int) -> int:
    """D = C(d+1, 2)."""
    return comb(d + 1, 2)


def slot_pairs(n: int) -> list[tuple[int, int]]:
    """0-based index pairs ``(i, j)``, ``i < j < n``, in slot order."""
    return list(combinations(range(n), 2))


def _frac_vec(v: Sequence) -> tuple:
    return tuple(Fraction(x) for x in v)


def wedge2(a: Sequence, b: Sequence) -> Vector:
    """The signed minors of ``a ^ b``."""
    if len(a) != len(b):
        raise InputError(f"wedge of vectors of lengths {len(a)} and {len(b)}")
    a, b = _frac_vec(a), _frac_vec(b)
    out = []
    for i, j in slot_pairs(len(a)):
        minor = a[i] * b[j] - a[j] * b[i]
        out.append(minor if (i + j) % 2 else -minor)
    return tuple(out)


def dimension_of(x: Sequence) -> int:
    """The d with C(d+1, 2) = len(x)."""
    d = 1
    while screw_dim(d) < len(x):
        d += 1
    if screw_dim(d) != len(x):
        raise InputError(f"length {len(x)} is not C(d+1, 2) for any d")
    return d


# ---------------------------------------------------------------------------
# the pairing


@lru_cache(maxsize=None)
def pairing_table(d: int) -> tuple[tuple[int, int, int], ...]:
    """``(screw_index, extensor_index, sign)`` triples of the pairing at ``d``.

    Obtained by expanding ``<q2 - q1, p + A q1>`` in the minors of
    ``(q2, 1) ^ (q1, 1)`` with sympy and solving for the bilinear
    coefficients.
    """
    import sympy as sp

    D = screw_dim(d)
    q1 = sp.symbols(f"a0:{d}")
    q2 = sp.symbols(f"b0:{d}")
    s = sp.symbols(f"s0:{D}")
    nw = D - d
    w = dict(zip(slot_pairs(d), s[:nw]))
    p = s[nw:]
    A = sp.zeros(d, d)
    for (i, j), wij in w.items():
        A[i, j] = (-1) ** (i + j) * wij
        A[j, i] = -A[i, j]
    h = [q2[i] - q1[i] for i in range(d)]
    vel = [p[i] + sum(A[i, j] * q1[j] for j in range(d)) for i in range(d)]
    target = sp.expand(sum(h[i] * vel[i] for i in range(d)))

    x = _symbolic_wedge(list(q2) + [1], list(q1) + [1])
    C = sp.symbols(f"c0:{D * D}")
    candidate = sp.expand(sum(C[k * D + l] * s[k] * x[l] for k in range(D) for l in range(D)))
    eqs = sp.Poly(candidate - target, *q1, *q2, *s).coeffs()
    sol = sp.solve(eqs, C, dict=True)
    if len(sol) != 1:
        raise AssertionError("pairing coefficients are not determined")
    sol = sol[0]
    table = []
    for k in range(D):
        row = [(l, sol.get(C[k * D + l], 0)) for l in range(D)]
        nz = [(l, c) for l, c in row if c != 0]
        if len(nz) != 1 or abs(nz[0][1]) != 1:
            raise AssertionError("pairing is not a signed permutation")
        table.append((k, nz[0][0], int(nz[0][1])))
    if sorted(l for _, l, _ in table) != list(range(D)):
        raise AssertionError("pairing is not a signed permutation")
    return tuple(table)


def _symbolic_wedge(a, b):
    out = []
    for i, j in slot_pairs(len(a)):
        minor = a[i] * b[j] - a[j] * b[i]
        out.append(minor if (i + j) % 2 else -minor)
    return out


def pairing(s: Sequence, x: Sequence) -> Fraction:
    """``<s, x>`` for a screw ``s`` and an extensor ``x`` of equal length."""
    if len(s) != len(x):
        raise InputError(f"screw of length {len(s)} paired with extensor of length {len(x)}")
    d = dimension_of(x)
    return sum((sign * Fraction(s[k]) * Fraction(x[l]) for k, l, sign in pairing_table(d)),
               Fraction(0))


def screw_row(x: Sequence) -> list[Fraction]:
    """Coefficient vector ``r`` with ``<s, x> = r . s`` for every screw ``s``."""
    d = dimension_of(x)
    row = [Fraction(0)] * len(x)
    for k, l, sign in pairing_table(d):
        row[k] = sign * Fraction(x[l])
    return row


def translation(p: Sequence) -> Vector:
    """The screw of a pure translation by ``p``."""
    d = len(p)
    return (Fraction(0),) * (screw_dim(d) - d) + _frac_vec(p)


# ---------------------------------------------------------------------------
# plane geometry in homogeneous coordinates


def normalize(v: Sequence) -> Vector:
    """Canonical representative: coprime integers, first nonzero entry positive."""
    v = _frac_vec(v)
    if not any(v):
        raise InputError("zero vector has no projective class")
    den = 1
    for x in v:
        den = lcm(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    lead = next(x for x in ints if x)
    if lead < 0:
        g = -g
    return tuple(Fraction(x // g) for x in ints)


def lift(p: Sequence) -> Vector:
    """Affine point ``p`` as the homogeneous vector ``(p, 1)``."""
    return _frac_vec(p) + (Fraction(1),)


def incidence(p: Sequence, x: Sequence) -> Fraction:
    """Zero exactly when the point ``p`` (homogeneous, length 3) lies on the line ``x``.

    Equals ``det(p, a, b)`` when ``x = a ^ b``.
    """
    if len(p) != 3 or len(x) != 3:
        raise InputError("incidence is defined for points and lines of the plane")
    return Fraction(p[0]) * x[2] + Fraction(p[1]) * x[1] + Fraction(p[2]) * x[0]


def line_through(p: Sequence, q: Sequence) -> Vector:
    """The line through two distinct homogeneous points of the plane."""
    x = wedge2(p, q)
    if not any(x):
        raise InputError("a line needs two distinct points")
    return x


def meet(x: Sequence, y: Sequence) -> Vector:
    """Intersection point of two distinct lines, normalized."""
    p = cross(tuple(reversed(_frac_vec(x))), tuple(reversed(_frac_vec(y))))
    if not any(p):
        raise InputError("identical lines have no single intersection point")
    return normalize(p)


def same_point(p: Sequence, q: Sequence) -> bool:
    return not any(cross(_frac_vec(p), _frac_vec(q)))


def concurrent(x: Sequence, y: Sequence, z: Sequence) -> bool:
    """Three lines of the plane through a common point (or two equal)."""
    from .linalg import det

    return det([list(x), list(y), list(z)]) == 0


def points_on_line(x: Sequence) -> tuple[Vector, Vector]:
    """Two distinct points spanning the line ``x``."""
    from .linalg import nullspace

    basis = nullspace([[x[2], x[1], x[0]]], 3)
    if len(basis) != 2:
        raise InputError("zero extensor is not a line")
    return normalize(basis[0]), normalize(basis[1])


def dangling(p: Sequence) -> Vector:
    """The screw of a joint at homogeneous point ``p``.

    It pairs with every line through ``p`` to zero, since
    ``<dangling(p), x> = -incidence(p, x)``.
    """
    if len(p) != 3:
        raise InputError("danglings are defined in the plane")
    coeff = (Fraction(p[2]), Fraction(p[1]), Fraction(p[0]))  # incidence weights per slot
    s = [Fraction(0)] * 3
    for k, l, sign in pairing_table(2):
        s[k] = -coeff[l] * sign
    return tuple(s)
