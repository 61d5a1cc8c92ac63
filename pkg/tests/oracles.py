"""Independent reference computations.

None of these reuse the package's comparison kernels: they are slow,
obviously-correct formulations used only to check the fast paths.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import lcm

import mpmath

# Largest denominator in any unit-fraction decomposition of 1 into m parts:
# the Sylvester sequence bound 2, 6, 42, 1806 (e.g. 1/2 + 1/3 + 1/7 + 1/42).
SYLVESTER_MAX = {2: 2, 3: 6, 4: 42}


def brute_force_conjugate_tuples(m: int, bound: int | None = None) -> list[tuple[int, ...]]:
    """Every nondecreasing tuple over ``[2, bound]`` whose reciprocals sum to 1."""
    bound = SYLVESTER_MAX[m] if bound is None else bound
    return [t for t in itertools.combinations_with_replacement(range(2, bound + 1), m)
            if sum(Fraction(1, p) for p in t) == 1]


def holder_lcm_sign(columns, exponents) -> int:
    """Sign of ``lhs - rhs`` for Hölder with integer exponents, by clearing roots.

    Compares ``lhs**L`` with ``prod S_k**(L/p_k)``, both exact rationals.
    """
    p = [int(e) for e in exponents]
    L = lcm(*p)
    lhs = sum((_prod(row) for row in zip(*columns)), Fraction(0)) ** L
    rhs = Fraction(1)
    for col, pk in zip(columns, p):
        rhs *= sum((Fraction(x) ** pk for x in col), Fraction(0)) ** (L // pk)
    return (lhs > rhs) - (lhs < rhs)


def _prod(values) -> Fraction:
    out = Fraction(1)
    for v in values:
        out *= Fraction(v)
    return out


def chebyshev_sign(columns) -> int:
    """Sign of ``mean(prod) - prod(mean)`` in plain rationals."""
    n = len(columns[0])
    lhs = sum((_prod(row) for row in zip(*columns)), Fraction(0)) / n
    rhs = _prod(sum((Fraction(x) for x in c), Fraction(0)) / n for c in columns)
    return (lhs > rhs) - (lhs < rhs)


def monomial_sign_by_clearing(lhs, rhs) -> int:
    """Sign of ``prod b**e - prod b**e`` for positive bases, via a common root index."""
    d = lcm(*[Fraction(e).denominator for _, e in list(lhs) + list(rhs)])

    def cleared(terms) -> Fraction:
        out = Fraction(1)
        for base, e in terms:
            out *= Fraction(base) ** int(Fraction(e) * d)
        return out

    x, y = cleared(lhs), cleared(rhs)
    return (x > y) - (x < y)


def mp_value(x: Fraction, dps: int = 120):
    with mpmath.workdps(dps):
        return mpmath.mpf(x.numerator) / x.denominator


def minkowski_difference(columns, p: Fraction, dps: int = 120):
    """``rhs - lhs`` of the m-fold triangle inequality at high decimal precision."""
    with mpmath.workdps(dps):
        pp = mp_value(Fraction(p), dps)
        rows = list(zip(*columns))
        lhs = mpmath.fsum(mpmath.fsum(mp_value(Fraction(x), dps) for x in r) ** pp
                          for r in rows) ** (1 / pp)
        rhs = mpmath.fsum(mpmath.fsum(mp_value(Fraction(x), dps) ** pp for x in c) ** (1 / pp)
                          for c in columns)
        return rhs - lhs


def squared_distance_ratio(M, A, B) -> Fraction:
    """``|MA|^2 / |MB|^2`` from coordinates alone."""
    da = (M[0] - A[0]) ** 2 + (M[1] - A[1]) ** 2
    db = (M[0] - B[0]) ** 2 + (M[1] - B[1]) ** 2
    return Fraction(da) / Fraction(db)


def intersect(line, A, B):
    """Intersection of ``a x + b y + c = 0`` with the line through A and B, parametrically."""
    a, b, c = line
    dx, dy = B[0] - A[0], B[1] - A[1]
    denom = a * dx + b * dy
    t = -(a * A[0] + b * A[1] + c) / Fraction(denom)
    return (A[0] + t * dx, A[1] + t * dy)


def menelaus_squared_product(vertices, line) -> Fraction:
    n = len(vertices)
    out = Fraction(1)
    for i in range(n):
        A, B = vertices[i], vertices[(i + 1) % n]
        out *= squared_distance_ratio(intersect(line, A, B), A, B)
    return out
