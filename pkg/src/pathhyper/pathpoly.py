"""Paths between integers, path polynomials and the triangular inverse identity."""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .core import EXACT, TruncatedSeries, lattice
from .report import CheckReport


def enumerate_paths(k1, k2):
    """All strictly increasing sequences from k1 to k2.

    Interior nodes are read off the bits of a counter, so the order is binary
    counting over subsets of the open interval.
    """
    if k1 > k2:
        raise ValueError(f"no path from {k1} down to {k2}")
    if k1 == k2:
        return [(k1,)]
    inner = list(range(k1 + 1, k2))
    paths = []
    for mask in range(1 << len(inner)):
        mid = tuple(m for b, m in enumerate(inner) if mask >> b & 1)
        paths.append((k1,) + mid + (k2,))
    return paths


@lru_cache(maxsize=None)
def path_polynomial(k1, k2, n, lat=None, N=None):
    """P_[k1,k2] as an exact series in the type A variables of rank n.

    ``lat`` may be a larger lattice containing the A variables (C or D);
    ``N`` is the truncation bound (default n, which keeps every term).
    """
    if not (1 <= k1 <= k2 <= n):
        raise ValueError(f"path polynomial index ({k1},{k2}) out of range for n={n}")
    lat = lat or lattice("A", n)
    N = n if N is None else N
    terms = {}
    for path in enumerate_paths(k1, k2):
        e = [0] * lat.rank
        for a, b in zip(path, path[1:]):
            e[lat.index((b, a))] += 1
        sign = -1 if (len(path) - 1) % 2 else 1
        terms[tuple(e)] = terms.get(tuple(e), 0) + Fraction(sign)
    return TruncatedSeries(lat, N, terms, EXACT)


def recursion_defect(k1, k2, n):
    """P_[k1,k2] + sum_m z_{m,k1} P_[m,k2]; zero when the first-step recursion holds."""
    total = path_polynomial(k1, k2, n)
    for m in range(k1 + 1, k2 + 1):
        total = total + path_polynomial(m, k2, n).mul_var((m, k1))
    return total


def check_inverse_identity(n):
    """Multiply the unit lower-triangular matrix of z_{i,j} by the matrix of
    path polynomials and measure the distance from the identity."""
    if n < 2:
        raise ValueError("need n >= 2")
    lat = lattice("A", n)
    N = n
    one = TruncatedSeries.one(lat, N)
    zero = TruncatedSeries(lat, N)

    def L(i, j):
        if i == j:
            return one
        if i > j:
            return TruncatedSeries.var(lat, (i, j), N)
        return zero

    def Pm(i, j):
        if i < j:
            return zero
        return path_polynomial(j, i, n)

    worst, where = Fraction(0), None
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            acc = zero
            for k in range(1, n + 1):
                if i >= k >= j:
                    acc = acc + L(i, k) * Pm(k, j)
            target = one if i == j else zero
            d, mono = acc.discrepancy(target)
            if d > worst:
                worst, where = d, (i, j, mono)
    return CheckReport(
        identity="inverse-5.28", mode=EXACT, truncation=N, max_discrepancy=worst,
        worst=None if where is None else f"entry {where[:2]} monomial {where[2]}",
        passed=worst == 0, notes=f"n={n}")
