from fractions import Fraction

import pytest

from pathhyper.core import TruncatedSeries, lattice
from pathhyper.pathpoly import (check_inverse_identity, enumerate_paths, path_polynomial,
                                recursion_defect)


def test_path_counts():
    for k1 in range(1, 6):
        for k2 in range(k1 + 1, 8):
            paths = enumerate_paths(k1, k2)
            assert len(paths) == 2 ** (k2 - k1 - 1)
            assert all(p[0] == k1 and p[-1] == k2 for p in paths)
            assert all(a < b for p in paths for a, b in zip(p, p[1:]))
    assert enumerate_paths(3, 3) == [(3,)]
    with pytest.raises(ValueError):
        enumerate_paths(4, 2)


def test_small_path_polynomial():
    lat = lattice("A", 3)
    z = {k: TruncatedSeries.var(lat, k, 3) for k in lat.keys}
    expected = z[(2, 1)] * z[(3, 2)] - z[(3, 1)]
    assert path_polynomial(1, 3, 3) == expected
    assert path_polynomial(2, 2, 3) == TruncatedSeries.one(lat, 3)


def test_first_step_recursion():
    for n in range(2, 7):
        for k1 in range(1, n):
            for k2 in range(k1 + 1, n + 1):
                assert recursion_defect(k1, k2, n).terms == {}


@pytest.mark.parametrize("n", range(2, 9))
def test_inverse_identity(n):
    rep = check_inverse_identity(n)
    assert rep.passed and rep.max_discrepancy == Fraction(0)
