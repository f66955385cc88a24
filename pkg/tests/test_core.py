import json
import random
from fractions import Fraction

import pytest

from pathhyper.core import (EXACT, FLOAT, ModeError, PreconditionError, TruncatedSeries,
                            binomial_count, compositions, falling, geometric_expand, lattice,
                            multi_indices, parse_scalar, rising, scalar_str, stats)


def test_parse_scalar_exact_forms():
    assert parse_scalar("3/4") == Fraction(3, 4)
    assert parse_scalar(" -2 ") == Fraction(-2)
    assert parse_scalar("0.25") == Fraction(1, 4)
    assert parse_scalar("1/2", FLOAT) == 0.5


@pytest.mark.parametrize("text", ["1/0", "", "abc", "1/x"])
def test_parse_scalar_rejects_malformed(text):
    with pytest.raises(ValueError):
        parse_scalar(text)


def test_float_in_exact_mode_is_refused():
    s = TruncatedSeries.one(lattice("A", 2), 3)
    with pytest.raises(ModeError):
        s.scale(0.5)


def test_pochhammer_small_values():
    assert rising(Fraction(1, 2), 3) == Fraction(15, 8)
    assert falling(5, 3) == 60
    assert rising(7, 0) == 1 and falling(7, 0) == 1
    assert rising(-2, 3) == 0


def test_falling_rising_duality():
    rng = random.Random(3)
    for _ in range(30):
        c = Fraction(rng.randint(-40, 40), rng.randint(1, 9))
        for i in range(21):
            assert falling(c, i) == (-1) ** i * rising(-c, i)
            assert falling(c + i, i) == rising(c + 1, i)


def test_lattice_sizes():
    for n in range(1, 6):
        assert lattice("A", n).rank == n * (n - 1) // 2
        assert lattice("C", n).rank == n * (n - 1) // 2 + n * (n + 1) // 2
        assert lattice("D", n).rank == n * (n - 1)


def test_multi_index_count_matches_binomial():
    for kind, n in (("A", 3), ("C", 2), ("D", 3)):
        m = lattice(kind, n).rank
        for d in range(5):
            assert len(multi_indices(kind, n, d)) == binomial_count(d, m)
    assert list(compositions(2, 2)) == [(2, 0), (1, 1), (0, 2)]


def test_row_column_statistics():
    lat = lattice("C", 2)
    beta = multi_indices(lat, 2, 0)[0]
    st = stats(beta)
    assert st.under == (0, 0) and st.c_total == 0
    e = [0] * lat.rank
    e[lat.index((4, 2))] = 1
    e[lat.index((3, 1))] = 2
    from pathhyper.core import MultiIndex
    st = stats(MultiIndex(lat, tuple(e)))
    # diagonal entries count twice towards c and once towards b
    assert st.c == (4, 2) and st.b == (2, 1) and st.c_total == 3


def _random_series(rng, lat, N, const=None):
    terms = {}
    for _ in range(10):
        e = [0] * lat.rank
        for _ in range(rng.randint(0, N)):
            e[rng.randrange(lat.rank)] += 1
        terms[tuple(e)] = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
    if const is not None:
        terms[(0,) * lat.rank] = Fraction(const)
    return TruncatedSeries(lat, N, terms)


def test_series_ring_laws():
    rng = random.Random(11)
    lat = lattice("D", 2)
    one = TruncatedSeries.one(lat, 5)
    for _ in range(10):
        f, g, h = (_random_series(rng, lat, 5) for _ in range(3))
        assert f + g == g + f
        assert f * g == g * f
        assert (f * g) * h == f * (g * h)
        assert f * (g + h) == f * g + f * h
        assert f * one == f
        assert (f - f).terms == {}


def test_truncation_drops_high_degree_products():
    lat = lattice("A", 2)
    z = TruncatedSeries.var(lat, (2, 1), 3)
    assert (z ** 3).terms == {(3,): 1}
    assert (z ** 4).terms == {}


def test_binomial_expansion_laws():
    rng = random.Random(5)
    lat = lattice("A", 3)
    one = TruncatedSeries.one(lat, 4)
    for _ in range(5):
        u = _random_series(rng, lat, 4, const=1)
        a, b = Fraction(rng.randint(-7, 7), 3), Fraction(rng.randint(-7, 7), 5)
        assert geometric_expand(u, a) * geometric_expand(u, b) == geometric_expand(u, a + b)
        assert geometric_expand(u, -1) * u == one
        assert geometric_expand(u, 3) == u ** 3


def test_binomial_expansion_needs_unit_constant():
    u = _random_series(random.Random(1), lattice("A", 2), 3, const=2)
    with pytest.raises(PreconditionError):
        geometric_expand(u, Fraction(1, 2))


def test_euler_operator_and_partial():
    lat = lattice("A", 2)
    z = TruncatedSeries.var(lat, (2, 1), 5)
    f = z ** 3 + z.scale(2)
    assert f.euler_op([(2, 1)]) == (z ** 3).scale(3) + z.scale(2)
    assert f.partial((2, 1)).terms == {(2,): 3, (0,): 2}


def test_composition_with_identity_substitution():
    rng = random.Random(7)
    lat = lattice("A", 3)
    f = _random_series(rng, lat, 4)
    subs = {k: TruncatedSeries.var(lat, k, 4) for k in lat.keys}
    assert f.compose(subs, lat) == f


def test_json_round_trip_and_determinism():
    f = _random_series(random.Random(2), lattice("C", 2), 4)
    obj = f.to_json()
    assert TruncatedSeries.from_json(json.loads(json.dumps(obj))) == f
    assert json.dumps(obj, sort_keys=True) == json.dumps(f.to_json(), sort_keys=True)
    assert scalar_str(Fraction(-3, 6)) == "-1/2"


def test_float_series_evaluation():
    lat = lattice("A", 2)
    z = TruncatedSeries.var(lat, (2, 1), 6, mode=FLOAT)
    geo = geometric_expand(TruncatedSeries.one(lat, 6, FLOAT) - z, -1)
    assert abs(geo.eval_at({(2, 1): 0.5}) - sum(0.5 ** k for k in range(7))) < 1e-14
    assert EXACT != FLOAT
