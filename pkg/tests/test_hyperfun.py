import random
from fractions import Fraction

import pytest

from pathhyper.core import FLOAT, PreconditionError, lattice
from pathhyper.hyperfun import (HyperParams, ParamShift, build_X, build_XA, gauss_2f1,
                                kernel_A, ratio_defect, shifted)
from pathhyper.identities import random_params, random_rational


def test_gauss_geometric_case():
    g = gauss_2f1(1, 1, 1, 4)
    assert g.eval_at({"z": Fraction(1, 2)}) == Fraction(31, 16)


def test_gauss_pole_is_a_precondition():
    with pytest.raises(PreconditionError):
        gauss_2f1(1, 1, -2, 5)


def test_two_variable_type_a_is_gauss():
    rng = random.Random(8)
    for _ in range(10):
        a, b, c = random_rational(rng), random_rational(rng), random_rational(rng)
        if c.denominator == 1 and c <= 0:
            continue
        x = build_XA([a, b], c, 12)
        g = gauss_2f1(a, b, c, 12)
        assert [x.coeff((m,)) for m in range(13)] == [g.coeff((m,)) for m in range(13)]


def test_value_at_origin_is_one():
    for fam in "ABCD":
        x = build_X(random_params(fam, 2, random.Random(fam), 3), 3)
        assert x.constant == 1


@pytest.mark.parametrize("family,n,N", [("A", 3, 5), ("A", 4, 3), ("B", 2, 4), ("C", 2, 4),
                                        ("C", 3, 3), ("D", 2, 4), ("D", 3, 3)])
def test_term_ratios(family, n, N):
    rng = random.Random(f"{family}{n}")
    for _ in range(3):
        params = random_params(family, n, rng, N)
        assert ratio_defect(build_X(params, N), params)[0] == 0


def test_theta_pole_detected():
    with pytest.raises(PreconditionError):
        build_XA([Fraction(1, 2)] * 3, -3, 5)


def test_parameter_shifts():
    p = HyperParams.make("C", [1, 2, 3], 5)
    assert shifted(p, ParamShift("ab", 1, 3)).tau == (2, 2, 2)
    q = shifted(p, ParamShift("top", 2, 2))
    assert q.tau == (1, 4, 3) and q.theta == 6
    q = shifted(p, ParamShift("single", 3, step=1))
    assert q.tau == (1, 2, 4) and q.theta == 6
    with pytest.raises(ValueError):
        shifted(p, ParamShift("ab", 1, 4))


def test_kernel_drops_the_last_parameter():
    k = kernel_A([Fraction(1, 3), Fraction(2, 5), Fraction(7)], 3, 4)
    k2 = kernel_A([Fraction(1, 3), Fraction(2, 5), Fraction(-1)], 3, 4)
    assert k == k2
    assert k.lattice == lattice("A", 3)


def test_float_mode_matches_exact():
    p = HyperParams.make("C", [Fraction(1, 3), Fraction(-1, 2)], Fraction(5, 4))
    pf = HyperParams.make("C", [1 / 3, -0.5], 1.25, FLOAT)
    xe, xf = build_X(p, 4), build_X(pf, 4)
    for e, c in xe.terms.items():
        assert abs(complex(c) - xf.coeff(e)) < 1e-12
