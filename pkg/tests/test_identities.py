import random
from fractions import Fraction

import pytest

from pathhyper import identities as ids
from pathhyper.core import PreconditionError
from pathhyper.hyperfun import HyperParams


def _params(family, n, N, seed):
    return ids.random_params(family, n, random.Random(seed), N)


@pytest.mark.parametrize("seed", range(3))
def test_contiguity_type_a(seed):
    rep = ids.check_contiguity_A(_params("A", 3, 6, seed), 6)
    assert rep.passed and rep.max_discrepancy == 0


@pytest.mark.parametrize("family", "BCD")
def test_contiguity_types_bcd(family):
    for seed in range(2):
        rep = ids.check_contiguity_CBD(_params(family, 2, 5, seed), 5)
        assert rep.passed and rep.max_discrepancy == 0


def test_square_reading_is_rising():
    rep = ids.check_contiguity_CBD(_params("C", 2, 5, 9), 5)
    assert rep.details["square-reading"] == "rising"
    assert rep.details["square-outcomes"]["printed"] is False


def test_contiguity_type_c_rank_three():
    assert ids.check_contiguity_CBD(_params("C", 3, 3, 4), 3).passed


def test_operator_forms():
    assert ids.check_operator_forms_C(_params("C", 2, 4, 1), 4).passed


def test_pde_systems():
    assert ids.check_pde_A(_params("A", 3, 6, 1), 6).passed
    assert ids.check_pde_C(_params("C", 2, 5, 1), 5).passed
    assert ids.check_pde_BD(_params("B", 2, 5, 2), _params("D", 2, 5, 3), 5).passed


def test_kernel_product():
    rng = random.Random(4)
    for n in (2, 3):
        assert ids.check_kernel_product([ids.random_rational(rng) for _ in range(n)], n, 6).passed


def test_gauss_equation_both_solutions():
    rep = ids.check_gauss_ode(Fraction(2, 3), Fraction(-1, 5), Fraction(3, 7), 12)
    assert rep.passed
    assert {"first-solution", "second-solution"} <= set(rep.details)


def test_euler_integral_reduces_to_gauss():
    params = HyperParams.make("A", [Fraction(1, 2), Fraction(3, 2)], 3)
    rep = ids.check_integral_rep_A(params, {(2, 1): 0.1}, N=30)
    assert rep.passed and rep.max_discrepancy < 1e-12


def test_integral_representation_rank_three():
    rng = random.Random(6)
    params = HyperParams.make("A", [Fraction(1, 3), Fraction(-2, 3), Fraction(1, 2)],
                              Fraction(7, 4))
    rep = ids.check_integral_rep_A(params, ids.random_small_point(3, rng), 10)
    assert rep.passed and rep.max_discrepancy < 1e-8


def test_integral_needs_admissible_exponents():
    params = HyperParams.make("A", [Fraction(1, 3), Fraction(-1, 2)], 2)
    with pytest.raises(PreconditionError):
        ids.check_integral_rep_A(params, {(2, 1): 0.05})
