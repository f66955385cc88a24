import math
from fractions import Fraction

import pytest

from pathhyper import integrable as itg
from pathhyper.core import PreconditionError


def _points(n, count=20, seed=1):
    return itg.sample_points(n, count, seed)


def test_closed_form_derivatives_agree_with_differences():
    rep = itg.derivative_self_check()
    assert rep.passed and rep.max_discrepancy < 1e-6


def test_weyl_function_values():
    assert abs(itg.weyl("A", 2).value([4.0, 1.0]) - 1.5) < 1e-14
    assert abs(itg.weyl("D", 2).value([2.0, 1.0]) - 0.5) < 1e-14


@pytest.mark.parametrize("ftype,n,c", [("A", 3, 5), ("C", 2, 5), ("B", 2, Fraction(5, 2))])
def test_laplacian_constants(ftype, n, c):
    assert itg.laplacian_constant(ftype, n) == c


@pytest.mark.parametrize("ftype", "ABCD")
@pytest.mark.parametrize("n", [2, 3, 4])
def test_laplacian_eigenfunctions(ftype, n):
    rep = itg.check_laplacian_eigen(ftype, n, _points(n, 10, n))
    assert rep.passed and rep.max_discrepancy < 1e-10


def test_pair_sum_identity():
    assert itg.check_pair_sum(2, _points(2, 5)).max_discrepancy == 0
    for n in (3, 4, 5, 6):
        rep = itg.check_pair_sum(n, _points(n, 10, n))
        assert rep.passed and rep.max_discrepancy < 1e-9


def test_constant_function_has_zero_residual():
    f, spec = itg.theorem_a(3, 0.0, 0.0)
    assert itg.residual(f, spec, _points(3)).max_discrepancy == 0


@pytest.mark.parametrize("tid,ex", [("6.2", (0.3, -0.7)), ("6.3", (0.7,)), ("6.4", (1.2, 0.4)),
                                    ("6.5", (-0.6, 1.3))])
@pytest.mark.parametrize("n", [2, 3, 4])
def test_weyl_variation_eigenfunctions(tid, ex, n):
    rep = itg.check_theorem(tid, n, ex, _points(n, 20, 7 * n))
    assert rep.passed and rep.max_discrepancy < 1e-8


def test_type_a_eigenvalue_candidates():
    pts = _points(2)
    two = itg.check_theorem("6.2", 2, (0.4, 0.9), pts)
    assert sorted(two.details["winners"]) == sorted([itg.EIG_DOUBLE, itg.EIG_SINGLE])
    for n in (3, 4):
        rep = itg.check_theorem("6.2", n, (0.4, 0.9), _points(n))
        assert rep.details["winners"] == [itg.EIG_DOUBLE]


def test_type_c_with_decoupled_pairs():
    rep = itg.check_theorem("6.4", 3, (0.8, 0.0), _points(3))
    assert rep.passed and rep.max_discrepancy < 1e-10


def test_residual_is_scale_invariant():
    f, spec = itg.theorem_c(3, 0.5, 1.1)
    spec = itg.ModelSpec.op(3, spec.nu + 1, **spec.constants)
    pts = _points(3)
    r1 = itg.residual(f, spec, pts).max_discrepancy
    r2 = itg.residual(itg.ScaledFunction(f, 1e6), spec, pts).max_discrepancy
    assert math.isclose(r1, r2, rel_tol=1e-9)
    assert r1 > 1e-3


def test_points_near_singular_locus_are_refused():
    f, spec = itg.theorem_d(2, 0.5)
    with pytest.raises(PreconditionError):
        itg.residual(f, spec, [[2.0, 2.0000001]])


def test_gauss_eigenfunction_decays_with_truncation():
    pts = itg.sample_points(2, 20, 3, accept=lambda z: abs(itg.zeta_gl2(z)[0]) <= 0.2)
    rep = itg.check_theorem("2.2", 2, (0.3, 0.35, -0.4), pts, N=8)
    r8, r16 = rep.details["residualN"]["8"], rep.details["residualN"]["16"]
    assert rep.passed and r16 < 1e-6 and r16 * 10 <= r8
    printed = rep.details["variants"][itg.K_PRINTED]["16"]
    assert printed > 1e-3


def test_symplectic_trace_residual_decays():
    pts = itg.sample_trace_points(1, 6, 4)
    rep = itg.check_theorem("7.1", 1, ["3/2"], pts, N=8)
    r8, r16 = rep.details["residualN"]["8"], rep.details["residualN"]["16"]
    assert r16 * 4 < r8 and r16 < 1e-6
    assert rep.details["casimir"]["formula"] == Fraction(21, 4)


def test_symplectic_trace_selects_cartan_prefactor_and_all_pairs():
    pts = itg.sample_trace_points(2, 3, 5)
    rep = itg.check_theorem("7.1", 2, ["3/2"], pts, N=8)
    assert rep.details["winners"] == [f"{itg.PSI_CARTAN}/{itg.PAIRS_ALL}"]


def test_trace_points_have_small_expansion_variables():
    from pathhyper.verma import xi_A_value, xi_C_value
    for z in itg.sample_trace_points(2, 5, 0):
        vals = list(xi_C_value(2, z).values()) + list(xi_A_value(2, z).values())
        assert max(abs(v) for v in vals) <= 0.05
