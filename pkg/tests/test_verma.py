import random
from fractions import Fraction

import pytest
from straighten import make_straightener

from pathhyper import verma
from pathhyper.core import PreconditionError, exps_upto

F = Fraction

MODULES = [
    ("gl", [F(1, 3), F(-2, 5)], 4),
    ("gl", [F(1, 3), F(-2, 5), F(7, 2)], 3),
    ("gl", [F(1, 3), F(-2, 5), F(7, 2), F(1, 7)], 2),
    ("sp", [F(2, 7)], 4),
    ("sp", [F(-1, 2), F(2, 7)], 3),
    ("sp", [F(3, 5), F(2, 7), F(1, 3)], 2),
]


@pytest.mark.parametrize("kind,lam,depth", MODULES)
def test_action_matches_reference_straightening(kind, lam, depth):
    module = verma.Module.make(kind, len(lam), lam)
    ref = make_straightener(module)
    for e in exps_upto(len(module.keys), depth):
        for g in module.alg.generators():
            g = module.alg.canonical(g)
            assert verma.act_terms(module, g, {e: F(1)}) == ref(g, e)


@pytest.mark.parametrize("kind,n", [("gl", 2), ("gl", 4), ("sp", 1), ("sp", 3)])
def test_bracket_antisymmetry_and_jacobi(kind, n):
    alg = verma.Algebra(kind, n)
    gens = alg.generators()
    for x in gens:
        for y in gens:
            assert alg.bracket(x, y) == {g: -c for g, c in alg.bracket(y, x).items()}
            for z in gens:
                total = {}
                for a, b, c in ((x, y, z), (y, z, x), (z, x, y)):
                    for g, u in alg.bracket(a, b).items():
                        for h, v in alg.bracket(g, c).items():
                            total[h] = total.get(h, 0) + u * v
                assert not any(total.values())


@pytest.mark.parametrize("kind,lam", [("gl", [F(1, 2), F(1, 3), F(-1, 4)]),
                                      ("sp", [F(3, 5), F(2, 7)])])
def test_module_action_represents_bracket(kind, lam):
    module = verma.Module.make(kind, len(lam), lam)
    alg = module.alg
    for e in exps_upto(len(module.keys), 2):
        v = verma.VermaVector.basis(module, e)
        for x in alg.generators():
            for y in alg.generators():
                lhs = v.act(y).act(x) - v.act(x).act(y)
                rhs = verma.VermaVector(module, {})
                for g, c in alg.bracket(x, y).items():
                    rhs = rhs + v.act(g).scale(c)
                assert lhs == rhs


def test_generator_weights():
    alg = verma.Algebra("sp", 2)
    assert alg.weight((3, 1)) == (-2, 0)
    assert alg.weight((4, 1)) == (-1, -1)
    assert alg.weight((1, 2)) == (1, -1)
    assert verma.Algebra("gl", 3).weight((3, 1)) == (-1, 0, 1)


def test_highest_vector_is_annihilated_by_raising():
    module = verma.Module.make("sp", 2, [F(1, 2), F(1, 3)])
    v = verma.VermaVector.highest(module)
    for g in module.alg.raising():
        assert v.act(g).terms == {}


def test_singular_vectors():
    mu = F(2, 7)
    cases = [
        verma.singular_vector("gl", [F(1, 3), F(-2, 5)], F(3, 7), 8),
        verma.singular_vector("gl", [F(1, 3) + mu, F(1, 3), F(-2, 5)], mu, 5),
        verma.singular_vector("gl", [F(1, 3) + 2 * mu, F(1, 3) + mu, F(1, 3), F(-2, 5)], mu, 3),
        verma.singular_vector("sp", verma.sp_weight(F(2, 7), 1), 0, 6),
        verma.singular_vector("sp", verma.sp_weight(F(2, 7), 2), 0, 4),
    ]
    for u in cases:
        rep = verma.verify_singular(u)
        assert rep.passed and rep.max_discrepancy == 0


def test_inadmissible_weight_is_a_precondition():
    with pytest.raises(PreconditionError):
        verma.singular_vector("gl", [F(3), F(1)], F(1), 4)


@pytest.mark.parametrize("seed", range(3))
def test_gl2_trace(seed):
    lam, mu = verma.random_gl_weight(random.Random(seed), 2)
    rep = verma.compare_trace("gl", lam, mu, 2, 8)
    assert rep.passed and "form=gauss" in rep.details["winners"]


def test_gl3_trace_variant_selection():
    lam, mu = verma.random_gl_weight(random.Random(1), 3)
    rep = verma.compare_trace("gl", lam, mu, 3, 4)
    assert rep.details["winners"] == ["theta=minus-sigma,xi=target-numerator"]


def test_sp_traces():
    r1 = verma.compare_trace("sp", verma.sp_weight(F(5, 3), 1), 0, 1, 6)
    r2 = verma.compare_trace("sp", verma.sp_weight(F(5, 3), 2), 0, 2, 3)
    assert r1.passed and r2.passed
    assert all("prefactor=cartan" in w for w in r2.details["winners"])


def test_casimir_matches_formula():
    from pathhyper.integrable import casimir_eigenvalue, casimir_formula
    for lam in (F(3, 2), F(2, 7), F(-5, 3)):
        for n in (1, 2, 3):
            assert casimir_eigenvalue(lam, n) == casimir_formula(lam, n)
    assert casimir_formula(F(3, 2), 1) == F(21, 4)
