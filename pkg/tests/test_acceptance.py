"""Acceptance suite: one printed PASS/FAIL line per criterion.

Run directly with ``python3 tests/test_acceptance.py`` for the bare lines, or
through pytest, where the lines are repeated in the terminal summary.
"""
import random
from fractions import Fraction

from pathhyper import identities as ids
from pathhyper import integrable as itg
from pathhyper import verma
from pathhyper.core import EXACT, TruncatedSeries, falling, geometric_expand, lattice, rising
from pathhyper.hyperfun import HyperParams, build_X, gauss_2f1
from pathhyper.pathpoly import check_inverse_identity

SEED = 20240601
LINES = []


def record(number, title, ok, detail):
    line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}: {title} ({detail})"
    LINES.append(line)
    print(line)
    return ok


def _rng(tag):
    return random.Random(f"{tag}:{SEED}")


# ---------------------------------------------------------------- criteria

def criterion_1():
    rng = _rng(1)
    worst = 0
    for _ in range(10):
        a, b = ids.random_rational(rng), ids.random_rational(rng)
        c = ids.random_rational(rng)
        while c.denominator == 1 and c <= 0:
            c = ids.random_rational(rng)
        x = build_X(HyperParams.make("A", [a, b], c), 12)
        g = gauss_2f1(a, b, c, 12)
        coeffs_x = [x.coeff((m,)) for m in range(13)]
        coeffs_g = [g.coeff((m,)) for m in range(13)]
        worst = max([worst] + [abs(p - q) for p, q in zip(coeffs_x, coeffs_g)])
    return record(1, "two-variable type A series equals Gauss 2F1 to degree 12",
                  worst == 0, f"10 draws, max coefficient difference {worst}")


def criterion_2():
    rng = _rng(2)
    reps = []
    for _ in range(5):
        lam, mu = verma.random_gl_weight(rng, 2)
        reps.append(verma.compare_trace(verma.GL, lam, mu, 2, 8))
    ok = all(r.passed for r in reps)
    winners = sorted({w for r in reps for w in r.details["winners"]})
    return record(2, "gl(2) trace oracle equals the closed form to order 8", ok,
                  f"5 weights, passing forms {winners}")


def criterion_3():
    rng = _rng(3)
    lam, mu = verma.random_gl_weight(rng, 3)
    rep = verma.compare_trace(verma.GL, lam, mu, 3, 4)
    return record(3, "gl(3) trace oracle equals the closed form to order 4", rep.passed,
                  f"winning variants {rep.details['winners']}")


def criterion_4():
    rng = _rng(4)
    lam = verma.random_sp_lambda(rng)
    r1 = verma.compare_trace(verma.SP, verma.sp_weight(lam, 1), 0, 1, 6)
    r2 = verma.compare_trace(verma.SP, verma.sp_weight(lam, 2), 0, 2, 3)
    ok = r1.passed and r2.passed
    return record(4, "sp(2) to order 6 and sp(4) to order 3 trace oracles equal the closed form",
                  ok, f"lambda_n={lam}, sp(4) winners {r2.details['winners']}")


def criterion_5():
    rng = _rng(5)
    reps = []
    pa = ids.random_params("A", 3, rng, 6)
    reps.append(ids.check_contiguity_A(pa, 6))
    reps.append(ids.check_pde_A(pa, 6))
    for fam in "BCD":
        reps.append(ids.check_contiguity_CBD(ids.random_params(fam, 2, rng, 5), 5))
    reps.append(ids.check_pde_C(ids.random_params("C", 2, rng, 5), 5))
    reps.append(ids.check_pde_BD(ids.random_params("B", 2, rng, 5),
                                 ids.random_params("D", 2, rng, 5), 5))
    reps.append(ids.check_kernel_product([ids.random_rational(rng) for _ in range(3)], 3, 6))
    reps.append(ids.check_gauss_ode(Fraction(1, 3), Fraction(-5, 4), Fraction(2, 7), 10))
    reps += [check_inverse_identity(n) for n in range(2, 9)]
    bad = [r.identity for r in reps if not (r.passed and r.max_discrepancy == 0)]
    return record(5, "contiguity, PDE, kernel, Gauss and inverse identities are exact",
                  not bad, f"{len(reps)} checks, failing {bad or 'none'}")


def criterion_6():
    rng = _rng(6)
    from pathhyper.cli import random_integral_params
    worst = 0.0
    ok = True
    for n in (2, 3):
        for _ in range(3):
            params = random_integral_params(rng, n)
            rep = ids.check_integral_rep_A(params, ids.random_small_point(n, rng), 10)
            ok = ok and rep.passed
            worst = max(worst, rep.max_discrepancy)
    return record(6, "integral representation matches the truncated series", ok,
                  f"max |quadrature - series| {worst:.2e}")


def criterion_7():
    reps = [itg.check_pair_sum(n, itg.sample_points(n, 10, SEED + n)) for n in (3, 4, 5, 6)]
    worst = max(r.max_discrepancy for r in reps)
    return record(7, "inverse-square pair sum equals binomial(n, 3)",
                  all(r.passed for r in reps) and worst < 1e-9, f"max error {worst:.2e}")


def criterion_8():
    reps = [itg.check_laplacian_eigen(t, n, itg.sample_points(n, 10, SEED + n))
            for t in "ABCD" for n in (2, 3, 4)]
    worst = max(r.max_discrepancy for r in reps)
    return record(8, "Weyl functions are Laplacian eigenfunctions",
                  all(r.passed for r in reps) and worst < 1e-10, f"max relative error {worst:.2e}")


def criterion_9():
    rng = _rng(9)
    worst = 0.0
    bad = []
    winners = set()
    for tid, count in (("6.2", 2), ("6.3", 1), ("6.4", 2), ("6.5", 2)):
        for n in (2, 3, 4):
            for k in range(5):
                ex = [round(rng.uniform(-2, 2), 6) for _ in range(count)]
                pts = itg.sample_points(n, 20, SEED + 31 * n + k)
                rep = itg.check_theorem(tid, n, ex, pts)
                worst = max(worst, rep.max_discrepancy)
                if not (rep.passed and rep.max_discrepancy < 1e-8):
                    bad.append((tid, n, ex))
                if tid == "6.2" and n == 3:
                    winners.add(tuple(rep.details["winners"]))
    ok = not bad and winners == {(itg.EIG_DOUBLE,)}
    return record(9, "Weyl-variation eigenfunctions of types A, D, C, B", ok,
                  f"max relative residual {worst:.2e}, type A eigenvalue at n=3 "
                  f"selected {sorted(winners)}")


def criterion_10():
    rng = _rng(10)
    ex = [round(rng.uniform(-1, 1), 6), 0.35, round(rng.uniform(-1, 1), 6)]
    pts = itg.sample_points(2, 20, SEED, accept=lambda z: abs(itg.zeta_gl2(z)[0]) <= 0.2)
    rep = itg.check_theorem("2.2", 2, ex, pts, N=8)
    r8, r16 = (rep.details["residualN"][k] for k in ("8", "16"))
    ok = rep.passed and r16 < 1e-6 and r16 * 10 <= r8
    return record(10, "two-particle Gauss eigenfunction residual decays with truncation", ok,
                  f"residual N=8 {r8:.2e}, N=16 {r16:.2e}")


def criterion_11():
    ok = True
    parts = []
    for n in (1, 2):
        pts = itg.sample_trace_points(n, 10 if n == 1 else 4, SEED + n)
        rep = itg.check_theorem("7.1", n, ["3/2"], pts, N=8,
                                variant=f"{itg.PSI_CARTAN}/{itg.PAIRS_ALL}")
        r8, r16 = (rep.details["residualN"][k] for k in ("8", "16"))
        cas = rep.details["casimir"]
        good = r16 * 4 < r8 and r8 < 1e-6 and cas["formula"] == cas["verma"]
        ok = ok and good
        parts.append(f"n={n}: N=8 {r8:.1e}, N=16 {r16:.1e}")
    return record(11, "symplectic trace eigenfunction residual below 1e-6 at N=8 and decaying",
                  ok, "; ".join(parts))


def _bracket_consistency():
    bad = 0
    for alg in (verma.Algebra("gl", 3), verma.Algebra("sp", 2)):
        gens = alg.generators()
        for x in gens:
            for y in gens:
                if alg.bracket(x, y) != {g: -c for g, c in alg.bracket(y, x).items()}:
                    bad += 1
                for z in gens:
                    total = {}
                    for a, b, c in ((x, y, z), (y, z, x), (z, x, y)):
                        for g, u in alg.bracket(a, b).items():
                            for h, v in alg.bracket(g, c).items():
                                total[h] = total.get(h, 0) + u * v
                    if any(total.values()):
                        bad += 1
    for module in (verma.Module.make("gl", 3, [Fraction(1, 3), Fraction(-2, 5), Fraction(7, 2)]),
                   verma.Module.make("sp", 2, [Fraction(3, 5), Fraction(2, 7)])):
        alg = module.alg
        for e in [(0,) * len(module.keys)] + [tuple(int(i == j) for j in range(len(module.keys)))
                                               for i in range(len(module.keys))]:
            v = verma.VermaVector.basis(module, e)
            for x in alg.generators():
                for y in alg.generators():
                    lhs = v.act(y).act(x) - v.act(x).act(y)
                    rhs = verma.VermaVector(module, {})
                    for g, c in alg.bracket(x, y).items():
                        rhs = rhs + v.act(g).scale(c)
                    if lhs != rhs:
                        bad += 1
    return bad


def _singular_annihilation():
    mu = Fraction(2, 7)
    us = [verma.singular_vector("gl", [Fraction(1, 3), Fraction(-2, 5)], Fraction(3, 7), 8),
          verma.singular_vector("gl", [Fraction(1, 3) + mu, Fraction(1, 3), Fraction(-2, 5)],
                                mu, 5),
          verma.singular_vector("sp", verma.sp_weight(Fraction(2, 7), 1), 0, 6),
          verma.singular_vector("sp", verma.sp_weight(Fraction(2, 7), 2), 0, 4)]
    return [verma.verify_singular(u) for u in us]


def _duality():
    rng = _rng(12)
    bad = 0
    for _ in range(20):
        c = ids.random_rational(rng, span=5)
        for i in range(21):
            if falling(c, i) != (-1) ** i * rising(-c, i):
                bad += 1
            if falling(c + i, i) != rising(c + 1, i):
                bad += 1
    return bad


def _series_laws():
    rng = _rng(120)
    lat = lattice("A", 3)
    N = 4

    def rand_series(const=None):
        terms = {}
        for _ in range(8):
            e = [0] * lat.rank
            for _ in range(rng.randint(0, N)):
                e[rng.randrange(lat.rank)] += 1
            terms[tuple(e)] = ids.random_rational(rng)
        if const is not None:
            terms[(0,) * lat.rank] = const
        return TruncatedSeries(lat, N, terms, EXACT)

    bad = 0
    for _ in range(5):
        f, g, h = rand_series(), rand_series(), rand_series()
        one = TruncatedSeries.one(lat, N)
        checks = [(f + g, g + f), (f * g, g * f), ((f * g) * h, f * (g * h)),
                  ((f + g) + h, f + (g + h)), (f * (g + h), f * g + f * h),
                  (f * one, f), (f - f, TruncatedSeries(lat, N))]
        u = rand_series(const=1)
        a, b = ids.random_rational(rng), ids.random_rational(rng)
        checks.append((geometric_expand(u, a) * geometric_expand(u, b),
                       geometric_expand(u, a + b)))
        checks.append((geometric_expand(u, -1) * u, one))
        bad += sum(1 for x, y in checks if x.discrepancy(y)[0] != 0)
    return bad


def criterion_12():
    bracket_bad = _bracket_consistency()
    sing = _singular_annihilation()
    dual_bad = _duality()
    law_bad = _series_laws()
    ok = bracket_bad == 0 and all(r.passed for r in sing) and dual_bad == 0 and law_bad == 0
    return record(12, "brackets, singular vectors, falling/rising duality and series laws", ok,
                  f"bracket failures {bracket_bad}, singular "
                  f"{[str(r.max_discrepancy) for r in sing]}, duality failures {dual_bad}, "
                  f"series-law failures {law_bad}")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9, criterion_10, criterion_11, criterion_12]


# ---------------------------------------------------------------- pytest entry points

def test_criterion_01_gauss_reduction():
    assert criterion_1()


def test_criterion_02_gl2_trace():
    assert criterion_2()


def test_criterion_03_gl3_trace():
    assert criterion_3()


def test_criterion_04_sp_trace():
    assert criterion_4()


def test_criterion_05_exact_identities():
    assert criterion_5()


def test_criterion_06_integral_representation():
    assert criterion_6()


def test_criterion_07_pair_sum():
    assert criterion_7()


def test_criterion_08_laplacian():
    assert criterion_8()


def test_criterion_09_weyl_eigenfunctions():
    assert criterion_9()


def test_criterion_10_gauss_eigenfunction():
    assert criterion_10()


def test_criterion_11_symplectic_trace_eigenfunction():
    assert criterion_11()


def test_criterion_12_property_suites():
    assert criterion_12()


if __name__ == "__main__":
    results = [fn() for fn in CRITERIA]
    print(f"{sum(results)}/{len(results)} criteria pass")
