"""Exact verification of the contiguity relations, PDE systems, kernel product,
Gauss equation and (numerically) the Euler-type integral representation."""
from __future__ import annotations

from fractions import Fraction

import numpy as np
from scipy import integrate, special

from .core import (EXACT, FLOAT, PreconditionError, TruncatedSeries, as_scalar, c_pairs,
                   custom_lattice, geometric_expand, lattice)
from .hyperfun import LATTICE_OF, HyperParams, build_X, gauss_2f1, kernel_A
from .pathpoly import path_polynomial
from .report import CheckReport, combine


# ---------------------------------------------------------------- helpers

def random_rational(rng, max_den=12, span=3):
    den = rng.randint(1, max_den)
    return Fraction(rng.randint(-span * den, span * den), den)


def random_params(family, n, rng, N, avoid_zero_tau=False):
    """Small-denominator rational parameters with every theta pole avoided."""
    while True:
        tau = [random_rational(rng) for _ in range(n)]
        theta = random_rational(rng)
        if avoid_zero_tau and any(t == 0 for t in tau):
            continue
        # shifted variants raise theta by at most 1, so checking theta is enough
        if any(theta + k == 0 for k in range(N + 1)):
            continue
        return HyperParams.make(family, tau, theta)


class _Ctx:
    """Shared state for one identity family: the base series and cached shifts."""

    def __init__(self, params, N):
        self.p = params
        self.N = N
        self.n = params.n
        self.lat = lattice(LATTICE_OF[params.family], self.n)
        self._cache = {}
        self.X = self.shift({}, 0)

    def t(self, i):
        return self.p.tau[i - 1]

    def shift(self, changes, dtheta):
        key = (tuple(sorted(changes.items())), dtheta)
        if key not in self._cache:
            self._cache[key] = build_X(self.p.with_tau(changes, dtheta), self.N)
        return self._cache[key]

    def P(self, a, b):
        return path_polynomial(a, b, self.n, self.lat, self.N)

    def zero(self):
        return TruncatedSeries(self.lat, self.N)

    def op(self, s, const, plus=(), minus=()):
        """(const + sum of Euler operators over plus - over minus) applied to s."""
        out = s.scale(const)
        if plus:
            out = out + s.euler_op(plus)
        if minus:
            out = out - s.euler_op(minus)
        return out

    # Euler-operator variable lists
    def du(self, i):
        return [(i, r) for r in range(1, i)]

    def do(self, i):
        return [(s, i) for s in range(i + 1, self.n + 1)]

    def dx(self, fam, r):
        n = self.n
        if fam == "C":
            return [(n + r, i) for i in range(1, r + 1)] + [(n + s, r) for s in range(r, n + 1)]
        if fam == "B":
            return [(n + r, i) for i in range(1, r + 1)] + [(n + s, r) for s in range(r + 1, n + 1)]
        if fam == "D":
            return [(n + r, i) for i in range(1, r)] + [(n + s, r) for s in range(r + 1, n + 1)]
        return []

    def dtotal(self, fam):
        return list(c_pairs(self.n, diagonal=fam != "D"))


def _compare(label, lhs, rhs, upto, mode=EXACT):
    d, where = lhs.discrepancy(rhs.truncate(max(upto, 0)), upto)
    lat = lhs.lattice
    mono = None
    if where is not None:
        mono = "*".join(f"z[{lat.key_str(k)}]^{e}" for k, e in zip(lat.keys, where) if e) or "1"
    return CheckReport(identity=label, mode=mode, passed=d == 0, max_discrepancy=d,
                       truncation=upto, worst=mono)


def _finish(identity, parts, params, N, seed=None, notes="", details=None):
    rep = combine(identity, parts, EXACT, notes)
    rep.truncation = N
    rep.seed = seed
    rep.details.update(details or {})
    rep.details["params"] = {"tau": list(params.tau), "theta": params.theta}
    return rep


# ---------------------------------------------------------------- contiguity

def contiguity_A_parts(ctx):
    n, N = ctx.n, ctx.N
    X = ctx.X
    parts = []
    for r1 in range(1, n):
        for r2 in range(r1 + 1, n):
            rhs = ctx.zero()
            for s in range(1, r1 + 1):
                rhs = rhs + (ctx.P(s, r1) * ctx.shift({s: 1, r2: -1}, 0)).scale(ctx.t(s))
            parts.append(_compare(f"first-order[{r2},{r1}]", X.partial((r2, r1)), rhs, N - 1))
    for r in range(1, n):
        rhs = ctx.zero()
        for s in range(1, r + 1):
            rhs = rhs + (ctx.P(s, r) * ctx.shift({s: 1, n: 1}, 1)).scale(ctx.t(s))
        rhs = rhs.scale(ctx.t(n) / ctx.p.theta)
        parts.append(_compare(f"last-row[{n},{r}]", X.partial((n, r)), rhs, N - 1))
    return parts


def check_contiguity_A(params, N, seed=None):
    if params.family != "A":
        raise ValueError("type A parameters expected")
    if params.theta == 0:
        raise PreconditionError("theta = 0")
    ctx = _Ctx(params, N)
    return _finish("contiguity-a", contiguity_A_parts(ctx), params, N, seed)


def _offdiag_rhs(ctx, r1, r2, square):
    """Right side of the z_{n+r2,r1} relation; ``square`` picks tau_i^2 or tau_i(tau_i+1)."""
    t = ctx.t
    acc = ctx.zero()
    for i in range(1, r1 + 1):
        c = t(i) ** 2 if square == "printed" else t(i) * (t(i) + 1)
        acc = acc + (ctx.P(i, r1) * ctx.P(i, r2) * ctx.shift({i: 2}, 1)).scale(c)
    for s1 in range(1, r1 + 1):
        for s2 in range(r1 + 1, r2 + 1):
            acc = acc + (ctx.P(s1, r1) * ctx.P(s2, r2) * ctx.shift({s1: 1, s2: 1}, 1)).scale(t(s1) * t(s2))
    for s1 in range(1, r1 + 1):
        for s2 in range(s1 + 1, r1 + 1):
            pp = ctx.P(s1, r1) * ctx.P(s2, r2) + ctx.P(s2, r1) * ctx.P(s1, r2)
            acc = acc + (pp * ctx.shift({s1: 1, s2: 1}, 1)).scale(t(s1) * t(s2))
    return acc.scale(1 / ctx.p.theta)


def _diagC_rhs(ctx, s, square):
    """Right side of the z_{n+s,s} relation.

    ``printed`` is the displayed form; ``rising`` uses (tau_i)_2 P_[i,s]^2 for
    every i and drops the separate single-tau terms, which is the printed
    form with its third sum read as tau_i P_[i,s]^2 X[i(2)].
    """
    t = ctx.t
    acc = ctx.zero()
    for i in range(1, s + 1):
        c = t(i) ** 2 if square == "printed" else t(i) * (t(i) + 1)
        acc = acc + (ctx.P(i, s) * ctx.P(i, s) * ctx.shift({i: 2}, 1)).scale(c)
    if square == "printed":
        acc = acc + ctx.shift({s: 2}, 1).scale(t(s))
        for i in range(1, s):
            acc = acc + (ctx.P(i, s) * ctx.shift({i: 1, s: 1}, 1)).scale(t(i))
    for a in range(1, s + 1):
        for b in range(a + 1, s + 1):
            acc = acc + (ctx.P(a, s) * ctx.P(b, s) * ctx.shift({a: 1, b: 1}, 1)).scale(2 * t(a) * t(b))
    return acc.scale(1 / ctx.p.theta)


B_DIAG_VARIANTS = [(step, theta, reading) for step in (1, 2) for theta in (True, False)
                   for reading in ("printed", "path-to-s")]


def _diagB_rhs(ctx, s, variant):
    """The diagonal B relation.

    ``variant`` = (tau step, divide by theta?, index reading).  The printed
    reading sums tau_r P_[s,r] X_B[s] over r <= s, where only r = s survives;
    ``path-to-s`` reads tau_r P_[r,s] X_B[r].
    """
    step, with_theta, reading = variant
    t = ctx.t
    acc = ctx.zero()
    for r in range(1, s + 1):
        if reading == "printed":
            if r != s:
                continue
            acc = acc + ctx.shift({s: step}, 1).scale(t(r))
        else:
            acc = acc + (ctx.P(r, s) * ctx.shift({r: step}, 1)).scale(t(r))
    return acc.scale(1 / ctx.p.theta) if with_theta else acc


def _first_order_parts(ctx, label):
    n, N, X = ctx.n, ctx.N, ctx.X
    parts = []
    for r1 in range(1, n + 1):
        for r2 in range(r1 + 1, n + 1):
            rhs = ctx.zero()
            for s in range(1, r1 + 1):
                rhs = rhs + (ctx.P(s, r1) * ctx.shift({s: 1, r2: -1}, 0)).scale(ctx.t(s))
            parts.append(_compare(f"{label}[{r2},{r1}]", X.partial((r2, r1)), rhs, N - 1))
    return parts


def _pick(candidates):
    """First passing (name, parts) pair, else the first one."""
    for name, parts in candidates:
        if all(p.passed for p in parts):
            return name, parts
    return candidates[0]


def check_contiguity_CBD(params, N, seed=None, variant="auto"):
    """The type C, B or D contiguity relations.

    The relations for z_{n+r2,r1} are tried as displayed (``printed``) and with
    tau_i^2 read as (tau_i)_2 (``rising``); for the diagonal B relation all
    readings in ``B_DIAG_VARIANTS`` are tried.  ``variant="auto"`` keeps the
    first passing reading and records every outcome in the details.
    """
    fam = params.family
    if fam not in "BCD":
        raise ValueError("type B, C or D parameters expected")
    if params.theta == 0:
        raise PreconditionError("theta = 0")
    ctx = _Ctx(params, N)
    n, X = ctx.n, ctx.X
    outcome = {}
    parts = _first_order_parts(ctx, "first-order")
    readings = ("printed", "rising") if variant == "auto" else (variant,)

    cands = []
    for rd in readings:
        sub = []
        for r1 in range(1, n + 1):
            for r2 in range(r1 + 1, n + 1):
                sub.append(_compare(f"second-order[{n + r2},{r1}]", X.partial((n + r2, r1)),
                                    _offdiag_rhs(ctx, r1, r2, rd), N - 1))
        if fam == "C":
            for s in range(1, n + 1):
                sub.append(_compare(f"diagonal[{n + s},{s}]", X.partial((n + s, s)),
                                    _diagC_rhs(ctx, s, rd), N - 1))
        outcome[rd] = all(p.passed for p in sub)
        cands.append((rd, sub))
    chosen, sub = _pick(cands)
    parts += sub
    details = {"square-reading": chosen, "square-outcomes": outcome}

    if fam == "B":
        bc = []
        bout = {}
        for v in B_DIAG_VARIANTS:
            sub = [_compare(f"diagonal-B[{n + s},{s}]", X.partial((n + s, s)),
                            _diagB_rhs(ctx, s, v), N - 1) for s in range(1, n + 1)]
            name = f"step+{v[0]},{'with' if v[1] else 'without'}-1/theta,{v[2]}"
            bout[name] = all(p.passed for p in sub)
            bc.append((name, sub))
        name, sub = _pick(bc)
        parts += sub
        details["diagonal-B-reading"] = name
        details["diagonal-B-outcomes"] = bout
    return _finish(f"contiguity-{fam.lower()}", parts, params, N, seed,
                   notes=f"reading: {chosen}", details=details)


def check_contiguity_C(params, N, seed=None, variant="auto"):
    return check_contiguity_CBD(params, N, seed, variant)


check_contiguity_B = check_contiguity_C
check_contiguity_D = check_contiguity_C


def check_operator_forms_C(params, N):
    """The nested-operator forms of the type C derivatives (before expansion)."""
    ctx = _Ctx(params, N)
    n, X, t = ctx.n, ctx.X, ctx.t
    parts = []
    for r1 in range(1, n + 1):
        for r2 in range(r1 + 1, n + 1):
            rhs = ctx.op(ctx.shift({r1: 1, r2: -1}, 0), t(r1), minus=ctx.du(r1))
            parts.append(_compare(f"op-first[{r2},{r1}]", X.partial((r2, r1)), rhs, N - 1))
            inner = ctx.op(ctx.shift({r1: 1, r2: 1}, 1), t(r2), minus=ctx.du(r2))
            rhs = ctx.op(inner, t(r1), minus=ctx.du(r1)).scale(1 / params.theta)
            parts.append(_compare(f"op-second[{n + r2},{r1}]", X.partial((n + r2, r1)), rhs, N - 1))
    for s in range(1, n + 1):
        inner = ctx.op(ctx.shift({s: 2}, 1), t(s) + 1, minus=ctx.du(s))
        rhs = ctx.op(inner, t(s), minus=ctx.du(s)).scale(1 / params.theta)
        parts.append(_compare(f"op-diagonal[{n + s},{s}]", X.partial((n + s, s)), rhs, N - 1))
    return _finish("operator-forms-c", parts, params, N)


# ---------------------------------------------------------------- PDE systems

def pde_A_parts(ctx):
    n, N, X, t = ctx.n, ctx.N, ctx.X, ctx.t
    parts = []
    for r1 in range(1, n):
        for r2 in range(r1 + 1, n):
            d = X.partial((r2, r1))
            lhs = ctx.op(d, t(r2) - 1, ctx.do(r2), ctx.du(r2))
            rhs = ctx.op(ctx.op(X, t(r1), ctx.do(r1), ctx.du(r1)), t(r2) - 1, minus=ctx.du(r2))
            parts.append(_compare(f"pde[{r2},{r1}]", lhs, rhs, N - 1))
    for r in range(1, n):
        d = X.partial((n, r))
        lhs = ctx.op(d, ctx.p.theta, ctx.du(n))
        rhs = ctx.op(ctx.op(X, t(r), ctx.do(r), ctx.du(r)), t(n), ctx.du(n))
        parts.append(_compare(f"pde[{n},{r}]", lhs, rhs, N - 1))
    return parts


def check_pde_A(params, N, seed=None):
    ctx = _Ctx(params, N)
    return _finish("pde-a", pde_A_parts(ctx), params, N, seed)


def pde_X_parts(ctx):
    """Systems for types B, C and D (the pattern shared by all three)."""
    fam = ctx.p.family
    n, N, X, t = ctx.n, ctx.N, ctx.X, ctx.t
    theta = ctx.p.theta
    parts = []

    def R(r, c):
        return lambda s: ctx.op(s, c, ctx.do(r) + ctx.dx(fam, r), ctx.du(r))

    for r1 in range(1, n + 1):
        for r2 in range(r1 + 1, n + 1):
            d = X.partial((r2, r1))
            lhs = ctx.op(d, t(r2) - 1, ctx.do(r2) + ctx.dx(fam, r2), ctx.du(r2))
            rhs = ctx.op(R(r1, t(r1))(X), t(r2) - 1, minus=ctx.du(r2))
            parts.append(_compare(f"pde[{r2},{r1}]", lhs, rhs, N - 1))
            d = X.partial((n + r2, r1))
            lhs = ctx.op(d, theta, ctx.dtotal(fam))
            rhs = R(r2, t(r2))(R(r1, t(r1))(X))
            parts.append(_compare(f"pde[{n + r2},{r1}]", lhs, rhs, N - 1))
    if fam in "BC":
        for s in range(1, n + 1):
            d = X.partial((n + s, s))
            lhs = ctx.op(d, theta, ctx.dtotal(fam))
            rhs = R(s, t(s))(X)
            if fam == "C":
                rhs = R(s, t(s) + 1)(rhs)
            parts.append(_compare(f"pde[{n + s},{s}]", lhs, rhs, N - 1))
    return parts


def check_pde_C(params, N, seed=None):
    ctx = _Ctx(params, N)
    return _finish("pde-c", pde_X_parts(ctx), params, N, seed)


def check_pde_BD(params_b, params_d, N, seed=None):
    parts = []
    for p in (params_b, params_d):
        ctx = _Ctx(p, N)
        for r in pde_X_parts(ctx):
            r.identity = f"{p.family}:{r.identity}"
            parts.append(r)
    rep = _finish("pde-bd", parts, params_b, N, seed)
    rep.details["params-d"] = {"tau": list(params_d.tau), "theta": params_d.theta}
    return rep


def ratio_recurrence_check(params, N):
    """Coefficients of the built series against the step-ratio recurrences."""
    from .hyperfun import ratio_defect
    s = build_X(params, N)
    d, where = ratio_defect(s, params)
    return CheckReport(identity=f"ratio-{params.family.lower()}", mode=EXACT, passed=d == 0,
                       max_discrepancy=d, truncation=N, worst=str(where) if where else None)


# ---------------------------------------------------------------- kernel product

def check_kernel_product(tau, n, N, seed=None):
    tau = [as_scalar(t, EXACT) for t in tau]
    lat = lattice("A", n)
    lhs = kernel_A(tau, n, N)
    rhs = TruncatedSeries.one(lat, N)
    for r in range(1, n):
        form = TruncatedSeries(lat, N)
        for s in range(r, n + 1):
            form = form + path_polynomial(r, s, n, lat, N)
        rhs = rhs * geometric_expand(form, -tau[r - 1], N)
    parts = [_compare("product", lhs, rhs, N)]

    # t-graded form: t tracks the row-n degree; t never outnumbers z, so
    # truncating at 2N keeps every monomial of z-degree <= N exact
    keys = lat.keys + ("t",)
    glat = custom_lattice(keys, n)
    M = 2 * N
    pos_n = [lat.index((n, k)) for k in range(1, n)]
    terms = {}
    for e, c in lhs.terms.items():
        terms[e + (sum(e[p] for p in pos_n),)] = c
    glhs = TruncatedSeries(glat, M, terms, check=False)
    grhs = TruncatedSeries.one(glat, M)
    tvar = TruncatedSeries.var(glat, "t", M)
    for r in range(1, n):
        form = TruncatedSeries(glat, M)
        for s in range(r, n):
            form = form + path_polynomial(r, s, n, lat, M).retarget(glat)
        form = form + path_polynomial(r, n, n, lat, M).retarget(glat) * tvar
        grhs = grhs * geometric_expand(form, -tau[r - 1], M)
    worst, where = 0, None
    for e in set(glhs.terms) | set(grhs.terms):
        if sum(e[:-1]) > N:
            continue
        d = abs(glhs.coeff(e) - grhs.coeff(e))
        if d > worst:
            worst, where = d, e
    parts.append(CheckReport(identity="t-graded", mode=EXACT, passed=worst == 0,
                             max_discrepancy=worst, truncation=N,
                             worst=None if where is None else str(where)))
    rep = combine("kernel-product", parts, EXACT)
    rep.truncation, rep.seed = N, seed
    rep.details["tau"] = tau
    return rep


# ---------------------------------------------------------------- Gauss equation

def gauss_residual(a, b, c, N, second=False):
    """Residual series of the hypergeometric equation for one solution.

    For the second solution x^(1-c) g(x) the power x^(1-c) is kept as an
    offset rho; the returned series is the residual divided by x^(rho-1).
    """
    if second:
        rho = 1 - c
        g = gauss_2f1(a + rho, b + rho, 2 - c, N)
    else:
        rho = Fraction(0)
        g = gauss_2f1(a, b, c, N)
    x = "z"
    g1 = g.partial(x)
    g2 = g1.partial(x)
    one = TruncatedSeries.one(g.lattice, N)
    X = TruncatedSeries.var(g.lattice, x, N)
    # y = x^rho g, y' = x^(rho-1)(rho g + x g'), y'' = x^(rho-2)(rho(rho-1) g + 2 rho x g' + x^2 g'')
    yp = g.scale(rho) + g1.mul_var(x)
    ypp = g.scale(rho * (rho - 1)) + g1.mul_var(x).scale(2 * rho) + g2.mul_var(x).mul_var(x)
    res = (one - X) * ypp + (one.scale(c) - X.scale(a + b + 1)) * yp - g.mul_var(x).scale(a * b)
    return res


def check_gauss_ode(a, b, c, N, seed=None):
    a, b, c = (as_scalar(v, EXACT) for v in (a, b, c))
    parts = []
    zero = TruncatedSeries(lattice("line"), N)
    parts.append(_compare("first-solution", gauss_residual(a, b, c, N), zero, N - 2))
    if c.denominator != 1:
        parts.append(_compare("second-solution", gauss_residual(a, b, c, N, True), zero, N - 2))
    rep = combine("gauss-ode", parts, EXACT)
    rep.truncation, rep.seed = N, seed
    rep.details["abc"] = [a, b, c]
    return rep


# ---------------------------------------------------------------- integral representation

def _jacobi_integral(f, a_exp, b_exp, m):
    """int_0^1 f(t) t^b_exp (1-t)^a_exp dt by m-point Gauss-Jacobi."""
    x, w = special.roots_jacobi(m, a_exp, b_exp)
    t = (1 + x) / 2
    vals = np.array([f(v) for v in t])
    return np.sum(w * vals) / 2 ** (a_exp + b_exp + 1)


def euler_integral_A(params, point, tol=1e-12, m=40):
    """The integral side of the Euler-type representation of X_A at ``point``.

    ``point`` maps (j,k) to floats.  Returns (value, method).
    """
    n = params.n
    tau = [complex(t) for t in params.tau]
    theta = complex(params.theta)
    tn = tau[-1]
    if tn.real <= 0 or (theta - tn).real <= 0:
        raise PreconditionError("needs Re tau_n > 0 and Re(theta - tau_n) > 0")
    lat = lattice("A", n)
    Pv = {}
    for r in range(1, n + 1):
        for s in range(r, n + 1):
            Pv[(r, s)] = path_polynomial(r, s, n, lat).to_float().eval_at(point)

    def f(t):
        out = 1.0 + 0j
        for r in range(1, n):
            base = sum(Pv[(r, s)] for s in range(r, n)) + t * Pv[(r, n)]
            out *= base ** (-tau[r - 1])
        return out

    pref = special.gamma(theta) / (special.gamma(theta - tn) * special.gamma(tn))
    a_exp, b_exp = (theta - tn - 1), (tn - 1)
    if abs(a_exp.imag) < 1e-15 and abs(b_exp.imag) < 1e-15:
        v1 = _jacobi_integral(f, a_exp.real, b_exp.real, m)
        v2 = _jacobi_integral(f, a_exp.real, b_exp.real, 2 * m)
        if abs(v1 - v2) <= tol * max(1.0, abs(v2)):
            return pref * v2, "gauss-jacobi"
        re = integrate.quad(lambda t: f(t).real, 0, 1, weight="alg", wvar=(b_exp.real, a_exp.real),
                            epsabs=tol, epsrel=tol, limit=200)[0]
        im = integrate.quad(lambda t: f(t).imag, 0, 1, weight="alg", wvar=(b_exp.real, a_exp.real),
                            epsabs=tol, epsrel=tol, limit=200)[0]
        return pref * complex(re, im), "adaptive"
    raise PreconditionError("complex exponents are outside the supported quadrature range")


def check_integral_rep_A(params, point, N=10, tol=1e-8, seed=None):
    fparams = HyperParams.make("A", [complex(t) for t in params.tau], complex(params.theta), FLOAT)
    series = build_X(fparams, N)
    val_series = series.eval_at(point)
    val_int, method = euler_integral_A(params, point)
    diff = abs(val_series - val_int)
    return CheckReport(identity="integral-a", mode=FLOAT, passed=diff < tol, max_discrepancy=diff,
                       truncation=N, tolerance=tol, seed=seed,
                       worst={point_key(k): v for k, v in point.items()},
                       notes=f"quadrature: {method}",
                       details={"series": val_series, "integral": val_int})


def point_key(k):
    return ",".join(map(str, k)) if isinstance(k, tuple) else str(k)


def random_small_point(n, rng, radius=0.1):
    return {k: rng.uniform(-radius, radius) for k in lattice("A", n).keys}
