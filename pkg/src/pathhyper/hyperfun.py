"""Gauss 2F1 and the path hypergeometric series of types A, B, C and D."""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .core import (EXACT, FLOAT, MultiIndex, PreconditionError, TruncatedSeries, as_scalar,
                   exps_upto, lattice, rising, stats)

FAMILIES = ("A", "B", "C", "D")
LATTICE_OF = {"A": "A", "B": "C", "C": "C", "D": "D"}


@dataclass(frozen=True)
class HyperParams:
    family: str
    tau: tuple
    theta: object
    mode: str = EXACT

    @property
    def n(self):
        return len(self.tau)

    @classmethod
    def make(cls, family, tau, theta, mode=EXACT):
        if family not in FAMILIES:
            raise ValueError(f"unknown family {family!r}")
        tau = tuple(as_scalar(t, mode) for t in tau)
        if not tau:
            raise ValueError("need at least one tau")
        return cls(family, tau, as_scalar(theta, mode), mode)

    def with_tau(self, changes, dtheta=0):
        tau = list(self.tau)
        for i, d in changes.items():
            tau[i - 1] += d
        return replace(self, tau=tuple(tau), theta=self.theta + dtheta)


@dataclass(frozen=True)
class ParamShift:
    """A parameter shift: ``ab`` (i+1, j-1), ``top`` (j1+1, j2+1, theta+1),
    ``double`` (k+2, theta+1) or ``single`` (k+step, theta+1)."""

    kind: str
    i: int
    j: int = 0
    step: int = 1


def shifted(params, shift):
    n = params.n
    idx = [shift.i] + ([shift.j] if shift.kind in ("ab", "top") else [])
    if any(not 1 <= k <= n for k in idx):
        raise ValueError(f"shift index out of range: {shift}")
    if shift.kind == "ab":
        return params.with_tau({shift.i: 1, shift.j: -1}) if shift.i != shift.j else params
    if shift.kind == "top":
        if shift.i == shift.j:
            return params.with_tau({shift.i: 2}, 1)
        return params.with_tau({shift.i: 1, shift.j: 1}, 1)
    if shift.kind == "double":
        return params.with_tau({shift.i: 2}, 1)
    if shift.kind == "single":
        return params.with_tau({shift.i: shift.step}, 1)
    raise ValueError(f"unknown shift kind {shift.kind!r}")


def _check_theta(theta, m, mode, what="theta"):
    for k in range(m):
        v = theta + k
        if (mode == EXACT and v == 0) or (mode == FLOAT and abs(v) < 1e-14):
            raise PreconditionError(f"{what} = {theta} gives a vanishing denominator (pole)")


def gauss_2f1(a, b, c, N, mode=EXACT):
    """sum_{m<=N} (a)_m (b)_m / (m! (c)_m) z^m in the one-variable lattice."""
    a, b, c = (as_scalar(x, mode) for x in (a, b, c))
    _check_theta(c, N, mode, "c")
    lat = lattice("line")
    terms = {}
    coef = as_scalar(1, mode)
    for m in range(N + 1):
        terms[(m,)] = coef
        coef = coef * (a + m) * (b + m) / ((m + 1) * (c + m))
    return TruncatedSeries(lat, N, terms, mode)


def _fact(exps):
    out = 1
    for e in exps:
        out *= math.factorial(e)
    return out


def coefficient(params, beta):
    """The series coefficient at the multi-index ``beta`` (a MultiIndex)."""
    n = params.n
    tau, theta, fam = params.tau, params.theta, params.family
    st = stats(beta)
    num = as_scalar(1, params.mode)
    if fam == "A":
        for s in range(n - 1):
            num *= rising(tau[s] - st.under[s], st.over[s])
        num *= rising(tau[n - 1], st.under[n - 1])
        den = _fact(beta.exps) * rising(theta, st.under[n - 1])
        return num / den
    if fam == "C":
        extra, total = st.c, st.c_total
    elif fam == "B":
        extra, total = st.b, st.b_total
    else:
        extra, total = st.d, st.d_total
    for r in range(n):
        num *= rising(tau[r] - st.under[r], st.over[r] + extra[r])
    return num / (_fact(beta.exps) * rising(theta, total))


def build_X(params, N):
    """The truncated path hypergeometric series of the params' family."""
    lat = lattice(LATTICE_OF[params.family], params.n)
    _check_theta(params.theta, N, params.mode)
    terms = {}
    for e in exps_upto(lat.rank, N):
        c = coefficient(params, MultiIndex(lat, e))
        if c != 0:
            terms[e] = c
    return TruncatedSeries(lat, N, terms, params.mode, check=False)


def build_XA(tau, theta, N, mode=EXACT):
    return build_X(HyperParams.make("A", tau, theta, mode), N)


def build_XB(tau, theta, N, mode=EXACT):
    return build_X(HyperParams.make("B", tau, theta, mode), N)


def build_XC(tau, theta, N, mode=EXACT):
    return build_X(HyperParams.make("C", tau, theta, mode), N)


def build_XD(tau, theta, N, mode=EXACT):
    return build_X(HyperParams.make("D", tau, theta, mode), N)


def kernel_A(tau, n, N, mode=EXACT):
    """The theta-free kernel sum_beta prod_s (tau_s - b_under_s)_{b_over_s} / beta! z^beta."""
    tau = tuple(as_scalar(t, mode) for t in tau)
    lat = lattice("A", n)
    terms = {}
    for e in exps_upto(lat.rank, N):
        st = stats(MultiIndex(lat, e))
        c = as_scalar(1, mode)
        for s in range(n - 1):
            c *= rising(tau[s] - st.under[s], st.over[s])
        if c != 0:
            terms[e] = c / _fact(e)
    return TruncatedSeries(lat, N, terms, mode, check=False)


# ---------------------------------------------------------------- ratio oracle

def _step_ratio(params, beta, key):
    """Return (num, den) with coefficient(beta+e_key) * den == coefficient(beta) * num."""
    n = params.n
    tau, theta, fam = params.tau, params.theta, params.family
    st = stats(beta)
    u, o = st.under, st.over
    if fam == "A":
        x, xt = [0] * n, st.under[n - 1]
    elif fam == "C":
        x, xt = st.c, st.c_total
    elif fam == "B":
        x, xt = st.b, st.b_total
    else:
        x, xt = st.d, st.d_total
    j, k = key
    mult = beta[key] + 1
    if j <= n:
        r2, r1 = j, k
        if fam == "A" and r2 == n:
            # adding z_{n,r}: (tau_n + b_under_n)(tau_r - u_r + o_r) / ((theta + b_under_n)(b+1))
            return ((tau[n - 1] + u[n - 1]) * (tau[r1 - 1] - u[r1 - 1] + o[r1 - 1]),
                    (theta + u[n - 1]) * mult)
        a = tau[r1 - 1] - u[r1 - 1] + o[r1 - 1] + x[r1 - 1]
        b = tau[r2 - 1] - 1 - u[r2 - 1]
        return a * b, mult * (b + o[r2 - 1] + x[r2 - 1])
    r2, r1 = j - n, k
    f1 = tau[r1 - 1] - u[r1 - 1] + o[r1 - 1] + x[r1 - 1]
    if r1 != r2:
        f2 = tau[r2 - 1] - u[r2 - 1] + o[r2 - 1] + x[r2 - 1]
        return f1 * f2, mult * (theta + xt)
    if fam == "C":
        return f1 * (f1 + 1), mult * (theta + xt)
    return f1, mult * (theta + xt)


def ratio_defect(series, params):
    """Largest violation of the term-ratio recurrences over all retained steps."""
    lat = series.lattice
    worst, where = 0, None
    for e in exps_upto(lat.rank, series.N - 1):
        beta = MultiIndex(lat, e)
        for p, key in enumerate(lat.keys):
            f = list(e)
            f[p] += 1
            num, den = _step_ratio(params, beta, key)
            d = abs(series.coeff(tuple(f)) * den - series.coeff(e) * num)
            if d > worst:
                worst, where = d, (e, key)
    return worst, where
