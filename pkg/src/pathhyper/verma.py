"""Verma modules of gl(n) and sp(2n), singular vectors and trace functions.

Module elements are sparse maps from PBW exponent tuples to exact scalars.
The PBW order is the lattice order of ``lattice("A", n)`` for gl(n) and of
``lattice("C", n)`` for sp(2n).  Generators are named by matrix positions:
``(i, j)`` is E_{i,j} for gl(n); for sp(2n) the names are ``(i, j)`` with
i, j <= n, ``(p, n+q)`` with p <= q and ``(n+p, q)`` with p >= q.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .core import (EXACT, PreconditionError, TruncatedSeries, as_scalar, exps_upto, falling,
                   geometric_expand, lattice, scalar_str)
from .hyperfun import HyperParams, build_X, gauss_2f1
from .report import CheckReport

GL = "gl"
SP = "sp"
HALF = Fraction(1, 2)


# ---------------------------------------------------------------- algebras

@dataclass(frozen=True)
class Algebra:
    kind: str
    n: int

    def __post_init__(self):
        if self.kind not in (GL, SP):
            raise ValueError(f"unknown algebra {self.kind!r}")
        if self.n < (2 if self.kind == GL else 1):
            raise ValueError(f"rank too small for {self.kind}")

    @property
    def label(self):
        return f"gl({self.n})" if self.kind == GL else f"sp({2 * self.n})"

    @property
    def pbw_lattice(self):
        return lattice("A" if self.kind == GL else "C", self.n)

    def canonical(self, g):
        """Normal form of a generator name; raises ValueError when unknown."""
        n = self.n
        try:
            a, b = (int(x) for x in g)
        except (TypeError, ValueError):
            raise ValueError(f"unknown generator {g!r}") from None
        if self.kind == GL:
            if 1 <= a <= n and 1 <= b <= n:
                return (a, b)
            raise ValueError(f"unknown generator {g!r} for {self.label}")
        if 1 <= a <= n and 1 <= b <= n:
            return (a, b)
        if 1 <= a <= n and n < b <= 2 * n:
            p, q = sorted((a, b - n))
            return (p, n + q)
        if n < a <= 2 * n and 1 <= b <= n:
            p, q = sorted((a - n, b), reverse=True)
            return (n + p, q)
        raise ValueError(f"unknown generator {g!r} for {self.label}")

    def generators(self):
        return _generators(self)

    def matrix(self, g):
        return _matrix(self, self.canonical(g))

    def is_lowering(self, g):
        return self.canonical(g) in self.pbw_lattice.keys

    def is_cartan(self, g):
        a, b = self.canonical(g)
        return a == b

    def simple_raising(self):
        n = self.n
        out = [(i, i + 1) for i in range(1, n)]
        if self.kind == SP:
            out.append((n, 2 * n))
        return out

    def raising(self):
        return [g for g in self.generators() if not self.is_lowering(g) and not self.is_cartan(g)]

    def weight(self, g):
        """Integer vector w with [H_k, g] = w_k g (H_k = E_kk or C_kk)."""
        return _weight(self, self.canonical(g))

    def bracket(self, g1, g2):
        """[g1, g2] as a map generator -> coefficient."""
        return _bracket(self, self.canonical(g1), self.canonical(g2))

    def decompose(self, mat):
        return _decompose(self, mat)

    def key_degree(self, key):
        """Degree of a PBW generator in the trace expansion variables."""
        n = self.n
        j, i = key
        if j <= n:
            return j - i
        return (n - i) + (n - (j - n)) + 1


@lru_cache(maxsize=None)
def _generators(alg):
    n = alg.n
    if alg.kind == GL:
        return tuple((a, b) for a in range(1, n + 1) for b in range(1, n + 1))
    out = [(a, b) for a in range(1, n + 1) for b in range(1, n + 1)]
    out += [(p, n + q) for p in range(1, n + 1) for q in range(p, n + 1)]
    out += [(n + p, q) for p in range(1, n + 1) for q in range(1, p + 1)]
    return tuple(out)


@lru_cache(maxsize=None)
def _matrix(alg, g):
    n = alg.n
    a, b = g
    if alg.kind == GL:
        return {(a, b): 1}
    if a <= n and b <= n:
        m = {(a, b): 1}
        m[(n + b, n + a)] = m.get((n + b, n + a), 0) - 1
        return {k: v for k, v in m.items() if v}
    if a <= n:
        p, q = a, b - n
        return {(p, n + q): 1} if p == q else {(p, n + q): 1, (q, n + p): 1}
    p, q = a - n, b
    return {(n + p, q): 1} if p == q else {(n + p, q): 1, (n + q, p): 1}


def _matmul(x, y):
    out = {}
    for (i, k), u in x.items():
        for (k2, j), v in y.items():
            if k == k2:
                out[(i, j)] = out.get((i, j), 0) + u * v
    return out


def _commutator(x, y):
    out = _matmul(x, y)
    for k, v in _matmul(y, x).items():
        out[k] = out.get(k, 0) - v
    return {k: v for k, v in out.items() if v}


def _decompose(alg, mat):
    """Write a matrix of the algebra as a combination of named generators."""
    if alg.kind == GL:
        return {k: v for k, v in mat.items() if v}
    n = alg.n
    out = {}
    for (i, j), v in mat.items():
        if not v:
            continue
        if i <= n and j <= n:
            out[(i, j)] = v
        elif i <= n < j and i <= j - n:
            out[(i, j)] = v
        elif j <= n < i and i - n >= j:
            out[(i, j)] = v
    check = {}
    for g, c in out.items():
        for k, v in _matrix(alg, g).items():
            check[k] = check.get(k, 0) + c * v
    check = {k: v for k, v in check.items() if v}
    if check != {k: v for k, v in mat.items() if v}:
        raise ValueError("matrix is not in the algebra")
    return out


@lru_cache(maxsize=None)
def _bracket(alg, g1, g2):
    return _decompose(alg, _commutator(_matrix(alg, g1), _matrix(alg, g2)))


@lru_cache(maxsize=None)
def _weight(alg, g):
    w = []
    for k in range(1, alg.n + 1):
        br = _bracket(alg, (k, k), g)
        w.append(br.get(g, 0))
    return tuple(w)


@lru_cache(maxsize=None)
def _raising_plan(alg, g):
    """For a non-simple raising generator g, a pair (e, h, c) with [e, h] = c g,
    e simple raising and h raising of smaller height."""
    simple = alg.simple_raising()
    height = _heights(alg)
    for e in simple:
        for h in alg.raising():
            if height[h] >= height[g]:
                continue
            br = alg.bracket(e, h)
            if set(br) == {g}:
                return e, h, br[g]
    raise ValueError(f"cannot reach {g} from simple generators")


@lru_cache(maxsize=None)
def _heights(alg):
    """Height of every raising generator (number of simple steps)."""
    simple = alg.simple_raising()
    height = {e: 1 for e in simple}
    frontier = list(simple)
    while frontier:
        nxt = []
        for h in frontier:
            for e in simple:
                for g in alg.bracket(e, h):
                    if g not in height and not alg.is_cartan(g):
                        height[g] = height[h] + 1
                        nxt.append(g)
        frontier = nxt
    return height


# ---------------------------------------------------------------- weights

def sp_cartan_values(lam_h):
    """Eigenvalues of C_kk on v_lambda from the values on h_1..h_n."""
    n = len(lam_h)
    vals = [None] * n
    vals[n - 1] = lam_h[n - 1]
    for k in range(n - 2, -1, -1):
        vals[k] = vals[k + 1] + lam_h[k]
    return tuple(vals)


def sp_weight(lam_n, n):
    """The highest weight with value -1/2 on h_1..h_{n-1} and lam_n on h_n."""
    return tuple([-HALF] * (n - 1) + [as_scalar(lam_n, EXACT)])


@dataclass(frozen=True)
class Module:
    """A Verma module: an algebra plus a highest weight.

    ``lam`` lists E_kk eigenvalues for gl(n) and h_k values for sp(2n).
    """

    alg: Algebra
    lam: tuple

    @classmethod
    def make(cls, kind, n, lam):
        lam = tuple(as_scalar(x, EXACT) for x in lam)
        if len(lam) != n:
            raise ValueError(f"highest weight needs {n} entries")
        return cls(Algebra(kind, n), lam)

    @property
    def cartan_values(self):
        return self.lam if self.alg.kind == GL else sp_cartan_values(self.lam)

    @property
    def keys(self):
        return self.alg.pbw_lattice.keys

    def zero_exps(self):
        return (0,) * len(self.keys)


class VermaVector:
    """A finite combination of PBW monomials applied to v_lambda."""

    __slots__ = ("module", "terms")

    def __init__(self, module, terms=None):
        self.module = module
        self.terms = {e: c for e, c in (terms or {}).items() if c != 0}

    @classmethod
    def highest(cls, module):
        return cls(module, {module.zero_exps(): Fraction(1)})

    @classmethod
    def basis(cls, module, exps):
        return cls(module, {tuple(exps): Fraction(1)})

    def __add__(self, other):
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return VermaVector(self.module, out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        return VermaVector(self.module, {e: c * v for e, v in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, VermaVector) and self.module == other.module \
            and self.terms == other.terms

    def __repr__(self):
        lat = self.module.alg.pbw_lattice
        parts = []
        for e, c in sorted(self.terms.items()):
            mono = "".join(f"E[{lat.key_str(k)}]^{x}" for k, x in zip(lat.keys, e) if x)
            parts.append(f"{scalar_str(c)}*{mono or '1'}")
        return " + ".join(parts) or "0"

    def act(self, g):
        return VermaVector(self.module, act_terms(self.module, g, self.terms))


def _add(out, e, c):
    if c:
        out[e] = out.get(e, 0) + c


def _shift(exps, pos, changes):
    """exps with the given (key, delta) changes, or None if a count goes negative."""
    f = list(exps)
    for key, d in changes:
        f[pos[key]] += d
        if f[pos[key]] < 0:
            return None
    return tuple(f)


def act_terms(module, g, terms):
    """Apply one generator to a sparse PBW combination."""
    alg = module.alg
    g = alg.canonical(g)
    out = {}
    for e, c in terms.items():
        for f, v in _act_basis(module, g, e).items():
            _add(out, f, c * v)
    return {e: c for e, c in out.items() if c != 0}


def _act_basis(module, g, e):
    return _act_basis_cached(module, g, e)


@lru_cache(maxsize=200000)
def _act_basis_cached(module, g, e):
    alg = module.alg
    a, b = g
    if a == b:
        return {e: _cartan_value(module, a, e)}
    if g in module.keys:
        if alg.kind == GL or a <= alg.n:
            return _lower_a(module, g, e)
        return _lower_c(module, g, e)
    if g in alg.simple_raising():
        if alg.kind == GL:
            return _raise_gl(module, a, e)
        if a < alg.n:
            return _raise_sp(module, a, e)
        return _raise_sp_long(module, e)
    # non-simple raising: g = [s, h] / c
    s, h, c = _raising_plan(alg, g)
    he = _act_basis_cached(module, h, e)
    se = _act_basis_cached(module, s, e)
    out = {}
    for f, v in he.items():
        for f2, v2 in _act_basis_cached(module, s, f).items():
            _add(out, f2, v * v2)
    for f, v in se.items():
        for f2, v2 in _act_basis_cached(module, h, f).items():
            _add(out, f2, -v * v2)
    return {f: v / c for f, v in out.items() if v != 0}


def _pos(module):
    return module.alg.pbw_lattice._positions()


def _cartan_value(module, k, e):
    val = module.cartan_values[k - 1]
    for key, x in zip(module.keys, e):
        if x:
            val += x * module.alg.weight(key)[k - 1]
    return val


def _lower_a(module, g, e):
    """E_{j,i} with i < j <= n: the new generator plus one term per E_{i,p}."""
    j, i = g
    pos = _pos(module)
    out = {}
    _add(out, _shift(e, pos, [(g, 1)]), Fraction(1))
    for p in range(1, i):
        a = e[pos[(i, p)]]
        if a:
            _add(out, _shift(e, pos, [((j, p), 1), ((i, p), -1)]), Fraction(a))
    return out


def _lower_c(module, g, e):
    """A generator of the abelian part pushed through the ordered A-part.

    X A_1 ... A_k = sum over subsets S of the kept A-factors times the nested
    bracket [..[X, A_s1], A_s2..]; the bracket stays in the abelian part.
    """
    alg = module.alg
    keys = module.keys
    n = alg.n
    na = n * (n - 1) // 2
    pos = _pos(module)
    states = {((), g): Fraction(1)}
    for idx in range(na):
        key = keys[idx]
        a = e[idx]
        new = {}
        for (kept, y), c in states.items():
            chain = {y: Fraction(1)}
            for m in range(a + 1):
                coef = c * math.comb(a, m)
                for yy, v in chain.items():
                    _add(new, (kept + (a - m,), yy), coef * v)
                if m == a:
                    break
                nxt = {}
                for yy, v in chain.items():
                    for z, w in alg.bracket(yy, key).items():
                        _add(nxt, z, v * w)
                chain = {k: v for k, v in nxt.items() if v}
                if not chain:
                    break
        states = {k: v for k, v in new.items() if v}
    out = {}
    for (kept, y), c in states.items():
        f = list(kept) + list(e[na:])
        f[pos[y]] += 1
        _add(out, tuple(f), c)
    return out


def _raise_gl(module, i, e):
    """E_{i,i+1} on a PBW monomial."""
    n = module.alg.n
    pos = _pos(module)
    lam = module.lam
    out = {}

    def al(j, k):
        return e[pos[(j, k)]]

    for p in range(1, i):
        a = al(i + 1, p)
        if a:
            _add(out, _shift(e, pos, [((i, p), 1), ((i + 1, p), -1)]), Fraction(a))
    for p in range(i + 2, n + 1):
        a = al(p, i)
        if a:
            _add(out, _shift(e, pos, [((p, i + 1), 1), ((p, i), -1)]), Fraction(-a))
    a = al(i + 1, i)
    if a:
        sigma = lam[i - 1] - lam[i]
        coef = sigma + 1 - sum(al(p, i) for p in range(i + 1, n + 1)) \
            + sum(al(p, i + 1) for p in range(i + 2, n + 1))
        _add(out, _shift(e, pos, [((i + 1, i), -1)]), a * coef)
    return out


def _ck(n, p, q):
    """Key of the abelian-part generator C_{n+p,q} = C_{n+q,p}."""
    return (n + max(p, q), min(p, q))


def _raise_sp(module, i, e):
    """C_{i,i+1} on a PBW monomial of sp(2n)."""
    n = module.alg.n
    pos = _pos(module)
    out = {}

    def al(j, k):
        return e[pos[(j, k)]]

    def ac(p, q):
        return e[pos[_ck(n, p, q)]]

    for j in range(1, i):
        a = al(i + 1, j)
        if a:
            _add(out, _shift(e, pos, [((i, j), 1), ((i + 1, j), -1)]), Fraction(a))
    for j in range(i + 2, n + 1):
        a = al(j, i)
        if a:
            _add(out, _shift(e, pos, [((j, i + 1), 1), ((j, i), -1)]), Fraction(-a))
    for k in range(1, n + 1):
        if k == i + 1:
            continue
        a = ac(k, i)
        if a:
            _add(out, _shift(e, pos, [(_ck(n, k, i), -1), (_ck(n, k, i + 1), 1)]), Fraction(-a))
    a = ac(i + 1, i)
    if a:
        _add(out, _shift(e, pos, [(_ck(n, i + 1, i), -1), (_ck(n, i + 1, i + 1), 1)]),
             Fraction(-2 * a))
    a = al(i + 1, i)
    if a:
        coef = module.lam[i - 1] + 1 - sum(al(j, i) for j in range(i + 1, n + 1)) \
            + sum(al(j, i + 1) for j in range(i + 2, n + 1)) \
            + sum(ac(k, i + 1) - ac(k, i) for k in range(1, n + 1) if k not in (i, i + 1)) \
            - 2 * ac(i, i) + 2 * ac(i + 1, i + 1)
        _add(out, _shift(e, pos, [((i + 1, i), -1)]), a * coef)
    return out


def _raise_sp_long(module, e):
    """C_{n,2n} on a PBW monomial of sp(2n)."""
    n = module.alg.n
    pos = _pos(module)
    out = {}

    def ac(p, q):
        return e[pos[_ck(n, p, q)]]

    for i in range(1, n):
        a = ac(n, i)
        if not a:
            continue
        _add(out, _shift(e, pos, [(_ck(n, n, i), -1), ((n, i), 1)]), Fraction(a))
        if a > 1:
            _add(out, _shift(e, pos, [(_ck(n, n, i), -2), (_ck(n, i, i), 1)]),
                 Fraction(a * (a - 1)))
        for j in range(1, i):
            b = ac(n, j)
            if b:
                _add(out, _shift(e, pos, [(_ck(n, n, i), -1), (_ck(n, n, j), -1),
                                          (_ck(n, i, j), 1)]), Fraction(a * b))
    a = ac(n, n)
    if a:
        _add(out, _shift(e, pos, [(_ck(n, n, n), -1)]), a * (module.lam[n - 1] + 1 - a))
    return out


# ---------------------------------------------------------------- Laurent series over M

class LaurentVermaSeries:
    """Sum of PBW monomials times x-monomials.

    Terms map ``(pbw_exps, x_exps)`` to scalars.  For gl(n) the x-exponents are
    relative to (x_1...x_n)^mu; for sp(2n) they are relative to
    (x_1...x_n)^(-1/2).  ``N`` is the PBW degree up to which the series is
    complete.
    """

    __slots__ = ("module", "mu", "N", "terms")

    def __init__(self, module, mu, N, terms=None):
        self.module = module
        self.mu = mu
        self.N = N
        self.terms = {k: c for k, c in (terms or {}).items() if c != 0}

    def _new(self, terms):
        return LaurentVermaSeries(self.module, self.mu, self.N, terms)

    def coefficient(self, pbw, xexps):
        return self.terms.get((tuple(pbw), tuple(xexps)), Fraction(0))

    def act(self, g, max_degree=None):
        """Apply a generator through the module part and the x part."""
        module = self.module
        g = module.alg.canonical(g)
        out = {}
        for (e, k), c in self.terms.items():
            for f, v in _act_basis(module, g, e).items():
                if max_degree is not None and _wdeg(module, f) > max_degree:
                    continue
                _add(out, (f, k), c * v)
            for k2, v in _x_action(module.alg, self.mu, g, k):
                _add(out, (e, k2), c * v)
        return self._new({t: c for t, c in out.items() if c != 0})

    def pbw_degree(self, key):
        return sum(key[0])


def _wdeg(module, e):
    alg = module.alg
    return sum(x * alg.key_degree(k) for k, x in zip(module.keys, e) if x)


def _bump(k, changes):
    f = list(k)
    for i, d in changes:
        f[i - 1] += d
    return tuple(f)


def _x_action(alg, mu, g, k):
    """The x-part of a generator on the monomial with relative exponents k."""
    a, b = g
    n = alg.n
    if alg.kind == GL:
        if a == b:
            return [(k, Fraction(k[a - 1]))] if k[a - 1] else []
        c = k[b - 1] + mu
        return [(_bump(k, [(a, 1), (b, -1)]), c)] if c else []
    if a <= n and b <= n:
        if a == b:
            return [(k, Fraction(k[a - 1]))] if k[a - 1] else []
        c = k[b - 1] - HALF
        return [(_bump(k, [(a, 1), (b, -1)]), c)]
    if a <= n:
        p, q = a, b - n
        c = -HALF if p == q else Fraction(-1)
        return [(_bump(k, [(p, 1), (q, 1)]), c)]
    p, q = a - n, b
    if p == q:
        c = HALF * (k[p - 1] - HALF) * (k[p - 1] - 3 * HALF)
    else:
        c = (k[p - 1] - HALF) * (k[q - 1] - HALF)
    return [(_bump(k, [(p, -1), (q, -1)]), c)] if c else []


# ---------------------------------------------------------------- singular vectors

def _check_gl_weight(lam, mu, N):
    n = len(lam)
    for p in range(n - 2):
        if lam[p] - lam[p + 1] != mu:
            raise PreconditionError(
                f"needs lambda_{p + 1} - lambda_{p + 2} = mu for the singular vector")
    sigma = lam[n - 2] - lam[n - 1]
    if sigma.denominator == 1 and sigma >= 0:
        raise PreconditionError(f"sigma = {sigma} is a nonnegative integer")
    return sigma


def _check_sp_weight(lam, N):
    if any(x != -HALF for x in lam[:-1]):
        raise PreconditionError("needs the value -1/2 on h_1..h_{n-1}")
    ln = lam[-1]
    if ln.denominator == 1 and 0 <= ln:
        raise PreconditionError(f"lambda_n = {ln} is a nonnegative integer")
    return ln


def _rational(rng, max_den=6, span=3):
    den = rng.randint(1, max_den)
    return Fraction(rng.randint(-span * den, span * den), den)


def random_gl_weight(rng, n):
    """A random (lambda, mu) meeting the gl(n) singular-vector conditions."""
    mu = _rational(rng)
    while True:
        sigma = _rational(rng)
        if not (sigma.denominator == 1 and sigma >= 0):
            break
    lam = [_rational(rng)]
    lam.insert(0, lam[0] + sigma)
    for _ in range(n - 2):
        lam.insert(0, lam[0] + mu)
    return tuple(lam), mu


def random_sp_lambda(rng):
    """A random lambda_n that is not a nonnegative integer."""
    while True:
        ln = _rational(rng)
        if not (ln.denominator == 1 and ln >= 0):
            return ln


def singular_vector(kind, lam, mu, N):
    """The explicit singular vector of weight lam, complete to PBW degree N.

    ``kind`` is ``gl`` or ``sp``; for sp ``lam`` holds the h_k values (use
    ``sp_weight``) and ``mu`` is ignored.
    """
    n = len(lam)
    module = Module.make(kind, n, lam)
    lam = module.lam
    pos = _pos(module)
    zero = module.zero_exps()
    terms = {}
    if kind == GL:
        mu = as_scalar(mu, EXACT)
        sigma = _check_gl_weight(lam, mu, N)
        for idx in exps_upto(n - 1, N):
            e = list(zero)
            for p, ip in enumerate(idx, start=1):
                e[pos[(p + 1, p)]] = ip
            x = [0] * n
            prev = 0
            for p, ip in enumerate(idx):
                x[p] = ip - prev
                prev = ip
            x[n - 1] = -prev
            last = idx[-1]
            c = Fraction((-1) ** sum(idx)) * falling(mu, last) / (
                math.prod(math.factorial(i) for i in idx) * falling(sigma, last))
            if c:
                terms[(tuple(e), tuple(x))] = c
        return LaurentVermaSeries(module, mu, N, terms)
    ln = _check_sp_weight(lam, N)
    for idx in exps_upto(n, N):
        e = list(zero)
        for p in range(1, n):
            e[pos[(p + 1, p)]] = idx[p - 1]
        e[pos[(2 * n, n)]] = idx[n - 1]
        x = [0] * n
        prev = 0
        for p in range(n - 1):
            x[p] = idx[p] - prev
            prev = idx[p]
        x[n - 1] = 2 * idx[n - 1] - prev
        c = Fraction((-1) ** sum(idx[:-1])) / (
            math.prod(math.factorial(i) for i in idx) * 2 ** idx[-1] * falling(ln, idx[-1]))
        terms[(tuple(e), tuple(x))] = c
    return LaurentVermaSeries(module, Fraction(0), N, terms)


def _raising_depth(alg, g):
    return _heights(alg)[alg.canonical(g)]


def verify_singular(u, N=None):
    """Apply the raising generators to u and report the largest surviving
    coefficient among PBW degrees that the truncation determines exactly."""
    alg = u.module.alg
    N = u.N if N is None else N
    gens = list(alg.simple_raising())
    if alg.kind == SP:
        n = alg.n
        gens = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
        gens += [(p, n + q) for p in range(1, n + 1) for q in range(p, n + 1)]
    worst, where = Fraction(0), None
    lat = alg.pbw_lattice
    for g in gens:
        limit = N - _raising_depth(alg, g)
        v = u.act(g)
        for (e, k), c in sorted(v.terms.items()):
            if sum(e) <= limit and abs(c) > worst:
                worst = abs(c)
                where = (f"{g}: " + " ".join(f"{lat.key_str(key)}^{x}"
                                               for key, x in zip(lat.keys, e) if x) + f" x{k}")
    return CheckReport(identity=f"singular-{alg.kind}", mode=EXACT, passed=worst == 0,
                       max_discrepancy=worst, truncation=N, worst=where,
                       notes=f"{alg.label}, raising generators {gens}")


# ---------------------------------------------------------------- trace series

@dataclass
class TraceSeries:
    """prefactor (powers of z_1..z_n) times a body in the expansion variables."""

    algebra: str
    n: int
    prefactor: tuple
    body: TruncatedSeries
    variant: dict = field(default_factory=dict)

    def to_dict(self):
        return {"algebra": self.algebra, "n": self.n,
                "prefactor": [scalar_str(x) for x in self.prefactor],
                "body": self.body.to_json(), "variant": dict(sorted(self.variant.items()))}

    def eval_at(self, z):
        """Numeric value at a point z (a sequence of complex numbers)."""
        n = self.n
        z = [complex(x) for x in z]
        pre = complex(1)
        for zi, p in zip(z, self.prefactor):
            pre *= zi ** complex(p)
        assign = {f"r{i}": z[i] / z[i - 1] for i in range(1, n)}
        if self.body.lattice.kind == "spratio":
            assign["u"] = z[n - 1] ** -2
        return pre * self.body.to_float().eval_at(assign)


def expansion_lattice(kind, n):
    return lattice("ratio" if kind == GL else "spratio", n)


def body_exps(kind, n, zexp):
    """Exponents in the expansion variables of the monomial z^zexp.

    For gl the exponent sum must vanish; for sp it must be even and <= 0.
    """
    total = sum(zexp)
    r = []
    acc = 0
    for i in range(n - 1):
        acc += zexp[i]
        r.append(-acc)
    if kind == GL:
        if total != 0:
            raise ValueError("gl weight monomial must have degree 0")
        return tuple(r)
    if total % 2 or total > 0:
        raise ValueError("sp weight monomial must have even nonpositive degree")
    return tuple(r) + (-total // 2,)


def pbw_zexp(module, e):
    alg = module.alg
    z = [0] * alg.n
    for key, x in zip(module.keys, e):
        if x:
            for k, w in enumerate(alg.weight(key)):
                z[k] += x * w
    return z


def _pbw_upto(module, N):
    """PBW exponents whose weighted degree is at most N, by increasing degree."""
    alg = module.alg
    degs = [alg.key_degree(k) for k in module.keys]
    out = []

    def rec(i, left, cur):
        if i == len(degs):
            out.append(tuple(cur))
            return
        for x in range(left // degs[i] + 1):
            cur.append(x)
            rec(i + 1, left - x * degs[i], cur)
            cur.pop()

    rec(0, N, [])
    out.sort(key=lambda e: (sum(e), tuple(-x for x in e)))
    return out


def trace_oracle(kind, lam, mu, N):
    """Brute-force trace: diagonal coefficients of E^alpha(u) over the PBW basis.

    E^alpha(u) is built one generator at a time from the primitive actions,
    memoized on alpha (E^alpha = E_first * E^(alpha - e_first)).
    """
    n = len(lam)
    u = singular_vector(kind, lam, mu, N)
    module = u.module
    lat = expansion_lattice(kind, n)
    keys = module.keys
    zero_x = (0,) * n
    memo = {module.zero_exps(): u}
    body = {}
    for e in _pbw_upto(module, N):
        if e not in memo:
            first = next(i for i, x in enumerate(e) if x)
            prev = list(e)
            prev[first] -= 1
            memo[e] = memo[tuple(prev)].act(keys[first], max_degree=N)
        c = memo[e].coefficient(e, zero_x)
        if c:
            b = body_exps(kind, n, pbw_zexp(module, e))
            body[b] = body.get(b, 0) + c
    pre = module.cartan_values
    return TraceSeries(kind, n, pre, TruncatedSeries(lat, N, body, EXACT))


# ---------------------------------------------------------------- expansion helpers

def _ratio_mono(kind, n, zexp):
    return body_exps(kind, n, zexp)


def _mono_series(kind, n, zexp, N, coeff=1):
    lat = expansion_lattice(kind, n)
    return TruncatedSeries.monomial(lat, _ratio_mono(kind, n, zexp), N, coeff)


def _zvec(n, pairs):
    z = [0] * n
    for i, d in pairs:
        z[i - 1] += d
    return z


def _one_minus_inverse(kind, n, zexp, N):
    """1/(1 - z^zexp) as a series."""
    m = _mono_series(kind, n, zexp, N)
    return geometric_expand(1 - m, -1, N)


XI_TARGET = "target-numerator"
XI_SOURCE = "source-numerator"
THETA_SIGMA = "minus-sigma"
THETA_LAMBDA = "lambda-n-minus-mu"
PRE_PRINTED = "printed"
PRE_CARTAN = "cartan"
W_EVEN = "even-superscript"
W_SHIFTED = "shifted-superscript"
DIAG_SINGLE = "single"
DIAG_DOUBLED = "doubled"


def xi_A(n, N, variant=XI_TARGET, kind=GL):
    """The xi^A substitutions, keyed by (r2, r1), as series in the expansion variables.

    ``target-numerator``: prod_s z_{r2}/(z_{r2} - z_s) = prod_s -rho/(1 - rho) with
    rho = z_{r2}/z_s.  ``source-numerator``: prod_s z_s/(z_{r2} - z_s) =
    prod_s -1/(1 - rho), which has a nonzero constant term.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    out = {}
    for r2 in range(2, n + 1):
        for r1 in range(1, r2):
            acc = TruncatedSeries.one(expansion_lattice(kind, n), N)
            for s in range(r1, r2):
                rho = _zvec(n, [(r2, 1), (s, -1)])
                inv = _one_minus_inverse(kind, n, rho, N)
                if variant == XI_TARGET:
                    acc = acc * (_mono_series(kind, n, rho, N) * inv).scale(-1)
                elif variant == XI_SOURCE:
                    acc = acc * inv.scale(-1)
                else:
                    raise ValueError(f"unknown xi variant {variant!r}")
            out[(r2, r1)] = acc
    return out


def xi_A_value(n, z, variant=XI_TARGET):
    out = {}
    for r2 in range(2, n + 1):
        for r1 in range(1, r2):
            v = complex(1)
            for s in range(r1, r2):
                num = z[r2 - 1] if variant == XI_TARGET else z[s - 1]
                v *= num / (z[r2 - 1] - z[s - 1])
            out[(r2, r1)] = v
    return out


class _Ratio:
    """A Laurent monomial times a unit power series (exact, truncated)."""

    __slots__ = ("mono", "unit")

    def __init__(self, mono, unit):
        self.mono = tuple(mono)
        self.unit = unit

    def __mul__(self, other):
        return _Ratio(tuple(a + b for a, b in zip(self.mono, other.mono)), self.unit * other.unit)

    def __truediv__(self, other):
        c = other.unit.constant
        inv = geometric_expand(other.unit.scale(1 / c), -1).scale(1 / c)
        return _Ratio(tuple(a - b for a, b in zip(self.mono, other.mono)), self.unit * inv)

    def series(self):
        if any(x < 0 for x in self.mono):
            raise ValueError("negative exponent in a substitution series")
        lat = self.unit.lattice
        return self.unit * TruncatedSeries.monomial(lat, self.mono, self.unit.N)

    def __radd__(self, other):
        return self.__add__(other)

    def __add__(self, other):
        if isinstance(other, _Ratio):
            s = self.series() + other.series()
        else:
            s = self.series() + other
        if s.constant == 0:
            raise ValueError("sum without constant term")
        return _Ratio((0,) * len(self.mono), s)


def _y_ratio(n, N, r2, r1):
    """y_{r2,r1} = 1/(z_{r1} z_{r2} - 1) = m/(1 - m), m = 1/(z_{r1} z_{r2})."""
    zexp = _zvec(n, [(r1, -1), (r2, -1)])
    mono = _ratio_mono(SP, n, zexp)
    return _Ratio(mono, _one_minus_inverse(SP, n, zexp, N))


def y_value(z, r2, r1):
    return 1 / (z[r1 - 1] * z[r2 - 1] - 1)


def _w_initial(n, y):
    """The starting w variables, keyed (r1, r2) with r1 <= n-1 and r2 >= 2."""
    w = {}
    for r1 in range(2, n):
        for r2 in range(r1, n):
            # key (r2, r1): first index >= second
            num = [(r2 + t, r1 + t) for t in range(0, n - r2)]
            den = [(r2 + 1 + t, r1 + t) for t in range(0, n - r2)]
            w[(r2, r1)] = _prod_ratio(y, num, den)
    for k in range(1, n):
        w[(k, n)] = y[(n, k)]
    for r1 in range(1, n - 1):
        for r2 in range(r1 + 1, n):
            num = [(r2 + t, r1 + t) for t in range(0, n - r2 + 1)]
            den = [(r2 + t, r1 + 1 + t) for t in range(0, n - r2)]
            w[(r1, r2)] = _prod_ratio(y, num, den)
    return w


def _prod_ratio(y, num, den):
    acc = None
    for key in num:
        acc = y[key] if acc is None else acc * y[key]
    for key in den:
        acc = acc / y[key]
    return acc


def _apply(w, key, factor, divide):
    if key in w:
        w[key] = w[key] / factor if divide else w[key] * factor


def w_stages(n, y):
    """All stages w^(m), m = 2n down to 1, of the descending recursion.

    Every stage is a map over the same keys; entries not touched by a step
    carry over unchanged, and rules that name a key outside the starting set
    are skipped.
    """
    stages = {2 * n: _w_initial(n, y)}
    for k in range(n, 1, -1):
        # (2k) -> (2k-1)
        cur = stages[2 * k]
        nxt = dict(cur)
        iota = max(1, 2 * k - 1 - n)
        for r in range(iota, k - 1):
            G = _one_plus(_get(cur, (r, 2 * k - r - 1)), _get(cur, (2 * k - r - 2, r + 1)))
            if G is None:
                continue
            for s in range(1, r + 1):
                _apply(nxt, (2 * k - 2 - 2 * r + s, s), G, False)
                _apply(nxt, (s, 2 * k - 2 - 2 * r + s), G, False)
                _apply(nxt, (2 * k - 2 - 2 * r + s, s + 1), G, True)
                _apply(nxt, (s, 2 * k - 1 - 2 * r + s), G, True)
        if (k - 1, k) in cur:
            H = 1 + cur[(k - 1, k)]
            for r in range(1, k):
                _apply(nxt, (r, r), H, False)
            for s in range(1, k - 1):
                _apply(nxt, (s, s + 1), H, True)
        stages[2 * k - 1] = nxt
        # (2k-1) -> (2k-2), i.e. the odd-to-even step with k' = k-1
        kk = k - 1
        cur = nxt
        nxt = dict(cur)
        ell = max(1, 2 * kk - n)
        for r in range(ell, kk):
            F = _one_plus(_get(cur, (r, 2 * kk - r)), _get(cur, (2 * kk - r - 1, r + 1)))
            if F is None:
                continue
            for s in range(1, r + 1):
                _apply(nxt, (2 * kk - 1 - 2 * r + s, s), F, False)
                _apply(nxt, (s, 2 * kk - 1 - 2 * r + s), F, False)
                _apply(nxt, (2 * kk - 1 - 2 * r + s, s + 1), F, True)
                _apply(nxt, (s, 2 * kk - 2 * r + s), F, True)
        stages[2 * kk] = nxt
    return stages


def _get(w, key):
    return w.get(key)


def _one_plus(*ws, weight=1):
    """1 + weight * (sum of the defined w's), or None when none is defined."""
    ws = [w for w in ws if w is not None]
    if not ws:
        return None
    acc = 1
    for w in ws:
        acc = acc + (w if weight == 1 else w * weight)
    return acc


def _times(acc, factor):
    return acc if factor is None else acc * factor


def _xi_C_generic(n, y, stages, variant, const, diag):
    """xi^C keyed (r2, r1), r1 <= r2, from y values and w stages.

    ``const(c)`` turns a rational constant into the arithmetic in use.
    ``diag`` selects the correction factor of the diagonal entries:
    ``single`` uses 1 + w, ``doubled`` uses 1 + 2w.
    """
    def ychain(r2, r1):
        keys = [(r2 + t, r1 + t) for t in range(0, n - r2)]
        keys += [(n, m) for m in range(n + r1 - r2, n + 1)]
        acc = None
        for key in keys:
            acc = y[key] if acc is None else acc * y[key]
        return acc

    def wst(m, key):
        return _get(stages[m], key)

    out = {}
    for i in range(1, n + 1):
        acc = None
        for m in range(i, n + 1):
            acc = y[(n, m)] if acc is None else acc * y[(n, m)]
        out[(n, i)] = acc * const(Fraction((-1) ** (n + i + 1), 2 ** (1 + (i == n))))
    for i in range(1, n):
        acc = None
        for m in range(i, n + 1):
            acc = y[(m, m)] if acc is None else acc * y[(m, m)]
        for k in range(i, n):
            sup = 2 * k if variant == W_EVEN else 2 * k + 2
            weight = 1 if diag == DIAG_SINGLE else const(Fraction(2))
            acc = _times(acc, _one_plus(wst(sup, (k, k + 1)), weight=weight))
        out[(i, i)] = acc * const(Fraction(-1, 4))
    for r1 in range(1, n - 1):
        for r2 in range(r1 + 1, n):
            acc = ychain(r2, r1)
            d = r2 - r1
            if d % 2:
                for k in range((d + 3) // 2, n):
                    a = ((2 * k - d - 1) // 2, (2 * k + d + 1) // 2)
                    b = ((2 * k + d - 1) // 2, (2 * k - d + 1) // 2)
                    acc = _times(acc, _one_plus(wst(2 * k + 1, a), wst(2 * k + 1, b)))
            else:
                for k in range((d + 2) // 2, n):
                    a = ((2 * k - d) // 2, (2 * k + d + 2) // 2)
                    b = ((2 * k + d) // 2, (2 * k - d + 2) // 2)
                    acc = _times(acc, _one_plus(wst(2 * k + 2, a), wst(2 * k + 2, b)))
            out[(r2, r1)] = acc * const(Fraction((-1) ** (r1 + r2 + 1), 2))
    return out


def xi_C(n, N, variant=W_SHIFTED, diag=DIAG_DOUBLED):
    """The xi^C substitutions keyed by (n+s2, s1), s1 <= s2, as series in r_i and u."""
    y = {(r2, r1): _y_ratio(n, N, r2, r1) for r2 in range(1, n + 1) for r1 in range(1, r2 + 1)}
    stages = w_stages(n, y)
    lat = expansion_lattice(SP, n)

    def const(c):
        return _Ratio((0,) * lat.rank, TruncatedSeries.const(lat, N, c))

    raw = _xi_C_generic(n, y, stages, variant, const, diag)
    return {(n + r2, r1): v.series() for (r2, r1), v in raw.items()}


def xi_C_value(n, z, variant=W_SHIFTED, diag=DIAG_DOUBLED):
    """Direct numeric evaluation of the xi^C expressions at the point z."""
    y = {(r2, r1): y_value(z, r2, r1) for r2 in range(1, n + 1) for r1 in range(1, r2 + 1)}
    stages = w_stages(n, y)
    raw = _xi_C_generic(n, y, stages, variant, lambda c: complex(c), diag)
    return {(n + r2, r1): v for (r2, r1), v in raw.items()}


def expansion_point(kind, n, z):
    assign = {f"r{i}": complex(z[i]) / complex(z[i - 1]) for i in range(1, n)}
    if kind == SP:
        assign["u"] = complex(z[n - 1]) ** -2
    return assign


# ---------------------------------------------------------------- closed forms

def closed_trace_gl2(lam, mu, N):
    """z^lambda (1 - r)^-1 2F1(mu+1, -mu; lambda_2 - lambda_1; -r/(1 - r))."""
    lam = tuple(as_scalar(x, EXACT) for x in lam)
    mu = as_scalar(mu, EXACT)
    if len(lam) != 2:
        raise ValueError("gl(2) needs two weight entries")
    sigma = lam[0] - lam[1]
    if sigma.denominator == 1 and sigma >= 0:
        raise PreconditionError(f"sigma = {sigma} is a nonnegative integer")
    lat = expansion_lattice(GL, 2)
    inv = _one_minus_inverse(GL, 2, [-1, 1], N)
    xi = (TruncatedSeries.var(lat, "r1", N) * inv).scale(-1)
    f = gauss_2f1(mu + 1, -mu, -sigma, N)
    body = inv * f.compose({"z": xi}, lat, N)
    return TraceSeries(GL, 2, lam, body, {"form": "gauss"})


def closed_trace_A(lam, mu, n, N, xi_variant=XI_TARGET, theta_variant=THETA_SIGMA):
    """Prefactor times X_A(mu+1, .., mu+1, -mu; theta) composed with xi^A."""
    lam = tuple(as_scalar(x, EXACT) for x in lam)
    mu = as_scalar(mu, EXACT)
    if len(lam) != n:
        raise ValueError(f"need {n} weight entries")
    sigma = _check_gl_weight(lam, mu, N)
    if theta_variant == THETA_SIGMA:
        theta = -sigma
    elif theta_variant == THETA_LAMBDA:
        theta = lam[-1] - mu
    else:
        raise ValueError(f"unknown theta variant {theta_variant!r}")
    lat = expansion_lattice(GL, n)
    pre = TruncatedSeries.one(lat, N)
    for j in range(2, n + 1):
        for k in range(1, j):
            pre = pre * _one_minus_inverse(GL, n, _zvec(n, [(j, 1), (k, -1)]), N)
    xi = xi_A(n, N, xi_variant, GL)
    if any(s.constant != 0 for s in xi.values()):
        raise PreconditionError(
            f"xi variant {xi_variant} has a nonzero constant term; the composition is not a "
            "formal power series in the expansion variables")
    params = HyperParams.make("A", [mu + 1] * (n - 1) + [-mu], theta)
    X = build_X(params, N)
    body = pre * X.compose(xi, lat, N)
    return TraceSeries(GL, n, lam, body, {"xi": xi_variant, "theta": theta_variant})


def closed_trace_C(lam_n, n, N, prefactor_variant=PRE_CARTAN, w_variant=W_SHIFTED,
                   diag_variant=DIAG_DOUBLED):
    """Prefactor times X_C(1/2, .., 1/2; -lambda_n) composed with xi^A and xi^C."""
    lam_n = as_scalar(lam_n, EXACT)
    _check_sp_weight(sp_weight(lam_n, n), N)
    lat = expansion_lattice(SP, n)
    pre = TruncatedSeries.one(lat, N)
    for r2 in range(2, n + 1):
        for r1 in range(1, r2):
            pre = pre * _one_minus_inverse(SP, n, _zvec(n, [(r2, 1), (r1, -1)]), N)
    for s2 in range(1, n + 1):
        for s1 in range(1, s2 + 1):
            pre = pre * _one_minus_inverse(SP, n, _zvec(n, [(s1, -1), (s2, -1)]), N)
    subs = dict(xi_A(n, N, XI_TARGET, SP)) if n > 1 else {}
    subs.update(xi_C(n, N, w_variant, diag_variant))
    params = HyperParams.make("C", [HALF] * n, -lam_n)
    X = build_X(params, N)
    body = pre * X.compose(subs, lat, N)
    if prefactor_variant == PRE_PRINTED:
        prefactor = tuple([-HALF] * (n - 1) + [lam_n])
    elif prefactor_variant == PRE_CARTAN:
        prefactor = sp_cartan_values(sp_weight(lam_n, n))
    else:
        raise ValueError(f"unknown prefactor variant {prefactor_variant!r}")
    return TraceSeries(SP, n, prefactor, body,
                       {"prefactor": prefactor_variant, "w": w_variant, "diag": diag_variant})


# ---------------------------------------------------------------- comparison

def _compare_series(identity, oracle, closed, N, seed=None, notes=""):
    d, where = oracle.body.discrepancy(closed.body, N)
    pre_ok = tuple(oracle.prefactor) == tuple(closed.prefactor)
    lat = oracle.body.lattice
    worst = None
    if where is not None:
        worst = " ".join(f"{lat.key_str(k)}^{x}" for k, x in zip(lat.keys, where) if x) or "1"
    if not pre_ok:
        notes = (notes + "; " if notes else "") + (
            f"prefactor mismatch: oracle {[scalar_str(x) for x in oracle.prefactor]} vs "
            f"closed {[scalar_str(x) for x in closed.prefactor]}")
    return CheckReport(identity=identity, mode=EXACT, passed=pre_ok and d == 0,
                       max_discrepancy=d, truncation=N, worst=worst, seed=seed, notes=notes,
                       details={"variant": closed.variant, "prefactorMatch": pre_ok})


def _variant_grid(kind, n):
    if kind == GL:
        if n == 2:
            return [{"form": "gauss"}] + [{"xi": x, "theta": t}
                                          for x in (XI_TARGET, XI_SOURCE)
                                          for t in (THETA_SIGMA, THETA_LAMBDA)]
        return [{"xi": x, "theta": t} for x in (XI_TARGET, XI_SOURCE)
                for t in (THETA_SIGMA, THETA_LAMBDA)]
    return [{"prefactor": p, "w": w, "diag": d} for p in (PRE_PRINTED, PRE_CARTAN)
            for w in (W_EVEN, W_SHIFTED) for d in (DIAG_SINGLE, DIAG_DOUBLED)]


def _closed(kind, lam, mu, n, N, variant):
    if kind == GL:
        if variant.get("form") == "gauss":
            return closed_trace_gl2(lam, mu, N)
        return closed_trace_A(lam, mu, n, N, variant["xi"], variant["theta"])
    return closed_trace_C(lam[-1], n, N, variant["prefactor"], variant["w"], variant["diag"])


def compare_trace(kind, lam, mu, n, N, variant=None, seed=None, oracle=None):
    """Exact oracle-versus-closed-form comparison.

    With ``variant`` None every reading of the ambiguous closed form is tried;
    the report passes when at least one does and lists which ones pass.
    """
    identity = "trace-" + ("gl2" if kind == GL and n == 2 else "gln" if kind == GL else "sp")
    lam = tuple(as_scalar(x, EXACT) for x in lam)
    oracle = oracle or trace_oracle(kind, lam, mu, N)
    variants = [variant] if variant else _variant_grid(kind, n)
    subs = []
    for v in variants:
        label = ",".join(f"{k}={x}" for k, x in sorted(v.items()))
        try:
            closed = _closed(kind, lam, mu, n, N, v)
        except PreconditionError as exc:
            subs.append((label, CheckReport(identity=identity, mode=EXACT, passed=False,
                                            max_discrepancy=float("inf"), truncation=N,
                                            notes=str(exc))))
            continue
        subs.append((label, _compare_series(identity, oracle, closed, N, seed)))
    winners = [label for label, r in subs if r.passed]
    best = min((r for _, r in subs), key=lambda r: float(r.max_discrepancy))
    notes = (f"{Algebra(kind, n).label}, lambda={[scalar_str(x) for x in lam]}, "
             f"mu={scalar_str(as_scalar(mu, EXACT))}; passing variants: {winners or 'none'}")
    return CheckReport(identity=identity, mode=EXACT, passed=bool(winners),
                       max_discrepancy=0 if winners else best.max_discrepancy,
                       truncation=N, worst=None if winners else best.worst, seed=seed,
                       notes=notes,
                       details={"variants": {label: r.to_dict() for label, r in subs},
                                "winners": winners})


def act_gl2(generator, v):
    if v.module.alg != Algebra(GL, 2):
        raise ValueError("vector is not in a gl(2) module")
    return v.act(generator)


def act_gln(generator, v):
    if v.module.alg.kind != GL:
        raise ValueError("vector is not in a gl(n) module")
    return v.act(generator)


def act_sp2n(generator, v):
    if v.module.alg.kind != SP:
        raise ValueError("vector is not in an sp(2n) module")
    return v.act(generator)
