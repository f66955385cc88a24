"""Scalars, Pochhammer symbols, lattice multi-indices and truncated series.

Two arithmetic modes are supported.  ``"exact"`` uses :class:`fractions.Fraction`
coefficients, ``"float"`` uses Python ``complex``.  A series carries its mode and
refuses to combine with a series of the other mode.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

EXACT = "exact"
FLOAT = "float"


class ModeError(TypeError):
    """Raised when exact and floating values are combined."""


class PreconditionError(ValueError):
    """A mathematical precondition (pole, admissibility, domain) is violated."""


# ---------------------------------------------------------------- scalars

def parse_scalar(text, mode=EXACT):
    """Parse ``"p/q"``, an integer or a decimal into a scalar of ``mode``."""
    if isinstance(text, (Fraction, int)) and not isinstance(text, bool):
        return as_scalar(text, mode)
    if isinstance(text, (float, complex)):
        return as_scalar(text, mode)
    s = str(text).strip()
    if not s:
        raise ValueError("empty scalar")
    if mode == EXACT:
        if "/" in s:
            p, q = s.split("/", 1)
            num, den = Fraction(p.strip()), Fraction(q.strip())
            if den == 0:
                raise ValueError(f"zero denominator in {s!r}")
            return num / den
        return Fraction(s)
    if "/" in s:
        p, q = s.split("/", 1)
        den = float(q)
        if den == 0:
            raise ValueError(f"zero denominator in {s!r}")
        return complex(float(p) / den)
    return complex(s.replace("i", "j"))


def as_scalar(x, mode):
    if mode == EXACT:
        if isinstance(x, bool) or not isinstance(x, (int, Fraction)):
            raise ModeError(f"{type(x).__name__} value {x!r} in exact mode")
        return Fraction(x)
    if mode == FLOAT:
        if isinstance(x, (int, Fraction, float, complex)) and not isinstance(x, bool):
            return complex(x)
        raise ModeError(f"cannot use {x!r} in float mode")
    raise ValueError(f"unknown mode {mode!r}")


def mode_of(x):
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return EXACT
    if isinstance(x, (float, complex)):
        return FLOAT
    raise ModeError(f"not a scalar: {x!r}")


def scalar_str(x):
    """Serialize a scalar: exact values as ``"p/q"``, floats as ``[re, im]``."""
    if isinstance(x, Fraction) or isinstance(x, int):
        x = Fraction(x)
        return f"{x.numerator}/{x.denominator}"
    x = complex(x)
    return [x.real, x.imag]


def scalar_from_json(obj, mode):
    if mode == EXACT:
        return parse_scalar(obj, EXACT)
    return complex(obj[0], obj[1])


def rising(c, i):
    """Rising factorial (c)_i = c(c+1)...(c+i-1)."""
    if i < 0:
        raise ValueError("negative Pochhammer length")
    out = Fraction(1) if mode_of(c) == EXACT else complex(1)
    for k in range(i):
        out *= c + k
    return out


def falling(c, i):
    """Falling factorial <c>_i = c(c-1)...(c-i+1)."""
    if i < 0:
        raise ValueError("negative Pochhammer length")
    out = Fraction(1) if mode_of(c) == EXACT else complex(1)
    for k in range(i):
        out *= c - k
    return out


# ---------------------------------------------------------------- lattices

@dataclass(frozen=True)
class Lattice:
    """An ordered variable set.

    ``kind`` is one of ``A``, ``C``, ``D`` (the path lattices), ``line`` (one
    variable), ``ratio`` / ``spratio`` (trace expansion variables) or
    ``custom``.  ``keys`` lists the variables in their fixed order; lattice
    variables are pairs ``(j, k)``.
    """

    kind: str
    n: int
    keys: tuple

    @property
    def rank(self):
        return len(self.keys)

    def index(self, key):
        try:
            return self._positions()[key]
        except KeyError:
            raise KeyError(f"unknown variable {key!r} for lattice {self.kind}{self.n}") from None

    def _positions(self):
        return _positions(self)

    def key_str(self, key):
        if isinstance(key, tuple):
            return ",".join(str(k) for k in key)
        return str(key)

    def key_from_str(self, s):
        for k in self.keys:
            if self.key_str(k) == s:
                return k
        raise KeyError(s)


@lru_cache(maxsize=None)
def _positions(lat):
    return {k: i for i, k in enumerate(lat.keys)}


def a_pairs(n):
    return tuple((j, k) for j in range(2, n + 1) for k in range(1, j))


def c_pairs(n, diagonal=True):
    out = []
    for i in range(1, n + 1):
        for j in range(1, i + 1 if diagonal else i):
            out.append((n + i, j))
    return tuple(out)


@lru_cache(maxsize=None)
def lattice(kind, n=1):
    """The standard variable sets.

    A: z_{j,k}, 1<=k<j<=n, ordered (2,1),(3,1),(3,2),(4,1),...
    C: the A part followed by z_{n+i,j}, j<=i, ordered (n+1,1),(n+2,1),(n+2,2),...
    D: as C without the pairs (n+i,i).
    """
    if n < 1:
        raise ValueError("rank must be positive")
    if kind == "A":
        return Lattice("A", n, a_pairs(n))
    if kind == "C":
        return Lattice("C", n, a_pairs(n) + c_pairs(n))
    if kind == "D":
        return Lattice("D", n, a_pairs(n) + c_pairs(n, diagonal=False))
    if kind == "line":
        return Lattice("line", 1, ("z",))
    if kind == "ratio":
        return Lattice("ratio", n, tuple(f"r{i}" for i in range(1, n)))
    if kind == "spratio":
        return Lattice("spratio", n, tuple(f"r{i}" for i in range(1, n)) + ("u",))
    raise ValueError(f"unknown lattice kind {kind!r}")


def custom_lattice(keys, n=1):
    return Lattice("custom", n, tuple(keys))


@dataclass(frozen=True)
class MultiIndex:
    lattice: Lattice
    exps: tuple

    def __getitem__(self, key):
        pos = _positions(self.lattice).get(key)
        return 0 if pos is None else self.exps[pos]

    @property
    def degree(self):
        return sum(self.exps)

    def items(self):
        return [(k, e) for k, e in zip(self.lattice.keys, self.exps) if e]

    def __str__(self):
        parts = [f"e[{self.lattice.key_str(k)}]^{e}" for k, e in self.items()]
        return "*".join(parts) or "1"


def compositions(m, d):
    """Exponent tuples of length m and total d, descending lexicographic."""
    if m == 0:
        if d == 0:
            yield ()
        return
    if m == 1:
        yield (d,)
        return
    for first in range(d, -1, -1):
        for rest in compositions(m - 1, d - first):
            yield (first,) + rest


def multi_indices(kind, n, d):
    """All multi-indices of total degree exactly d on the given lattice."""
    if d < 0:
        raise ValueError("negative degree")
    lat = kind if isinstance(kind, Lattice) else lattice(kind, n)
    return [MultiIndex(lat, e) for e in compositions(lat.rank, d)]


def exps_upto(m, N):
    for d in range(N + 1):
        yield from compositions(m, d)


@dataclass(frozen=True)
class LatticeStats:
    """Row/column statistics of a multi-index; vectors are 0-based (entry i-1 is index i)."""

    under: tuple
    over: tuple
    c: tuple = None
    c_total: int = None
    b: tuple = None
    b_total: int = None
    d: tuple = None
    d_total: int = None


def stats(beta):
    lat = beta.lattice
    n = lat.n
    under = [0] * n
    over = [0] * n
    for j, k in a_pairs(n):
        e = beta[(j, k)]
        under[j - 1] += e
        over[k - 1] += e
    if lat.kind == "A":
        return LatticeStats(tuple(under), tuple(over))
    if lat.kind == "C":
        c = [0] * n
        b = [0] * n
        for i in range(1, n + 1):
            for j in range(1, i + 1):
                e = beta[(n + i, j)]
                # entry (n+i, j) feeds row i and column j; the diagonal twice for C
                c[i - 1] += e
                c[j - 1] += e
                b[i - 1] += e
                if j != i:
                    b[j - 1] += e
        tot = sum(beta[p] for p in c_pairs(n))
        return LatticeStats(tuple(under), tuple(over), tuple(c), tot, tuple(b), tot)
    if lat.kind == "D":
        d = [0] * n
        for i in range(1, n + 1):
            for j in range(1, i):
                e = beta[(n + i, j)]
                d[i - 1] += e
                d[j - 1] += e
        tot = sum(beta[p] for p in c_pairs(n, diagonal=False))
        return LatticeStats(tuple(under), tuple(over), d=tuple(d), d_total=tot)
    raise ValueError(f"no statistics for lattice kind {lat.kind!r}")


# ---------------------------------------------------------------- series

def _sort_key(exps):
    return (sum(exps), tuple(-e for e in exps))


class TruncatedSeries:
    """Sparse multivariate power series truncated at total degree ``N``.

    Terms map exponent tuples (ordered as ``lattice.keys``) to nonzero
    coefficients.  Instances are treated as immutable.
    """

    __slots__ = ("lattice", "N", "mode", "terms")

    def __init__(self, lat, N, terms=None, mode=EXACT, check=True):
        if N < 0:
            raise ValueError("negative truncation")
        self.lattice = lat
        self.N = N
        self.mode = mode
        clean = {}
        if terms:
            m = lat.rank
            for e, c in terms.items():
                if check:
                    if len(e) != m or any(x < 0 for x in e):
                        raise ValueError(f"bad exponent {e} for {lat.kind}{lat.n}")
                    c = as_scalar(c, mode)
                if c != 0 and sum(e) <= N:
                    clean[tuple(e)] = c
        self.terms = clean

    # construction helpers
    @classmethod
    def one(cls, lat, N, mode=EXACT):
        return cls.const(lat, N, 1, mode)

    @classmethod
    def const(cls, lat, N, c, mode=EXACT):
        return cls(lat, N, {(0,) * lat.rank: c}, mode)

    @classmethod
    def var(cls, lat, key, N, mode=EXACT, coeff=1):
        e = [0] * lat.rank
        e[lat.index(key)] = 1
        return cls(lat, N, {tuple(e): coeff}, mode)

    @classmethod
    def monomial(cls, lat, exps, N, coeff=1, mode=EXACT):
        if isinstance(exps, dict):
            e = [0] * lat.rank
            for k, v in exps.items():
                e[lat.index(k)] = v
            exps = tuple(e)
        return cls(lat, N, {tuple(exps): coeff}, mode)

    def _new(self, terms, N=None):
        s = TruncatedSeries.__new__(TruncatedSeries)
        s.lattice = self.lattice
        s.N = self.N if N is None else N
        s.mode = self.mode
        s.terms = {e: c for e, c in terms.items() if c != 0 and sum(e) <= s.N}
        return s

    def _zero(self):
        return Fraction(0) if self.mode == EXACT else complex(0)

    def _compat(self, other):
        if not isinstance(other, TruncatedSeries):
            raise TypeError("expected a TruncatedSeries")
        if other.lattice != self.lattice:
            raise ValueError("variable-set mismatch")
        if other.mode != self.mode:
            raise ModeError(f"cannot combine {self.mode} and {other.mode} series")

    def _coerce(self, x):
        if isinstance(x, TruncatedSeries):
            self._compat(x)
            return x
        return TruncatedSeries.const(self.lattice, self.N, as_scalar(x, self.mode), self.mode)

    # queries
    def coeff(self, exps):
        if isinstance(exps, MultiIndex):
            exps = exps.exps
        return self.terms.get(tuple(exps), self._zero())

    @property
    def constant(self):
        return self.coeff((0,) * self.lattice.rank)

    def degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def min_degree(self):
        return min((sum(e) for e in self.terms), default=None)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: _sort_key(t[0]))

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.sorted_terms())

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (self.lattice == other.lattice and self.N == other.N
                and self.mode == other.mode and self.terms == other.terms)

    def __hash__(self):
        return hash((self.lattice, self.N, self.mode, frozenset(self.terms.items())))

    def __repr__(self):
        return f"TruncatedSeries({self.lattice.kind}{self.lattice.n}, N={self.N}, {self.to_str()})"

    def to_str(self, limit=12):
        parts = []
        for e, c in self.sorted_terms()[:limit]:
            mono = "*".join(
                f"{self.lattice.key_str(k)}^{x}" if x > 1 else self.lattice.key_str(k)
                for k, x in zip(self.lattice.keys, e) if x)
            parts.append(f"({c})" + (f"*{mono}" if mono else ""))
        if len(self.terms) > limit:
            parts.append("...")
        return " + ".join(parts) or "0"

    # arithmetic
    def truncate(self, N):
        return self._new(self.terms, min(N, self.N))

    def __add__(self, other):
        other = self._coerce(other)
        N = min(self.N, other.N)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return self._new(out, N)

    __radd__ = __add__

    def __neg__(self):
        return self._new({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c):
        c = as_scalar(c, self.mode)
        return self._new({e: c * v for e, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            return self.scale(other)
        self._compat(other)
        N = min(self.N, other.N)
        out = {}
        b_items = [(e, sum(e), c) for e, c in other.terms.items()]
        for ea, ca in self.terms.items():
            da = sum(ea)
            if da > N:
                continue
            for eb, db, cb in b_items:
                if da + db > N:
                    continue
                e = tuple(x + y for x, y in zip(ea, eb))
                out[e] = out.get(e, 0) + ca * cb
        return self._new(out, N)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("integer power must be a nonnegative int; use geometric_expand")
        out = TruncatedSeries.one(self.lattice, self.N, self.mode)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    # differential operators
    def euler_op(self, keys):
        """Apply the sum of z*d/dz over ``keys``."""
        pos = [self.lattice.index(k) for k in keys]
        return self._new({e: c * sum(e[p] for p in pos) for e, c in self.terms.items()})

    def partial(self, key):
        p = self.lattice.index(key)
        out = {}
        for e, c in self.terms.items():
            if e[p]:
                f = list(e)
                f[p] -= 1
                out[tuple(f)] = c * e[p]
        return self._new(out, max(self.N - 1, 0))

    def mul_var(self, key):
        """Multiply by a variable, keeping the truncation bound."""
        p = self.lattice.index(key)
        out = {}
        for e, c in self.terms.items():
            f = list(e)
            f[p] += 1
            out[tuple(f)] = c
        return self._new(out)

    # evaluation and composition
    def eval_at(self, assignment):
        vals = []
        for k in self.lattice.keys:
            if k not in assignment:
                raise KeyError(f"no value for variable {self.lattice.key_str(k)}")
            vals.append(assignment[k])
        total = self._zero() if self.mode == EXACT else complex(0)
        for e, c in self.sorted_terms():
            term = c
            for v, x in zip(vals, e):
                if x:
                    term = term * v ** x
            total = total + term
        return total

    def compose(self, subs, target, N=None):
        """Substitute a series in ``target`` for every variable.

        Every substituted series must have zero constant term so that the
        result is exact to order ``N`` (default: the smallest bound involved).
        """
        if N is None:
            N = min([self.N] + [s.N for s in subs.values()])
        inner = []
        for k in self.lattice.keys:
            s = subs[k]
            if s.lattice != target or s.mode != self.mode:
                raise ValueError("substitution series must share the target variables and mode")
            if s.constant != 0:
                raise ValueError(f"substitution for {self.lattice.key_str(k)} has a constant term")
            inner.append(s.truncate(N))
        powers = [[TruncatedSeries.one(target, N, self.mode)] for _ in inner]
        out = TruncatedSeries(target, N, mode=self.mode)
        acc = {}
        for e, c in self.sorted_terms():
            if sum(e) > N:
                continue
            term = None
            for i, x in enumerate(e):
                if not x:
                    continue
                while len(powers[i]) <= x:
                    powers[i].append(powers[i][-1] * inner[i])
                term = powers[i][x] if term is None else term * powers[i][x]
            if term is None:
                z = (0,) * target.rank
                acc[z] = acc.get(z, 0) + c
                continue
            for f, v in term.terms.items():
                acc[f] = acc.get(f, 0) + c * v
        out = TruncatedSeries(target, N, acc, self.mode, check=False)
        return out

    def retarget(self, target, key_map=None):
        """Re-express this series over a larger variable set."""
        key_map = key_map or {}
        pos = [target.index(key_map.get(k, k)) for k in self.lattice.keys]
        out = {}
        for e, c in self.terms.items():
            f = [0] * target.rank
            for p, x in zip(pos, e):
                f[p] += x
            out[tuple(f)] = c
        return TruncatedSeries(target, self.N, out, self.mode, check=False)

    def map_coeffs(self, fn, mode=None):
        mode = mode or self.mode
        return TruncatedSeries(self.lattice, self.N, {e: fn(c) for e, c in self.terms.items()}, mode)

    def to_float(self):
        return TruncatedSeries(self.lattice, self.N,
                               {e: complex(c) for e, c in self.terms.items()}, FLOAT, check=False)

    # comparison
    def discrepancy(self, other, upto=None):
        """Largest coefficient difference up to degree ``upto``.

        Returns ``(magnitude, worst exponent tuple or None)``; the magnitude is
        exact for exact series.
        """
        self._compat(other)
        upto = min(self.N, other.N) if upto is None else upto
        worst, where = 0, None
        for e in sorted(set(self.terms) | set(other.terms), key=_sort_key):
            if sum(e) > upto:
                continue
            d = abs(self.coeff(e) - other.coeff(e))
            if d > worst:
                worst, where = d, e
        return worst, where

    # serialization
    def to_json(self):
        lat = self.lattice
        terms = []
        for e, c in self.sorted_terms():
            terms.append({"exps": {lat.key_str(k): x for k, x in zip(lat.keys, e) if x},
                          "coeff": scalar_str(c)})
        out = {"lattice": lat.kind, "n": lat.n, "maxDegree": self.N, "mode": self.mode,
               "terms": terms}
        if lat.kind == "custom":
            out["keys"] = [lat.key_str(k) for k in lat.keys]
        return out

    @classmethod
    def from_json(cls, obj):
        kind, n = obj["lattice"], obj["n"]
        if kind == "custom":
            lat = custom_lattice(tuple(obj["keys"]), n)
        else:
            lat = lattice(kind, n)
        mode = obj["mode"]
        terms = {}
        for t in obj["terms"]:
            e = [0] * lat.rank
            for ks, x in t["exps"].items():
                e[lat.index(lat.key_from_str(ks))] = int(x)
            terms[tuple(e)] = scalar_from_json(t["coeff"], mode)
        return cls(lat, obj["maxDegree"], terms, mode)


def geometric_expand(form, exponent, N=None):
    """(form)^exponent via the binomial series; ``form`` must have constant term 1."""
    N = form.N if N is None else min(N, form.N)
    if form.constant != 1:
        raise PreconditionError("binomial expansion needs constant term exactly 1")
    exponent = as_scalar(exponent, form.mode)
    rest = (form - 1).truncate(N)
    out = TruncatedSeries.one(form.lattice, N, form.mode)
    if not rest.terms:
        return out
    power = TruncatedSeries.one(form.lattice, N, form.mode)
    lowest = rest.min_degree()
    k = 1
    while k * lowest <= N:
        power = power * rest
        coef = falling(exponent, k) / math.factorial(k)
        if coef != 0:
            out = out + power.scale(coef)
        k += 1
    return out


def binomial_count(d, m):
    return math.comb(d + m - 1, d) if m else (1 if d == 0 else 0)


__all__ = [
    "EXACT", "FLOAT", "ModeError", "PreconditionError", "parse_scalar", "as_scalar",
    "mode_of", "scalar_str", "rising", "falling", "Lattice", "lattice", "custom_lattice",
    "MultiIndex", "multi_indices", "compositions", "exps_upto", "LatticeStats", "stats",
    "TruncatedSeries", "geometric_expand", "a_pairs", "c_pairs",
]
