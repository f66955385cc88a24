"""Command-line front end.

    pathhyper eval 2f1 --a 1 --b 1 --c 1 --trunc 4 --at 0.5
    pathhyper eval xa --n 2 --tau '["1/2", "1/3"]' --theta 2 --trunc 6 --at 0
    pathhyper check inverse-5.28 --n 4
    pathhyper suite --profile quick --json out.json
    pathhyper trace --algebra gl --n 2 --trunc 8 --lambda '["1/2", "-1/3"]' --mu 3/2
    pathhyper weyl-check --theorem 6.3 --n 3 --mu 0.7 --points 20 --seed 1

Structured output is JSON on standard output; a one-line summary goes to
standard error.  Exit codes: 0 pass, 1 check failed, 2 usage or parse error,
3 mathematical precondition violated.
"""
from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from fractions import Fraction

from . import identities as ids
from . import integrable as itg
from . import verma
from .core import EXACT, FLOAT, PreconditionError, parse_scalar
from .hyperfun import HyperParams, build_X, gauss_2f1
from .pathpoly import check_inverse_identity
from .report import CheckReport, _jsonable

ENV_SEED = "PATHHYPER_SEED"
EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_PRECONDITION = 0, 1, 2, 3

CHECK_IDS = (
    "contiguity-a", "contiguity-b", "contiguity-c", "contiguity-d", "pde-a", "pde-c", "pde-bd",
    "kernel-product", "gauss-ode", "integral-a", "inverse-5.28",
    "weyl-6.2", "weyl-6.3", "weyl-6.4", "weyl-6.5", "laplacian-eigen", "identity-6.8",
    "theorem-2.2", "theorem-7.1", "trace-gl2", "trace-gln", "trace-sp",
)


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- parsing helpers

def scalar(text, mode=EXACT):
    try:
        return parse_scalar(text, mode)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise UsageError(f"cannot parse {text!r} as a {mode} scalar: {exc}") from None


def json_arg(text, what):
    if text is None or isinstance(text, (list, dict)):
        return text
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        if what in ("lambda", "tau", "mu"):
            return [x.strip() for x in str(text).split(",")]
        raise UsageError(f"--{what} is not valid JSON: {text!r}") from None


def scalar_list(obj, mode=EXACT):
    if not isinstance(obj, list):
        obj = [obj]
    return [scalar(x, mode) for x in obj]


def default_seed():
    raw = os.environ.get(ENV_SEED)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{ENV_SEED}={raw!r} is not an integer") from None


def emit(obj, output=None):
    text = json.dumps(_jsonable(obj), sort_keys=True)
    print(text)
    if output:
        with open(output, "w") as fh:
            fh.write(text + "\n")


def summary(msg):
    print(msg, file=sys.stderr)


# ---------------------------------------------------------------- eval

def cmd_eval(cfg):
    mode = cfg.mode or EXACT
    fn = (cfg.function or "").lower()
    N = cfg.trunc if cfg.trunc is not None else 8
    if fn == "2f1":
        a, b, c = (scalar(v if v is not None else 1, mode) for v in (cfg.a, cfg.b, cfg.c))
        series = gauss_2f1(a, b, c, N, mode)
    elif fn in ("xa", "xb", "xc", "xd"):
        if cfg.tau is None or cfg.theta is None:
            raise UsageError("eval of a path series needs --tau and --theta")
        tau = scalar_list(json_arg(cfg.tau, "tau"), mode)
        n = cfg.n or len(tau)
        if len(tau) != n:
            raise UsageError(f"--tau has {len(tau)} entries, --n is {n}")
        series = build_X(HyperParams.make(fn[1].upper(), tau, scalar(cfg.theta, mode), mode), N)
    else:
        raise UsageError(f"unknown function {cfg.function!r}; use 2f1, xa, xb, xc or xd")
    out = {"function": fn, "truncation": N, "mode": mode}
    if cfg.at is None:
        out["series"] = series.to_json()
    else:
        point = point_arg(cfg.at, series.lattice, mode)
        value = series.eval_at(point)
        if isinstance(value, Fraction):
            out["exact"] = f"{value.numerator}/{value.denominator}"
            out["value"] = float(value)
        else:
            out["value"] = value.real if value.imag == 0 else [value.real, value.imag]
    emit(out, cfg.output)
    summary(f"eval {fn}: ok")
    return EXIT_PASS


def point_arg(text, lat, mode):
    obj = json_arg(text, "at") if str(text).strip().startswith(("{", "[")) else text
    if isinstance(obj, dict):
        point = {}
        for k in lat.keys:
            name = lat.key_str(k)
            if name not in obj:
                raise UsageError(f"--at is missing variable {name}")
            point[k] = scalar(obj[name], mode)
        return point
    if isinstance(obj, list):
        if len(obj) != lat.rank:
            raise UsageError(f"--at needs {lat.rank} values")
        return {k: scalar(v, mode) for k, v in zip(lat.keys, obj)}
    v = scalar(obj, mode)
    return {k: v for k in lat.keys}


# ---------------------------------------------------------------- check registry

def _params(cfg, family, n, rng, N):
    p = cfg.params or {}
    if "tau" in p:
        tau = scalar_list(p["tau"])
        theta = scalar(p.get("theta", 1))
        if len(tau) != n:
            raise UsageError(f"params tau needs {n} entries")
        return HyperParams.make(family, tau, theta)
    return ids.random_params(family, n, rng, N)


def _n(cfg, default):
    return cfg.n if cfg.n is not None else default


def _N(cfg, default):
    return cfg.trunc if cfg.trunc is not None else default


def _points(cfg, n, seed, default=20, **kw):
    return itg.sample_points(n, cfg.points or default, seed, **kw)


def _exponents(cfg, count, rng):
    p = cfg.params or {}
    raw = p.get("mu", cfg.mu)
    if raw is None:
        return [round(rng.uniform(-2, 2), 6) for _ in range(count)]
    vals = [float(scalar(x, FLOAT).real) for x in (raw if isinstance(raw, list) else [raw])]
    if len(vals) != count:
        raise UsageError(f"need {count} exponent(s), got {len(vals)}")
    return vals


def check_contiguity(family):
    def run(cfg, rng, seed):
        n = _n(cfg, 3 if family == "A" else 2)
        N = _N(cfg, 6 if family == "A" else 5)
        params = _params(cfg, family, n, rng, N)
        if family == "A":
            return ids.check_contiguity_A(params, N, seed)
        return ids.check_contiguity_CBD(params, N, seed, cfg.variant or "auto")
    return run


def run_pde_a(cfg, rng, seed):
    N = _N(cfg, 6)
    return ids.check_pde_A(_params(cfg, "A", _n(cfg, 3), rng, N), N, seed)


def run_pde_c(cfg, rng, seed):
    N = _N(cfg, 5)
    return ids.check_pde_C(_params(cfg, "C", _n(cfg, 2), rng, N), N, seed)


def run_pde_bd(cfg, rng, seed):
    n, N = _n(cfg, 2), _N(cfg, 5)
    return ids.check_pde_BD(_params(cfg, "B", n, rng, N), _params(cfg, "D", n, rng, N), N, seed)


def run_kernel(cfg, rng, seed):
    n, N = _n(cfg, 3), _N(cfg, 6)
    p = cfg.params or {}
    tau = scalar_list(p["tau"]) if "tau" in p else [ids.random_rational(rng) for _ in range(n)]
    return ids.check_kernel_product(tau, n, N, seed)


def run_gauss(cfg, rng, seed):
    p = cfg.params or {}
    N = _N(cfg, 12)
    if all(k in p for k in "abc"):
        a, b, c = (scalar(p[k]) for k in "abc")
    else:
        a, b = ids.random_rational(rng), ids.random_rational(rng)
        while True:
            c = ids.random_rational(rng)
            if not (c.denominator == 1 and c <= 0):
                break
    return ids.check_gauss_ode(a, b, c, N, seed)


def random_integral_params(rng, n):
    tau = [ids.random_rational(rng, span=1) for _ in range(n - 1)]
    tn = Fraction(rng.randint(1, 12), 6)
    theta = tn + Fraction(rng.randint(1, 12), 6)
    return HyperParams.make("A", tau + [tn], theta)


def run_integral(cfg, rng, seed):
    n, N = _n(cfg, 3), _N(cfg, 10)
    p = cfg.params or {}
    params = _params(cfg, "A", n, rng, N) if "tau" in p else random_integral_params(rng, n)
    reps = [ids.check_integral_rep_A(params, ids.random_small_point(n, rng), N, seed=seed)
            for _ in range(cfg.points or 3)]
    return _fold("integral-a", reps, seed, f"n={n}, N={N}")


def run_inverse(cfg, rng, seed):
    rep = check_inverse_identity(_n(cfg, 4))
    rep.seed = seed
    return rep


def run_weyl(tid):
    def run(cfg, rng, seed):
        n = _n(cfg, 3)
        ex = _exponents(cfg, 1 if tid == "6.3" else 2, rng)
        return itg.check_theorem(tid, n, ex, _points(cfg, n, seed), variant=cfg.variant,
                                 seed=seed)
    return run


def run_laplacian(cfg, rng, seed):
    n = _n(cfg, 3)
    types = [(cfg.params or {}).get("type")] if (cfg.params or {}).get("type") else list("ABCD")
    reps = [itg.check_laplacian_eigen(t, n, _points(cfg, n, seed), seed) for t in types]
    return _fold("laplacian-eigen", reps, seed, f"n={n}, types={types}")


def run_identity_68(cfg, rng, seed):
    n = _n(cfg, 3)
    return itg.check_pair_sum(n, _points(cfg, n, seed, default=10), seed)


def run_theorem_22(cfg, rng, seed):
    p = cfg.params or {}
    if "mu" in p or cfg.mu is not None:
        ex = _exponents(cfg, 3, rng)
    else:
        mu1 = rng.uniform(-2, 2)
        while True:
            mu2 = rng.uniform(-2, 2)
            c = 1 - mu2
            if c > 0.25 or min(abs(c + k) for k in range(0, 40)) > 0.25:
                break
        ex = [round(mu1, 6), round(mu2, 6), round(rng.uniform(-2, 2), 6)]
    pts = _points(cfg, 2, seed, accept=lambda z: abs(itg.zeta_gl2(z)[0]) <= 0.2)
    return itg.check_theorem("2.2", 2, ex, pts, N=_N(cfg, 8), variant=cfg.variant, seed=seed)


def run_theorem_71(cfg, rng, seed):
    n = _n(cfg, 1)
    p = cfg.params or {}
    lam = p.get("lambda", cfg.mu if cfg.mu is not None else "3/2")
    pts = itg.sample_trace_points(n, cfg.points or (10 if n == 1 else 4), seed,
                                  xi_bound=float(p.get("xi", 0.05)))
    return itg.check_theorem("7.1", n, [scalar(lam)], pts, N=_N(cfg, 8),
                             variant=cfg.variant or f"{itg.PSI_CARTAN}/{itg.PAIRS_ALL}", seed=seed)


def _trace_inputs(cfg, kind, n, rng):
    p = cfg.params or {}
    lam = p.get("lambda")
    mu = p.get("mu", cfg.mu)
    if kind == verma.GL:
        if lam is None:
            lam, mu0 = verma.random_gl_weight(rng, n)
            mu = mu0 if mu is None else scalar(mu)
        else:
            lam = tuple(scalar_list(lam))
            mu = scalar(mu if mu is not None else 0)
        return lam, mu
    if lam is None:
        lam = [verma.random_sp_lambda(rng)]
    lam = scalar_list(lam)
    if len(lam) == 1:
        lam = list(verma.sp_weight(lam[0], n))
    return tuple(lam), Fraction(0)


def run_trace(kind, n_default, N_default):
    def run(cfg, rng, seed):
        n = _n(cfg, n_default)
        if kind == verma.GL and (n == 2) != (n_default == 2):
            raise UsageError("trace-gl2 is gl(2); use trace-gln for n > 2")
        lam, mu = _trace_inputs(cfg, kind, n, rng)
        variant = _variant(cfg.variant)
        return verma.compare_trace(kind, lam, mu, n, _N(cfg, N_default), variant, seed)
    return run


def _variant(text):
    if text is None:
        return None
    if isinstance(text, dict):
        return text
    try:
        obj = json.loads(text)
        if isinstance(obj, dict):
            return obj
    except json.JSONDecodeError:
        pass
    out = {}
    for part in str(text).split(","):
        if "=" not in part:
            raise UsageError(f"variant must be key=value pairs, got {text!r}")
        k, v = part.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def _fold(identity, reps, seed, notes):
    worst = max(reps, key=lambda r: float(abs(r.max_discrepancy)))
    return CheckReport(identity=identity, mode=worst.mode, passed=all(r.passed for r in reps),
                       max_discrepancy=worst.max_discrepancy, truncation=worst.truncation,
                       tolerance=worst.tolerance, worst=worst.worst, seed=seed, notes=notes,
                       details={"parts": [r.to_dict() for r in reps]})


REGISTRY = {
    "contiguity-a": check_contiguity("A"),
    "contiguity-b": check_contiguity("B"),
    "contiguity-c": check_contiguity("C"),
    "contiguity-d": check_contiguity("D"),
    "pde-a": run_pde_a,
    "pde-c": run_pde_c,
    "pde-bd": run_pde_bd,
    "kernel-product": run_kernel,
    "gauss-ode": run_gauss,
    "integral-a": run_integral,
    "inverse-5.28": run_inverse,
    "weyl-6.2": run_weyl("6.2"),
    "weyl-6.3": run_weyl("6.3"),
    "weyl-6.4": run_weyl("6.4"),
    "weyl-6.5": run_weyl("6.5"),
    "laplacian-eigen": run_laplacian,
    "identity-6.8": run_identity_68,
    "theorem-2.2": run_theorem_22,
    "theorem-7.1": run_theorem_71,
    "trace-gl2": run_trace(verma.GL, 2, 8),
    "trace-gln": run_trace(verma.GL, 3, 4),
    "trace-sp": run_trace(verma.SP, 1, 6),
}


def run_check(check_id, cfg, seed):
    if check_id not in REGISTRY:
        raise UsageError(f"unknown check {check_id!r}; known: {', '.join(CHECK_IDS)}")
    rng = random.Random(f"{check_id}:{seed}")
    return REGISTRY[check_id](cfg, rng, seed)


def cmd_check(cfg):
    seed = cfg.seed if cfg.seed is not None else default_seed()
    rep = run_check(cfg.id, cfg, seed)
    emit(rep.to_dict(), cfg.output)
    summary(f"{'PASS' if rep.passed else 'FAIL'} {rep.identity} "
            f"(max discrepancy {_jsonable(rep.max_discrepancy)})")
    return EXIT_PASS if rep.passed else EXIT_FAIL


# ---------------------------------------------------------------- suite

CHECK_KEYS = ("n", "trunc", "params", "points", "mu", "variant", "mode", "seed", "output",
              "tolerance")


def _entry(check_id, **overrides):
    return check_id, overrides


PROFILES = {
    "quick": [_entry(c) for c in CHECK_IDS if c != "theorem-7.1"]
    + [_entry("theorem-7.1", points=4)],
    "desk": [_entry(c) for c in CHECK_IDS] + [
        _entry("inverse-5.28", n=8),
        _entry("integral-a", n=2),
        _entry("identity-6.8", n=6),
        _entry("laplacian-eigen", n=2), _entry("laplacian-eigen", n=4),
        _entry("weyl-6.2", n=2), _entry("weyl-6.2", n=4),
        _entry("weyl-6.3", n=4), _entry("weyl-6.4", n=4), _entry("weyl-6.5", n=4),
        _entry("trace-gl2", trunc=10),
        _entry("trace-sp", trunc=8),
        _entry("trace-sp", n=2, trunc=3),
    ],
}
PROFILES["full"] = PROFILES["desk"] + [
    _entry("trace-gln", n=3, trunc=5),
    _entry("trace-gln", n=4, trunc=5),
    _entry("trace-sp", n=2, trunc=6),
    _entry("trace-sp", n=3, trunc=3),
    _entry("theorem-7.1", n=2, points=4),
    _entry("identity-6.8", n=5),
    _entry("contiguity-c", n=3, trunc=4),
]


def cmd_suite(cfg):
    profile = cfg.profile or "desk"
    if profile not in PROFILES:
        raise UsageError(f"unknown profile {profile!r}; use quick, desk or full")
    seed = cfg.seed if cfg.seed is not None else default_seed()
    results = []
    for idx, (check_id, overrides) in enumerate(PROFILES[profile]):
        sub = argparse.Namespace(**{k: None for k in CHECK_KEYS})
        sub.mode = cfg.mode
        for k, v in overrides.items():
            setattr(sub, k, v)
        t0 = time.time()
        try:
            rep = run_check(check_id, sub, seed + idx)
            entry = {"check": check_id, "settings": overrides, "pass": bool(rep.passed),
                     "report": rep.to_dict()}
        except PreconditionError as exc:
            entry = {"check": check_id, "settings": overrides, "pass": False,
                     "error": f"precondition: {exc}"}
        results.append(entry)
        summary(f"{'PASS' if entry['pass'] else 'FAIL'} {check_id} {overrides or ''} "
                f"[{time.time() - t0:.2f}s]")
    ok = all(e["pass"] for e in results)
    out = {"profile": profile, "seed": seed, "pass": ok,
           "passed": sum(e["pass"] for e in results), "total": len(results), "checks": results}
    emit(out, cfg.json or cfg.output)
    summary(f"suite {profile}: {out['passed']}/{out['total']} passed")
    return EXIT_PASS if ok else EXIT_FAIL


# ---------------------------------------------------------------- trace and weyl-check

def cmd_trace(cfg):
    kind = {"gl": verma.GL, "sp": verma.SP}.get((cfg.algebra or "").lower())
    if kind is None:
        raise UsageError("--algebra must be gl or sp")
    if cfg.lam is None:
        raise UsageError("trace needs --lambda")
    n = cfg.n or (2 if kind == verma.GL else 1)
    N = _N(cfg, 6)
    lam = scalar_list(json_arg(cfg.lam, "lambda"))
    if kind == verma.SP and len(lam) == 1:
        lam = list(verma.sp_weight(lam[0], n))
    if len(lam) != n:
        raise UsageError(f"--lambda needs {n} entries")
    mu = scalar(cfg.mu) if cfg.mu is not None else Fraction(0)
    variant = _variant(cfg.variant)
    seed = cfg.seed if cfg.seed is not None else default_seed()
    rep = verma.compare_trace(kind, tuple(lam), mu, n, N, variant, seed)
    closed = None
    if rep.passed:
        winner = rep.details["winners"][0]
        v = variant or dict(part.split("=", 1) for part in winner.split(",") if "=" in part)
        closed = verma._closed(kind, tuple(lam), mu, n, N, v).to_dict()
    emit({"trace": closed, "report": rep.to_dict()}, cfg.output)
    summary(f"{'PASS' if rep.passed else 'FAIL'} {rep.identity}: {rep.notes}")
    return EXIT_PASS if rep.passed else EXIT_FAIL


def cmd_weyl_check(cfg):
    tid = str(cfg.theorem or "")
    if tid not in itg.THEOREMS:
        raise UsageError(f"--theorem must be one of {', '.join(itg.THEOREMS)}")
    seed = cfg.seed if cfg.seed is not None else default_seed()
    check_id = {"2.2": "theorem-2.2", "7.1": "theorem-7.1"}.get(tid, f"weyl-{tid}")
    if cfg.mu is not None:
        cfg.params = dict(cfg.params or {})
        raw = json_arg(cfg.mu, "mu")
        if tid == "7.1":
            cfg.params["lambda"] = raw[0] if isinstance(raw, list) else raw
        else:
            cfg.params["mu"] = raw
        cfg.mu = None
    rep = run_check(check_id, cfg, seed)
    emit(rep.to_dict(), cfg.output)
    summary(f"{'PASS' if rep.passed else 'FAIL'} {rep.identity} "
            f"(max relative residual {_jsonable(rep.max_discrepancy)})")
    return EXIT_PASS if rep.passed else EXIT_FAIL


# ---------------------------------------------------------------- parser

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _common(p):
    p.add_argument("--config", help="JSON file with default values for any option")
    p.add_argument("--seed", type=int)
    p.add_argument("--output", help="also write the JSON to this path")
    p.add_argument("--mode", choices=(EXACT, FLOAT))
    p.add_argument("--n", type=int)
    p.add_argument("--trunc", type=int)
    p.add_argument("--tolerance", type=float)


def build_parser():
    parser = _Parser(prog="pathhyper", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("eval", help="evaluate 2F1 or a path hypergeometric series")
    _common(p)
    p.add_argument("function", nargs="?")
    for name in ("a", "b", "c", "theta", "tau", "at"):
        p.add_argument(f"--{name}")

    p = sub.add_parser("check", help="run one registered check")
    _common(p)
    p.add_argument("id", nargs="?")
    p.add_argument("--params", help="JSON object with explicit parameters")
    p.add_argument("--points", type=int)
    p.add_argument("--mu")
    p.add_argument("--variant")

    p = sub.add_parser("suite", help="run a profile of checks")
    _common(p)
    p.add_argument("--profile", choices=tuple(PROFILES))
    p.add_argument("--json", help="write the aggregate JSON to this path")

    p = sub.add_parser("trace", help="compare a trace oracle with its closed form")
    _common(p)
    p.add_argument("--algebra")
    p.add_argument("--lambda", dest="lam")
    p.add_argument("--mu")
    p.add_argument("--variant")

    p = sub.add_parser("weyl-check", help="eigenfunction residual of a theorem")
    _common(p)
    p.add_argument("--theorem")
    p.add_argument("--mu")
    p.add_argument("--points", type=int)
    p.add_argument("--params")
    p.add_argument("--variant")
    return parser


COMMANDS = {"eval": cmd_eval, "check": cmd_check, "suite": cmd_suite, "trace": cmd_trace,
            "weyl-check": cmd_weyl_check}


def load_config(path):
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"config {path} is not valid JSON: {exc}") from None
    if not isinstance(obj, dict):
        raise UsageError("config must be a JSON object")
    return obj


def parse_config(argv):
    parser = build_parser()
    argv = list(argv)
    config = {}
    if "--config" in argv:
        i = argv.index("--config")
        if i + 1 >= len(argv):
            raise UsageError("--config needs a path")
        config = load_config(argv[i + 1])
    if config.get("command") and (not argv or argv[0] not in COMMANDS):
        argv = [config["command"]] + argv
    cfg = parser.parse_args(argv)
    if cfg.command is None:
        raise UsageError("missing command; use eval, check, suite, trace or weyl-check")
    aliases = {"lambda": "lam"}
    for key, value in config.items():
        key = aliases.get(key, key).replace("-", "_")
        if key == "command":
            continue
        if not hasattr(cfg, key):
            raise UsageError(f"config key {key!r} does not apply to {cfg.command}")
        if getattr(cfg, key) is None:
            setattr(cfg, key, value)
    if getattr(cfg, "params", None) is not None:
        cfg.params = json_arg(cfg.params, "params")
        if not isinstance(cfg.params, dict):
            raise UsageError("--params must be a JSON object")
    return cfg


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_config(argv)
        return COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        summary(f"usage error: {exc}")
        return EXIT_USAGE
    except PreconditionError as exc:
        summary(f"precondition violated: {exc}")
        return EXIT_PRECONDITION
    except (ValueError, KeyError) as exc:
        summary(f"usage error: {exc}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
