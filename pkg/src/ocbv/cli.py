"""Command-line front end.

Exit codes: 0 pass, 1 mathematical failure, 2 input or configuration error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__
from .algebra import element_to_json, format_element
from .axioms import SuiteConfig, run_suite
from .foundation import Bounds, ConvergenceError, ValidationError, format_scalar
from .homotopy import (
    CyclicChain,
    cochain_from_json,
    cochain_to_json,
    cyclic_from_hat,
    hat_from_cyclic,
    linf_extract,
    linf_residual,
    stasheff_residual,
)
from .master import (
    cme_residual,
    master_from_json,
    qme_residual,
    residual_report,
    series_elements_to_json,
)
from .moduli import (
    Relabeling,
    SurfaceType,
    bookkeeping_check,
    boundary_expansion,
    dimension,
    euler_char,
    is_stable,
    rho_sign,
    weights,
)
from .operators import BVConfig, set_corruption
from .spaces import load_spec, validate

DEFAULT_SEED = 20240
PASS, FAIL, INPUT_ERROR = 0, 1, 2


class InputError(Exception):
    """Bad command-line input: exit code 2."""


# --- helpers --------------------------------------------------------------------

def _load_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def _spec(path):
    try:
        return load_spec(path)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def _admissible_spec(path):
    spec = _spec(path)
    problems = validate(spec)
    if problems:
        raise InputError(f"{path}: spec is not admissible: {problems[0]}")
    return spec


def _bounds(args) -> Bounds:
    return Bounds(args.lambda_max, args.hbar_half_min, args.hbar_half_max)


def _config(args) -> dict:
    cfg = {k: v for k, v in sorted(vars(args).items()) if k != "func"}
    return cfg


def _emit(args, report: dict, human: str):
    report = {"tool": "ocbv", "version": __version__, "config": _config(args), **report}
    if args.json:
        sys.stdout.write(json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n")
    else:
        sys.stdout.write(human.rstrip("\n") + "\n")


def _series_lines(res) -> str:
    if res.is_zero():
        return "residual: 0"
    lines = []
    for (lam, h), v in res.items():
        lines.append(f"lambda^{lam} sqrt(hbar)^{h}: {format_element(v)}")
    low = res.lowest_key()
    lines.append(f"lowest nonzero key: lambda^{low[0]} sqrt(hbar)^{low[1]}")
    return "\n".join(lines)


# --- subcommands ------------------------------------------------------------------

def cmd_validate(args) -> int:
    spec = _spec(args.spec)
    problems = validate(spec)
    _emit(args, {"admissible": not problems, "violations": problems},
          "admissible" if not problems else "\n".join(["violations:"] + problems))
    return PASS if not problems else FAIL


def cmd_axioms(args) -> int:
    if args.trials < 1:
        raise InputError("--trials must be at least 1")
    cfg = SuiteConfig(trials=args.trials, seed=args.seed, max_basis=args.max_basis,
                      word_max=args.word_max, max_factors=args.max_factors)
    if args.corrupt:
        set_corruption("o_bracket", True)
    try:
        report = run_suite(cfg)
    finally:
        set_corruption("o_bracket", False)
    lines = [f"{'PASS' if report['passed'] else 'FAIL'}: {cfg.trials} trials, seed {cfg.seed}"]
    for name, c in report["identities"].items():
        lines.append(f"  {name}: {c['failed']} failures / {c['checked']} checks")
    if report["first_failure"]:
        f = report["first_failure"]
        lines.append(f"first failure: {f['identity']} in trial {f['trial']}")
        lines.append("reproducer: " + json.dumps({"spec": f["spec"], "elements": f["elements"]},
                                                 sort_keys=True, ensure_ascii=False))
    _emit(args, report, "\n".join(lines))
    return PASS if report["passed"] else FAIL


def _master(args):
    spec = _admissible_spec(args.spec)
    doc = _load_json(args.series)
    return spec, master_from_json(spec, doc, _bounds(args))


def cmd_qme(args) -> int:
    spec, S = _master(args)
    res = qme_residual(S, BVConfig(spec, weighted=not args.unweighted))
    report = residual_report(res)
    report["residual"] = series_elements_to_json(res)
    _emit(args, report, _series_lines(res))
    return PASS if res.is_zero() else FAIL


def cmd_cme(args) -> int:
    _, S = _master(args)
    res = cme_residual(S)
    report = residual_report(res)
    report["residual"] = series_elements_to_json(res)
    _emit(args, report, _series_lines(res))
    return PASS if res.is_zero() else FAIL


def _chain_or_hat(spec, doc, bounds):
    if isinstance(doc, dict) and isinstance(doc.get("hat"), dict):
        doc = doc["hat"]
    if isinstance(doc, dict) and "cochains" in doc:
        try:
            cochains = {}
            for c in doc["cochains"]:
                f = cochain_from_json(spec, c)
                cochains[f.arity] = cochains[f.arity] + f if f.arity in cochains else f
        except (TypeError, KeyError) as exc:
            raise InputError(f"malformed cochain list ({exc})") from exc
        return None, cochains
    return CyclicChain.from_master(master_from_json(spec, doc, bounds)), None


def _hat_json(mhat) -> dict:
    return {"cochains": [cochain_to_json(f) for _, f in sorted(mhat.items())]}


def cmd_ainf(args) -> int:
    spec = _admissible_spec(args.spec)
    chain, mhat = _chain_or_hat(spec, _load_json(args.input), _bounds(args))
    if args.from_hat:
        if mhat is None:
            raise InputError("--from-hat needs a cochain list input")
        chain = cyclic_from_hat(mhat)
        S = chain.to_master(_bounds(args))
        doc = {"terms": series_elements_to_json(S.series)}
        _emit(args, {"chain": doc}, json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False))
        return PASS
    if mhat is None:
        mhat = hat_from_cyclic(chain)
    if args.to_hat:
        doc = _hat_json(mhat)
        _emit(args, {"hat": doc}, json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False))
        return PASS
    # default and --check: Stasheff residuals per arity
    residual = stasheff_residual(mhat) if mhat else {}
    bad = [n for n, f in residual.items() if not f.is_zero()]
    lines = [f"arity {n}: {'0' if f.is_zero() else str(len(f.entries)) + ' nonzero entries'}"
             for n, f in residual.items()]
    if bad:
        lines.append(f"first nonzero arity: {bad[0]}")
    _emit(args, {"passed": not bad, "nonzero_arities": bad,
                 "residual": [cochain_to_json(f) for _, f in sorted(residual.items())]},
          "\n".join(lines) or "no cochains: residual 0")
    return PASS if not bad else FAIL


def cmd_linf(args) -> int:
    spec, S = _master(args)
    D = linf_extract(S)
    comps = {str(k): {spec.closed.names[x]: element_to_json(v) for x, v in sorted(c.items())}
             for k, c in sorted(D.components.items())}
    lines = [f"warning: {w}" for w in D.warnings]
    for k, c in sorted(D.components.items()):
        for x, v in sorted(c.items()):
            lines.append(f"D_{k}({spec.closed.names[x]}) = {format_element(v)}")
    report = {"components": comps, "warnings": list(D.warnings), "word_max": args.word_max}
    ok = True
    if args.check:
        defects = linf_residual(D, args.word_max)
        ok = not defects
        report["defects"] = [{"generator": d["generator"], "word_length": d["word_length"],
                              "value": element_to_json(d["value"])} for d in defects]
        lines.append(f"D^2 up to word length {args.word_max}: "
                     + ("0" if ok else f"{len(defects)} nonzero components"))
        for d in defects:
            lines.append(f"  D^2({d['generator']}) length {d['word_length']}: {format_element(d['value'])}")
    report["passed"] = ok
    _emit(args, report, "\n".join(lines) or "D = d (no components)")
    return PASS if ok else FAIL


def _surface(args) -> SurfaceType:
    t = SurfaceType(args.g, args.b, args.n, args.m)
    if not t.valid:
        raise InputError(f"type {t} has boundary punctures but no boundary")
    return t


def _profiles(m: int, b: int, smallest: int = 0):
    """Nondecreasing profiles of b nonnegative parts summing to m."""
    if b == 0:
        if m == 0:
            yield ()
        return
    for first in range(smallest, m + 1):
        for rest in _profiles(m - first, b - 1, first):
            yield (first,) + rest


def cmd_moduli(args) -> int:
    t = _surface(args)
    q = args.query
    if q == "stable":
        value = is_stable(t)
        _emit(args, {"type": t.as_dict(), "stable": value}, str(value).lower())
        return PASS
    if q == "chi":
        chi = euler_char(t)
        _emit(args, {"type": t.as_dict(), "chi": format_scalar(chi)}, format_scalar(chi))
        return PASS
    if q == "dim":
        d = dimension(t)
        _emit(args, {"type": t.as_dict(), "dimension": d}, str(d))
        return PASS
    if q == "weights":
        lam, half = weights(t)
        _emit(args, {"type": t.as_dict(), "lambda": lam, "sqrt_hbar": half},
              f"lambda^{lam} sqrt(hbar)^{half}")
        return PASS
    if q == "boundary":
        terms = boundary_expansion(t)
        doc = {"input": t.as_dict(), "terms": [x.to_json() for x in terms]}
        lines = [f"{x.kind} {' + '.join(map(str, x.args))} coeff {format_scalar(x.coeff)}" for x in terms]
        _emit(args, doc, "\n".join(lines) or "no boundary terms")
        return PASS
    if q == "bookkeep":
        violations = bookkeeping_check(t)
        _emit(args, {"type": t.as_dict(), "violations": violations},
              "\n".join(violations) or "no violations")
        return PASS if not violations else FAIL
    # rho: generator signs for every boundary profile of the type
    rows = []
    for prof in _profiles(t.m, t.b):
        zeta = [rho_sign(Relabeling(tuple(range(t.n)), tuple(range(t.b)),
                                    tuple(1 if j == i and prof[i] else 0 for j in range(t.b)), prof))
                for i in range(t.b)]
        tau = {}
        for i in range(t.b):
            for j in range(i + 1, t.b):
                perm = list(range(t.b))
                perm[i], perm[j] = perm[j], perm[i]
                tau[f"{i},{j}"] = rho_sign(Relabeling(tuple(range(t.n)), tuple(perm),
                                                      (0,) * t.b, prof))
        rows.append({"profile": list(prof), "zeta": zeta, "tau": tau})
    lines = [f"profile {r['profile']}: zeta {r['zeta']} tau {r['tau']}" for r in rows]
    _emit(args, {"type": t.as_dict(), "profiles": rows}, "\n".join(lines) or "no profiles")
    return PASS


def _int_list(text: str) -> tuple:
    if text.strip() == "":
        return ()
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise InputError(f"expected comma-separated integers, got {text!r}") from exc


def cmd_rho(args) -> int:
    profile = _int_list(args.profile)
    b = len(profile)
    boundary = _int_list(args.boundary) if args.boundary is not None else tuple(range(b))
    offsets = _int_list(args.offsets) if args.offsets is not None else (0,) * b
    interior = _int_list(args.interior) if args.interior is not None else ()
    r = Relabeling(interior, boundary, offsets, profile)
    s = rho_sign(r)
    _emit(args, {"relabeling": {"interior": list(r.interior), "boundary": list(r.boundary),
                                "offsets": list(r.offsets), "profile": list(r.profile)},
                 "sign": s}, f"{s:+d}")
    return PASS


# --- parser -----------------------------------------------------------------------

def _default_seed() -> int:
    env = os.environ.get("OCBV_SEED")
    if env is None:
        return DEFAULT_SEED
    try:
        return int(env)
    except ValueError:
        return DEFAULT_SEED


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable report")
    common.add_argument("--seed", type=int, default=None, help="master seed (default: OCBV_SEED or bundled)")
    common.add_argument("--trials", type=int, default=200)
    common.add_argument("--lambda-max", type=int, default=6)
    common.add_argument("--hbar-half-min", type=int, default=-6)
    common.add_argument("--hbar-half-max", type=int, default=6)
    common.add_argument("--word-max", type=int, default=None)

    parser = argparse.ArgumentParser(prog="ocbv", description="Open-closed BV algebra toolkit")
    parser.add_argument("--version", action="version", version=f"ocbv {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="check an algebra spec")
    p.add_argument("spec")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("axioms", parents=[common], help="randomized BV identity suite")
    p.add_argument("--max-basis", type=int, default=4)
    p.add_argument("--max-factors", type=int, default=3)
    p.add_argument("--corrupt", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_axioms)

    for name, fn, helptext in (("qme", cmd_qme, "quantum master equation residual"),
                               ("cme", cmd_cme, "classical master equation residual")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("spec")
        p.add_argument("series")
        if name == "qme":
            p.add_argument("--unweighted", action="store_true")
        p.set_defaults(func=fn)

    p = sub.add_parser("ainf", parents=[common], help="cyclic A-infinity conversions and checks")
    p.add_argument("spec")
    p.add_argument("input", help="cyclic chain (series JSON) or cochain list")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--to-hat", action="store_true")
    mode.add_argument("--from-hat", action="store_true")
    mode.add_argument("--check", action="store_true")
    p.set_defaults(func=cmd_ainf)

    p = sub.add_parser("linf", parents=[common], help="L-infinity data of a closed-sector solution")
    p.add_argument("spec")
    p.add_argument("series")
    p.add_argument("--check", action="store_true")
    p.set_defaults(func=cmd_linf)

    p = sub.add_parser("moduli", parents=[common], help="surface type bookkeeping")
    p.add_argument("query", choices=["stable", "chi", "dim", "weights", "boundary", "bookkeep", "rho"])
    for name in ("g", "b", "n", "m"):
        p.add_argument(name, type=int)
    p.set_defaults(func=cmd_moduli)

    p = sub.add_parser("rho", parents=[common], help="sign of a relabeling")
    p.add_argument("--profile", required=True, help="boundary puncture counts, e.g. 2,2")
    p.add_argument("--boundary", help="boundary permutation, e.g. 1,0")
    p.add_argument("--offsets", help="cyclic offsets per boundary")
    p.add_argument("--interior", help="interior permutation")
    p.set_defaults(func=cmd_rho)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.seed is None:
        args.seed = _default_seed()
    if args.word_max is None:
        args.word_max = 4 if args.command == "axioms" else 6
    try:
        if args.lambda_max < 0 or args.hbar_half_min > args.hbar_half_max:
            raise InputError("truncation bounds must satisfy lambda-max >= 0 and hbar-half-min <= max")
        if args.word_max < 0:
            raise InputError("--word-max must be nonnegative")
        return args.func(args)
    except (InputError, ValidationError, ConvergenceError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return INPUT_ERROR


def entry() -> None:
    sys.exit(main())


__all__ = ["build_parser", "entry", "main"]


if __name__ == "__main__":
    entry()
