"""Command-line front end.

    grur la SYSTEM.json            generic RUR by linear algebra
    grur ei SYSTEM.json            generic RUR by evaluation/interpolation
    grur classify SYSTEM.json      real-root counts by parameter cell
    grur specialize SYSTEM.json --at W1=4
    grur check-sep SYSTEM.json --form "X1 + 2*X2"

Exit status: 0 success, 1 usage or parse error, 2 algorithmic failure,
3 a denominator vanishes at the requested point.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from .errors import DenominatorVanishes, GrurError
from .grur_ei import EIConfig, grur_ei
from .parser import ParseError, load_system, parse_poly
from .poly import MultiPoly
from .ratfunc import RatFunc
from .realroots import ClassifyConfig, classify_real_roots
from .rur import GRUR, LinearForm, groebner_and_quotient, grur_la, is_generically_separating, specialize_grur


class UsageError(Exception):
    pass


class _ArgParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ------------------------------------------------------------ serialization

def _coeff_pair(c):
    if isinstance(c, RatFunc):
        return str(c.num), str(c.den)
    return str(c), "1"


def poly_json(p: MultiPoly) -> dict:
    terms = []
    for (k,), c in sorted(p.terms.items(), reverse=True):
        num, den = _coeff_pair(c)
        terms.append([k, num, den])
    return {"display": str(p), "terms": terms}


def grur_json(g: GRUR, pipeline: str, seed) -> dict:
    out = {
        "pipeline": pipeline,
        "seed": seed,
        "params": list(g.params),
        "vars": list(g.vars),
        "t": [str(a) for a in g.t.coeffs],
        "t_display": g.t.label(g.vars),
        "D": g.D,
        "h0": poly_json(g.h0),
        "h1": poly_json(g.h1),
        "hX": {v: poly_json(h) for v, h in zip(g.vars, g.hX)},
        "certificates": [str(c) for c in g.certificates],
        "separating_certified": g.separating_certified,
    }
    if g.witness:
        out["witness"] = [str(x) for x in g.witness]
    return out


def _system(sf):
    if sf.params:
        return sf.parametric()
    return [parse_poly(p, (), sf.vars) for p in sf.polys]


def _compute(sf, pipeline: str, seed: int) -> GRUR:
    system = _system(sf)
    if pipeline == "ei":
        return grur_ei(system, seed, EIConfig())
    return grur_la(system, seed)


def _parse_assignment(items, params):
    point = {}
    for item in items or []:
        if "=" not in item:
            raise UsageError(f"--at expects NAME=RATIONAL, got {item!r}")
        name, val = item.split("=", 1)
        name = name.strip()
        if name not in params:
            raise UsageError(f"unknown parameter {name!r}")
        try:
            point[name] = Fraction(val.strip())
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"not a rational number: {val!r}") from None
    missing = [p for p in params if p not in point]
    if missing:
        raise UsageError(f"missing values for {', '.join(missing)}")
    return point


def _parse_form(text, vars) -> LinearForm:
    try:
        p = parse_poly(text, (), vars)
    except ParseError as e:
        raise UsageError(f"--form: {e}") from None
    coeffs = [Fraction(0)] * len(vars)
    for e, c in p.terms.items():
        if sum(e) != 1:
            raise UsageError("--form must be a linear form without constant term")
        coeffs[e.index(1)] = c
    if not any(coeffs):
        raise UsageError("--form must not be zero")
    return LinearForm(tuple(coeffs))


# ------------------------------------------------------------ commands

def cmd_la(args, sf):
    return grur_json(_compute(sf, "la", args.seed), "la", args.seed)


def cmd_ei(args, sf):
    return grur_json(_compute(sf, "ei", args.seed), "ei", args.seed)


def cmd_specialize(args, sf):
    point = _parse_assignment(args.at, sf.params)
    g = _compute(sf, args.pipeline, args.seed)
    w = specialize_grur(g, point)
    out = grur_json(w, args.pipeline, args.seed)
    out["point"] = {k: str(v) for k, v in point.items()}
    return out


def cmd_check_sep(args, sf):
    t = _parse_form(args.form, sf.vars)
    system = _system(sf)
    _, qs = groebner_and_quotient(system)
    v = is_generically_separating(qs, t, args.seed, system=system)
    return {
        "form": t.label(sf.vars),
        "separating": v.separating,
        "witness": [str(x) for x in v.witness],
        "squarefree_degree": v.squarefree_degree,
        "distinct_points": v.distinct_points,
        "seed": args.seed,
    }


def _sign_str(s):
    return {1: "+", -1: "-", 0: "0"}[s]


def cmd_classify(args, sf):
    config = ClassifyConfig(radius=args.radius, denominator=args.denominator, pipeline=args.pipeline)
    r = classify_real_roots(_system(sf), args.seed, config)
    cells = []
    for signs, count in sorted(r.cells.items()):
        cells.append({"signs": [_sign_str(s) for s in signs], "count": count})
    return {
        "pipeline": args.pipeline,
        "seed": args.seed,
        "params": list(sf.params),
        "t": [str(a) for a in r.grur.t.coeffs],
        "delta": str(r.delta),
        "formulas": [str(f) for f in r.formulas],
        "excluded": [str(c) for c in r.excluded_certificates],
        "cells": cells,
        "samples": [{"point": [str(x) for x in w], "signs": [_sign_str(s) for s in sg], "count": c}
                    for w, sg, c in r.samples],
    }


COMMANDS = {
    "la": cmd_la,
    "ei": cmd_ei,
    "classify": cmd_classify,
    "specialize": cmd_specialize,
    "check-sep": cmd_check_sep,
}


def build_parser() -> argparse.ArgumentParser:
    def add_globals(p, suppress):
        d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
        p.add_argument("--seed", type=int, default=d(0), help="seed for witness draws")
        p.add_argument("--pipeline", choices=("la", "ei"), default=d("la"))
        p.add_argument("--output", default=d(None), help="write JSON here instead of stdout")
        p.add_argument("--pretty", action="store_true", default=d(False))
        p.add_argument("--timings", action="store_true", default=d(False),
                       help="include wall-clock time (breaks byte-identical output)")

    parser = _ArgParser(prog="grur", description="Generic rational univariate representations.")
    add_globals(parser, False)
    sub = parser.add_subparsers(dest="command", parser_class=_ArgParser)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("system", help="JSON file with params, vars and polys")
        add_globals(p, True)
        if name == "specialize":
            p.add_argument("--at", action="append", metavar="NAME=RATIONAL", default=[])
        if name == "check-sep":
            p.add_argument("--form", required=True)
        if name == "classify":
            p.add_argument("--radius", type=int, default=4)
            p.add_argument("--denominator", type=int, default=2)
    return parser


def _emit(obj, args, stream=None):
    text = json.dumps(obj, indent=2 if getattr(args, "pretty", False) else None) + "\n"
    path = getattr(args, "output", None)
    if path and stream is None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        (stream or sys.stdout).write(text)


def _error(kind, message, **extra):
    return {"error": {"type": kind, "message": message, **extra}}


def main(argv=None) -> int:
    parser = build_parser()
    args = None
    try:
        args = parser.parse_args(argv)
        if not args.command:
            raise UsageError("a command is required")
        if args.seed < 0 or args.seed >= 2 ** 64:
            raise UsageError("--seed must fit in an unsigned 64-bit integer")
        sf = load_system(args.system)
        start = time.perf_counter()
        out = COMMANDS[args.command](args, sf)
        if args.timings:
            out["timings"] = {"seconds": round(time.perf_counter() - start, 6)}
        _emit(out, args)
        return 0
    except (UsageError, ParseError, OSError) as e:
        kind = "ParseError" if isinstance(e, ParseError) else "UsageError"
        extra = {"line": e.line, "column": e.column} if isinstance(e, ParseError) else {}
        print(f"grur: {e}", file=sys.stderr)
        _emit(_error(kind, str(e), **extra), args, sys.stdout)
        return 1
    except DenominatorVanishes as e:
        print(f"grur: {e}", file=sys.stderr)
        point = {k: str(v) for k, v in e.point.items()} if isinstance(e.point, dict) else str(e.point)
        _emit(_error("DenominatorVanishes", str(e), point=point, certificate=e.certificate), args, sys.stdout)
        return 3
    except GrurError as e:
        print(f"grur: {e}", file=sys.stderr)
        _emit(_error(type(e).__name__, str(e)), args, sys.stdout)
        return 2


if __name__ == "__main__":
    sys.exit(main())
