"""Command-line front end.

Every subcommand prints one JSON (or CSV) report on stdout.  Exit codes:
0 success, 2 domain error (report is an error object), 64 usage error.
Rationals are always "num/den" strings; polynomials use the coefficient-list
codec unless --pretty is given.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random
import sys
import tempfile
from fractions import Fraction
from pathlib import Path

from . import __version__
from .field import FieldSpec
from .ideal import IdealGens, WitnessNotFound, ip_witness, reduce
from .mds import (BernoulliShift, Cylinder, check_additive_law, check_measure_preserving,
                  classify_mixing, correlation, correlation_set, frac_str, khintchine_set,
                  load_system_spec, parse_fraction)
from .multipoly import MultiPoly, format_multipoly, parse_multipoly
from .poly import Poly, canonical_index, enumerate_polys, format_poly, parse_poly, poly_divmod
from .sets import (NatSet, RamseyError, central_necessary, coset_structure, deg_pullback,
                   delta_set, fs_set, ip_obstruction, ipstar_proxy, is_ip_truncated, is_syndetic,
                   is_syndetic_mult, is_thick, ramsey_refine)
from .setdef import parse_event, parse_set, read_literal

EXIT_OK = 0
EXIT_DOMAIN = 2
EXIT_USAGE = 64

# core operation -> the one subcommand exposing it
DISPATCH = {
    "poly_divmod": "reduce",
    "reduce": "reduce",
    "ideal_member": "reduce",
    "ip_witness": "ideal-witness",
    "enumerate_polys": "pullback",
    "canonical_index": "pullback",
    "deg_pullback": "pullback",
    "fs_set": "fs",
    "delta_set": "fs",
    "is_syndetic": "syndetic",
    "is_thick": "classify-set",
    "is_ip_truncated": "classify-set",
    "central_necessary": "classify-set",
    "ipstar_proxy": "ipstar",
    "ip_obstruction": "ipstar",
    "ramsey_refine": "ramsey",
    "build_system": "simulate",
    "correlation": "correlate",
    "correlation_set": "correlate",
    "classify_mixing": "correlate",
    "khintchine_set": "khintchine",
}

POLY_KEYS = {"sum", "witness", "cover", "generators", "subsequence", "residues",
             "exceptions_removed", "exceptions_added", "complement", "members", "block",
             "quotient", "remainder", "quotients", "f", "g", "divisor", "exceptions"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------------------
# argument helpers


def _field(args, system_data: dict | None = None) -> FieldSpec:
    modulus = tuple(int(x) for x in args.modulus.split(",")) if args.modulus else ()
    if args.p is not None:
        return FieldSpec(args.p, args.e or 1, modulus)
    if args.q is not None:
        return FieldSpec.from_q(args.q, modulus)
    if system_data is not None:
        if "p" in system_data:
            return FieldSpec(int(system_data["p"]), int(system_data.get("e", 1)),
                             tuple(system_data.get("modulus", ())))
        if "q" in system_data:
            return FieldSpec.from_q(int(system_data["q"]), tuple(system_data.get("modulus", ())))
    raise UsageError("field not given: use --q or --p/--e")


def _need_D(args) -> int:
    if args.D is None:
        raise UsageError("--D is required for this command")
    return args.D


def _eps(args) -> Fraction:
    if args.eps is None:
        raise UsageError("--eps is required for this command")
    eps = parse_fraction(args.eps)
    if eps <= 0:
        raise ValueError("--eps must be a positive rational")
    return eps


def _universe_info(field: FieldSpec, D: int | None = None) -> dict:
    out = {"p": field.p, "e": field.e, "q": field.q, "modulus": list(field.modulus)}
    if D is not None:
        out["D"] = D
    return out


def _poly_list(text: str, field: FieldSpec) -> list[Poly]:
    return [parse_poly(tok, field) for tok in text.split(";") if tok.strip()]


def _read_lines(path: str) -> list[str]:
    return [ln.strip() for ln in Path(path).read_text().splitlines()
            if ln.strip() and not ln.lstrip().startswith("#")]


def _parse_gens(text: str, field: FieldSpec, k: int | None) -> IdealGens:
    pairs = []
    for tok in text.split(";"):
        tok = tok.strip()
        if not tok:
            continue
        var, sep, poly = tok.partition(":")
        if not sep or not var.upper().startswith("X"):
            raise ValueError(f"malformed generator token {tok!r} (expected Xi:coeffs)")
        try:
            v = int(var[1:]) - 1
        except ValueError:
            raise ValueError(f"malformed generator variable {var!r}") from None
        pairs.append((v, parse_poly(poly, field)))
    if not pairs:
        raise ValueError("no generators given")
    nvars = k if k is not None else max(v for v, _ in pairs) + 1
    return IdealGens(tuple(pairs), nvars)


def _random_injective(field: FieldSpec, nvars: int, n: int, max_deg: int, rng: random.Random):
    seen, out = set(), []
    while len(out) < n:
        terms = {}
        for _ in range(rng.randint(1, 4)):
            exp = tuple(rng.randint(0, max_deg) for _ in range(nvars))
            terms[exp] = rng.randrange(1, field.q)
        g = MultiPoly(field, nvars, terms)
        if g not in seen:
            seen.add(g)
            out.append(g)
    return out


def _system(args):
    if not args.system:
        raise UsageError("--system is required for this command")
    data = json.loads(Path(args.system).read_text())
    has_field_flag = args.q is not None or args.p is not None
    field = _field(args, data) if has_field_flag or "q" in data or "p" in data else None
    return load_system_spec(data, field), data


def _event(text: str, system):
    text = read_literal(text)
    if text.strip() == "all" and isinstance(system, BernoulliShift):
        return Cylinder((), frozenset({()}))
    return parse_event(text, system)


def _acting_poly(text: str, field: FieldSpec) -> Poly:
    return parse_poly(text, field)


# ---------------------------------------------------------------------------
# commands


def cmd_ideal_witness(args):
    field = _field(args)
    gens = _parse_gens(args.gens, field, args.nvars)
    if args.seq_file:
        seq = [parse_multipoly(line, field, gens.k) for line in _read_lines(args.seq_file)]
    elif args.random:
        rng = random.Random(args.seed)
        seq = _random_injective(field, gens.k, args.random, args.max_deg, rng)
    else:
        raise UsageError("ideal-witness needs --seq-file or --random N")
    try:
        w = ip_witness(seq, gens, args.scan_cap)
    except WitnessNotFound as exc:
        raise DomainFailure(str(exc), {"census": exc.census, "scanned": exc.scanned}) from None
    out = w.to_json()
    out["scanned"] = w.scanned
    out["bound"] = gens.pigeonhole_bound()
    out["params"] = {"field": _universe_info(field), "nvars": gens.k,
                     "gens": [[v + 1, format_poly(f)] for v, f in gens.gens],
                     "seed": args.seed if args.random else None}
    return out


def cmd_reduce(args):
    field = _field(args)
    if args.g is None:
        raise UsageError("reduce needs --g")
    if args.divisor is not None:
        g, f = parse_poly(args.g, field), parse_poly(args.divisor, field)
        h, r = poly_divmod(g, f)
        return {"g": format_poly(g), "divisor": format_poly(f), "quotient": format_poly(h),
                "remainder": format_poly(r), "params": {"field": _universe_info(field)}}
    if args.gens is None:
        raise UsageError("reduce needs --gens or --divisor")
    gens = _parse_gens(args.gens, field, args.nvars)
    g = parse_multipoly(args.g, field, gens.k)
    red = reduce(g, gens)
    return {"g": format_multipoly(g),
            "quotients": [format_multipoly(h) for h in red.quotients],
            "remainder": format_multipoly(red.remainder),
            "member": red.remainder.is_zero(),
            "params": {"field": _universe_info(field), "nvars": gens.k,
                       "gens": [[v + 1, format_poly(f)] for v, f in gens.gens]}}


def _set_arg(args, field, D):
    if args.set is None:
        raise UsageError("--set is required for this command")
    return parse_set(read_literal(args.set), field, D)


def cmd_classify_set(args):
    field = _field(args)
    D = _need_D(args)
    A = _set_arg(args, field, D)
    e = args.thick_e if args.thick_e is not None else max(D // 2, 0)
    ce = args.central_e if args.central_e is not None else D - 1
    cm = args.central_m if args.central_m is not None else min(D // 2, ce)
    out = {
        "size": len(A),
        "thick": is_thick(A, min(e, D - 1)).to_json(),
        "ip": is_ip_truncated(A, args.depth).to_json(),
        "central_necessary": central_necessary(A, cm, ce).to_json(),
    }
    if args.m is not None:
        out["coset_structure"] = coset_structure(A, args.m).to_json()
    out["params"] = {"universe": _universe_info(field, D), "depth": args.depth}
    return out


def cmd_fs(args):
    field = _field(args)
    D = _need_D(args)
    if args.gens is None:
        raise UsageError("fs needs --gens")
    gens = _poly_list(args.gens, field)
    if args.mode == "delta":
        s, overflow = delta_set(gens, field, D), 0
    else:
        res = fs_set(gens, args.mode, field, D)
        s, overflow = res.set, res.overflow
    return {"mode": args.mode, "members": [format_poly(f) for f in s.polys()],
            "indices": s.indices(), "size": len(s), "overflow": overflow,
            "params": {"universe": _universe_info(field, D)}}


def cmd_syndetic(args):
    field = _field(args)
    D = _need_D(args)
    A = _set_arg(args, field, D)
    m = args.m_max if args.m_max is not None else D // 2
    res = is_syndetic_mult(A, m) if args.multiplicative else is_syndetic(A, m)
    out = res.to_json()
    out["params"] = {"universe": _universe_info(field, D)}
    return out


def cmd_ipstar(args):
    field = _field(args)
    D = _need_D(args)
    A = _set_arg(args, field, D)
    cs = ipstar_proxy(A, args.k)
    out = {"verdict": "yes" if cs is not None else "no",
           "m": None if cs is None else cs.m,
           "exceptions": [] if cs is None else [format_poly(f) for f in cs.exceptions_removed]}
    if args.obstruct_seq:
        if args.m is None:
            raise UsageError("--obstruct-seq needs --m (coset modulus degree)")
        struct = coset_structure(A, args.m)
        seq = [parse_poly(line, field) for line in _read_lines(args.obstruct_seq)]
        out["obstruction"] = ip_obstruction(struct, seq).to_json()
        out["coset_structure"] = struct.to_json()
    out["params"] = {"universe": _universe_info(field, D), "max_exceptions": args.k,
                     "note": "containment of <X^m> up to exceptions, at truncation"}
    return out


def cmd_ramsey(args):
    field = _field(args)
    D = _need_D(args)
    S = _set_arg(args, field, D)
    if args.seq_file:
        seq = [parse_poly(line, field) for line in _read_lines(args.seq_file)]
    elif args.first:
        seq = list(enumerate_polys(field, D))[: args.first]
    else:
        raise UsageError("ramsey needs --seq-file or --first N")
    try:
        res = ramsey_refine(seq, S, args.target)
    except RamseyError as exc:
        raise DomainFailure(str(exc), {"best": exc.best.to_json()}) from None
    out = res.to_json()
    out["params"] = {"universe": _universe_info(field, D), "target": args.target,
                     "sequence_length": len(seq)}
    return out


def cmd_pullback(args):
    field = _field(args)
    D = _need_D(args)
    if args.nat is not None:
        C = NatSet(frozenset(int(x) for x in args.nat.split(",") if x != ""), D)
    elif args.fs_nat is not None:
        C = NatSet.finite_sums([int(x) for x in args.fs_nat.split(",")], D)
    elif args.evens:
        C = NatSet.evens(D)
    else:
        raise UsageError("pullback needs --nat, --fs-nat or --evens")
    A = deg_pullback(C, field, D)
    members = [f for f in enumerate_polys(field, D) if f in A]
    return {"degrees": C.sorted(), "members": [format_poly(f) for f in members],
            "indices": [canonical_index(f, D) for f in members], "size": len(members),
            "params": {"universe": _universe_info(field, D)}}


def cmd_simulate(args):
    system, data = _system(args)
    out = {"kind": system.kind, "action": system.action_kind, "params": system.params,
           "field": _universe_info(system.field)}
    if isinstance(system, BernoulliShift):
        out["states"] = None
        out["note"] = "cylinder calculus; no explicit state space"
        return out
    out["states"] = system.n
    out["weights"] = [frac_str(w) for w in system.weights]
    if args.D is not None:
        out["D"] = args.D
        out["measure_preserving"] = check_measure_preserving(system, args.D)
        if system.action_kind == "additive":
            out["additive_law"] = check_additive_law(system, args.D)
    if args.f:
        out["actions"] = {tok: system.perm(_acting_poly(tok, system.field)).tolist()
                          for tok in args.f.split(";") if tok.strip()}
    return out


def cmd_correlate(args):
    system, _ = _system(args)
    if args.A is None or args.B is None:
        raise UsageError("correlate needs --A and --B")
    A, B = _event(args.A, system), _event(args.B, system)
    eps = _eps(args)
    product = system.measure(A) * system.measure(B)
    if args.f is not None:
        f = _acting_poly(args.f, system.field)
        v = correlation(system, A, B, f, args.D)
        return {"value": frac_str(v), "product": frac_str(product),
                "in_good_set": abs(v - product) < eps, "epsilon": frac_str(eps)}
    D = _need_D(args)
    if args.values_only:
        return correlation_set(system, A, B, eps, D).to_json()
    rep = classify_mixing(system, A, B, eps, D, cofinite_band=args.band,
                          max_exceptions=args.k)
    out = rep.to_json()
    out["params"] = {"universe": _universe_info(system.field, D), "system": system.params,
                     "kind": system.kind}
    return out


def cmd_khintchine(args):
    system, _ = _system(args)
    if args.A is None:
        raise UsageError("khintchine needs --A")
    A = _event(args.A, system)
    eps = _eps(args)
    D = _need_D(args)
    coeffs = _poly_list(args.coeffs, system.field) if args.coeffs is not None else None
    if args.coeffs is not None and not coeffs:
        raise ValueError("coefficient list is empty")
    rep = khintchine_set(system, A, eps, D, coeffs=coeffs, powers=args.powers,
                         syndetic_m=args.m_max)
    out = rep.to_json()
    out["params"] = {"universe": _universe_info(system.field, D), "kind": system.kind,
                     "epsilon": frac_str(eps)}
    return out


COMMANDS = {
    "ideal-witness": cmd_ideal_witness,
    "reduce": cmd_reduce,
    "classify-set": cmd_classify_set,
    "fs": cmd_fs,
    "syndetic": cmd_syndetic,
    "ipstar": cmd_ipstar,
    "ramsey": cmd_ramsey,
    "pullback": cmd_pullback,
    "simulate": cmd_simulate,
    "correlate": cmd_correlate,
    "khintchine": cmd_khintchine,
}


class DomainFailure(Exception):
    def __init__(self, message: str, detail: dict | None = None):
        super().__init__(message)
        self.detail = detail or {}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    g = common.add_argument_group("field and universe")
    g.add_argument("--q", type=int)
    g.add_argument("--p", type=int)
    g.add_argument("--e", type=int)
    g.add_argument("--modulus", help="ascending coefficients of the extension modulus")
    g.add_argument("--D", type=int, help="degree bound of the truncated universe")
    g.add_argument("--eps", help="rational epsilon a/b")
    g.add_argument("--set", help="set definition literal or @file")
    g.add_argument("--system", help="system spec JSON file")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--format", choices=("json", "csv"), default="json")
    g.add_argument("--pretty", action="store_true", help="render polynomials as 1+X^2")
    g.add_argument("--output", help="write the report here instead of stdout")

    parser = _Parser(prog="fqip", description="IP*-sets and mixing in F_q[x] at truncation")
    parser.add_argument("--version", action="version", version=f"fqip {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("ideal-witness", parents=[common], help="finite sum in an ideal")
    p.add_argument("--gens", required=True, help='e.g. "X1:0,1;X2:0,1"')
    p.add_argument("--nvars", type=int)
    p.add_argument("--seq-file")
    p.add_argument("--random", type=int, help="use N seeded random distinct terms")
    p.add_argument("--max-deg", type=int, default=3)
    p.add_argument("--scan-cap", type=int)

    p = sub.add_parser("reduce", parents=[common], help="reduction / membership / divmod")
    p.add_argument("--gens")
    p.add_argument("--nvars", type=int)
    p.add_argument("--g")
    p.add_argument("--divisor", help="univariate divisor: run divmod instead")

    p = sub.add_parser("classify-set", parents=[common], help="thick / IP-depth / central proxy")
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--thick-e", type=int)
    p.add_argument("--central-m", type=int)
    p.add_argument("--central-e", type=int)
    p.add_argument("--m", type=int, help="also report the coset structure mod X^m")

    p = sub.add_parser("fs", parents=[common], help="finite sums / products / differences")
    p.add_argument("--gens", help='";"-separated polynomial literals')
    p.add_argument("--mode", choices=("additive", "multiplicative", "delta"), default="additive")

    p = sub.add_parser("syndetic", parents=[common], help="syndetic cover search")
    p.add_argument("--m-max", type=int)
    p.add_argument("--multiplicative", action="store_true")

    p = sub.add_parser("ipstar", parents=[common], help="IP*-proxy and IP obstruction")
    p.add_argument("--k", type=int, default=0, help="allowed exceptions")
    p.add_argument("--m", type=int)
    p.add_argument("--obstruct-seq")

    p = sub.add_parser("ramsey", parents=[common], help="monochromatic difference refinement")
    p.add_argument("--seq-file")
    p.add_argument("--first", type=int)
    p.add_argument("--target", type=int, default=4)

    p = sub.add_parser("pullback", parents=[common], help="deg pullback of a set of naturals")
    p.add_argument("--nat")
    p.add_argument("--fs-nat")
    p.add_argument("--evens", action="store_true")

    p = sub.add_parser("simulate", parents=[common], help="build a system and check it")
    p.add_argument("--f", help='";"-separated acting polynomials to print')

    p = sub.add_parser("correlate", parents=[common], help="correlations and mixing verdicts")
    p.add_argument("--A")
    p.add_argument("--B")
    p.add_argument("--f")
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--band", type=int, help="cofinite band degree (default D-2)")
    p.add_argument("--values-only", action="store_true")

    p = sub.add_parser("khintchine", parents=[common], help="Khintchine recurrence sets")
    p.add_argument("--A")
    p.add_argument("--coeffs", help='";"-separated coefficient polynomials')
    p.add_argument("--powers", type=int)
    p.add_argument("--m-max", type=int)
    return parser


# ---------------------------------------------------------------------------
# output


def _prettify(obj, key=None):
    if isinstance(obj, dict):
        return {k: _prettify(v, k) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_prettify(v, key) for v in obj]
    if isinstance(obj, str) and key in POLY_KEYS:
        return _pretty_codec(obj)
    return obj


def _pretty_codec(text: str) -> str:
    if "@" in text:
        terms = []
        for tok in text.split():
            c, _, exps = tok.partition("@")
            e = [int(x) for x in exps.split(",")]
            mono = "*".join(f"X{i + 1}" if x == 1 else f"X{i + 1}^{x}" for i, x in enumerate(e) if x)
            terms.append(mono if c == "1" and mono else (f"{c}{mono}" if mono else c))
        return "+".join(terms)
    try:
        coeffs = [int(x) for x in text.split(",")]
    except ValueError:
        return text
    parts = []
    for i, c in enumerate(coeffs):
        if c == 0:
            continue
        mono = "" if i == 0 else ("X" if i == 1 else f"X^{i}")
        parts.append(str(c) if not mono else (mono if c == 1 else f"{c}{mono}"))
    return "+".join(parts) or "0"


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if isinstance(report.get("values"), list) and report["values"] and isinstance(report["values"][0], list):
        w.writerow(["f_index", "num", "den"])
        w.writerows(report["values"])
        rows = [(k, v) for k, v in report.items() if k != "values"]
    else:
        w.writerow(["key", "value"])
        rows = list(report.items())
    for k, v in rows:
        w.writerow([k, v if isinstance(v, str) else json.dumps(v, separators=(",", ":"))])
    return buf.getvalue()


def _emit(text: str, path: str | None):
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    target = Path(path)
    fd, tmp = tempfile.mkstemp(dir=target.parent or ".", prefix=".fqip-")
    with os.fdopen(fd, "w") as fh:
        fh.write(text)
    os.replace(tmp, target)


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    if args.command is None:
        sys.stderr.write("usage error: no command given\n")
        return EXIT_USAGE
    fmt = getattr(args, "format", "json")
    try:
        report = COMMANDS[args.command](args)
        report = {"command": args.command, **report}
        if args.pretty:
            report = _prettify(report)
        _emit(render(report, fmt), args.output)
        return EXIT_OK
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except DomainFailure as exc:
        err = {"command": args.command, "error": {"type": "DomainFailure", "message": str(exc),
                                                  **exc.detail}}
    except (ValueError, ZeroDivisionError, OSError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
        err = {"command": args.command, "error": {"type": type(exc).__name__, "message": str(msg)}}
    _emit(render(err, fmt), args.output)
    return EXIT_DOMAIN


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
