"""Command-line front end.

Exit status: 0 on success, 1 when the answer is a domain failure (unit
ideal, inconsistent or undecided verdict, incoherent set, failed lifting
test, invalid autoreduced set), 2 on usage or parse errors.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from fractions import Fraction

from . import chevalley, difference, reduction
from .errors import (
    DerivationIndexOutOfRange,
    InvalidRing,
    ParseError,
    RittkitError,
    UnitOrZeroInput,
    UnsupportedDegree,
)
from .fields import FunctionField
from .funcfield import Specialization, wronskian
from .parser import parse_expression, parse_expressions, parse_ring

SCHEMA = 1


class UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _ArgumentParser(prog="rittkit", description="Differential elimination toolkit")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    def common(sp, ring=True):
        if ring:
            sp.add_argument("--ring", default="N=1,vars=y", help="e.g. N=2,vars=y1,y2,params=u,field=Q")
        sp.add_argument("--format", choices=["text", "json"], default="text")
        return sp

    def with_set(sp):
        sp.add_argument("--set", action="append", default=[], metavar="EXPR", help="member polynomial (repeatable)")
        sp.add_argument("--set-file", metavar="PATH", help="file with one polynomial per line")
        return sp

    with_set(common(sub.add_parser("reduce", help="full reduction with certificate"))).add_argument("--target", required=True)
    with_set(common(sub.add_parser("charset", help="characteristic set of a finite set")))
    with_set(common(sub.add_parser("member", help="saturation membership test"))).add_argument("--target", required=True)
    with_set(common(sub.add_parser("coherent", help="Rosenfeld coherence check")))

    sp = with_set(common(sub.add_parser("witness", help="witness element of the coefficient ring")))
    sp.add_argument("--presentation", metavar="PATH", help="presentation JSON file")
    sp.add_argument("--target")

    sp = with_set(common(sub.add_parser("check", help="specialize and check consistency")))
    sp.add_argument("--target", default="1")
    sp.add_argument("--phi", action="append", default=[], metavar="NAME=EXPR")
    sp.add_argument("--field", default=None, help="target field, default Q(t1..tN)")

    sp = with_set(common(sub.add_parser("lift-test", help="randomized lifting harness")))
    sp.add_argument("--witness", required=True)
    sp.add_argument("--target", default="1")
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)

    sp = common(sub.add_parser("wronskian", help="Wronskian of rational functions in t1"), ring=False)
    sp.add_argument("functions", nargs="+", metavar="F")

    sp = common(sub.add_parser("fiber", help="fibre of x -> x^2 over (x - n)"), ring=False)
    sp.add_argument("--n", required=True)

    sp = common(sub.add_parser("sigma", help="apply sigma: x -> -x"), ring=False)
    sp.add_argument("--poly", required=True)

    sp = common(sub.add_parser("demo-liftfail", help="square-root lifting obstruction"), ring=False)
    sp.add_argument("--exponent", type=int, default=1)
    return p


# ----------------------------------------------------------------------


def _read_set(args, ring):
    polys = [parse_expression(s, ring) for s in args.set]
    if args.set_file:
        with open(args.set_file, encoding="utf-8") as fh:
            polys.extend(parse_expressions(fh.read(), ring))
    return polys


def _emit(out, args, payload: dict, text: str):
    if args.format == "json":
        doc = {"schema": SCHEMA, "command": args.command}
        doc.update(payload)
        out.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    else:
        out.write(text.rstrip("\n") + "\n")


def _certificate_text(cert, A) -> list[str]:
    lines = [
        f"remainder: {cert.remainder}",
        f"multiplier: {cert.multiplier}",
        f"m: {cert.h_exponent}",
        "quotients:",
    ]
    for (idx, theta), q in sorted(cert.quotients.items()):
        lines.append(f"  member {idx} ({A.members[idx]}), theta {list(theta)}: {q}")
    return lines


def _cmd_reduce(args, out):
    ring = parse_ring(args.ring)
    polys = _read_set(args, ring)
    g = parse_expression(args.target, ring)
    A = reduction.AutoreducedSet(polys, ring)
    cert = reduction.full_reduce(g, A)
    _emit(
        out,
        args,
        {"ring": str(ring), "set": [str(f) for f in A], "target": str(g), "certificate": cert.to_json()},
        "\n".join(_certificate_text(cert, A)),
    )
    return 0


def _cmd_charset(args, out):
    ring = parse_ring(args.ring)
    polys = _read_set(args, ring)
    res = reduction.characteristic_set(polys)
    if isinstance(res, reduction.UnitIdeal):
        _emit(out, args, {"result": "UnitIdeal", "witness": str(res.witness)}, f"UnitIdeal (witness {res.witness})")
        return 1
    _emit(out, args, {"result": "AutoreducedSet", "members": [str(f) for f in res]}, "\n".join(str(f) for f in res))
    return 0


def _cmd_member(args, out):
    ring = parse_ring(args.ring)
    A = reduction.AutoreducedSet(_read_set(args, ring), ring)
    g = parse_expression(args.target, ring)
    res = reduction.membership(g, A)
    if isinstance(res, reduction.CertifiedMember):
        text = f"CertifiedMember (m={res.certificate.h_exponent}, multiplier {res.certificate.multiplier})"
        payload = {"result": "CertifiedMember", "certificate": res.certificate.to_json()}
    else:
        text = f"ReducedNonzero: {res.remainder}"
        payload = {"result": "ReducedNonzero", "remainder": str(res.remainder), "certificate": res.certificate.to_json()}
    _emit(out, args, payload, text)
    return 0


def _cmd_coherent(args, out):
    ring = parse_ring(args.ring)
    A = reduction.AutoreducedSet(_read_set(args, ring), ring)
    rep = reduction.coherence_check(A)
    pairs = [
        {
            "i": p.i,
            "j": p.j,
            "common_derivative": ring.format_variable(p.common_derivative),
            "delta": str(p.delta),
            "remainder": str(p.remainder),
        }
        for p in rep.pairs
    ]
    lines = ["coherent" if rep.ok else "not coherent"]
    for p in pairs:
        lines.append(f"  pair ({p['i']}, {p['j']}) at {p['common_derivative']}: delta {p['delta']} -> {p['remainder']}")
    _emit(out, args, {"coherent": rep.ok, "pairs": pairs}, "\n".join(lines))
    return 0 if rep.ok else 1


def _cmd_witness(args, out):
    if args.presentation:
        with open(args.presentation, encoding="utf-8") as fh:
            pres = chevalley.Presentation.from_json(fh.read())
    else:
        ring = parse_ring(args.ring)
        if ring.m != 1:
            raise UsageError("without --presentation the ring must have exactly one unknown")
        if args.target is None:
            raise UsageError("--target is required")
        base = ring.__class__(ring.n_derivations, (), ring.coefficient_field, ring.parameters)
        pres = chevalley.Presentation(base, ring.variables, [_read_set(args, ring)], parse_expression(args.target, ring))
    problems = pres.validate()
    if problems:
        _emit(out, args, {"valid": False, "problems": problems}, "invalid presentation:\n" + "\n".join(problems))
        return 1
    trace: list = []
    a = chevalley.witness_chain(pres, trace)
    steps = [
        {"level": s.level, "case": s.case, "target": str(s.target), "witness": str(s.witness)} for s in trace
    ]
    lines = [f"witness: {a}"] + [
        f"  level {s['level']} ({s['case']}): target {s['target']} -> {s['witness']}" for s in steps
    ]
    _emit(out, args, {"witness": str(a), "steps": steps}, "\n".join(lines))
    return 0


def _target_field(args, ring):
    if args.field:
        from .fields import parse_field

        fld = parse_field(args.field)
        if not isinstance(fld, FunctionField):
            raise InvalidRing("target field must be Q(t1,..)")
        return fld
    if isinstance(ring.coefficient_field, FunctionField):
        return ring.coefficient_field
    return FunctionField.standard(max(1, ring.n_derivations))


def _parse_phi(args, ring, fld) -> Specialization:
    from .core import RingConfig

    images = {}
    cring = RingConfig(0, (), fld)
    for item in args.phi:
        if "=" not in item:
            raise UsageError(f"--phi expects NAME=EXPR, got {item!r}")
        name, expr = item.split("=", 1)
        images[name.strip()] = parse_expression(expr, cring).constant_coefficient()
    return Specialization(images, fld)


def _cmd_check(args, out):
    ring = parse_ring(args.ring)
    A = reduction.AutoreducedSet(_read_set(args, ring), ring)
    B = parse_expression(args.target, ring)
    fld = _target_field(args, ring)
    phi = _parse_phi(args, ring, fld)
    verdict = chevalley.specialize_and_check(A, B, phi)
    _emit(out, args, {"verdict": verdict.status, "reason": verdict.reason}, str(verdict))
    return 0 if verdict.consistent else 1


def _cmd_lift_test(args, out):
    ring = parse_ring(args.ring)
    A = reduction.AutoreducedSet(_read_set(args, ring), ring)
    a = parse_expression(args.witness, ring)
    B = parse_expression(args.target, ring)
    seed = int(os.environ.get("RITTKIT_SEED", args.seed))
    rep = chevalley.prime_lift_check(A, a, args.trials, seed, target=B)
    lines = [
        f"{rep.consistent}/{rep.trials} Consistent "
        f"({rep.inconsistent} Inconsistent, {rep.unknown} Unknown, {rep.rejected} rejected samples)"
    ]
    for t in rep.failures:
        lines.append(f"  trial {t.index}: {t.phi}: {t.verdict}")
    payload = rep.to_json()
    payload["seed"] = seed
    _emit(out, args, payload, "\n".join(lines))
    return 0 if rep.passed else 1


def _cmd_wronskian(args, out):
    from .core import RingConfig

    fld = FunctionField(("t1",))
    cring = RingConfig(0, (), fld)
    fs = [parse_expression(_t_alias(src), cring).constant_coefficient() for src in args.functions]
    w = wronskian(fs)
    _emit(out, args, {"functions": [str(f) for f in fs], "wronskian": str(w)}, str(w))
    return 0


def _t_alias(src: str) -> str:
    """Accept a bare ``t`` for the single parameter."""
    return re.sub(r"\bt\b", "t1", src)


def _parse_rational(s: str) -> Fraction:
    try:
        return Fraction(s.strip())
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not a rational number: {s!r}")


def _cmd_fiber(args, out):
    n = _parse_rational(args.n)
    res = difference.fiber_nonempty(n)
    head = f"nonempty, witness ({res.witness})" if res.nonempty else "empty"
    _emit(out, args, res.to_json(), "\n".join([head] + ["  " + t for t in res.trace]))
    return 0


def _cmd_sigma(args, out):
    f = difference.SigmaPoly.parse(args.poly)
    s = difference.sigma_apply(f)
    payload = {"poly": str(f), "sigma": str(s)}
    lines = [f"sigma({f}) = {s}"]
    try:
        tp = difference.is_transformally_prime_principal(f)
        lines.append(f"({f}) transformally prime: {'yes' if tp else 'no'}")
    except (UnitOrZeroInput, UnsupportedDegree) as e:
        tp = None
        lines.append(f"({f}) transformally prime: not decided ({e})")
    payload["transformally_prime"] = tp
    _emit(out, args, payload, "\n".join(lines))
    return 0


def _cmd_demo_liftfail(args, out):
    rep = difference.lift_obstruction_demo(args.exponent)
    _emit(out, args, rep.to_json(), str(rep))
    return 0


COMMANDS = {
    "reduce": _cmd_reduce,
    "charset": _cmd_charset,
    "member": _cmd_member,
    "coherent": _cmd_coherent,
    "witness": _cmd_witness,
    "check": _cmd_check,
    "lift-test": _cmd_lift_test,
    "wronskian": _cmd_wronskian,
    "fiber": _cmd_fiber,
    "sigma": _cmd_sigma,
    "demo-liftfail": _cmd_demo_liftfail,
}


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        err.write(f"usage error: {e}\n")
        return 2
    try:
        return COMMANDS[args.command](args, out)
    except (UsageError, ParseError, InvalidRing, DerivationIndexOutOfRange, OSError, json.JSONDecodeError) as e:
        err.write(f"error: {e}\n")
        return 2
    except RittkitError as e:
        err.write(f"error: {type(e).__name__}: {e}\n")
        return 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
