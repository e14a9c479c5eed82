"""Command line entry point.

Exit status: 0 when everything checked passes, 1 on failed checks,
2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from ._rational import AsymlinError, CapacityError, fmt, parse_rational
from .bilinear import (
    BilinearOp,
    adjoint_norm,
    bilin_norm,
    operator_distance,
    precompact_class,
    schauder_bilinear_net,
    sym_norm,
)
from .instances import ParseError, parse_instance, parse_vector
from .linear import Functional, LinearOp, adjoint, dual_norm, op_norm, schauder_linear_check
from .polyhedral import Limits, Polyhedron, enumerate_v_rep
from .precompact import polyhedron_precompact
from .space import AsymNorm, symmetrize, unit_ball
from .suites import SUITES, SuiteOptions, run_suite

VERBS = ("eval", "norm", "dual", "adjoint", "precompact", "distance", "net")


class UsageError(AsymlinError):
    pass


def _get(objs, key, kind):
    if key not in objs:
        raise UsageError(f"unknown name {key!r}")
    if not isinstance(objs[key], kind):
        raise UsageError(f"{key!r} is not a {getattr(kind, '__name__', 'valid object')}")
    return objs[key]


def _arity(args, n, verb):
    if len(args) != n:
        raise UsageError(f"{verb} takes {n} argument(s), got {len(args)}")


def evaluate(objs: dict, op: str, args, eps=None, limits: Limits | None = None) -> dict:
    """Run one verb against resolved objects; ``value`` is the headline result."""
    lim = limits or Limits()
    if op == "eval":
        _arity(args, 2, op)
        p = _get(objs, args[0], AsymNorm)
        return {"value": fmt(p(parse_vector(args[1])))}
    if op == "dual":
        _arity(args, 2, op)
        p = _get(objs, args[0], AsymNorm)
        return {"value": fmt(dual_norm(Functional(parse_vector(args[1]), p)))}
    if op == "norm":
        _arity(args, 1, op)
        T = _get(objs, args[0], (LinearOp, BilinearOp))
        if isinstance(T, LinearOp):
            sym = op_norm(T.with_norms(symmetrize(T.source), symmetrize(T.target)))
            return {"value": fmt(op_norm(T)), "symmetric": fmt(sym)}
        return {"value": fmt(bilin_norm(T)), "symmetric": fmt(sym_norm(T))}
    if op == "adjoint":
        _arity(args, 1, op)
        T = _get(objs, args[0], (LinearOp, BilinearOp))
        if isinstance(T, LinearOp):
            return {"value": fmt(op_norm(adjoint(T, lim))), "norm": fmt(op_norm(T))}
        return {"value": fmt(adjoint_norm(T, lim)), "norm": fmt(bilin_norm(T))}
    if op == "precompact":
        _arity(args, 1, op)
        T = _get(objs, args[0], (LinearOp, BilinearOp))
        if isinstance(T, BilinearOp):
            c = precompact_class(T)
            return {"value": c.qs.value, "q": c.q.value, "q_outside": c.q_outside.value}
        ball = enumerate_v_rep(unit_ball(T.source), lim)
        image = Polyhedron(T.target.dim, v_rep=(tuple(T(v) for v in ball.vertices), tuple(T(r) for r in ball.rays if any(T(r)))))
        vq = polyhedron_precompact(image, T.target)
        vs = polyhedron_precompact(image, symmetrize(T.target))
        out = {"value": vs.status.value, "q": vq.status.value}
        if vs.ray is not None:
            out["ray"] = "[" + ",".join(fmt(x) for x in vs.ray) + "]"
        return out
    if op == "distance":
        _arity(args, 2, op)
        T1, T2 = _get(objs, args[0], BilinearOp), _get(objs, args[1], BilinearOp)
        d = operator_distance(T1, T2)
        return {"value": fmt(d.forward), "symmetric": fmt(d.symmetric)}
    if op == "net":
        if len(args) == 2:
            eps = parse_rational(args[1])
        else:
            _arity(args, 1, op)
        if eps is None:
            raise UsageError("net needs --eps or an eps argument")
        eps = Fraction(eps)
        T = _get(objs, args[0], (LinearOp, BilinearOp))
        if isinstance(T, LinearOp):
            r = schauder_linear_check(T, eps, lim)
            if r.radius is None:
                return {"value": "refused", "ray": "[" + ",".join(fmt(x) for x in r.ray) + "]"}
            return {"value": "verified" if r.verified else "failed", "radius": fmt(r.radius), "size": str(len(r.image_net))}
        r = schauder_bilinear_net(T, eps, lim)
        if r.radius is None:
            return {"value": "refused", "witness": r.witness[0]}
        return {"value": "verified" if r.certified else "failed", "radius": fmt(r.radius), "size": str(len(r.form_net))}
    raise UsageError(f"unknown operation {op!r}; choose from {', '.join(VERBS)}")


def _emit(data: dict, fmt_name: str):
    if fmt_name == "json":
        print(json.dumps(data, sort_keys=True))
    else:
        print(" ".join(f"{k}={v}" for k, v in data.items()))


def _load(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    return parse_instance(text, name=Path(path).stem)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="asymlin", description="Exact asymmetric-norm computations.")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--dim-cap", type=int, default=6)
    ap.add_argument("--generator-cap", type=int, default=32)
    ap.add_argument("--eps", type=parse_rational, default=None)
    ap.add_argument("--format", choices=("text", "json"), default="text")
    sub = ap.add_subparsers(dest="verb", required=True)
    for verb in VERBS:
        sp = sub.add_parser(verb)
        sp.add_argument("file")
        sp.add_argument("args", nargs="*")
    sp = sub.add_parser("verify", help="run every check directive of an instance file")
    sp.add_argument("file")
    sp = sub.add_parser("suite", help="run a named check suite")
    sp.add_argument("name")
    sp.add_argument("--count", type=int, default=None)
    sp.add_argument("--instance", default=None, help="replay a single corpus item")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    ns = ap.parse_args(argv)
    limits = Limits(ns.dim_cap, ns.generator_cap)
    try:
        if ns.verb == "suite":
            if ns.name not in SUITES:
                print(f"unknown suite {ns.name!r}; available: {', '.join(sorted(SUITES))}", file=sys.stderr)
                return 2
            opts = SuiteOptions(ns.seed, ns.count, ns.eps, ns.dim_cap, ns.generator_cap)
            if ns.instance:
                from .suites import run_check

                rec = run_check(ns.name, ns.instance, opts)
                _emit(rec.to_dict() if ns.format == "json" else {"status": rec.status, **rec.values}, ns.format)
                return 0 if rec.status != "fail" else 1
            report = run_suite(ns.name, opts)
            print(report.to_json() if ns.format == "json" else report.to_text())
            return 0 if report.ok else 1
        inst = _load(ns.file)
        objs = inst.build(limits)
        if ns.verb == "verify":
            failures = 0
            for d in inst.directives:
                out = evaluate(objs, d.op, d.args, ns.eps, limits)
                if d.expected is None:
                    status = "report"
                else:
                    status = "pass" if out["value"] == d.expected else "fail"
                    failures += status == "fail"
                _emit({"line": d.line, "check": " ".join((d.op, *d.args)), "status": status, **out}, ns.format)
            return 1 if failures else 0
        _emit(evaluate(objs, ns.verb, ns.args, ns.eps, limits), ns.format)
        return 0
    except (ParseError, UsageError, CapacityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except AsymlinError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
