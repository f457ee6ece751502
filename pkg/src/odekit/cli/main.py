"""Command-line front end.

Exit status: 0 on success, 1 when a verification reports FAIL, 2 on usage,
parse or precondition errors.  JSON output is compact and key order is fixed,
so identical invocations print identical bytes.
"""
from __future__ import annotations

import argparse
import functools
import json
import sys
from pathlib import Path
from typing import Sequence

from .. import casebook, formal, frank
from ..field import NearTieError, Order, ray_compare
from ..linop import change_variables, compose, gauge_normalize, gcrd, right_divide, wronskian
from ..tower import TowerError, parse_declarations
from .expr import ExprError, Scope, eval_operator, eval_scalar, eval_text, split_top

VERBS = ("exp-parts", "formal-solve", "wronskian", "compose", "rdivide", "gcrd", "gauge",
         "changevar", "frank-gen", "frank-check", "verify", "report")


class UsageError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=False)


def _scope(args) -> Scope:
    if not args.tower:
        return Scope()
    text = Path(args.tower).read_text(encoding="utf-8")
    return Scope(parse_declarations(text, lambda arg, T: eval_scalar(arg, Scope(T))))


def _expr(x) -> str:
    return x.expr() if hasattr(x, "expr") else str(x)


# --------------------------------------------------------------------------- verbs


def cmd_exp_parts(args, scope):
    L = eval_operator(args.op, scope)
    parts = formal.exponential_parts(L)
    out = parts.to_json()
    if parts.approximate:
        out["approximate"] = True
    if args.theta is not None:
        ordered = _ray_sort(parts.multiset(), args.theta)
        out["ray"] = {"theta": args.theta, "ascending": [q.expr() for q in ordered]}
        if len(parts.multiset()) == 3 and len(set(parts.multiset())) == 3:
            case, kappa = formal.classify_parts_on_ray(parts.multiset(), args.theta)
            out["ray"]["case"] = case.value
            out["ray"]["kappa"] = [q.expr() for q in kappa]
    text = "\n".join(q.expr() for q in parts.multiset()) + f"\nram {parts.ram}"
    return out, text, 0


def _ray_sort(parts, theta: float):
    def cmp(a, b):
        o = ray_compare(a.poly, b.poly, theta)
        return {Order.PREC: -1, Order.SIM: 0, Order.SUCC: 1}[o]

    return sorted(parts, key=functools.cmp_to_key(cmp))


def _solutions(L, trunc: int):
    parts = formal.exponential_parts(L)
    return parts, [formal.formal_solution(L, q, trunc) for q in parts.multiset()]


def cmd_formal_solve(args, scope):
    L = eval_operator(args.op, scope)
    parts, sols = _solutions(L, args.trunc)
    out = {"ram": parts.ram, "solutions": [s.to_json() for s in sols]}
    text = "\n".join(f"exp({s.exp_part.expr()}) z^({s.gamma}) [{', '.join(map(str, s.series))}]" for s in sols)
    return out, text, 0


def cmd_wronskian(args, scope):
    vals = [eval_text(t, scope) for t in args.exprs]
    ops = [v for v in vals if hasattr(v, "order")]
    if ops:
        if len(vals) != 1:
            raise UsageError("give one operator (formal Wronskian) or several scalars")
        _, sols = _solutions(ops[0], args.trunc)
        W = formal.formal_wronskian(sols)
        return W.to_json(), f"exp({W.exp_part.expr()}) z^({W.gamma}) [{', '.join(map(str, W.series))}]", 0
    W = wronskian(vals)
    return {"wronskian": _expr(W)}, _expr(W), 0


def cmd_compose(args, scope):
    A = eval_operator(args.a, scope)
    B = eval_operator(args.b, scope)
    C = compose(A, B)
    return {"op": C.expr()}, C.expr(), 0


def cmd_rdivide(args, scope):
    Q, R = right_divide(eval_operator(args.n, scope), eval_operator(args.p, scope))
    return {"q": Q.expr(), "r": R.expr()}, f"q = {Q.expr()}\nr = {R.expr()}", 0


def cmd_gcrd(args, scope):
    G = gcrd([eval_operator(t, scope) for t in args.ops])
    return {"gcrd": G.expr()}, G.expr(), 0


def cmd_gauge(args, scope):
    L, u = gauge_normalize(eval_operator(args.op, scope))
    return {"op": L.expr(), "u": _expr(u)}, f"{L.expr()}\nu = {_expr(u)}", 0


def cmd_changevar(args, scope):
    L = change_variables(eval_operator(args.op, scope), args.n)
    return {"op": L.expr()}, L.expr(), 0


def _system(args, scope) -> frank.FrankSystem:
    c = [eval_scalar(t, scope) for t in split_top(args.c)]
    C = [eval_scalar(t, scope) for t in split_top(args.C)]
    zero = eval_scalar("0", scope)
    return frank.FrankSystem(args.k, tuple(zero + x for x in c), tuple(zero + x for x in C))


def cmd_frank_gen(args, scope):
    sys_ = _system(args, scope)
    rels = []
    for mu in range(sys_.k):
        r = frank.frank_equation(sys_, mu)
        rels.append({"mu": mu, "phi": r.left.expr(), "g": r.right.expr()})
    out = {
        "k": sys_.k,
        "D": [_expr(sys_.D_(mu)) for mu in range(sys_.k - 1)],
        "relations": rels,
    }
    text = "\n".join(f"mu={r['mu']}: ({r['phi']})[Phi] = ({r['g']})[G]" for r in rels)
    return out, text, 0


def cmd_frank_check(args, scope):
    sys_ = _system(args, scope)
    pair = {}
    for item in split_top(args.pair):
        name, _, val = item.partition("=")
        pair[name.strip()] = eval_scalar(val, scope)
    if set(pair) != {"G", "Phi"}:
        raise UsageError("--pair needs G=... and Phi=...")
    res = frank.check_pair(sys_, pair["G"], pair["Phi"])
    rows = [{"mu": mu, "residual": _expr(r), "ok": r.is_zero()} for mu, r in enumerate(res)]
    ok = all(r["ok"] for r in rows)
    out = {"k": sys_.k, "status": "EXACT-PASS" if ok else "FAIL", "residuals": rows}
    text = "\n".join(f"mu={r['mu']}: {'EXACT-PASS' if r['ok'] else 'FAIL'} {r['residual']}" for r in rows)
    return out, text, 0 if ok else 1


def _poly_arg(text: str | None, default: str):
    return eval_scalar(text or default, Scope())


def cmd_verify(args, scope):
    name = args.scenario
    single = {
        "example1": lambda: casebook.verify_example1(_poly_arg(args.delta, "z"), args.k or 3, args.m or 2),
        "example2": lambda: casebook.verify_example2(_poly_arg(args.P, "z")),
        "example3": lambda: casebook.verify_example3(
            args.m or 2, [eval_scalar(t, Scope()).const_value().re for t in split_top(args.P1 or "0,0,1")]),
        "representations": lambda: casebook.verify_theorem_reps(args.k or 3, _poly_arg(args.delta, "z"), args.m or 2),
        "exponential-elimination": lambda: casebook.verify_exponential_elimination(args.k or 3),
    }
    if name not in single:
        raise UsageError(f"unknown scenario {name!r}; choose from {', '.join(sorted(single))}")
    given = any(v is not None for v in (args.P, args.P1, args.delta, args.k, args.m))
    if given:
        reports = [single[name]()]
        for r in reports:
            r.seed = args.seed
    else:
        reports = casebook.run_all(casebook.RunConfig(args.seed, (name,)))
    return _report_out(reports, args)


def cmd_report(args, scope):
    names = tuple(args.scenario) if args.scenario else None
    reports = casebook.run_all(casebook.RunConfig(args.seed, names, args.timings))
    out, text, code = _report_out(reports, args)
    if args.out:
        Path(args.out).write_text(_dump(out) + "\n", encoding="utf-8")
    return out, text, code


def _report_out(reports, args):
    body = json.loads(casebook.reports_json(reports, args.seed, getattr(args, "timings", False)))
    text = "\n".join(r.text() for r in reports) + f"\n{body['status']}"
    return body, text, 0 if body["status"] == "EXACT-PASS" else 1


# --------------------------------------------------------------------------- argument parsing


def build_parser() -> argparse.ArgumentParser:
    def common(top: bool) -> argparse.ArgumentParser:
        # global flags may come before or after the verb; only the top level carries defaults,
        # otherwise the subparser would overwrite values given before the verb
        c = argparse.ArgumentParser(add_help=False)
        d = (lambda v: v) if top else (lambda v: argparse.SUPPRESS)
        c.add_argument("--format", choices=("json", "text"), default=d("json"))
        c.add_argument("--seed", type=int, default=d(0))
        c.add_argument("--trunc", type=int, default=d(formal.DEFAULT_TRUNC))
        c.add_argument("--tower", metavar="FILE", default=d(None),
                       help="generator declarations, one 'gen NAME : KIND = ARG;' per line")
        c.add_argument("--theta", type=float, default=d(None),
                       help="ray argument in radians for ordering exponential parts")
        return c

    p = argparse.ArgumentParser(prog="odekit", description="Exact toolkit for linear differential operators.",
                                parents=[common(True)])
    sub = p.add_subparsers(dest="verb", required=True, metavar="VERB")

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_, parents=[common(False)])
        sp.set_defaults(fn=fn)
        return sp

    add("exp-parts", cmd_exp_parts, "exponential parts at infinity").add_argument("op")
    add("formal-solve", cmd_formal_solve, "log-free formal solutions").add_argument("op")
    add("wronskian", cmd_wronskian, "Wronskian of scalars, or formal Wronskian of an operator").add_argument(
        "exprs", nargs="+")
    sp = add("compose", cmd_compose, "composition A o B")
    sp.add_argument("a")
    sp.add_argument("b")
    sp = add("rdivide", cmd_rdivide, "right division N = q o P + r")
    sp.add_argument("n")
    sp.add_argument("p")
    add("gcrd", cmd_gcrd, "greatest common right divisor").add_argument("ops", nargs="+")
    add("gauge", cmd_gauge, "remove the D^(k-1) term").add_argument("op")
    sp = add("changevar", cmd_changevar, "operator for f(z^n)")
    sp.add_argument("op")
    sp.add_argument("--n", type=int, default=2)
    for name, fn in (("frank-gen", cmd_frank_gen), ("frank-check", cmd_frank_check)):
        sp = add(name, fn, "relation set of the auxiliary construction" if fn is cmd_frank_gen
                 else "check a (G, Phi) pair against every relation")
        sp.add_argument("--k", type=int, required=True)
        sp.add_argument("--c", required=True, help="comma-separated c_0..c_{k-2}")
        sp.add_argument("--C", required=True, help="comma-separated C_0..C_{k-2}")
        if fn is cmd_frank_check:
            sp.add_argument("--pair", required=True, help="G=EXPR,Phi=EXPR")
    sp = add("verify", cmd_verify, "run one casebook scenario")
    sp.add_argument("scenario")
    sp.add_argument("--P")
    sp.add_argument("--P1", help="comma-separated coefficients of the even polynomial P1")
    sp.add_argument("--delta")
    sp.add_argument("--k", type=int)
    sp.add_argument("--m", type=int)
    sp = add("report", cmd_report, "run every casebook scenario")
    sp.add_argument("--scenario", action="append")
    sp.add_argument("--timings", action="store_true", help="include wall times (breaks byte-identical output)")
    sp.add_argument("--out", metavar="FILE")
    return p


def _normalise(argv: list[str]) -> list[str]:
    # "frank gen" / "frank check" are accepted as two-word spellings
    for i, a in enumerate(argv):
        if a == "frank" and i + 1 < len(argv) and argv[i + 1] in ("gen", "check"):
            return argv[:i] + [f"frank-{argv[i + 1]}"] + argv[i + 2:]
        if a in VERBS:
            break
    return argv


def main(argv: Sequence[str] | None = None) -> int:
    argv = _normalise(list(sys.argv[1:] if argv is None else argv))
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        scope = _scope(args)
        out, text, code = args.fn(args, scope)
    except (ExprError, UsageError, TowerError, NearTieError, formal.FormalError,
            formal.UnsupportedLogError, ValueError, TypeError, ZeroDivisionError, OSError) as exc:
        print(f"odekit: error: {exc}", file=sys.stderr)
        return 2
    print(_dump(out) if args.format == "json" else text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
