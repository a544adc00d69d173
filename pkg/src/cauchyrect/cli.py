"""``cauchyrect`` command line.

Every command builds one report ``{command, inputs, values, errors, pass}``
and prints it as JSON, CSV or text.  Exit status: 0 when every pass flag is
true, 1 when one is false, 2 on usage or parameter errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import catalog, realaxis, theorems
from .complexfn import RationalFn, as_callable, parse_expr
from .complexfn.rational import polyval
from .contour import Rectangle, integrate_rectangle
from .errors import CauchyRectError, ParameterError
from .residues import (default_radius, residue_limit_extrapolated, residue_simple_pole_formula,
                       residue_via_circle)

TOL_RANGE = (1e-12, 1e-2)
DEFAULT_R_GRID = "10,100,1000,10000"


class UsageError(Exception):
    pass


# -- argument helpers ------------------------------------------------------

def _floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"expected a comma-separated list of numbers, got {text!r}") from None


def _complexes(text: str) -> list[complex]:
    try:
        return [complex(t.strip().replace(" ", "")) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated complex coefficients, got {text!r}") from None


def _params(args, formula_id: str | None = None) -> catalog.Params:
    c = args.c
    if formula_id is not None:
        if not catalog.entry(formula_id).needs_c:
            c = None
        elif c is None:
            c = 2.0 * args.a
    return catalog.Params(args.a, args.b, args.r, c)


def _inputs(args, **extra) -> dict:
    out = {k: v for k, v in (("a", args.a), ("b", args.b), ("r", args.r), ("c", args.c))
           if v is not None}
    out.update(extra)
    return out


def _cx(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _report(command, inputs, values, errors=None, passes=None, rows=None, header=None):
    rep = {"command": command, "inputs": inputs, "values": values,
           "errors": errors or {}, "pass": passes or {}}
    if rows is not None:
        rep["values"]["rows"] = rows
        rep["_header"] = header
    return rep


# -- commands --------------------------------------------------------------

def cmd_list(args):
    rows = [{"id": e.id, "needs_c": e.needs_c, "formula": e.label} for e in catalog.ENTRIES.values()]
    return _report("list", {}, {}, rows=rows, header=["id", "needs_c", "formula"])


def cmd_eval(args):
    p = _params(args, args.id)
    value = catalog.closed_form(args.id, p)
    return _report("eval", _inputs(args, id=args.id), {"closed_form": value})


def _verify_one(formula_id, args):
    rep = catalog.verify_formula(formula_id, _params(args, formula_id), args.tol, args.chunks)
    return rep


def cmd_verify(args):
    if args.blunder_mode:
        fid = args.id or "F2_parameters"
        p = _params(args, fid)
        if fid == "F1_quiz":
            p = catalog.Params(1.0, 1.0, 1.0)
        true = catalog.closed_form("F2_parameters", p)
        wrong = catalog.blunder_value(p)
        hyp = theorems.check_theorem2_hypotheses(catalog.build_route("F2_parameters", p, True).problem)
        gap = wrong - true
        return _report("verify", _inputs(args, id=fid, blunder_mode=True, tol=args.tol),
                       {"closed_form": true, "blunder": wrong, "gap": gap,
                        "hypotheses": hyp.as_dict()},
                       {"gap_minus_half_pi": abs(gap - 0.5 * math.pi)},
                       {"gap_is_half_pi": abs(gap - 0.5 * math.pi) <= 1e-10,
                        "hypotheses_reject_blunder": not hyp.overall})
    if args.all:
        ids = catalog.IDS
    elif args.id:
        ids = (args.id,)
    else:
        raise UsageError("verify needs a formula id or --all")
    rows, errors, passes = [], {}, {}
    for fid in ids:
        rep = _verify_one(fid, args)
        d = rep.as_dict()
        rows.append({
            "id": fid, **{k: d["params"].get(k) for k in "abrc"},
            "closed": rep.closed, "numeric": rep.numeric, "theorem": rep.theorem,
            "rel_numeric": rep.errors["numeric_vs_closed"]["rel"],
            "rel_theorem": rep.errors.get("theorem_vs_closed", {}).get("rel"),
            "pass": rep.passed,
        })
        errors[fid] = rep.errors
        for key, ok in rep.passes.items():
            passes[f"{fid}:{key}"] = bool(ok)
    header = ["id", "a", "b", "r", "c", "closed", "numeric", "theorem",
              "rel_numeric", "rel_theorem", "pass"]
    return _report("verify", _inputs(args, ids=list(ids), tol=args.tol), {}, errors, passes,
                   rows=rows, header=header)


def _num_and_den(args):
    if args.den is None:
        raise UsageError("--den (ascending denominator coefficients) is required")
    den = RationalFn([1.0], _complexes(args.den))
    if den.deg_den < 1:
        raise UsageError("denominator must have degree >= 1")
    num_text = args.num if args.num is not None else "1"
    try:
        num = as_callable(parse_expr(num_text))
    except CauchyRectError as exc:
        raise UsageError(str(exc)) from None
    return num_text, num, den


class _Quotient:
    """``num(z) / den(z)`` that reports the denominator roots as its poles."""

    def __init__(self, num, den: RationalFn):
        self.num, self.den = num, den

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return np.asarray(self.num(z), dtype=complex) / polyval(self.den.den, z)

    def pole_locations(self):
        return self.den.pole_locations()


def _residue_rows(num, den):
    f = _Quotient(num, den)
    locs = den.pole_locations()
    rows, passes = [], {}
    for p, m in den.poles():
        radius = default_radius(p, locs)
        circle = residue_via_circle(f, p, radius)
        row = {"pole_re": p.real, "pole_im": p.imag, "multiplicity": m,
               "residue_re": circle.real, "residue_im": circle.imag, "route": "circle"}
        if m == 1:
            formula = residue_simple_pole_formula(num, den, p)
            limit = residue_limit_extrapolated(f, p)
            row.update(residue_re=formula.real, residue_im=formula.imag, route="formula",
                       circle_gap=abs(formula - circle), limit_gap=abs(formula - limit))
            passes[f"pole {p:.6g}"] = abs(formula - circle) <= 1e-10 and abs(formula - limit) <= 1e-8
        rows.append(row)
    return f, rows, passes


def cmd_residue(args):
    num_text, num, den = _num_and_den(args)
    _, rows, passes = _residue_rows(num, den)
    header = ["pole_re", "pole_im", "multiplicity", "residue_re", "residue_im", "route",
              "circle_gap", "limit_gap"]
    return _report("residue", {"num": num_text, "den": args.den}, {}, {}, passes,
                   rows=rows, header=header)


def cmd_rectangle(args):
    num_text, num, den = _num_and_den(args)
    box = _floats(args.rect)
    if len(box) != 4:
        raise UsageError("--rect needs x1,x2,y1,y2")
    rect = Rectangle(*box)
    f, rows, _ = _residue_rows(num, den)
    inside = [r for r in rows if rect.contains(complex(r["pole_re"], r["pole_im"]))]
    total = sum(complex(r["residue_re"], r["residue_im"]) for r in inside)
    expected = 2j * math.pi * total
    res = integrate_rectangle(f, rect, args.tol)
    gap = abs(res.value - expected)
    return _report("rectangle", {"num": num_text, "den": args.den, "rect": box, "tol": args.tol},
                   {"boundary_integral": _cx(res.value), "two_pi_i_sum_residues": _cx(expected),
                    "poles_inside": len(inside), "evaluations": res.evaluations},
                   {"abs_gap": gap, "quadrature_estimate": res.error_estimate},
                   {"boundary_equals_residues": gap <= max(10 * args.tol, 1e-12)})


def cmd_diverge_probe(args):
    grid = _floats(args.R or DEFAULT_R_GRID)
    probe = realaxis.divergence_probe(args.a, args.b, args.r, grid)
    oracle = realaxis.divergence_limit_by_series(args.a, args.b, args.r)
    slope = realaxis.log_slope(probe.R, probe.raw)
    rows = [{"R": R, "log_R": math.log(R), "raw_re": v.real, "raw_im": v.imag,
             "stabilized_re": s.real, "stabilized_im": s.imag}
            for R, v, s in zip(probe.R, probe.raw, probe.stabilized)]
    steps = [abs(y - x) for x, y in zip(probe.stabilized, probe.stabilized[1:])]
    last_decade = steps[-1] if steps else math.nan
    tail_gap = abs(probe.stabilized[-1] - oracle)
    limit_gap = abs(probe.limit - oracle)
    return _report(
        "diverge-probe", _inputs(args, R=grid),
        {"slope": slope, "limit": _cx(probe.limit), "series_oracle": _cx(oracle),
         "last_step_variation": last_decade},
        {"slope_minus_one": abs(slope - 1.0), "stabilized_tail_vs_oracle": tail_gap,
         "limit_vs_oracle": limit_gap},
        {"log_rate": abs(slope - 1.0) <= 0.02, "limit_matches_oracle": limit_gap <= 1e-8,
         "stabilized_steps_shrink": all(y < x for x, y in zip(steps, steps[1:]))},
        rows=rows, header=["R", "log_R", "raw_re", "raw_im", "stabilized_re", "stabilized_im"])


def cmd_jordan(args):
    grid = _floats(args.R or "0.1,1,10,100")
    rows, passes = [], {}
    for R in grid:
        jb = theorems.jordan_bounds(R, args.b)
        rows.append({"R": R, "numeric": jb.numeric, "lemma_bound": jb.lemma_bound,
                     "naive_bound_limit": jb.naive_bound_limit, "theta_integral": jb.theta_integral})
        passes[f"R={R:g}"] = jb.numeric <= jb.lemma_bound
    return _report("jordan", {"b": args.b, "R": grid}, {}, {}, passes, rows=rows,
                   header=["R", "numeric", "lemma_bound", "naive_bound_limit", "theta_integral"])


def cmd_hypotheses(args):
    fid = args.id
    p = _params(args, fid)
    route = catalog.build_route(fid, p, blunder=args.blunder_mode)
    rep = theorems.check_theorem2_hypotheses(route.problem)
    rows = [{"check": c.name, "satisfied": c.satisfied, "witness": c.witness} for c in rep.checks]
    diag = [vars(c) for c in rep.diagnostics]
    return _report("hypotheses", _inputs(args, id=fid, blunder_mode=args.blunder_mode),
                   {"diagnostics": diag}, {}, {"overall": rep.overall},
                   rows=rows, header=["check", "satisfied", "witness"])


COMMANDS = {
    "list": cmd_list, "eval": cmd_eval, "verify": cmd_verify, "residue": cmd_residue,
    "rectangle": cmd_rectangle, "diverge-probe": cmd_diverge_probe, "jordan": cmd_jordan,
    "hypotheses": cmd_hypotheses,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--a", type=float, default=1.0)
    common.add_argument("--b", type=float, default=1.0)
    common.add_argument("--r", type=float, default=1.0)
    common.add_argument("--c", type=float, default=None)
    common.add_argument("--tol", type=float, default=1e-6)
    common.add_argument("--format", choices=("json", "csv", "text"), default="text")
    common.add_argument("--chunks", type=int, default=realaxis.DEFAULT_CHUNKS)
    common.add_argument("--R", default=None, help="comma-separated radii")
    common.add_argument("--blunder-mode", action="store_true")
    common.add_argument("--all", action="store_true")

    parser = argparse.ArgumentParser(prog="cauchyrect",
                                     description="Rectangle-contour residue evaluation and checks.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("list", parents=[common], help="formula catalog")
    for name, helptext in (("eval", "closed form"), ("verify", "three-path verification"),
                           ("hypotheses", "half-plane hypothesis report")):
        sp = sub.add_parser(name, parents=[common], help=helptext)
        sp.add_argument("id", nargs="?" if name == "verify" else None, choices=catalog.IDS)
    for name in ("residue", "rectangle"):
        sp = sub.add_parser(name, parents=[common],
                            help="pole table" if name == "residue" else "boundary integral check")
        sp.add_argument("--num", default=None, help="numerator expression in z")
        sp.add_argument("--den", default=None, help="ascending denominator coefficients")
        if name == "rectangle":
            sp.add_argument("--rect", required=True, help="x1,x2,y1,y2")
    sub.add_parser("diverge-probe", parents=[common], help="partial integrals of the divergent case")
    sub.add_parser("jordan", parents=[common], help="arc integral against its bounds")
    return parser


def _validate(args):
    lo, hi = TOL_RANGE
    if not lo <= args.tol <= hi:
        raise UsageError(f"--tol must lie in [{lo:g}, {hi:g}]")
    if args.chunks < 16 or args.chunks > realaxis.MAX_CHUNKS:
        raise UsageError(f"--chunks must lie in [16, {realaxis.MAX_CHUNKS}]")
    if args.command == "hypotheses" and args.id == "FD_dissertation":
        raise UsageError("FD_dissertation has no half-plane route")
    if args.command == "eval" or args.command == "hypotheses" or (
            args.command == "verify" and args.id):
        _params(args, args.id if args.id else None)
        if args.id and catalog.entry(args.id).needs_c:
            _params(args, args.id).require_c()


# -- output ----------------------------------------------------------------

def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items() if not k.startswith("_")}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, complex):
        return _cx(obj)
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return None if math.isnan(obj) else ("inf" if obj > 0 else "-inf")
    return obj


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.15g}"
    return "" if v is None else str(v)


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(_jsonable(report), indent=2, sort_keys=False)
    rows = report["values"].get("rows")
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if rows is not None:
            header = report["_header"]
            w.writerow(header)
            for row in rows:
                w.writerow([_fmt(row.get(k)) for k in header])
        else:
            w.writerow(["key", "value"])
            for k, v in report["values"].items():
                if isinstance(v, (list, dict)):
                    v = json.dumps(_jsonable(v))
                w.writerow([k, _fmt(v)])
        return buf.getvalue().rstrip("\n")
    lines = [f"{report['command']}  {json.dumps(_jsonable(report['inputs']))}"]
    if rows is not None:
        header = report["_header"]
        lines.append("  ".join(header))
        for row in rows:
            lines.append("  ".join(_fmt(row.get(k)) for k in header))
    for k, v in report["values"].items():
        if k != "rows":
            lines.append(f"{k}: {json.dumps(_jsonable(v)) if isinstance(v, (list, dict)) else _fmt(v)}")
    for k, ok in report["pass"].items():
        lines.append(f"[{'PASS' if ok else 'FAIL'}] {k}")
    return "\n".join(lines)


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _validate(args)
        report = COMMANDS[args.command](args)
    except (UsageError, ParameterError, ValueError) as exc:
        if isinstance(exc, CauchyRectError) and not isinstance(exc, ParameterError):
            return _component_failure(args, exc, out)
        print(f"cauchyrect: error: {exc}", file=sys.stderr)
        return 2
    except CauchyRectError as exc:
        return _component_failure(args, exc, out)
    print(render(report, args.format), file=out)
    return 0 if all(report["pass"].values()) else 1


def _component_failure(args, exc, out) -> int:
    report = _report(args.command, {}, {}, {"exception": {"type": type(exc).__name__,
                                                          "message": str(exc)}},
                     {"completed": False})
    print(render(report, args.format), file=out)
    return 1


def main() -> None:
    sys.exit(run())
