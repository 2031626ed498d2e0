"""Command-line front end.

Exit codes: 0 when every reported verdict is determined, 1 on input errors,
2 when some verdict is unknown and ``--strict`` is given.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Sequence

from . import construction_calculus as cc
from .ff_linalg import is_prime
from .fmodule_calculus import UNKNOWN, UpperBound
from .hypersurface_cech import (
    DEFAULT_MAX_E,
    HypersurfaceRing,
    Status,
    polynomial_ring_profile,
    profile_from_report,
    scan_ring,
)
from .profile import Interval, RingProfile, dumps, loads, profile_to_json

EXIT_OK, EXIT_INPUT, EXIT_UNKNOWN = 0, 1, 2


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


# -- parsing helpers -------------------------------------------------------------


def parse_g_terms(text: str, n: int) -> tuple:
    """``"4,0:1;0,4:1"`` -> ``(((4, 0), 1), ((0, 4), 1))``."""
    terms = []
    for chunk in filter(None, (c.strip() for c in text.split(";"))):
        mono, sep, coeff = chunk.partition(":")
        try:
            exps = tuple(int(e) for e in mono.split(","))
            c = int(coeff) if sep else 1
        except ValueError as exc:
            raise InputError(f"malformed g-term {chunk!r}: expected 'e0,e1,...:coef'") from exc
        if len(exps) != n:
            raise InputError(f"g-term {chunk!r} has {len(exps)} exponents, expected {n}")
        terms.append((exps, c))
    if not terms:
        raise InputError("no g-terms given")
    return tuple(terms)


def parse_p_range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition("..")
    try:
        lo_i, hi_i = int(lo), int(hi)
    except ValueError as exc:
        raise InputError(f"--p-range must look like LO..HI, got {text!r}") from exc
    if not sep or lo_i > hi_i:
        raise InputError(f"empty prime range {text!r}")
    return lo_i, hi_i


def parse_hsl(text: str, allow_bounds: bool):
    t = text.strip().lower()
    if t in ("unknown", "?"):
        if not allow_bounds:
            raise InputError("unknown input; pass --allow-upper-bounds to accept it")
        return UNKNOWN
    if t.startswith("<="):
        if not allow_bounds:
            raise InputError(f"upper-bound input {text!r}; pass --allow-upper-bounds to accept it")
        return UpperBound(int(t[2:]))
    try:
        v = int(t)
    except ValueError as exc:
        raise InputError(f"bad HSL value {text!r}") from exc
    if v < 0:
        raise InputError(f"HSL values are nonnegative, got {v}")
    return v


def parse_hsl_list(text: str, allow_bounds: bool) -> list:
    return [parse_hsl(x, allow_bounds) for x in text.split(",") if x.strip()]


def parse_interval(text: str) -> Interval:
    """``"2"``, ``"inf"`` or ``"1..3"``."""

    def num(s):
        s = s.strip().lower()
        return float("inf") if s in ("inf", "infinity") else int(s)

    try:
        if ".." in text:
            lo, hi = text.split("..")
            return Interval(num(lo), num(hi))
        return Interval.exact(num(text))
    except ValueError as exc:
        raise InputError(f"bad depth value {text!r}") from exc


def load_profile(path: str) -> RingProfile:
    try:
        return loads(Path(path).read_text())
    except FileNotFoundError as exc:
        raise InputError(f"profile file not found: {path}") from exc
    except (ValueError, KeyError, TypeError) as exc:
        raise InputError(f"cannot parse profile {path}: {exc}") from exc


# -- reporting -------------------------------------------------------------------


class Report:
    def __init__(self, command: str, inputs: dict[str, Any]):
        self.command = command
        self.inputs = inputs
        self.entries: list[dict[str, Any]] = []
        self.lines: list[str] = []
        self.undetermined = False

    def add(self, rep: cc.BoundReport, line: str | None = None):
        self.entries.append(rep.to_json())
        self.lines.append(line if line is not None else rep.describe())
        for note in rep.notes:
            self.lines.append(f"    note: {note}")
        if not rep.determined:
            self.undetermined = True

    def text(self, line: str, determined: bool = True):
        self.lines.append(line)
        if not determined:
            self.undetermined = True

    def exit_status(self, strict: bool) -> int:
        return EXIT_UNKNOWN if strict and self.undetermined else EXIT_OK

    def to_json(self, strict: bool) -> dict[str, Any]:
        return {
            "command": self.command,
            "inputs": {k: cc.encode_value(v) for k, v in self.inputs.items()},
            "entries": self.entries,
            "exit_status": self.exit_status(strict),
        }


def tv(x) -> str:
    return cc.format_value(x)


# -- commands ----------------------------------------------------------------------


def profile_summary(prof: RingProfile, report: Report):
    report.text(f"ring: {prof.name}")
    report.text(f"dim = {prof.dim}, p = {prof.p}")
    for rec in prof.records:
        if rec.is_zero:
            continue
        report.text(f"H^{rec.index}: a = {tv(rec.a)}, nil-support {rec.nilsupport.describe()}")
        report.text(f"b_{rec.index} = {tv(rec.b)}", not isinstance(rec.b, UpperBound))
        report.text(f"HSL [H^{rec.index}]_0 = {tv(rec.hsl_deg0)}")
    report.text(f"F-depth: {prof.fdepth}", prof.fdepth.is_exact)
    report.text(f"gF-depth: {prof.gfdepth}", prof.gfdepth.is_exact)
    report.text(f"b(R): {prof.b_ring}", prof.b_ring.is_exact)
    report.text(f"weakly F-nilpotent: {tv(prof.weakly_f_nilpotent)}", prof.weakly_f_nilpotent is not None)
    report.entries.append({"profile": profile_to_json(prof)})


def cmd_hypersurface(args) -> Report:
    if not is_prime(args.p):
        raise InputError(f"p = {args.p} is not prime")
    terms = parse_g_terms(args.g_terms, args.n) if args.g_terms else None
    try:
        ring = HypersurfaceRing(args.p, args.n, args.d, terms) if terms else HypersurfaceRing.fermat(args.p, args.n, args.d)
        scan = scan_ring(ring, args.max_e, args.window_lo)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    prof = profile_from_report(scan)
    report = Report("hypersurface", {"p": args.p, "n": args.n, "d": args.d, "g_terms": args.g_terms or "fermat"})
    report.text(f"ring: {ring.describe()}")
    report.text(f"a-invariant: {scan.a}")
    for v in scan.verdicts:
        extra = f" (e={v.exponent})" if v.exponent is not None and v.status is Status.NILPOTENT else ""
        report.text(f"  degree {v.degree:>4}: dim {v.dimension:>3}  {v.status.value}{extra}", v.decided)
    profile_summary(prof, report)
    fn = prof.f_nilpotent
    suffix = "" if scan.smooth else " (conditional: Proj R not certified smooth)"
    report.text(f"F-nilpotent: {tv(fn)}{suffix}", fn is not None)
    report.entries.append({"f_nilpotent": cc.encode_value(fn), "smooth": scan.smooth,
                           "justification": "punctured-spectrum criterion: weakly F-nilpotent R is F-nilpotent iff b(R) = inf"})
    if args.dump_matrix:
        report.text("degree-0 basis (column order): " + ", ".join(
            f"x{ring.n}^{c.xn_exp}/x^{c.denom}" for c in scan.degree0_basis))
        for row in scan.degree0_matrix.to_lists():
            report.text("  " + " ".join(str(x) for x in row))
        report.entries.append({"degree0_matrix": scan.degree0_matrix.to_lists(),
                               "basis": [[c.xn_exp, list(c.denom)] for c in scan.degree0_basis]})
    if args.out:
        Path(args.out).write_text(dumps(prof))
        report.text(f"profile written to {args.out}")
    return report


def cmd_polynomial(args) -> Report:
    if not is_prime(args.p):
        raise InputError(f"p = {args.p} is not prime")
    prof = polynomial_ring_profile(args.p, args.dim)
    report = Report("polynomial", {"p": args.p, "dim": args.dim})
    profile_summary(prof, report)
    if args.out:
        Path(args.out).write_text(dumps(prof))
        report.text(f"profile written to {args.out}")
    return report


def _sweep_row(job) -> dict[str, Any]:
    p, n, d, max_e = job
    ring = HypersurfaceRing.fermat(p, n, d)
    scan = scan_ring(ring, max_e)
    prof = profile_from_report(scan)
    mat = scan.degree0_matrix
    if mat.cols == 0:
        deg0 = "zero space"
    elif mat.is_zero():
        deg0 = "zero matrix"
    else:
        deg0 = "nilpotent" if scan.dim_g0 == 0 else "not nilpotent"
    row: dict[str, Any] = {"p": p, "p mod d": p % d, "degree 0": deg0, f"b_{n}": cc.format_value(prof.b_j(n))}
    try:
        rep = cc.segre_fdepth_bounds(prof, polynomial_ring_profile(p, 2))
        row["Segre with P^1 F-depth"] = str(rep.value)
    except cc.HypothesisError:
        row["Segre with P^1 F-depth"] = "n/a (depth < 2)"
    return row


def cmd_sweep(args) -> Report:
    lo, hi = parse_p_range(args.p_range)
    primes = [p for p in range(max(lo, 2), hi + 1) if is_prime(p)]
    if not primes:
        raise InputError(f"no primes in {args.p_range}")
    jobs = [(p, args.n, args.d, args.max_e) for p in primes]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as ex:
            rows = list(ex.map(_sweep_row, jobs))
    else:
        rows = [_sweep_row(j) for j in jobs]
    report = Report("sweep", {"n": args.n, "d": args.d, "p_range": args.p_range})
    cols = list(rows[0])
    widths = [max(len(c), *(len(str(r[c])) for r in rows)) for c in cols]
    report.text("  ".join(c.ljust(w) for c, w in zip(cols, widths)))
    for r in rows:
        report.text("  ".join(str(r[c]).ljust(w) for c, w in zip(cols, widths)))
    report.entries.append({"rows": rows})
    return report


def cmd_segre(args) -> Report:
    R, S = load_profile(args.R), load_profile(args.S)
    report = Report("segre", {"R": R.name, "S": S.name})
    T, kunneth = cc.segre_profile(R, S)
    for rep in kunneth:
        labels = rep.labels()
        report.text(f"H^{rep.index}(T) = " + (" + ".join(labels) if labels else "0"))
    report.entries.append({"kunneth": [{"index": r.index, "summands": r.labels()} for r in kunneth]})
    fd = cc.segre_fdepth_bounds(R, S)
    report.add(fd)
    report.add(cc.segre_gfdepth(R, S))
    if R.weakly_f_nilpotent and S.weakly_f_nilpotent:
        w = cc.segre_wfn_verdict(R, S)
        b_t = ", b(T)=∞" if w.value and T.b_ring.lo == float("inf") else ""
        report.add(w, f"weakly F-nilpotent: {tv(w.value)}{b_t}    [{w.justification}]")
    else:
        report.text(f"weakly F-nilpotent: {tv(T.weakly_f_nilpotent)}", T.weakly_f_nilpotent is not None)
    if args.out:
        Path(args.out).write_text(dumps(T))
        report.text(f"profile written to {args.out}")
    return report


def cmd_veronese(args) -> Report:
    R = load_profile(args.R)
    report = Report("veronese", {"R": R.name, "v": args.v})
    for v in args.v:
        report.add(cc.veronese_fdepth(R, v), None)
        report.lines[-1] = f"v = {v}: " + report.lines[-1]
    report.add(cc.veronese_fnilpotence_equivalence(R, args.v))
    if args.out:
        Path(args.out).write_text(dumps(cc.veronese_profile(R, args.v[0])))
        report.text(f"profile of R^({args.v[0]}) written to {args.out}")
    return report


def cmd_glue(args) -> Report:
    A, B, C = (load_profile(x) for x in (args.A, args.B, args.AB))
    report = Report("glue", {"dims": args.dims, "R/a_1": A.name, "R/a_2": B.name, "R/(a_1+a_2)": C.name,
                             "generalized": args.generalized})
    depth = (lambda P: P.gfdepth) if args.generalized else (lambda P: P.fdepth)
    report.add(cc.glue_fdepth(depth(A), depth(B), depth(C), args.generalized))
    wfn = (lambda P: P.generalized_weakly_f_nilpotent) if args.generalized else (lambda P: P.weakly_f_nilpotent)
    equidim = all(P.flags.equidimensional for P in (A, B, C)) if args.equidim is None else args.equidim
    rep = cc.glue_wfn_check(args.dims, [wfn(P) for P in (A, B, C)], equidim, args.generalized)
    word = "generalized weakly" if args.generalized else "weakly"
    verdict = "true" if rep.value else "not certified"
    report.add(rep, f"R {word} F-nilpotent: {verdict}    [{rep.justification}]")
    return report


def cmd_diagonal(args) -> Report:
    R, S = load_profile(args.R), load_profile(args.S)
    d1, d2 = args.f_bidegree
    try:
        spec = cc.DiagonalSpec(args.g, args.h, d1, d2)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    report = Report("diagonal", {"R": R.name, "S": S.name, "Delta": (args.g, args.h), "bidegree": (d1, d2)})
    T = cc.diagonal_profile(R, S, spec)
    report.text(f"dim T_Delta = {T.dim}")
    fd = cc.diagonal_fdepth(R, S, spec)
    report.add(fd)
    report.add(cc.diagonal_hypersurface_bounds(T, True))
    if args.g >= 1 and args.h >= 1 and R.fdepth.is_exact and S.fdepth.is_exact:
        q = cc.diagonal_quotient_from_profiles(R, S, spec)
        bullets = q.inputs["bullets"]
        report.add(q, f"conditions hold: {tv(q.value['conditions hold'])}    [{q.justification}]")
        for k, v in bullets.items():
            report.text(f"    bullet: {k}: {tv(v)}")
        if q.value.get("(T/fT)_Delta weakly F-nilpotent"):
            report.text("(T/fT)_Δ weakly F-nilpotent")
    return report


def cmd_fte(args) -> Report:
    allow = args.allow_upper_bounds
    mode = args.mode
    report = Report(f"fte {mode}", {})
    if mode in ("quy", "maddox"):
        if args.d is None or args.h is None:
            raise InputError(f"fte {mode} needs --d and --h")
        h = parse_hsl_list(args.h, allow)
        report.inputs.update({"d": args.d, "h": h})
        if len(h) != args.d + 1:
            raise InputError(f"--h needs {args.d + 1} entries (h_0..h_d)")
        if mode == "quy":
            val = cc.quy_fte_bound(h, args.d)
            rep = cc.BoundReport("Fte R", val, "weakly F-nilpotent R: Fte R <= sum_j C(d, j) h_j", dict(report.inputs))
        else:
            if args.N is None or args.p is None:
                raise InputError("fte maddox needs --N and --p")
            e1 = cc.maddox_e1(args.p, args.d, args.N)
            val = cc.maddox_fte_bound(h, args.d, args.N, args.p)
            rep = cc.BoundReport("Fte R", val,
                                 "generalized weakly F-nilpotent R: Fte R <= e_1 + sum_j C(d, j) h_j, p^{e_1} >= 2^{d-1} N",
                                 {**report.inputs, "N": args.N, "p": args.p, "e_1": e1})
        report.add(rep)
    elif mode == "segre":
        if args.profiles:
            if len(args.profiles) != 2:
                raise InputError("fte segre takes two profile files")
            R, S = (load_profile(x) for x in args.profiles)
            rep = cc.segre_gwfn_fte_bound(R, S, args.N) if args.N is not None else cc.segre_fte_bound(R, S)
        else:
            if args.d_t is None or args.max_hsl is None:
                raise InputError("fte segre needs two profiles, or --d-t and --max-hsl for the coarse bound")
            m = parse_hsl(args.max_hsl, allow)
            rep = cc.BoundReport("Fte* T", cc.segre_coarse_fte(args.d_t, m),
                                 "Segre coarse bound: Fte* T <= 2^{d_T} max{HSL R, HSL S}",
                                 {"d_T": args.d_t, "max HSL": m})
        report.add(rep)
    elif mode == "veronese":
        if not args.profiles:
            raise InputError("fte veronese needs a profile file")
        R = load_profile(args.profiles[0])
        report.add(cc.veronese_fte_bound(R, args.N is not None, args.N))
    elif mode == "glue":
        if args.d is None or args.h_b is None or args.h_max is None:
            raise InputError("fte glue needs --d, --h-b and --h-max")
        top = parse_hsl(args.hsl_top, allow) if args.hsl_top is not None else None
        report.add(cc.glue_hsl_fte(parse_hsl_list(args.h_b, allow), parse_hsl_list(args.h_max, allow),
                                   args.d, args.case, top))
    return report


# -- argument parser --------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print the structured report as JSON")
    common.add_argument("--strict", action="store_true", help="exit with status 2 if any verdict is unknown")
    common.add_argument("--out", help="write the resulting profile to this path")

    parser = _Parser(prog="frobnil", description="Frobenius nilpotence on graded local cohomology")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    hs = sub.add_parser("hypersurface", parents=[common], help="classify F_p[x_0..x_n]/(x_n^d - g)")
    hs.add_argument("--p", type=int, required=True)
    hs.add_argument("--n", type=int, required=True)
    hs.add_argument("--d", type=int, required=True)
    hs.add_argument("--g-terms", help="g as 'e0,e1,...:coef;...' (default: Fermat)")
    hs.add_argument("--max-e", type=int, default=DEFAULT_MAX_E)
    hs.add_argument("--window-lo", type=int, default=None)
    hs.add_argument("--dump-matrix", action="store_true", help="print the degree-0 Frobenius matrix")
    hs.set_defaults(func=cmd_hypersurface)

    po = sub.add_parser("polynomial", parents=[common], help="profile of a polynomial ring")
    po.add_argument("--p", type=int, required=True)
    po.add_argument("--dim", type=int, required=True)
    po.set_defaults(func=cmd_polynomial)

    sw = sub.add_parser("sweep", parents=[common], help="classify Fermat hypersurfaces over a prime range")
    sw.add_argument("--n", type=int, required=True)
    sw.add_argument("--d", type=int, required=True)
    sw.add_argument("--p-range", required=True, help="LO..HI")
    sw.add_argument("--max-e", type=int, default=DEFAULT_MAX_E)
    sw.add_argument("--jobs", type=int, default=1)
    sw.set_defaults(func=cmd_sweep)

    sg = sub.add_parser("segre", parents=[common], help="Segre product of two profiles")
    sg.add_argument("R")
    sg.add_argument("S")
    sg.set_defaults(func=cmd_segre)

    ve = sub.add_parser("veronese", parents=[common], help="Veronese subrings of a profile")
    ve.add_argument("R")
    ve.add_argument("--v", type=int, nargs="+", default=[2])
    ve.set_defaults(func=cmd_veronese)

    gl = sub.add_parser("glue", parents=[common], help="gluing bounds from three profiles")
    gl.add_argument("--dims", type=int, nargs=4, required=True, metavar=("D", "D1", "D2", "DB"))
    gl.add_argument("--generalized", action="store_true")
    gl.add_argument("--equidim", action=argparse.BooleanOptionalAction, default=None)
    gl.add_argument("A", help="profile of R/a_1")
    gl.add_argument("B", help="profile of R/a_2")
    gl.add_argument("AB", help="profile of R/(a_1 + a_2)")
    gl.set_defaults(func=cmd_glue)

    di = sub.add_parser("diagonal", parents=[common], help="diagonal subalgebra R^(g) # S^(h)")
    di.add_argument("--g", type=int, required=True)
    di.add_argument("--h", type=int, required=True)
    di.add_argument("--f-bidegree", type=int, nargs=2, default=(0, 0), metavar=("D1", "D2"))
    di.add_argument("R")
    di.add_argument("S")
    di.set_defaults(func=cmd_diagonal)

    ft = sub.add_parser("fte", parents=[common], help="Frobenius test exponent bounds")
    ft.add_argument("mode", choices=["quy", "maddox", "segre", "veronese", "glue"])
    ft.add_argument("profiles", nargs="*")
    ft.add_argument("--d", type=int)
    ft.add_argument("--h", help="comma-separated h_0..h_d")
    ft.add_argument("--N", type=int)
    ft.add_argument("--p", type=int)
    ft.add_argument("--d-t", type=int)
    ft.add_argument("--max-hsl")
    ft.add_argument("--h-b", help="comma-separated HSL H^j(R/b)")
    ft.add_argument("--h-max", help="comma-separated max_i HSL H^j(R/a_i)")
    ft.add_argument("--case", choices=["d", "d-1"], default="d")
    ft.add_argument("--hsl-top")
    ft.add_argument("--allow-upper-bounds", action="store_true")
    ft.set_defaults(func=cmd_fte)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = args.func(args)
    except (InputError, cc.HypothesisError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.json:
        print(json.dumps(report.to_json(args.strict), indent=2))
    else:
        print("\n".join(report.lines))
    return report.exit_status(args.strict)


if __name__ == "__main__":
    sys.exit(main())
