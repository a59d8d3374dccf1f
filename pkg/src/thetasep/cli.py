"""Command-line surface: evaluation, zero location, verification, scans, tables.

Exit codes: 0 success / all checks passed, 1 a verification margin failed,
2 malformed input or domain violation, 3 numerical-reliability error
(contour too close to a zero, unresolved phase, Newton failure).

Output formats: human (default), json (deterministic: keys sorted, timing
omitted unless --timing is given), csv.  Complex numbers parse as Cartesian
`a+bi` or polar `r@THETAdeg`.
"""

from __future__ import annotations

import argparse
import cmath
import csv
import io
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import asymptotics, lemmas, zeros
from .core import C0, DEFAULT_BUDGET, QParameter, SeriesBudget
from .core import eval_G, eval_Q, eval_R, eval_U
from .core import eval_theta, eval_theta_dagger, eval_theta_star
from .errors import (
    BudgetExceeded,
    ContourTooClose,
    DomainError,
    NoConvergence,
    ThetaError,
)

EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_DOMAIN = 2
EXIT_NUMERICAL = 3


@dataclass
class OutputRecord:
    command: str
    inputs: dict
    results: dict
    ok: bool | None = None
    timing_ms: int = 0
    show_timing: bool = field(default=False, repr=False)

    def payload(self):
        out = {"command": self.command,
               "inputs": _jsonable(self.inputs),
               "results": _jsonable(self.results)}
        if self.ok is not None:
            out["pass"] = self.ok
        if self.show_timing:
            out["timing_ms"] = self.timing_ms
        return out


def parse_complex(text):
    """Cartesian 'a+bi' or polar 'r@THETAdeg'."""
    s = str(text).strip().replace(" ", "")
    if "@" in s:
        r_part, _, ang = s.partition("@")
        if not ang.endswith("deg"):
            raise DomainError(f"polar form must be r@THETAdeg, got {text!r}")
        try:
            return cmath.rect(float(r_part), math.radians(float(ang[:-3])))
        except ValueError:
            raise DomainError(f"cannot parse polar complex {text!r}") from None
    try:
        return complex(s.replace("i", "j"))
    except ValueError:
        raise DomainError(f"cannot parse complex number {text!r}") from None


def _jsonable(obj):
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def _fmt_value(v):
    if isinstance(v, complex):
        return f"{v.real:.12g}{v.imag:+.12g}i"
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


def _flatten(prefix, obj, into):
    if isinstance(obj, dict) and set(obj) == {"re", "im"}:
        into[prefix] = f"{obj['re']:.12g}{obj['im']:+.12g}i"
    elif isinstance(obj, dict):
        for k in obj:
            _flatten(f"{prefix}.{k}" if prefix else str(k), obj[k], into)
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            _flatten(f"{prefix}[{i}]", v, into)
    elif isinstance(obj, (float, complex)):
        into[prefix] = _fmt_value(obj)
    else:
        into[prefix] = str(obj)


def render(record, fmt):
    payload = record.payload()
    if fmt == "json":
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if fmt == "csv":
        rows = record.results.get("rows")
        buf = io.StringIO()
        if isinstance(rows, list) and rows and isinstance(rows[0], dict):
            writer = csv.DictWriter(buf, fieldnames=list(rows[0].keys()))
            writer.writeheader()
            for row in rows:
                writer.writerow({k: _fmt_value(v) for k, v in row.items()})
        else:
            flat = {}
            _flatten("", payload, flat)
            writer = csv.writer(buf)
            writer.writerow(["key", "value"])
            for k in flat:
                writer.writerow([k, flat[k]])
        return buf.getvalue()
    # human
    flat = {}
    _flatten("", payload, flat)
    width = max((len(k) for k in flat), default=0)
    lines = [f"{k.ljust(width)}  {flat[k]}" for k in flat]
    return "\n".join(lines) + "\n"


def emit(record, args):
    text = render(record, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

_EVAL_FUNCTIONS = {
    "theta": (eval_theta, True),
    "theta_dagger": (eval_theta_dagger, True),
    "theta_star": (eval_theta_star, True),
    "G": (eval_G, True),
    "Q": (eval_Q, False),
    "U": (eval_U, True),
    "R": (eval_R, True),
}


def cmd_eval(args):
    fn, needs_z = _EVAL_FUNCTIONS[args.function]
    q = QParameter(parse_complex(args.q))
    budget = SeriesBudget(args.tol, args.max_terms)
    inputs = {"function": args.function, "q": q.value, "tol": args.tol}
    if needs_z:
        if args.z is None:
            raise DomainError(f"eval {args.function} requires --z")
        z = parse_complex(args.z)
        inputs["z"] = z
        res = fn(q, z, budget)
    else:
        res = fn(q, budget)
    results = {"value": res.value, "abs": abs(res.value),
               "tail_bound": res.tail_bound, "terms_used": res.terms_used}
    return OutputRecord("eval", inputs, results), EXIT_OK


def cmd_zeros(args):
    q = QParameter(parse_complex(args.q))
    report = zeros.verify_separation(q, args.kmax, residual_tol=args.residual_tol,
                                     on_error="record")
    per_k = {}
    for k in range(1, args.kmax + 1):
        rec = report.records.get(k)
        entry = {"count": report.counts.get(k)}
        if rec is not None:
            entry.update({"location": rec.location, "abs": abs(rec.location),
                          "residual": rec.residual, "annulus_ok": rec.annulus_ok,
                          "newton_iterations": rec.newton_iterations})
        if k in report.notes:
            entry["error"] = report.notes[k]
        per_k[str(k)] = entry
    results = {"k": per_k,
               "combined_count_3half_7half": report.combined_mid_count,
               "strongly_separated": report.strongly_separated,
               "warnings": report.warnings}
    record = OutputRecord("zeros", {"q": q.value, "kmax": args.kmax}, results,
                          ok=report.strongly_separated)
    return record, (EXIT_NUMERICAL if report.notes else EXIT_OK)


def _report_payload(rep):
    return {"passed": rep.passed,
            "worst_margin": min(rep.margins.values()) if rep.margins else None,
            "computed": rep.computed,
            "margins": rep.margins}


def cmd_verify(args):
    # unset step flags fall back to each check's library default grid
    ms, asteps, zsteps = args.modulus_steps, args.argument_steps, args.z_steps
    q_grid = lemmas.GridSpec((0.6 / (ms or 2000), 0.6), ms or 2000,
                             (math.pi / 2, math.pi), asteps or 2000)
    k1_grid = lemmas.GridSpec((C0, 0.6), ms or 80, (math.pi / 2, math.pi), asteps or 80)
    k2_grid = lemmas.GridSpec((0.55, 0.6), ms or 60,
                              (math.pi / 2, 2 * math.pi / 3), asteps or 60)
    runners = {
        "constants": lambda: lemmas.verify_constants(),
        "mu": lambda: lemmas.mu_properties_check(samples=args.samples),
        "AB": lambda: lemmas.verify_AB_monotone(grid_points=args.grid_points),
        "Q": lambda: lemmas.verify_lemma_Q(grid=q_grid),
        "k5": lambda: lemmas.verify_lemma_k5(),
        "k4": lambda: lemmas.verify_lemma_k4(),
        "k1": lambda: lemmas.verify_lemma_k1(grid=k1_grid, z_steps=zsteps or 720),
        "k2": lambda: lemmas.verify_lemma_k2(grid=k2_grid, z_steps=max(128, (zsteps or 720) // 2)),
    }
    if args.lemma == "all":
        reports = {name: run() for name, run in runners.items()}
        ok = all(rep.passed for rep in reports.values())
        results = {name: _report_payload(rep) for name, rep in reports.items()}
    else:
        rep = runners[args.lemma]()
        ok = rep.passed
        results = _report_payload(rep)
    record = OutputRecord("verify", {"lemma": args.lemma}, results, ok=ok)
    return record, (EXIT_OK if ok else EXIT_VERIFICATION_FAILED)


def _scan_cell(modulus, argument, k, residual_tol):
    q = QParameter.from_polar(modulus, argument)
    cell = {"modulus": modulus, "argument": argument}
    try:
        count = zeros.count_zeros_in_annulus(q, zeros.Annulus.for_index(k))
        rec = zeros.locate_zero(q, k, residual_tol=residual_tol)
        cell.update({"count": count, "location_re": rec.location.real,
                     "location_im": rec.location.imag, "residual": rec.residual,
                     "annulus_ok": rec.annulus_ok,
                     "separated": count == 1 and rec.annulus_ok})
    except (ContourTooClose, BudgetExceeded, NoConvergence) as exc:
        cell.update({"count": None, "separated": False, "error": str(exc)})
    return cell


def cmd_scan(args):
    if not 0.0 < args.a <= 0.6:
        raise DomainError(f"region radius must lie in (0, 0.6], got {args.a!r}")
    try:
        n_mod, n_arg = (int(part) for part in args.steps.lower().split("x"))
    except ValueError:
        raise DomainError(f"--steps must look like 20x20, got {args.steps!r}") from None
    if n_mod < 1 or n_arg < 1:
        raise DomainError("--steps counts must be >= 1")
    moduli = np.linspace(args.a / n_mod, args.a, n_mod)
    arguments = np.linspace(math.pi / 2, 3 * math.pi / 2, n_arg)
    cells = [(float(m), float(a)) for m in moduli for a in arguments]
    workers = _thread_cap()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(
                lambda cell: _scan_cell(cell[0], cell[1], args.k, args.residual_tol),
                cells))
    else:
        rows = [_scan_cell(m, a, args.k, args.residual_tol) for m, a in cells]
    ok = all(row.get("separated") for row in rows)
    had_errors = any("error" in row for row in rows)
    results = {"rows": rows, "cells": len(rows), "all_separated": ok}
    record = OutputRecord("scan", {"a": args.a, "k": args.k, "steps": args.steps},
                          results, ok=ok)
    if ok:
        return record, EXIT_OK
    return record, (EXIT_NUMERICAL if had_errors else EXIT_VERIFICATION_FAILED)


def cmd_table(args):
    if args.n:
        try:
            ns = [int(part) for part in args.n.split(",") if part.strip()]
        except ValueError:
            raise DomainError(f"--n must be a comma-separated integer list, got {args.n!r}") from None
    else:
        ns = list(asymptotics.DEFAULT_TABLE_INDICES)
    rows = []
    for n in ns:
        row = asymptotics.table_row(n)
        t2, m1, mm1 = row.truncated()
        rows.append({"n": row.n, "tau": row.tau, "m": row.m, "M": row.M,
                     "tau_trunc": t2, "m_trunc": m1, "M_trunc": mm1})
    results = {"rows": rows, "alpha0": asymptotics.alpha0(),
               "limit": math.exp(1.0 / asymptotics.alpha0())}
    return OutputRecord("table", {"n": ns}, results), EXIT_OK


def _thread_cap():
    raw = os.environ.get("THETA_SEP_THREADS", "1")
    try:
        return max(1, min(int(raw), 64))
    except ValueError:
        return 1


# ---------------------------------------------------------------------------
# Parser / dispatch
# ---------------------------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(
        prog="thetasep",
        description="Partial theta function evaluation, zero separation, and "
                    "verification of its modulus-separation constants.")
    sub = parser.add_subparsers(dest="cmd", required=True)

    def common(p):
        p.add_argument("--format", choices=("human", "json", "csv"), default="human")
        p.add_argument("--out", default=None, help="write output to this file")
        p.add_argument("--timing", action="store_true",
                       help="include timing_ms in machine output")

    p_eval = sub.add_parser("eval", help="evaluate theta / theta_dagger / theta_star / G / Q / U / R")
    p_eval.add_argument("function", choices=sorted(_EVAL_FUNCTIONS))
    p_eval.add_argument("--q", required=True)
    p_eval.add_argument("--z", default=None)
    p_eval.add_argument("--tol", type=float, default=DEFAULT_BUDGET.tolerance)
    p_eval.add_argument("--max-terms", type=int, default=DEFAULT_BUDGET.max_terms)
    common(p_eval)
    p_eval.set_defaults(run=cmd_eval)

    p_zeros = sub.add_parser("zeros", help="count and locate zeros per annulus")
    p_zeros.add_argument("--q", required=True)
    p_zeros.add_argument("--kmax", type=int, default=6)
    p_zeros.add_argument("--residual-tol", type=float, default=1e-10)
    common(p_zeros)
    p_zeros.set_defaults(run=cmd_zeros)

    p_verify = sub.add_parser("verify", help="run the named verification suites")
    p_verify.add_argument("--lemma", required=True,
                          choices=("Q", "k5", "k4", "k1", "k2", "mu", "AB",
                                   "constants", "all"))
    p_verify.add_argument("--modulus-steps", type=int, default=None)
    p_verify.add_argument("--argument-steps", type=int, default=None)
    p_verify.add_argument("--z-steps", type=int, default=None)
    p_verify.add_argument("--samples", type=int, default=2000)
    p_verify.add_argument("--grid-points", type=int, default=2000)
    common(p_verify)
    p_verify.set_defaults(run=cmd_verify)

    p_scan = sub.add_parser("scan", help="separation scan of the left half-disk of radius a")
    p_scan.add_argument("--a", type=float, required=True)
    p_scan.add_argument("--k", type=int, required=True)
    p_scan.add_argument("--steps", default="20x20", help="modulus x argument cells, e.g. 20x20")
    p_scan.add_argument("--residual-tol", type=float, default=1e-10)
    common(p_scan)
    p_scan.set_defaults(run=cmd_scan)

    p_table = sub.add_parser("table", help="asymptotic annulus radii table")
    p_table.add_argument("--n", default=None, help="comma-separated indices, default 5..10,15,20,25,30")
    common(p_table)
    p_table.set_defaults(run=cmd_table)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.perf_counter()
    try:
        record, code = args.run(args)
    except (ContourTooClose, BudgetExceeded, NoConvergence) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ThetaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    record.timing_ms = int((time.perf_counter() - started) * 1000)
    record.show_timing = args.timing
    emit(record, args)
    return code


if __name__ == "__main__":
    sys.exit(main())
