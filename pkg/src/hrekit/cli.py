"""Command-line front end.

Exit codes: 0 ok, 1 usage, 2 invalid data, 3 singular system / not
consistent / non-positive solution under --strict, 4 not irreducible.
Reports go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from typing import Sequence

from . import __version__
from .baselines import evm, gmm, harker_evm, incomplete_gmm
from .consistency import consistent_completion, harker_ci
from .errors import HreError, SingularSystem
from .hre import ApplicabilityReport, check_applicability, rank, select_variant
from .numerics import SINGULAR_TOL, SPECTRAL_TOL
from .pcm import HreProblem, PCMatrix, validate
from .problem_io import ProblemFile, detect_format, parse_problem

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _num(x) -> float | None:
    if x is None:
        return None
    x = float(x)
    return x if math.isfinite(x) else None


def _report_dict(r: ApplicabilityReport) -> dict:
    return {
        "theorem": r.theorem.value,
        "verdict": r.verdict,
        "n": r.n,
        "k": r.k,
        "ci_value": _num(r.ci_value),
        "threshold": _num(r.threshold),
        "slack": _num(r.slack),
        "margin": r.margin,
        "s_max": r.s_max,
        "s_min": r.s_min,
        "candidates": [{"theorem": t.value, "threshold": _num(v)} for t, v in r.candidates],
        "note": r.note,
    }


def _load(args) -> ProblemFile:
    pf = parse_problem(args.file, args.input_format, args.ref_file)
    if args.ref:
        if (args.input_format or detect_format(args.file)) == "json":
            raise UsageError("--ref is only accepted for CSV input; JSON files carry their own reference map")
        pf = ProblemFile(pf.alternatives, pf.matrix, _parse_refs(args.ref), pf.notes)
    return pf


def _parse_refs(items: Sequence[str]) -> dict[str, float]:
    out = {}
    for item in items:
        name, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"--ref expects NAME=WEIGHT, got {item!r}")
        try:
            out[name.strip()] = float(value)
        except ValueError:
            raise UsageError(f"--ref weight {value!r} is not a number") from None
    return out


def _unknowns(args) -> list[str] | None:
    if not args.unknowns:
        return None
    return [s.strip() for s in args.unknowns.split(",") if s.strip()]


def _problem(args, pf: ProblemFile, need_weights: bool) -> HreProblem:
    unknowns = _unknowns(args)
    reference = dict(pf.reference)
    if unknowns is not None:
        missing = [a for a in pf.alternatives if a not in unknowns and a not in reference]
        if missing:
            if need_weights:
                raise UsageError(f"no reference weight for {', '.join(missing)}")
            # Weights never enter the applicability check.
            reference.update({a: 1.0 for a in missing})
    elif not reference:
        raise UsageError("give reference weights (JSON 'reference', --ref, --ref-file) or --unknowns")
    return pf.problem(unknowns, reference)


def _matrix(pf: ProblemFile) -> PCMatrix:
    return pf.pc_matrix().checked()


def cmd_validate(args, pf):
    m = pf.pc_matrix()
    findings = validate(m)
    report = {
        "clean": not findings,
        "violations": [{"kind": v.kind, "cells": [[m.labels[i], m.labels[j]] for i, j in v.cells],
                        "message": v.message} for v in findings],
    }
    return report, (EXIT_OK if not findings else EXIT_DATA)


def cmd_consistency(args, pf):
    m = _matrix(pf)
    rep = harker_ci(m)
    return {"kind": rep.kind, "index": rep.index_value, "dimension": rep.dimension,
            "spectral_radius": rep.radius_used}, EXIT_OK


def cmd_check(args, pf):
    p = _problem(args, pf, need_weights=False)
    variant = select_variant(p, args.variant)
    report = check_applicability(p, variant)
    return {"variant": variant.value, "unknowns": [pf.alternatives[i] for i in p.unknowns],
            "applicability": _report_dict(report)}, EXIT_OK


def cmd_rank(args, pf):
    p = _problem(args, pf, need_weights=True)
    variant = select_variant(p, args.variant)
    out = {"variant": variant.value, "unknowns": [pf.alternatives[i] for i in p.unknowns]}
    try:
        res = rank(p, args.variant, strict=args.strict, singular_tol=args.tol_singular)
    except SingularSystem as exc:
        out["status"] = "SingularSystem"
        out["applicability"] = _report_dict(exc.report)
        out["solver"] = {"pivot_floor": exc.pivot_floor, "singular_tol": args.tol_singular}
        return out, exc
    out["status"] = "NonpositiveSolution" if res.nonpositive else "ok"
    out["applicability"] = _report_dict(res.report)
    out["solver"] = {"pivot_floor": res.solve.pivot_floor, "singular_tol": args.tol_singular}
    pv = res.priorities
    out["weights"] = {name: _num(w) for name, w in zip(pv.labels, pv.weights)}
    out["computed"] = [name for name, c in zip(pv.labels, pv.computed) if c]
    out["warnings"] = list(res.warnings)
    return out, EXIT_OK


def cmd_baseline(args, pf):
    m = _matrix(pf)
    methods = {}
    for name, fn, needs_complete in (("evm", evm, True), ("gmm", gmm, True),
                                     ("harker_evm", harker_evm, False),
                                     ("incomplete_gmm", incomplete_gmm, False)):
        if needs_complete and not m.is_complete:
            methods[name] = None
            continue
        pv = fn(m)
        methods[name] = {label: float(w) for label, w in zip(pv.labels, pv.weights)}
    return {"methods": methods}, EXIT_OK


def cmd_complete(args, pf):
    m = _matrix(pf)
    done = consistent_completion(m)
    return {"matrix": done.to_rows()}, EXIT_OK


COMMANDS = {
    "validate": cmd_validate,
    "consistency": cmd_consistency,
    "check": cmd_check,
    "rank": cmd_rank,
    "baseline": cmd_baseline,
    "complete": cmd_complete,
}


def _fmt(x) -> str:
    if x is None:
        return "-"
    if isinstance(x, float):
        return f"{x:.6g}"
    return str(x)


def _text(report: dict, indent: str = "") -> list[str]:
    lines = []
    for key, value in report.items():
        if isinstance(value, dict):
            lines.append(f"{indent}{key}:")
            lines.extend(_text(value, indent + "  "))
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f"{indent}{key}:")
            for item in value:
                lines.append(f"{indent}  - " + ", ".join(f"{k}={_fmt(v)}" for k, v in item.items()))
        elif isinstance(value, list) and value and isinstance(value[0], list):
            lines.append(f"{indent}{key}:")
            for row in value:
                lines.append(f"{indent}  " + " ".join(f"{_fmt(v):>12}" for v in row))
        elif isinstance(value, list):
            lines.append(f"{indent}{key}: " + ", ".join(_fmt(v) for v in value))
        else:
            lines.append(f"{indent}{key}: {_fmt(value)}")
    return lines


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hrekit", description="Heuristic Rating Estimation toolkit")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("file", help="problem file (.json or .csv)")
        p.add_argument("--input-format", choices=["json", "csv"], help="default: by file extension")
        p.add_argument("--format", choices=["json", "text"], default="json", help="report format")
        p.add_argument("--ref", action="append", metavar="NAME=WEIGHT", help="reference weight (CSV input)")
        p.add_argument("--ref-file", help="sidecar CSV of name,weight rows (CSV input)")
        p.add_argument("--variant", choices=["arithmetic", "geometric"], default="arithmetic")
        p.add_argument("--unknowns", help="comma-separated unknown alternatives, in solve order")
        p.add_argument("--strict", action="store_true", help="treat a non-positive weight as an error")
        p.add_argument("--tol-singular", type=float, default=SINGULAR_TOL)
        p.add_argument("--seed", type=int, help="seed for randomized diagnostics (recorded in the report)")
        p.add_argument("--timings", action="store_true", help="add wall-clock timings to the report")
    return parser


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    started = time.perf_counter()
    error = None
    try:
        pf = _load(args)
        body, outcome = COMMANDS[args.command](args, pf)
    except UsageError as exc:
        print(f"hrekit: usage error: {exc}", file=stderr)
        return EXIT_USAGE
    except HreError as exc:
        print(f"hrekit: {type(exc).__name__}: {exc}", file=stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"hrekit: {exc}", file=stderr)
        return EXIT_DATA

    if isinstance(outcome, HreError):
        error, code = outcome, outcome.exit_code
    else:
        code = outcome

    report = {"command": args.command, "alternatives": pf.alternatives}
    report.update(body)
    meta = {"variant": args.variant, "singular_tol": args.tol_singular,
            "spectral_tol": SPECTRAL_TOL, "strict": args.strict}
    if args.seed is not None:
        meta["seed"] = args.seed
    if args.timings:
        meta["elapsed_seconds"] = time.perf_counter() - started
    report["metadata"] = meta

    if args.format == "json":
        stdout.write(json.dumps(report, indent=2) + "\n")
    else:
        stdout.write("\n".join(_text(report)) + "\n")
    if error is not None:
        print(f"hrekit: {error}", file=stderr)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
