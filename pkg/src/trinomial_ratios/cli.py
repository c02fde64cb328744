"""Command-line entry point.

Exit codes: 0 success, 1 verification or table mismatch, 2 invalid input, 3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import __version__
from .experiments import (
    TABLE1_SPEC,
    TOOL_NAME,
    ExperimentReport,
    Table1Config,
    Table1Error,
    Tolerances,
    alpha_star_sweep,
    g_profile,
    header_lines,
    run_full_verification,
    run_fuzz,
    run_table1,
    scatter_data,
    sequence_zero_items,
    table1_diff_lines,
    table1_labels,
)
from .polyalg import ComplexPoly, RecurrenceSpec, generate_sequence
from .rootfind import RootFindingError

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_IO = 0, 1, 2, 3


class InputError(ValueError):
    pass


def _g17(x: float) -> str:
    return f"{x:.17g}"


def _poly_arg(text: str | None, name: str) -> ComplexPoly | None:
    if text is None:
        return None
    try:
        return ComplexPoly.from_json(text)
    except ValueError as exc:
        raise InputError(f"--{name}: {exc}") from None


def _spec_from_args(args, default: RecurrenceSpec | None = None) -> RecurrenceSpec:
    A, B = _poly_arg(args.A, "A"), _poly_arg(args.B, "B")
    if default is not None and A is None and B is None and args.k is None and args.l is None:
        return default
    missing = [f"--{n}" for n, v in (("A", A), ("B", B), ("k", args.k), ("l", args.l)) if v is None]
    if missing:
        raise InputError("missing " + ", ".join(missing))
    try:
        return RecurrenceSpec(A, B, args.k, args.l)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _config(args, **extra) -> dict:
    cfg = {k: v for k, v in vars(args).items() if k not in ("func",) and v is not None}
    cfg.update(extra)
    return cfg


def _json_doc(config: dict, payload: dict) -> str:
    return json.dumps({"tool": TOOL_NAME, "version": __version__, "config": config, **payload}, indent=1) + "\n"


def _csv_doc(config: dict, columns: list[str], rows) -> str:
    buf = io.StringIO()
    for line in header_lines(config):
        buf.write(line + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    w.writerows(rows)
    return buf.getvalue()


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _report_text(report: ExperimentReport, fmt: str) -> str:
    if fmt == "csv":
        return report.to_csv()
    return report.to_json() + "\n"


def cmd_sequence(args) -> int:
    spec = _spec_from_args(args)
    if args.n is None or args.n < 0:
        raise InputError("--n must be a non-negative integer")
    seq = generate_sequence(spec, args.n)
    cfg = _config(args, spec=spec.to_dict())
    if args.format == "csv":
        rows = [[n, i, _g17(c.real), _g17(c.imag)] for n, p in enumerate(seq) for i, c in enumerate(p.coeffs)]
        _emit(_csv_doc(cfg, ["n", "i", "re", "im"], rows), args.out)
    else:
        _emit(_json_doc(cfg, {"sequence": [p.to_pairs() for p in seq]}), args.out)
    return EXIT_OK


def _n_values(args) -> list[int]:
    if args.n_list:
        try:
            vals = [int(v) for v in args.n_list.split(",") if v.strip()]
        except ValueError:
            raise InputError(f"--n-list must be comma-separated integers, got {args.n_list!r}") from None
    elif args.n is not None:
        vals = [args.n]
    elif args.n_max is not None:
        vals = list(range(args.n_min, args.n_max + 1))
    else:
        raise InputError("give --n, --n-list or --n-max")
    if not vals or min(vals) < 0:
        raise InputError("n values must be non-negative")
    return vals


def _tolerances(args) -> Tolerances:
    if args.tol is None:
        return Tolerances()
    if not args.tol > 0:
        raise InputError("--tol must be positive")
    return Tolerances(classify=args.tol)


def cmd_verify(args) -> int:
    tol = _tolerances(args)
    if args.fuzz is not None:
        if args.fuzz < 1:
            raise InputError("--fuzz must be positive")
        report = run_fuzz(args.fuzz, args.seed, tol)
        report.config.update({"format": args.format})
    else:
        spec = _spec_from_args(args)
        report = run_full_verification(spec, _n_values(args), tol)
    _emit(_report_text(report, args.format), args.out)
    fails = report.failures()
    for ti, z in fails:
        names = ", ".join(z.failed())
        sys.stderr.write(f"FAIL trial={ti} n={z.n} z0={z.z0!r}: {names}\n")
    if fails:
        return EXIT_FAIL
    sys.stderr.write(f"ok: {len(report.zeros)} zeros verified\n")
    return EXIT_OK


def cmd_table1(args) -> int:
    tol = 5e-4 if args.tol is None else args.tol
    if not tol > 0:
        raise InputError("--tol must be positive")
    config = Table1Config(tol=tol, alpha_tol=min(1e-4, tol))
    try:
        report = run_table1(config)
    except Table1Error as exc:
        sys.stderr.write(f"table mismatch: {exc}\n")
        return EXIT_FAIL
    report.config["format"] = args.format
    _emit(_report_text(report, args.format), args.out)
    if not report.passed:
        for line in table1_diff_lines(report, tol):
            sys.stderr.write(line + "\n")
        for _, z in report.failures():
            sys.stderr.write(f"FAIL {z.label}: {', '.join(z.failed())}\n")
        return EXIT_FAIL
    return EXIT_OK


def cmd_plotdata(args) -> int:
    if args.kind == "g":
        if args.k is None or args.l is None:
            raise InputError("plotdata g needs --k and --l")
        try:
            prof = g_profile(args.k, args.l, args.num)
        except ValueError as exc:
            raise InputError(str(exc)) from None
        cfg = _config(args)
        if args.format == "csv":
            rows = [[_g17(x), _g17(g)] for x, g in zip(prof.x, prof.g)]
            cfg["reference_g1"] = prof.reference
            _emit(_csv_doc(cfg, ["x", "g"], rows), args.out)
        else:
            _emit(_json_doc(cfg, {"g_profile": prof.to_dict()}), args.out)
        return EXIT_OK
    if args.kind == "alphastar":
        spec = _spec_from_args(args)
        if args.n_max is None:
            raise InputError("plotdata alphastar needs --n-max")
        n_values = list(range(args.n_min, args.n_max + 1, args.step))
        pts = alpha_star_sweep(spec, n_values)
        cfg = _config(args, spec=spec.to_dict())
        if args.format == "csv":
            rows = [[p.n, "" if p.alpha_star is None else _g17(p.alpha_star), p.admissible, p.note] for p in pts]
            _emit(_csv_doc(cfg, ["n", "alpha_star", "admissible", "note"], rows), args.out)
        else:
            _emit(_json_doc(cfg, {"alpha_star": [p.to_dict() for p in pts]}), args.out)
        return EXIT_OK
    # ratio and zero scatter
    spec = _spec_from_args(args, default=TABLE1_SPEC)
    if args.n is None:
        raise InputError("plotdata ratios needs --n")
    labels = None
    if spec == TABLE1_SPEC:
        ok, _ = sequence_zero_items(spec, args.n)
        labels = table1_labels(args.n, [z for z, _, _ in ok])
    rows = scatter_data(spec, args.n, labels=labels)
    cfg = _config(args, spec=spec.to_dict())
    if args.format == "csv":
        flat = [[r["n"], _g17(r["z0"][0]), _g17(r["z0"][1]), r["label"], r["series"],
                 _g17(r["point"][0]), _g17(r["point"][1]), r["kind"]] for r in rows]
        _emit(_csv_doc(cfg, ["n", "z0_re", "z0_im", "label", "series", "re", "im", "kind"], flat), args.out)
    else:
        _emit(_json_doc(cfg, {"points": rows}), args.out)
    return EXIT_OK


def _add_spec_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--A", help="polynomial A as [[re, im], ...], ascending degree")
    p.add_argument("--B", help="polynomial B as [[re, im], ...], ascending degree")
    p.add_argument("--k", type=int)
    p.add_argument("--l", type=int)


def _add_output_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--format", choices=["json", "csv"], default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=TOOL_NAME,
        description="Zeros of three-term recurrence polynomials and ratios of zeros of their trinomials.",
    )
    parser.add_argument("--version", action="version", version=f"{TOOL_NAME} {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sequence", help="coefficients of P_0..P_n")
    _add_spec_args(p)
    p.add_argument("--n", type=int, required=True)
    _add_output_args(p)
    p.set_defaults(func=cmd_sequence)

    p = sub.add_parser("verify", help="check every admissible zero of P_n")
    _add_spec_args(p)
    p.add_argument("--n", type=int)
    p.add_argument("--n-list", help="comma-separated n values")
    p.add_argument("--n-min", type=int, default=1)
    p.add_argument("--n-max", type=int)
    p.add_argument("--fuzz", type=int, help="run this many random recurrences instead")
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--tol", type=float, help="classification tolerance (default 1e-6)")
    _add_output_args(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("table1", help="reproduce the k=5, l=3 reference table")
    p.add_argument("--tol", type=float, help="cell tolerance (default 5e-4)")
    _add_output_args(p)
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("plotdata", help="data series for plots")
    p.add_argument("kind", choices=["g", "alphastar", "ratios"])
    _add_spec_args(p)
    p.add_argument("--n", type=int)
    p.add_argument("--n-min", type=int, default=1)
    p.add_argument("--n-max", type=int)
    p.add_argument("--step", type=int, default=5)
    p.add_argument("--num", type=int, default=401, help="grid points for g")
    _add_output_args(p)
    p.set_defaults(func=cmd_plotdata)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except InputError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except OSError as exc:
        sys.stderr.write(f"I/O error: {exc}\n")
        return EXIT_IO
    except RootFindingError as exc:
        sys.stderr.write(f"root finding failed: {exc}\n")
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
