"""Command-line front end.

Subcommands: nu, scan, minimal, growth, hwang, classgroup, selfcheck.
stdout carries data, stderr carries diagnostics.  Exit codes: 0 on
success, 1 when selfcheck finds a discrepancy, 2 on usage or input
errors.  --format selects json (one object per line), csv (fixed
headers), or table (aligned text); table is the default on a TTY, json
otherwise, so piped output is machine-readable without flags.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Any

from . import lattice, quadfield, serialize, survey
from .errors import CovolumeError, InvalidInput
from .survey import SurveyRow

__all__ = ["main", "run", "build_parser"]

_FORMATS = ("json", "csv", "table")
_SELFCHECK_DEFAULT_TOL = 1e-9


def _default_format() -> str:
    return "table" if sys.stdout.isatty() else "json"


def _print_table(header: tuple[str, ...], rows: list[tuple[str, ...]]) -> None:
    widths = [len(h) for h in header]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    print("  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip())
    for row in rows:
        print("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())


def _emit(
    fmt: str,
    header: tuple[str, ...],
    csv_rows: list[tuple[str, ...]],
    records: list[dict[str, Any]],
) -> None:
    if fmt == "json":
        for record in records:
            print(serialize.dumps(record))
    elif fmt == "csv":
        print(serialize.csv_join(header))
        for row in csv_rows:
            print(serialize.csv_join(row))
    else:
        _print_table(header, csv_rows)


def _emit_survey_rows(rows: list[SurveyRow], fmt: str) -> None:
    _emit(
        fmt,
        SurveyRow.CSV_HEADER,
        [serialize.row_to_csv(r) for r in rows],
        [serialize.row_to_record(r) for r in rows],
    )


def cmd_nu(args: argparse.Namespace) -> int:
    field = quadfield.from_squarefree_d(args.d)
    result = lattice.covolume_result(field, args.n)
    _emit_survey_rows([SurveyRow.from_result(result)], args.format or _default_format())
    return 0


def cmd_scan(args: argparse.Namespace) -> int:
    rows = survey.scan(args.n, args.max_disc)
    _emit_survey_rows(list(rows), args.format or _default_format())
    return 0


def _overall_summary(om: survey.OverallMinimum) -> dict[str, Any]:
    return {
        "n_star": om.n_star,
        "volume_n_star": om.volume_n_star,
        "growth_threshold_n1": om.growth_threshold_n1,
        "winner": serialize.row_to_record(SurveyRow.from_result(om.result)),
    }


def cmd_minimal(args: argparse.Namespace) -> int:
    fmt = args.format or _default_format()
    if args.overall:
        if args.n is not None:
            raise InvalidInput("--overall and --n are mutually exclusive")
        om = survey.overall_minimum(args.n_max, args.safety_margin)
        per_n_rows = [SurveyRow.from_result(mr.result) for mr in om.per_n]
        if fmt == "json":
            record = _overall_summary(om)
            if args.verbose:
                record["per_n"] = [serialize.row_to_record(r) for r in per_n_rows]
            print(serialize.dumps(record))
        elif fmt == "csv":
            rows = per_n_rows if args.verbose else [SurveyRow.from_result(om.result)]
            _emit_survey_rows(rows, "csv")
        else:
            print(f"overall minimum: n = {om.n_star} (volume ranking: n = {om.volume_n_star})")
            print(f"growth ratio exceeds 1 for every n >= {om.growth_threshold_n1}")
            rows = per_n_rows if args.verbose else [SurveyRow.from_result(om.result)]
            _emit_survey_rows(rows, "table")
        return 0

    if args.n is None:
        raise InvalidInput("one of --n or --overall is required")
    mr = survey.minimal_field(args.n, args.safety_margin)
    winner_row = SurveyRow.from_result(mr.result)
    cert = mr.certificate
    candidate_rows = [SurveyRow.from_result(c.result) for c in cert.candidates]
    if fmt == "json":
        if args.verbose:
            record: dict[str, Any] = {
                "winner": serialize.row_to_record(winner_row),
                "bound": cert.bound,
                "limit": cert.limit,
                "certificate": [serialize.row_to_record(r) for r in candidate_rows],
            }
            print(serialize.dumps(record))
        else:
            print(serialize.dumps(serialize.row_to_record(winner_row)))
    elif fmt == "csv":
        _emit_survey_rows(candidate_rows if args.verbose else [winner_row], "csv")
    else:
        print(f"minimal field at n = {args.n}: {mr.field}")
        if args.verbose:
            print(
                f"discriminant bound {serialize.format_float(cert.bound)}, "
                f"candidates enumerated up to |disc| = {cert.limit}"
            )
        _emit_survey_rows(candidate_rows if args.verbose else [winner_row], "table")
    return 0


def cmd_growth(args: argparse.Namespace) -> int:
    if args.n_max < args.n_min:
        raise InvalidInput(
            f"--n-max must be >= --n-min, got {args.n_max} < {args.n_min}"
        )
    field = quadfield.from_squarefree_d(args.d)
    reports = [survey.growth_ratio(field, n) for n in range(args.n_min, args.n_max + 1)]
    _emit(
        args.format or _default_format(),
        serialize.GROWTH_HEADER,
        [serialize.growth_to_csv(r) for r in reports],
        [serialize.growth_to_record(r) for r in reports],
    )
    return 0


def cmd_hwang(args: argparse.Namespace) -> int:
    bound = survey.hwang_bound(args.n, args.k)
    _emit(
        args.format or _default_format(),
        ("n", "k", "bound"),
        [(str(args.n), str(args.k), serialize.format_float(bound.value))],
        [{"n": args.n, "k": args.k, "bound": bound.value}],
    )
    return 0


def _class_order(g: quadfield.FormClass, group: quadfield.ClassGroup) -> int:
    power = g
    order = 1
    while power != group.principal:
        power = quadfield.compose(power, g, group)
        order += 1
    return order


def cmd_classgroup(args: argparse.Namespace) -> int:
    fmt = args.format or _default_format()
    field = quadfield.from_squarefree_d(args.d)
    group = quadfield.reduced_forms(field)
    classes = [(g, _class_order(g, group)) for g in group.classes]
    torsion = None if args.m is None else quadfield.torsion_count(group, args.m)
    header = ("a", "b", "c", "order")
    csv_rows = [(str(g.a), str(g.b), str(g.c), str(o)) for g, o in classes]
    if fmt == "json":
        record: dict[str, Any] = {
            "d": field.d,
            "disc": field.disc_abs,
            "h": group.h,
            "classes": [
                {"a": g.a, "b": g.b, "c": g.c, "order": o} for g, o in classes
            ],
            "torsion": None
            if torsion is None
            else {"m": args.m, "count": torsion},
        }
        print(serialize.dumps(record))
    elif fmt == "csv":
        print(serialize.csv_join(header))
        for row in csv_rows:
            print(serialize.csv_join(row))
    else:
        print(f"{field}: disc -{field.disc_abs}, h = {group.h}")
        if torsion is not None:
            print(f"classes killed by m = {args.m}: {torsion}")
        _print_table(header, csv_rows)
    return 0


def _selfcheck_tolerance() -> float:
    raw = os.environ.get("COVOLUME_PRECISION")
    if raw is None:
        return _SELFCHECK_DEFAULT_TOL
    try:
        value = float(raw)
    except ValueError:
        raise InvalidInput(f"COVOLUME_PRECISION is not a number: {raw!r}") from None
    if value <= 0:
        raise InvalidInput(f"COVOLUME_PRECISION must be positive, got {raw!r}")
    return min(_SELFCHECK_DEFAULT_TOL, value)


def cmd_selfcheck(args: argparse.Namespace) -> int:
    tol = _selfcheck_tolerance()
    if args.quick:
        fields = (quadfield.from_squarefree_d(3),)
        n_values: tuple[int, ...] = (2, 3, 9)
    else:
        fields = None
        n_values = None
    rows = lattice.cross_path_check(fields=fields, n_values=n_values, tol=tol)
    table = [
        (
            str(row.field.d),
            str(row.field.disc_abs),
            str(row.n),
            serialize.format_float(row.exact_value),
            serialize.format_float(row.numeric_value),
            serialize.format_float(row.rel_diff),
            "ok" if row.ok else "FAIL",
        )
        for row in rows
    ]
    _print_table(("d", "disc", "n", "exact", "numeric", "rel_diff", "status"), table)
    failures = [row for row in rows if not row.ok]
    worst = max(row.rel_diff for row in rows)
    if failures:
        for row in failures:
            print(
                f"selfcheck failure: {row.field}, n = {row.n}, "
                f"relative discrepancy {row.rel_diff:.6g} > {tol:.6g}",
                file=sys.stderr,
            )
        print(
            f"FAIL: {len(failures)} of {len(rows)} checks exceeded "
            f"tolerance {tol:.6g}"
        )
        return 1
    print(
        f"ok: {len(rows)} checks, worst relative difference "
        f"{worst:.6g}, tolerance {tol:.6g}"
    )
    return 0


def _add_format(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--format",
        choices=_FORMATS,
        default=None,
        help="output format (default: table on a TTY, json otherwise)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="covolume",
        description="Exact covolumes of minimal nonuniform arithmetic "
        "lattices in PU(n,1).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("nu", help="covolume invariants for one (field, n) pair")
    p.add_argument("--d", type=int, required=True, help="squarefree positive d in Q(sqrt(-d))")
    p.add_argument("--n", type=int, required=True, help="dimension n >= 2")
    _add_format(p)
    p.set_defaults(handler=cmd_nu)

    p = sub.add_parser("scan", help="survey every field up to a discriminant limit")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--max-disc", type=int, required=True)
    _add_format(p)
    p.set_defaults(handler=cmd_scan)

    p = sub.add_parser("minimal", help="minimal field at fixed n, or overall over n")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--overall", action="store_true")
    p.add_argument("--n-max", type=int, default=30)
    p.add_argument("--safety-margin", type=int, default=20)
    p.add_argument("--verbose", action="store_true", help="include the certificate")
    _add_format(p)
    p.set_defaults(handler=cmd_minimal)

    p = sub.add_parser("growth", help="dimension-step growth ratios nu(n+1)/nu(n)")
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--n-min", type=int, default=2)
    p.add_argument("--n-max", type=int, default=12)
    _add_format(p)
    p.set_defaults(handler=cmd_growth)

    p = sub.add_parser("hwang", help="smooth-quotient volume lower bound")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, default=1, help="number of cusps")
    _add_format(p)
    p.set_defaults(handler=cmd_hwang)

    p = sub.add_parser("classgroup", help="reduced forms and torsion counts")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--m", type=int, default=None, help="also count classes killed by m")
    _add_format(p)
    p.set_defaults(handler=cmd_classgroup)

    p = sub.add_parser("selfcheck", help="exact-vs-numeric consistency suite")
    p.add_argument("--quick", action="store_true", help="d=3, n in {2, 3, 9} only")
    p.set_defaults(handler=cmd_selfcheck)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.handler(args)
    except CovolumeError as exc:
        print(f"covolume: {exc}", file=sys.stderr)
        return 2


def run() -> None:
    sys.exit(main())
