"""Lossless text codecs for survey rows and growth reports.

Exact rationals travel as "numerator/denominator" strings so that JSON
consumers with 64-bit number parsing cannot corrupt them.  Floats are
printed with 12 significant digits, few enough that parse-and-reprint
is the identity.  Interval values are "lower..upper" in CSV and
{"lower": ..., "upper": ...} objects in JSON.  Every emitted record
parses back to an equal row, and re-serializing the parsed form
reproduces the original bytes.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from typing import Any

from .lattice import EpsilonStatus, ExactOrInterval, Interval
from .survey import GrowthReport, SurveyRow

__all__ = [
    "dumps",
    "format_float",
    "format_rational",
    "parse_rational",
    "format_value",
    "parse_value",
    "format_volume",
    "parse_volume",
    "format_epsilon",
    "parse_epsilon",
    "csv_join",
    "row_to_record",
    "row_from_record",
    "row_to_csv",
    "row_from_csv",
    "GROWTH_HEADER",
    "growth_to_record",
    "growth_to_csv",
]


def format_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite float {x!r}")
    return f"{x:.12g}"


def format_rational(x: Fraction) -> str:
    return str(x)


def parse_rational(s: str) -> Fraction:
    return Fraction(s)


def format_value(x: ExactOrInterval) -> str:
    if isinstance(x, Interval):
        return f"{x.lower}..{x.upper}"
    return str(x)


def parse_value(s: str) -> ExactOrInterval:
    if ".." in s:
        lo, hi = s.split("..")
        return Interval(Fraction(lo), Fraction(hi))
    return Fraction(s)


def _format_volume_scalar(v: float) -> str:
    # volumes past IEEE range saturate to inf upstream; keep that
    # explicit in the serialized form instead of failing
    if math.isinf(v) and v > 0:
        return "inf"
    return format_float(v)


def format_volume(v: float | tuple[float, float]) -> str:
    if isinstance(v, tuple):
        return f"{_format_volume_scalar(v[0])}..{_format_volume_scalar(v[1])}"
    return _format_volume_scalar(v)


def parse_volume(s: str) -> float | tuple[float, float]:
    if ".." in s:
        lo, hi = s.split("..")
        return (float(lo), float(hi))
    return float(s)


def format_epsilon(eps: EpsilonStatus) -> str:
    if eps.kind == "irrelevant":
        return "irrelevant"
    if eps.kind == "exact":
        return str(eps.lower)
    return f"{eps.lower}..{eps.upper}"


def parse_epsilon(s: str) -> EpsilonStatus:
    if s == "irrelevant":
        return EpsilonStatus("irrelevant", 1, 1)
    if ".." in s:
        lo, hi = s.split("..")
        return EpsilonStatus("bounded", int(lo), int(hi))
    return EpsilonStatus("exact", int(s), int(s))


def dumps(obj: Any) -> str:
    """JSON text with 12-significant-digit floats and stable key order.

    Parsing the output with json.loads and feeding the result back in
    returns the same bytes, which is the round-trip contract the CLI
    promises.
    """
    parts: list[str] = []
    _write(obj, parts)
    return "".join(parts)


def _write(obj: Any, parts: list[str]) -> None:
    if obj is None:
        parts.append("null")
    elif obj is True:
        parts.append("true")
    elif obj is False:
        parts.append("false")
    elif isinstance(obj, int):
        parts.append(str(obj))
    elif isinstance(obj, float):
        parts.append(format_float(obj))
    elif isinstance(obj, str):
        parts.append(json.dumps(obj))
    elif isinstance(obj, Fraction):
        parts.append(json.dumps(str(obj)))
    elif isinstance(obj, dict):
        parts.append("{")
        for i, (key, value) in enumerate(obj.items()):
            if i:
                parts.append(", ")
            parts.append(json.dumps(str(key)))
            parts.append(": ")
            _write(value, parts)
        parts.append("}")
    elif isinstance(obj, (list, tuple)):
        parts.append("[")
        for i, value in enumerate(obj):
            if i:
                parts.append(", ")
            _write(value, parts)
        parts.append("]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def csv_join(values: tuple[str, ...]) -> str:
    for v in values:
        if any(ch in v for ch in ',"\n\r'):
            raise ValueError(f"CSV field would need quoting: {v!r}")
    return ",".join(values)


def _value_json(x: ExactOrInterval) -> str | dict[str, str]:
    if isinstance(x, Interval):
        return {"lower": str(x.lower), "upper": str(x.upper)}
    return str(x)


def _value_from_json(obj: str | dict[str, str]) -> ExactOrInterval:
    if isinstance(obj, dict):
        return Interval(Fraction(obj["lower"]), Fraction(obj["upper"]))
    return Fraction(obj)


def _volume_json_scalar(v: float) -> float | str:
    # JSON numbers cannot carry infinity; the saturated value travels
    # as the string "inf" and parses back through float()
    if math.isinf(v) and v > 0:
        return "inf"
    return v


def _volume_json(v: float | tuple[float, float]) -> Any:
    if isinstance(v, tuple):
        return {
            "lower": _volume_json_scalar(v[0]),
            "upper": _volume_json_scalar(v[1]),
        }
    return _volume_json_scalar(v)


def _volume_from_json(obj: Any) -> float | tuple[float, float]:
    if isinstance(obj, dict):
        return (float(obj["lower"]), float(obj["upper"]))
    return float(obj)


def row_to_record(row: SurveyRow) -> dict[str, Any]:
    mult = row.multiplicity
    return {
        "d": row.d,
        "disc": row.disc,
        "n": row.n,
        "nu": _value_json(row.nu),
        "chi": _value_json(row.chi),
        "volume": _volume_json(row.volume),
        "h": row.h,
        "h_torsion": row.h_torsion,
        "r": row.r,
        "epsilon": {
            "kind": row.epsilon.kind,
            "lower": row.epsilon.lower,
            "upper": row.epsilon.upper,
        },
        "mult_lo": None if mult is None else mult[0],
        "mult_hi": None if mult is None else mult[1],
        "exact": row.exact,
    }


def row_from_record(obj: dict[str, Any]) -> SurveyRow:
    mult_lo = obj["mult_lo"]
    eps = obj["epsilon"]
    return SurveyRow(
        d=int(obj["d"]),
        disc=int(obj["disc"]),
        n=int(obj["n"]),
        nu=_value_from_json(obj["nu"]),
        chi=_value_from_json(obj["chi"]),
        volume=_volume_from_json(obj["volume"]),
        h=int(obj["h"]),
        h_torsion=int(obj["h_torsion"]),
        r=int(obj["r"]),
        epsilon=EpsilonStatus(eps["kind"], int(eps["lower"]), int(eps["upper"])),
        multiplicity=None if mult_lo is None else (int(mult_lo), int(obj["mult_hi"])),
    )


def row_to_csv(row: SurveyRow) -> tuple[str, ...]:
    mult = row.multiplicity
    return (
        str(row.d),
        str(row.disc),
        str(row.n),
        format_value(row.nu),
        format_value(row.chi),
        format_volume(row.volume),
        str(row.h),
        str(row.h_torsion),
        str(row.r),
        format_epsilon(row.epsilon),
        "" if mult is None else str(mult[0]),
        "" if mult is None else str(mult[1]),
        "true" if row.exact else "false",
    )


def row_from_csv(values: tuple[str, ...]) -> SurveyRow:
    if len(values) != len(SurveyRow.CSV_HEADER):
        raise ValueError(
            f"expected {len(SurveyRow.CSV_HEADER)} CSV fields, got {len(values)}"
        )
    (d, disc, n, nu, chi, volume, h, h_t, r, eps, m_lo, m_hi, _exact) = values
    return SurveyRow(
        d=int(d),
        disc=int(disc),
        n=int(n),
        nu=parse_value(nu),
        chi=parse_value(chi),
        volume=parse_volume(volume),
        h=int(h),
        h_torsion=int(h_t),
        r=int(r),
        epsilon=parse_epsilon(eps),
        multiplicity=None if m_lo == "" else (int(m_lo), int(m_hi)),
    )


GROWTH_HEADER = ("d", "n", "q", "log_q_over_n", "closed_form", "rel_err")


def growth_to_record(report: GrowthReport) -> dict[str, Any]:
    return {
        "d": report.field.d,
        "n": report.n,
        "q": _value_json(report.q),
        "log_q_over_n": report.log_q_over_n,
        "closed_form": report.closed_form,
        "rel_err": report.closed_form_rel_err,
    }


def growth_to_csv(report: GrowthReport) -> tuple[str, ...]:
    cf = report.closed_form
    err = report.closed_form_rel_err
    return (
        str(report.field.d),
        str(report.n),
        format_value(report.q),
        format_float(report.log_q_over_n),
        "" if cf is None else format_float(cf),
        "" if err is None else format_float(err),
    )
