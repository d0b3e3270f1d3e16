"""Cross-field and cross-dimension comparisons.

This module answers the global questions: which imaginary quadratic
field realizes the smallest covolume in a fixed dimension, in which
dimension the overall minimum occurs, how fast covolumes grow past it,
and how the exact values compare with the geometric lower bound of
Hwang for smooth quotients.

The field search is a finite certificate, not a heuristic scan: any
field whose discriminant exceeds an explicit threshold loses to
Q(sqrt(-3)) outright, so enumerating discriminants up to that threshold
(plus a safety margin) examines every possible competitor.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

from . import lattice, lvalues, quadfield
from .errors import InvalidDimension, InvalidInput, TieDetected
from .lattice import CovolumeResult, EpsilonStatus, ExactOrInterval, Interval
from .lvalues import NumericValue
from .quadfield import QuadField

__all__ = [
    "SurveyRow",
    "GrowthReport",
    "Candidate",
    "MinimalCertificate",
    "MinimalResult",
    "OverallMinimum",
    "discriminant_bound",
    "brauer_siegel_h_bound",
    "scan",
    "minimal_field",
    "overall_minimum",
    "growth_ratio",
    "hwang_bound",
    "clear_caches",
]

_TWO_PI = 2 * math.pi


def _check_n(n: int) -> None:
    if not isinstance(n, int) or isinstance(n, bool):
        raise InvalidDimension(f"n must be an integer, got {n!r}")
    if n < 2:
        raise InvalidDimension(f"n must be >= 2, got {n}")


@dataclass(frozen=True)
class SurveyRow:
    """One serialization-ready line of a covolume survey.

    Mirror of CovolumeResult with floats in place of error-carrying
    numerics, so a row can be rebuilt exactly from its own CSV or JSON
    serialization (see the serialize module).
    """

    d: int
    disc: int
    n: int
    nu: ExactOrInterval
    chi: ExactOrInterval
    volume: float | tuple[float, float]
    h: int
    h_torsion: int
    r: int
    epsilon: EpsilonStatus
    multiplicity: tuple[int, int] | None

    CSV_HEADER = (
        "d",
        "disc",
        "n",
        "nu",
        "chi",
        "volume",
        "h",
        "h_torsion",
        "r",
        "epsilon",
        "mult_lo",
        "mult_hi",
        "exact",
    )

    @property
    def exact(self) -> bool:
        return lattice.is_exact(self.nu)

    @classmethod
    def from_result(cls, result: CovolumeResult) -> "SurveyRow":
        vol = result.volume
        if isinstance(vol, tuple):
            volume: float | tuple[float, float] = (vol[0].value, vol[1].value)
        else:
            volume = vol.value
        return cls(
            d=result.field.d,
            disc=result.field.disc_abs,
            n=result.n,
            nu=result.nu,
            chi=result.chi,
            volume=volume,
            h=result.h,
            h_torsion=result.h_torsion,
            r=result.field.r,
            epsilon=result.epsilon,
            multiplicity=result.multiplicity,
        )


@dataclass(frozen=True)
class GrowthReport:
    """The dimension-step ratio q(n) = nu(n+1)/nu(n) for one field.

    q is exact (or an exact interval when the field has more than one
    ramified prime, in which case the endpoints bound the true ratio).
    log_q_over_n is log(q)/n from the lower endpoint.  closed_form is an
    independent numeric evaluation of the same ratio through the
    functional equations, with its relative deviation from the exact
    quotient; both are None when the ratio is not exact.
    """

    field: QuadField
    n: int
    q: ExactOrInterval
    log_q_over_n: float
    closed_form: float | None
    closed_form_rel_err: float | None

    @property
    def exact(self) -> bool:
        return lattice.is_exact(self.q)


class Candidate(NamedTuple):
    """One enumerated field in a minimal-covolume certificate."""

    field: QuadField
    result: CovolumeResult


@dataclass(frozen=True)
class MinimalCertificate:
    """Proof data for a minimal-field determination at fixed n.

    candidates lists every imaginary quadratic field with |disc| at most
    limit, in ascending discriminant order, with its full covolume
    record; limit is max(discriminant_bound(n), 4) plus the safety
    margin, so the enumeration is exhaustive for the comparison.
    """

    n: int
    bound: float
    limit: int
    candidates: tuple[Candidate, ...]


class MinimalResult(NamedTuple):
    field: QuadField
    result: CovolumeResult
    certificate: MinimalCertificate


class OverallMinimum(NamedTuple):
    """Location of the global covolume minimum across dimensions.

    n_star minimizes the normalized Euler-Poincare value; the same
    dimension must also minimize the hyperbolic volume, recorded as
    volume_n_star.  growth_threshold_n1 is the smallest n1 in the scan
    range with q(m) > 1 for every m >= n1, certifying that the minimum
    cannot move if the range is extended.
    """

    n_star: int
    result: CovolumeResult
    volume_n_star: int
    growth_threshold_n1: int
    per_n: tuple[MinimalResult, ...]


def discriminant_bound(n: int) -> NumericValue:
    """Discriminant threshold beyond which no field can be minimal.

    3 * (2 pi^5 / 3^(11/2)) ** ((n - t) / (2 (s - 1))) with t = 1 for
    even n, t = 0 for odd n, and s the discriminant exponent of the
    principal covolume.  The exponent decays like 1/n, so the bound
    tends to 3 from above; it never exceeds 4 for n >= 4.
    """
    _check_n(n)
    if n % 2 == 0:
        s = Fraction(n * (n + 3), 4)
        t = 1
    else:
        s = Fraction((n - 1) * (n + 2), 4)
        t = 0
    exponent = Fraction(n - t) / (2 * (s - 1))
    value = 3.0 * (2 * math.pi**5 / 3**5.5) ** float(exponent)
    return NumericValue(value, abs(value) * 1e-14)


def brauer_siegel_h_bound(field: QuadField, m: int) -> NumericValue:
    """Upper bound on the class number from the degree-m zeta value.

    mu * m (m-1) (m-1)! * (disc / 4 pi^2)^(m/2) * zeta(m) L(m), where mu
    is the unit-group order of the field.  Any m >= 2 works; small m
    gives the tightest bound.
    """
    if not isinstance(m, int) or isinstance(m, bool) or m < 2:
        raise InvalidInput(f"m must be an integer >= 2, got {m!r}")
    z = lvalues.zeta_numeric(m)
    l = lvalues.l_numeric(field, m)
    value = (
        field.mu_order
        * m
        * (m - 1)
        * math.factorial(m - 1)
        * (field.disc_abs / (4 * math.pi**2)) ** (m / 2)
        * z.value
        * l.value
    )
    rel = z.rel_error_bound + l.rel_error_bound + (m + 6) * 3e-16
    return NumericValue(value, abs(value) * rel)


def _pmap(fn, items):
    if len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=min(8, len(items))) as ex:
        return list(ex.map(fn, items))


def scan(n: int, max_disc: int) -> tuple[SurveyRow, ...]:
    """All survey rows for |disc| <= max_disc, ascending discriminant."""
    _check_n(n)
    if not isinstance(max_disc, int) or max_disc < 3:
        raise InvalidInput(f"max_disc must be an integer >= 3, got {max_disc!r}")
    fields = quadfield.fields_with_disc_at_most(max_disc)
    results = _pmap(lambda f: lattice.covolume_result(f, n), fields)
    return tuple(SurveyRow.from_result(res) for res in results)


def minimal_field(n: int, safety_margin: int = 20) -> MinimalResult:
    """Field of minimal covolume at dimension n, with a full certificate.

    Enumerates every field with |disc| <= max(discriminant_bound(n), 4)
    + safety_margin and compares exact nu values (lower endpoints for
    interval candidates, which is sound because the winner must be
    exact).  A tie for the minimum, or an inexact winner, raises
    TieDetected rather than guessing.
    """
    _check_n(n)
    if not isinstance(safety_margin, int) or safety_margin < 1:
        raise InvalidInput(
            f"safety_margin must be a positive integer, got {safety_margin!r}"
        )
    bound = discriminant_bound(n)
    limit = max(math.ceil(bound.value), 4) + safety_margin
    fields = quadfield.fields_with_disc_at_most(limit)
    results = _pmap(lambda f: lattice.covolume_result(f, n), fields)
    candidates = tuple(Candidate(f, res) for f, res in zip(fields, results))
    best = min(c.result.nu_lower for c in candidates)
    winners = [c for c in candidates if c.result.nu_lower == best]
    if len(winners) > 1:
        names = ", ".join(str(c.field) for c in winners)
        raise TieDetected(f"minimum at n = {n} is shared by {names}")
    winner = winners[0]
    if not winner.result.exact:
        raise TieDetected(
            f"minimum at n = {n} falls on an interval candidate "
            f"({winner.field}); comparison by lower endpoint is inconclusive"
        )
    certificate = MinimalCertificate(
        n=n, bound=bound.value, limit=limit, candidates=candidates
    )
    return MinimalResult(winner.field, winner.result, certificate)


def _volume_value(result: CovolumeResult) -> float:
    vol = result.volume
    return vol[0].value if isinstance(vol, tuple) else vol.value


def overall_minimum(n_max: int, safety_margin: int = 20) -> OverallMinimum:
    """Global minimum over 2 <= n <= n_max of the per-dimension minima.

    Requires n_max >= 10 so the scan range safely brackets the minimum.
    Both rankings (Euler-Poincare value and hyperbolic volume) are
    computed and must name the same unique dimension; the growth
    threshold n1 certifies monotone growth above it.
    """
    if not isinstance(n_max, int) or n_max < 10:
        raise InvalidInput(f"n_max must be an integer >= 10, got {n_max!r}")
    per_n = tuple(minimal_field(n, safety_margin) for n in range(2, n_max + 1))

    best_nu = min(mr.result.nu_lower for mr in per_n)
    nu_winners = [mr for mr in per_n if mr.result.nu_lower == best_nu]
    if len(nu_winners) > 1:
        dims = ", ".join(str(mr.result.n) for mr in nu_winners)
        raise TieDetected(f"overall minimum is shared by dimensions {dims}")
    winner = nu_winners[0]

    best_vol = min(_volume_value(mr.result) for mr in per_n)
    vol_winners = [mr for mr in per_n if _volume_value(mr.result) == best_vol]
    if len(vol_winners) > 1:
        dims = ", ".join(str(mr.result.n) for mr in vol_winners)
        raise TieDetected(f"volume minimum is shared by dimensions {dims}")

    # smallest n1 with q(m) > 1 for every m in [n1, n_max - 1], taking
    # the winner's field and ratio lower endpoints (sound: growth is
    # only claimed where even the smallest possible ratio exceeds 1)
    field = winner.field
    n1 = n_max
    for m in range(n_max - 1, 1, -1):
        report = growth_ratio(field, m)
        q_low = report.q.lower if isinstance(report.q, Interval) else report.q
        if q_low > 1:
            n1 = m
        else:
            break

    return OverallMinimum(
        n_star=winner.result.n,
        result=winner.result,
        volume_n_star=vol_winners[0].result.n,
        growth_threshold_n1=n1,
        per_n=per_n,
    )


def _ratio(numer: ExactOrInterval, denom: ExactOrInterval) -> ExactOrInterval:
    if lattice.is_exact(numer) and lattice.is_exact(denom):
        return numer / denom
    if lattice.is_exact(numer):
        return Interval(numer / denom.upper, numer / denom.lower)
    if lattice.is_exact(denom):
        return Interval(numer.lower / denom, numer.upper / denom)
    # nu alternates exact/interval with parity, so both-interval cannot
    # arise from consecutive dimensions of one field
    raise InvalidInput("cannot form the ratio of two interval values")


def _closed_form_ratio(field: QuadField, n: int) -> float:
    """Numeric growth ratio through the functional equations.

    Rewriting nu(n+1)/nu(n) with both zeta and L values moved to the
    right of 1 by the functional equation collapses the quotient to a
    single positive-argument special value:

      even n:  2 (n+2)/(n+1) (n+1)!/(2 pi)^(n+2) zeta(n+2) T
      odd n:  1/2 (n+2)/(n+1) (n+1)!/(2 pi)^(n+2) disc^(n+3/2) L(n+2) T

    with T = h_torsion(n+1)/h_torsion(n+2).  Valid for fields with one
    ramified prime, where the epsilon factors are pinned to 2.
    """
    log_pref = math.lgamma(n + 2) - (n + 2) * math.log(_TWO_PI)
    value = (n + 2) / (n + 1) * math.exp(log_pref)
    value *= lattice.h_torsion(field, n + 1) / lattice.h_torsion(field, n + 2)
    if n % 2 == 0:
        return 2.0 * value * lvalues.zeta_numeric(n + 2).value
    value *= 0.5 * lvalues.l_numeric(field, n + 2).value
    return value * math.exp((n + 1.5) * math.log(field.disc_abs))


def growth_ratio(field: QuadField, n: int) -> GrowthReport:
    """Exact ratio nu(n+1)/nu(n), cross-checked against its closed form.

    The quotient of exact values is the ground truth.  For fields with
    a single ramified prime it must match the functional-equation form
    to within 1e-6 relative (in practice it matches to near machine
    precision); a larger deviation means an internal defect and raises.
    """
    _check_n(n)
    q = _ratio(lattice.nu(field, n + 1), lattice.nu(field, n))
    q_low = q.lower if isinstance(q, Interval) else q
    if q_low <= 0:
        raise InvalidInput(f"growth ratio at n = {n} is not positive: {q}")
    log_q_over_n = (math.log(q_low.numerator) - math.log(q_low.denominator)) / n
    closed_form = None
    rel_err = None
    if field.r == 1:
        closed_form = _closed_form_ratio(field, n)
        exact_float = float(q)
        rel_err = abs(closed_form - exact_float) / exact_float
        if rel_err > 1e-6:
            raise InvalidInput(
                f"growth ratio cross-check failed at {field}, n = {n}: "
                f"exact {exact_float!r} vs closed form {closed_form!r}"
            )
    return GrowthReport(
        field=field,
        n=n,
        q=q,
        log_q_over_n=log_q_over_n,
        closed_form=closed_form,
        closed_form_rel_err=rel_err,
    )


@lru_cache(maxsize=None)
def _hwang_base(n: int) -> float:
    p4 = math.comb(4 * n + n + 4, n)
    p2 = math.comb(2 * n + n + 2, n)
    gap = p4 - p2
    rational = Fraction(gap - (n + 1), math.factorial(n) * gap * gap)
    return float(rational) * (4 * math.pi) ** n


def hwang_bound(n: int, k: int) -> NumericValue:
    """Volume lower bound for a smooth quotient with k cusps.

    k (4 pi)^n / (n! (P(4) - P(2))) * (1 - (n+1)/(P(4) - P(2))) with
    P(l) = (nl+n+l)! / (n! (nl+l)!).  The combinatorial part is exact
    integer arithmetic; only the final power of pi is floating point,
    so the bound is exactly linear in k.  Decays to zero as n grows.
    """
    _check_n(n)
    if not isinstance(k, int) or isinstance(k, bool) or k < 1:
        raise InvalidInput(f"k must be a positive integer, got {k!r}")
    value = k * _hwang_base(n)
    return NumericValue(value, abs(value) * (n + 2) * 5e-16)


def clear_caches() -> None:
    """Reset this module's memo tables (used by tests)."""
    _hwang_base.cache_clear()
