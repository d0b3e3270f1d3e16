"""Survey layer: scans, per-dimension minima, the global minimum,
growth certificates, and the cusped-volume lower bound.
"""

import dataclasses
import math
from fractions import Fraction

import pytest

from covolume import lattice, quadfield, survey
from covolume.errors import InvalidDimension, InvalidInput, TieDetected
from covolume.lattice import Interval

from . import oracles


class TestDiscriminantBound:
    @pytest.mark.parametrize("n", [2, 3, 4, 10, 25, 60])
    def test_matches_direct_formula(self, n):
        if n % 2 == 0:
            s = n * (n + 3) / 4
            t = 1
        else:
            s = (n - 1) * (n + 2) / 4
            t = 0
        expected = 3.0 * (2 * math.pi**5 / 3**5.5) ** (
            (n - t) / (2 * (s - 1))
        )
        got = survey.discriminant_bound(n)
        assert abs(got.value - expected) <= 1e-12 * expected
        assert abs(got.value - expected) <= got.abs_error_bound

    def test_known_value_at_two(self):
        assert abs(survey.discriminant_bound(2).value - 3.3987984180798) <= 1e-10

    def test_decays_toward_three(self):
        assert survey.discriminant_bound(3).value > 4
        for n in range(4, 61):
            value = survey.discriminant_bound(n).value
            assert 3 < value < 4, n
        assert survey.discriminant_bound(400).value < 3.01

    def test_rejects_bad_dimension(self):
        with pytest.raises(InvalidDimension):
            survey.discriminant_bound(1)


class TestBrauerSiegelBound:
    @pytest.mark.parametrize("m", [2, 3])
    def test_dominates_class_number(self, m, fields_500):
        for field in fields_500:
            h = quadfield.reduced_forms(field).h
            bound = survey.brauer_siegel_h_bound(field, m)
            assert bound.value > 0
            assert h <= bound.value, (field.d, m)

    @pytest.mark.parametrize("m", [1, 0, -2, 2.5, True])
    def test_rejects_bad_degree(self, m, f3):
        with pytest.raises(InvalidInput):
            survey.brauer_siegel_h_bound(f3, m)


class TestScan:
    def test_matches_sequential_assembly(self, fields_200):
        rows = survey.scan(2, 200)
        assert len(rows) == len(fields_200)
        expected = tuple(
            survey.SurveyRow.from_result(lattice.covolume_result(f, 2))
            for f in fields_200
        )
        assert rows == expected

    def test_row_contents(self):
        first = survey.scan(2, 10)[0]
        assert (first.d, first.disc, first.n) == (3, 3, 2)
        assert first.nu == Fraction(1, 72)
        assert (first.h, first.h_torsion, first.r) == (1, 1, 1)
        assert first.epsilon.kind == "irrelevant"
        assert first.multiplicity == (2, 2)
        assert first.exact

    def test_ascending_discriminant(self):
        rows = survey.scan(3, 300)
        discs = [row.disc for row in rows]
        assert discs == sorted(discs)

    def test_even_multiplicity_lower_is_two_power(self):
        for row in survey.scan(2, 400):
            assert row.multiplicity is not None
            assert row.multiplicity[0] == 2**row.r

    def test_rejects_bad_arguments(self):
        with pytest.raises(InvalidInput):
            survey.scan(2, 2)
        with pytest.raises(InvalidDimension):
            survey.scan(1, 100)


class TestMinimalField:
    @pytest.mark.parametrize(
        "n,expected_nu",
        [
            (2, Fraction(1, 72)),
            (3, Fraction(1, 6480)),
            (9, Fraction(809, 5746705367040)),
        ],
    )
    def test_winner_and_value(self, n, expected_nu):
        best = survey.minimal_field(n)
        assert best.field.d == 3
        assert best.result.nu == expected_nu

    def test_certificate_complete_and_sound(self):
        best = survey.minimal_field(4)
        cert = best.certificate
        assert cert.limit == max(math.ceil(cert.bound), 4) + 20
        expected_fields = quadfield.fields_with_disc_at_most(cert.limit)
        assert tuple(c.field for c in cert.candidates) == expected_fields
        winner_nu = best.result.nu_lower
        for candidate in cert.candidates:
            assert winner_nu <= candidate.result.nu_lower
        assert any(c.field == best.field for c in cert.candidates)

    def test_tie_raises(self, monkeypatch):
        real = lattice.covolume_result

        def tied(field, n):
            return dataclasses.replace(real(field, n), nu=Fraction(1, 7))

        monkeypatch.setattr(lattice, "covolume_result", tied)
        with pytest.raises(TieDetected):
            survey.minimal_field(2)

    def test_inexact_winner_raises(self, monkeypatch):
        real = lattice.covolume_result

        def widened(field, n):
            result = real(field, n)
            low = Fraction(1, 1000 + field.disc_abs)
            return dataclasses.replace(result, nu=Interval(low, 2 * low))

        monkeypatch.setattr(lattice, "covolume_result", widened)
        with pytest.raises(TieDetected):
            survey.minimal_field(2)

    def test_rejects_bad_margin(self):
        with pytest.raises(InvalidInput):
            survey.minimal_field(2, safety_margin=0)


class TestOverallMinimum:
    def test_locates_dimension_nine(self):
        overall = survey.overall_minimum(16)
        assert overall.n_star == 9
        assert overall.volume_n_star == 9
        assert overall.result.field.d == 3
        assert overall.result.nu == Fraction(809, 5746705367040)
        assert overall.growth_threshold_n1 == 15
        assert len(overall.per_n) == 15
        assert [mr.result.n for mr in overall.per_n] == list(range(2, 17))

    def test_invariant_under_range_extension(self):
        assert survey.overall_minimum(12).n_star == 9
        assert survey.overall_minimum(18).n_star == 9

    def test_rejects_small_range(self):
        with pytest.raises(InvalidInput):
            survey.overall_minimum(9)


class TestGrowthRatio:
    def test_known_exact_ratios(self, f3):
        for n, expected in oracles.GROWTH_RATIOS.items():
            assert survey.growth_ratio(f3, n).q == expected, n

    def test_closed_form_tracks_exact(self, f3):
        for n in range(2, 31):
            report = survey.growth_ratio(f3, n)
            assert report.closed_form is not None
            assert report.closed_form_rel_err <= 1e-6, n

    def test_dip_before_final_rise(self, f3):
        # the ratio drops below 1 exactly once more after n = 9
        assert survey.growth_ratio(f3, 14).q < 1
        assert survey.growth_ratio(f3, 15).q > 1
        assert survey.growth_ratio(f3, 9).q > 1

    def test_log_normalization(self, f3):
        report = survey.growth_ratio(f3, 6)
        q = report.q
        assert abs(
            report.log_q_over_n - math.log(float(q)) / 6
        ) <= 1e-12 * abs(report.log_q_over_n)

    def test_interval_ratio_for_multi_ramified_field(self, f5):
        up_report = survey.growth_ratio(f5, 2)  # interval / exact
        assert up_report.q == Interval(Fraction(1, 180), Fraction(1, 90))
        assert up_report.closed_form is None
        down_report = survey.growth_ratio(f5, 3)  # exact / interval
        assert isinstance(down_report.q, Interval)
        assert down_report.q.upper / down_report.q.lower == 2

    def test_rejects_bad_dimension(self, f3):
        with pytest.raises(InvalidDimension):
            survey.growth_ratio(f3, 1)


class TestHwangBound:
    def test_combinatorics_at_two(self):
        p4 = math.comb(2 * 4 + 2 + 4, 2)
        p2 = math.comb(2 * 2 + 2 + 2, 2)
        assert (p4, p2) == (91, 28)
        expected = (4 * math.pi) ** 2 / (2 * 63) * (1 - 3 / 63)
        got = survey.hwang_bound(2, 1)
        assert abs(got.value - expected) <= 1e-13 * expected
        assert abs(got.value - 1.1936029510009805) <= 1e-12

    @pytest.mark.parametrize("n", list(range(2, 13)))
    def test_matches_direct_formula(self, n):
        p4 = math.comb(4 * n + n + 4, n)
        p2 = math.comb(2 * n + n + 2, n)
        gap = p4 - p2
        expected = (
            (4 * math.pi) ** n
            / (math.factorial(n) * gap)
            * (1 - (n + 1) / gap)
        )
        got = survey.hwang_bound(n, 1)
        assert abs(got.value - expected) <= 1e-13 * expected
        assert abs(got.value - expected) <= got.abs_error_bound

    def test_exact_linearity_in_cusps(self):
        for n in (2, 5, 11):
            one = survey.hwang_bound(n, 1).value
            for k in (2, 3, 7, 64, 1000):
                assert survey.hwang_bound(n, k).value == k * one
            assert survey.hwang_bound(n, 6).value == 2 * survey.hwang_bound(
                n, 3
            ).value

    def test_decays_monotonically(self):
        values = [survey.hwang_bound(n, 1).value for n in range(2, 41)]
        assert all(a > b for a, b in zip(values, values[1:]))
        assert values[-1] < 1e-40

    def test_rejects_bad_arguments(self):
        with pytest.raises(InvalidInput):
            survey.hwang_bound(2, 0)
        with pytest.raises(InvalidInput):
            survey.hwang_bound(2, 1.5)
        with pytest.raises(InvalidDimension):
            survey.hwang_bound(1, 1)
