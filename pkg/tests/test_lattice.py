"""Covolumes of the minimal arithmetic lattices: exact values, signs,
volumes, indices, multiplicities, and the exact-vs-adelic cross check.
"""

import math
from fractions import Fraction

import pytest

from covolume import lattice, lvalues, quadfield
from covolume.errors import InvalidDimension, UnknownMultiplicity
from covolume.lattice import Interval, is_exact

from . import oracles


def _field_for(key: int):
    return quadfield.from_squarefree_d(key)


class TestNu:
    def test_headline_values(self):
        for (d, n), expected in oracles.NU_VALUES.items():
            assert lattice.nu(_field_for(d), n) == expected, (d, n)

    def test_even_formula_structure(self, f3, f23):
        # nu * 2^n h_t / (n+1) must equal the plain product of L-values
        for field in (f3, f23):
            for n in (2, 4, 6, 8):
                h_t = lattice.h_torsion(field, n + 1)
                product = Fraction(1)
                for j in range(1, n // 2 + 1):
                    product *= lvalues.zeta_negative(2 * j)
                    product *= lvalues.l_negative(field, 2 * j + 1)
                lhs = lattice.nu(field, n) * 2**n * h_t / (n + 1)
                assert lhs == product, (field.d, n)

    def test_odd_formula_structure(self, f3):
        # n = 3: nu = (-1)^2 * 4 * 2 / (2^3 h_t) * zeta(-3) * zeta(-1) L(-2)
        expected = (
            Fraction(4 * 2, 8)
            * lvalues.zeta_negative(4)
            * lvalues.zeta_negative(2)
            * lvalues.l_negative(f3, 3)
        )
        assert lattice.nu(f3, 3) == expected == Fraction(1, 6480)

    def test_interval_for_multiple_ramified_primes(self, f5):
        value = lattice.nu(f5, 3)
        assert isinstance(value, Interval)
        assert value == Interval(Fraction(1, 96), Fraction(1, 48))
        assert value.upper / value.lower == 2 ** (f5.r - 1)

    def test_interval_ratio_tracks_r(self):
        for d in (5, 6, 30, 42):  # r = 2, 2, 3, 3
            field = _field_for(d)
            value = lattice.nu(field, 5)
            assert isinstance(value, Interval)
            assert value.upper / value.lower == 2 ** (field.r - 1), d

    def test_exact_iff_even_or_single_ramified_prime(self, fields_100):
        for field in fields_100:
            for n in range(2, 9):
                value = lattice.nu(field, n)
                assert is_exact(value) == (n % 2 == 0 or field.r == 1)

    def test_dispatch_matches_parity_specific_forms(self, f3):
        assert lattice.nu(f3, 4) == lattice.nu_even(f3, 4)
        assert lattice.nu(f3, 5) == lattice.nu_odd(f3, 5)

    def test_parity_specific_forms_reject_wrong_parity(self, f3):
        with pytest.raises(InvalidDimension):
            lattice.nu_even(f3, 3)
        with pytest.raises(InvalidDimension):
            lattice.nu_odd(f3, 2)

    @pytest.mark.parametrize("n", [1, 0, -2, 2.5, "3", True])
    def test_rejects_bad_dimension(self, n, f3):
        with pytest.raises(InvalidDimension):
            lattice.nu(f3, n)


class TestEulerCharacteristic:
    def test_sign_convention(self, f3):
        assert lattice.euler_characteristic(f3, 2) == Fraction(1, 72)
        assert lattice.euler_characteristic(f3, 9) == Fraction(
            -809, 5746705367040
        )

    def test_interval_negation(self, f5):
        chi = lattice.euler_characteristic(f5, 3)
        assert chi == Interval(Fraction(-1, 48), Fraction(-1, 96))
        assert chi.lower <= chi.upper

    def test_sign_grid(self, fields_100):
        for field in fields_100[:10]:
            for n in range(2, 13):
                chi = lattice.euler_characteristic(field, n)
                lo, up = lattice._lower(chi), lattice._upper(chi)
                if n % 2 == 0:
                    assert lo > 0
                else:
                    assert up < 0


class TestPositivityAndMonotonicity:
    def test_nu_positive_everywhere(self, fields_200):
        for field in fields_200:
            for n in range(2, 41):
                value = lattice.nu(field, n)
                assert lattice._lower(value) > 0, (field.d, n)

    def test_first_field_is_strictly_smallest(self, fields_200):
        for n in range(2, 31):
            best = lattice.nu(quadfield.from_squarefree_d(3), n)
            best_upper = lattice._upper(best)
            for field in fields_200:
                if field.d == 3:
                    continue
                value = lattice.nu(field, n)
                assert best_upper < lattice._lower(value), (field.d, n)


class TestVolume:
    def test_headline_volume(self, f3):
        vol = lattice.hyperbolic_volume(f3, 9)
        truth = float(oracles.VOLUME_9_OVER_PI9) * math.pi**9
        assert abs(vol.value - truth) <= 1e-10 * truth
        assert abs(vol.value - truth) <= vol.abs_error_bound
        assert vol.rel_error_bound <= 1e-12

    def test_small_even_volumes(self, f3, f1):
        assert abs(
            lattice.hyperbolic_volume(f3, 2).value - math.pi**2 / 27
        ) <= 1e-14
        assert abs(
            lattice.hyperbolic_volume(f1, 2).value - math.pi**2 / 12
        ) <= 1e-14

    def test_gauss_bonnet_scaling(self, fields_100):
        # volume / nu must be the universal factor (4 pi)^n / (n+1)!
        for field in fields_100[:6]:
            for n in range(2, 11):
                value = lattice.nu(field, n)
                vol = lattice.hyperbolic_volume(field, n)
                factor = (4 * math.pi) ** n / math.factorial(n + 1)
                if is_exact(value):
                    assert abs(vol.value - float(value) * factor) <= (
                        1e-12 * vol.value
                    )
                else:
                    lo, up = vol
                    assert abs(lo.value - float(value.lower) * factor) <= (
                        1e-12 * lo.value
                    )
                    assert abs(up.value - float(value.upper) * factor) <= (
                        1e-12 * up.value
                    )

    def test_interval_volume_ordering(self, f5):
        lo, up = lattice.hyperbolic_volume(f5, 3)
        assert 0 < lo.value < up.value

    def test_saturates_to_inf_past_float_range(self):
        vol = lattice.hyperbolic_volume(_field_for(6), 30)
        assert vol.value == math.inf
        assert vol.abs_error_bound == math.inf

    def test_large_dimension_stays_finite_for_small_disc(self, f3):
        vol = lattice.hyperbolic_volume(f3, 30)
        assert math.isfinite(vol.value)
        assert vol.value > 1e100


class TestIndexAndEpsilon:
    def test_index_values(self, f3, f1, f23):
        assert lattice.index_gamma_lambda(f3, 2) == 3
        assert lattice.index_gamma_lambda(f1, 2) == 3
        assert lattice.index_gamma_lambda(f3, 9) == 5
        assert lattice.index_gamma_lambda(f23, 2) == 9

    def test_index_interval(self, f5):
        idx = lattice.index_gamma_lambda(f5, 3)
        assert idx == Interval(Fraction(2), Fraction(4))

    def test_epsilon_kinds(self, f3, f5):
        even = lattice.epsilon_status(f3, 2)
        assert even.kind == "irrelevant" and even.exact
        odd_exact = lattice.epsilon_status(f3, 3)
        assert odd_exact.kind == "exact"
        assert (odd_exact.lower, odd_exact.upper) == (2, 2)
        odd_bounded = lattice.epsilon_status(f5, 3)
        assert odd_bounded.kind == "bounded"
        assert (odd_bounded.lower, odd_bounded.upper) == (2, 4)
        assert not odd_bounded.exact

    def test_epsilon_exact_iff_r_one_or_even_n(self, fields_100):
        for field in fields_100:
            for n in range(2, 9):
                status = lattice.epsilon_status(field, n)
                assert status.exact == (field.r == 1 or n % 2 == 0)


class TestMultiplicity:
    def test_even_dimensions_smallest_field(self, f3):
        for n in range(2, 41, 2):
            assert lattice.multiplicity_bounds(f3, n) == (2, 2)

    def test_odd_dimensions_smallest_field(self, f3):
        for n in range(3, 41, 2):
            expected = (1, 2) if (n + 1) % 8 == 0 else (1, 1)
            assert lattice.multiplicity_bounds(f3, n) == expected, n

    def test_even_with_class_number_three(self, f23):
        assert lattice.multiplicity_bounds(f23, 2) == (2, 6)

    def test_unknown_for_odd_with_many_ramified_primes(self, f5):
        with pytest.raises(UnknownMultiplicity):
            lattice.multiplicity_bounds(f5, 3)

    def test_bounds_ordered_and_even_lower_is_power_of_two(self, fields_100):
        for field in fields_100:
            for n in range(2, 13):
                try:
                    lo, up = lattice.multiplicity_bounds(field, n)
                except UnknownMultiplicity:
                    assert n % 2 == 1 and field.r > 1
                    continue
                assert 1 <= lo <= up
                if n % 2 == 0:
                    assert lo == 2**field.r


class TestAdelicCrossPath:
    def test_headline_normalizations(self, f3, f1):
        for field, n, expected in [
            (f3, 2, Fraction(1, 72)),
            (f1, 2, Fraction(1, 32)),
            (f3, 3, Fraction(1, 6480)),
            (f3, 9, Fraction(809, 5746705367040)),
        ]:
            got = lattice.ep_normalization(field, n)
            assert abs(got.value - float(expected)) <= 1e-9 * float(expected)

    def test_principal_covolume_bounds(self, fields_100):
        for field in fields_100:
            if field.r != 1 or field.disc_abs > 50:
                continue
            for n in range(2, 16):
                mu = lattice.prasad_principal_covolume_numeric(field, n)
                assert mu.value > 0
                assert mu.rel_error_bound <= 1e-9, (field.d, n)

    def test_interval_index_gives_bracketing_pair(self, f5):
        exact = lattice.nu(f5, 3)
        lo, up = lattice.ep_normalization(f5, 3)
        assert abs(lo.value - float(exact.lower)) <= 1e-9 * lo.value
        assert abs(up.value - float(exact.upper)) <= 1e-9 * up.value

    def test_cross_path_subset(self):
        fields = tuple(_field_for(d) for d in (3, 1, 7))
        rows = lattice.cross_path_check(fields, tuple(range(2, 13)))
        assert len(rows) == 33
        assert all(row.ok for row in rows)
        assert max(row.rel_diff for row in rows) <= 1e-9

    def test_cross_path_rejects_multi_ramified_field(self, f5):
        with pytest.raises(InvalidDimension):
            lattice.cross_path_check((f5,), (2,))


class TestCovolumeResult:
    def test_exact_record(self, f3):
        result = lattice.covolume_result(f3, 9)
        assert result.nu == Fraction(809, 5746705367040)
        assert result.chi == -result.nu
        assert result.h == 1
        assert result.h_torsion == 1
        assert result.epsilon.kind == "exact"
        assert result.index_gamma_lambda == 5
        assert result.multiplicity == (1, 1)
        assert result.exact
        assert result.nu_lower == result.nu_upper == result.nu

    def test_interval_record(self, f5):
        result = lattice.covolume_result(f5, 3)
        assert not result.exact
        assert result.nu_lower == Fraction(1, 96)
        assert result.nu_upper == Fraction(1, 48)
        assert result.multiplicity is None
        assert isinstance(result.volume, tuple)

    def test_volume_matches_direct_call(self, f23):
        result = lattice.covolume_result(f23, 4)
        direct = lattice.hyperbolic_volume(f23, 4)
        assert result.volume == direct
