import math

import numpy as np
import pytest
from pydantic import ValidationError

from impact_twist.dynamics import DerivedConstants, FourierSeries, PotentialSpec


class TestFourierSeries:
    """Test suite for FourierSeries."""

    def test_constant(self):
        """Test that a constant series evaluates to a0 everywhere."""
        p = FourierSeries.constant(0.7)
        assert p(0.0) == 0.7
        assert p(12.3) == 0.7
        assert p.harmonics == 0

    def test_single_harmonic(self):
        """Test a0 + cos and sin terms at quarter periods."""
        p = FourierSeries(a0=1.0, cos=(0.5,), sin=(0.25,))
        assert p(0.0) == pytest.approx(1.5)
        assert p(0.25) == pytest.approx(1.25)
        assert p(0.5) == pytest.approx(0.5)

    def test_harmonic_constructor(self):
        """Test that harmonic() puts the amplitude at the requested wavenumber."""
        p = FourierSeries.harmonic(0.3, k=2)
        assert p.cos == (0.0, 0.3)
        assert p.sin == ()
        assert FourierSeries.harmonic(0.3, phase="sin").sin == (0.3,)

    def test_periodic_with_period_one(self):
        """Test that t and t + 1 give the same value after argument reduction."""
        p = FourierSeries(cos=(0.5, 0.1), sin=(0.2,))
        assert p(0.25) == p(1.25)
        assert p(0.3) == pytest.approx(p(7.3), abs=1e-12)

    def test_array_argument(self):
        """Test vectorized evaluation."""
        p = FourierSeries(cos=(1.0,))
        t = np.array([0.0, 0.5])
        np.testing.assert_allclose(p(t), [1.0, -1.0])

    def test_derivative(self):
        """Test the exact derivative against a central difference."""
        p = FourierSeries(a0=3.0, cos=(0.5, 0.2), sin=(0.1,))
        dp = p.derivative()
        t, h = 0.37, 1e-6
        assert dp(t) == pytest.approx((p(t + h) - p(t - h)) / (2 * h), rel=1e-7)
        assert dp.a0 == 0.0

    def test_is_zero(self):
        """Test the zero detection."""
        assert FourierSeries().is_zero
        assert FourierSeries(cos=(0.0, 0.0)).is_zero
        assert not FourierSeries(sin=(1e-3,)).is_zero

    def test_non_finite_coefficients_raise(self):
        """Test that NaN and infinite coefficients are rejected."""
        with pytest.raises(ValidationError):
            FourierSeries(a0=math.nan)
        with pytest.raises(ValidationError):
            FourierSeries(cos=(math.inf,))


class TestPotentialSpec:
    """Test suite for PotentialSpec."""

    def test_coefficients_are_padded(self):
        """Test that missing trailing series are filled with zeros."""
        spec = PotentialSpec(n=2, coefficients=[FourierSeries(cos=(0.5,))])
        assert len(spec.coefficients) == 5
        assert all(p.is_zero for p in spec.coefficients[1:])

    def test_too_many_coefficients_raise(self):
        """Test that more than 2n+1 series are rejected."""
        with pytest.raises(ValidationError):
            PotentialSpec(n=1, coefficients=[FourierSeries()] * 4)

    def test_negative_degree_raises(self):
        """Test that n < 0 is rejected."""
        with pytest.raises(ValidationError):
            PotentialSpec(n=-1)

    def test_unperturbed(self):
        """Test the unperturbed constructor."""
        spec = PotentialSpec.unperturbed(3)
        assert spec.is_unperturbed
        assert len(spec.coefficients) == 7
        assert spec.K == 0

    def test_harmonic_cutoff(self, cubic_n1):
        """Test that K is the largest number of harmonics of any coefficient."""
        spec = PotentialSpec(n=1, coefficients=[FourierSeries(cos=(1.0,), sin=(0.0, 0.0, 2.0))])
        assert spec.K == 3
        assert cubic_n1.K == 1

    def test_values_shapes(self, cubic_n1):
        """Test that values() stacks p_0 ... p_2n along the first axis."""
        assert cubic_n1.values(0.0).shape == (3,)
        assert cubic_n1.values(np.linspace(0.0, 1.0, 5)).shape == (3, 5)

    def test_values_match_series(self, cubic_n1):
        """Test that the matrix evaluation agrees with each series."""
        t = 0.37
        expected = [p(t) for p in cubic_n1.coefficients]
        np.testing.assert_allclose(cubic_n1.values(t), expected, atol=1e-15)

    def test_derivative_values_match_series(self, cubic_n1):
        """Test that derivative_values() agrees with the series derivatives."""
        t = np.array([0.1, 0.6])
        expected = np.array([p.derivative()(t) for p in cubic_n1.coefficients])
        np.testing.assert_allclose(cubic_n1.derivative_values(t), expected, atol=1e-12)

    def test_unperturbed_values_are_zero(self, unperturbed_n1):
        """Test that a potential without coefficients evaluates to zeros."""
        np.testing.assert_array_equal(unperturbed_n1.values(0.3), np.zeros(3))

    def test_spec_is_frozen(self, forced_n1):
        """Test that specs are immutable."""
        with pytest.raises(ValidationError):
            forced_n1.n = 2

    def test_from_json(self):
        """Test construction from the configuration representation."""
        spec = PotentialSpec.model_validate({"n": 1, "coefficients": [{"cos": [0.5]}]})
        assert spec.coefficients[0].cos == (0.5,)
        assert spec.coefficients[2].is_zero


class TestDerivedConstants:
    """Test suite for DerivedConstants."""

    def test_from_period(self):
        """Test the exponents and normalization constants for n = 1."""
        consts = DerivedConstants.from_period(1, 8.0)
        assert consts.alpha == pytest.approx(1.0 / 3.0)
        assert consts.beta == pytest.approx(2.0 / 3.0)
        assert consts.a == pytest.approx(3.0 / 8.0)
        assert consts.d == pytest.approx((2 * consts.a) ** (4.0 / 3.0) / 4.0)
        assert consts.inverse_exponent == pytest.approx(0.75)

    def test_from_table(self, table_n1, consts_n1):
        """Test that the table period is used."""
        assert consts_n1.T0 == table_n1.T0
        assert consts_n1.n == 1

    def test_harmonic_case(self):
        """Test n = 0: a = 1/pi for T0 = 2 pi."""
        consts = DerivedConstants.from_period(0, 2.0 * math.pi)
        assert consts.a == pytest.approx(1.0 / math.pi)
        assert consts.beta == pytest.approx(0.5)

    def test_unperturbed_rho_inverts_leading_term(self, consts_n2):
        """Test that d rho0^(2 beta) = I."""
        energy = 1234.5
        rho = consts_n2.unperturbed_rho(energy)
        assert consts_n2.d * rho ** (2 * consts_n2.beta) == pytest.approx(energy, rel=1e-13)

    def test_inconsistent_constants_raise(self):
        """Test that the model validator checks alpha + beta = 1 and the formula for d."""
        good = DerivedConstants.from_period(1, 8.0).model_dump()
        with pytest.raises(ValidationError):
            DerivedConstants(**{**good, "beta": 0.5})
        with pytest.raises(ValidationError):
            DerivedConstants(**{**good, "d": 2 * good["d"]})
