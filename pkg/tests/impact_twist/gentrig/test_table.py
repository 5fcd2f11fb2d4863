import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from pydantic import ValidationError
from scipy.integrate import solve_ivp
from scipy.special import beta

from impact_twist.exceptions import DomainError, QuadratureError
from impact_twist.gentrig import (
    beta_period,
    build_table,
    compute_period,
    eval_cs,
    event_period,
    quadrature_period,
)
from impact_twist.gentrig import table as table_module

times = st.floats(min_value=-50.0, max_value=50.0, allow_nan=False, allow_infinity=False)


class TestPeriod:
    """Test suite for the period T0 of (C, S)."""

    def test_harmonic_period_is_two_pi(self):
        """Test that n = 0 gives the period of cos."""
        assert quadrature_period(0) == pytest.approx(2.0 * math.pi, abs=1e-12)

    def test_quartic_period_matches_beta_function(self):
        """Test n = 1 against 4 sqrt(2) int_0^1 (1 - u^4)^(-1/2) du = sqrt(2) B(1/4, 1/2)."""
        expected = math.sqrt(2.0) * beta(0.25, 0.5)
        assert quadrature_period(1) == pytest.approx(expected, abs=1e-12)

    @pytest.mark.parametrize("n", [0, 1, 2, 3, 5])
    def test_quadrature_agrees_with_closed_form(self, n):
        """Test that the regularized quadrature matches the Beta-function closed form."""
        assert quadrature_period(n) == pytest.approx(beta_period(n), abs=1e-11)

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_event_detection_agrees_with_quadrature(self, n):
        """Test that the integrated first return happens at the quadrature period."""
        t_quad = quadrature_period(n)
        assert event_period(n, t_quad) == pytest.approx(t_quad, abs=1e-10)

    def test_period_increases_with_degree(self):
        """Test that the unit-amplitude period grows with n."""
        periods = [compute_period(n) for n in range(4)]
        assert all(a < b for a, b in zip(periods, periods[1:]))

    def test_negative_degree_raises(self):
        """Test that n < 0 is rejected."""
        with pytest.raises(DomainError):
            compute_period(-1)

    def test_non_integer_degree_raises(self):
        """Test that a fractional n is rejected."""
        with pytest.raises(DomainError):
            quadrature_period(1.5)

    @pytest.mark.parametrize("tol", [0.0, 1e-3, 1e-16])
    def test_tolerance_out_of_range_raises(self, tol):
        """Test that tolerances outside (1e-14, 1e-6) are rejected."""
        with pytest.raises(DomainError):
            compute_period(1, tol)

    def test_scipy_rejection_is_wrapped(self, monkeypatch):
        """Test that a ValueError from the quadrature routine surfaces as QuadratureError."""

        def rejecting_quad(*args, **kwargs):
            raise ValueError("bad tolerances")

        monkeypatch.setattr(table_module, "quad", rejecting_quad)
        with pytest.raises(QuadratureError, match="bad tolerances"):
            quadrature_period(1)


class TestBuildTable:
    """Test suite for build_table."""

    def test_node_defect_below_tolerance(self, table_n1):
        """Test that the stored nodes satisfy the conservation law to 1e-10."""
        assert table_n1.node_defect() < 1e-10

    def test_cosine_nodes_strictly_decreasing(self, table_n1, table_n2):
        """Test that C decreases from 1 to 0 over the quarter period."""
        for table in (table_n1, table_n2):
            assert table.c_nodes[0] == 1.0
            assert table.c_nodes[-1] == 0.0
            assert np.all(np.diff(table.c_nodes) < 0)

    def test_node_count_and_order(self, table_n1):
        """Test the default layout of the table."""
        assert table_n1.nodes == 1024
        assert len(table_n1.t_nodes) == 1025
        assert table_n1.order == 5
        assert table_n1.quarter == pytest.approx(table_n1.T0 / 4.0)

    def test_too_few_nodes_raises(self):
        """Test that M < 256 is rejected."""
        with pytest.raises(DomainError):
            build_table(1, M=128)

    def test_table_is_immutable(self, table_n1):
        """Test that neither the fields nor the node arrays can be modified."""
        with pytest.raises(ValidationError):
            table_n1.T0 = 1.0
        with pytest.raises(ValueError):
            table_n1.c_nodes[0] = 2.0

    def test_to_rows(self, table_n1):
        """Test the (t, C, S, defect) rows of the stored nodes."""
        rows = table_n1.to_rows()
        assert len(rows) == table_n1.nodes + 1
        assert rows[0] == (0.0, 1.0, 0.0, 0.0)
        assert all(abs(row[3]) < 1e-10 for row in rows)

    def test_harmonic_table_reproduces_cos_and_sin(self, table_n0):
        """Test that n = 0 gives (C, S) = (cos, -sin)."""
        t = np.linspace(-10.0, 10.0, 1001)
        c, s = eval_cs(table_n0, t)
        np.testing.assert_allclose(c, np.cos(t), atol=1e-10)
        np.testing.assert_allclose(s, -np.sin(t), atol=1e-10)

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_dense_grid_defect(self, n):
        """Test the conservation defect between nodes and the zero of C at T0/4."""
        table = build_table(n)
        t = np.linspace(0.0, table.T0, 4001)
        c, s = eval_cs(table, t)
        assert np.max(np.abs(table.defect(c, s))) < 1e-9
        c_quarter, _ = eval_cs(table, 0.25 * table.T0)
        assert abs(c_quarter) < 1e-9


class TestEvalCs:
    """Test suite for eval_cs."""

    def test_initial_value(self, table_n1):
        """Test (C(0), S(0)) = (1, 0)."""
        c, s = eval_cs(table_n1, 0.0)
        assert c == pytest.approx(1.0, abs=1e-15)
        assert s == pytest.approx(0.0, abs=1e-15)

    @pytest.mark.parametrize("fixture", ["table_n1", "table_n2"])
    def test_quarter_period(self, fixture, request):
        """Test (C, S)(T0/4) = (0, -1/sqrt(n+1))."""
        table = request.getfixturevalue(fixture)
        c, s = eval_cs(table, table.quarter)
        assert c == pytest.approx(0.0, abs=1e-12)
        assert s == pytest.approx(-1.0 / math.sqrt(table.n + 1), abs=1e-12)

    def test_full_period(self, table_n1):
        """Test that one period returns to (1, 0)."""
        c, s = eval_cs(table_n1, table_n1.T0)
        assert c == pytest.approx(1.0, abs=1e-10)
        assert s == pytest.approx(0.0, abs=1e-10)

    def test_scalar_and_array_inputs(self, table_n1):
        """Test that scalars give floats and arrays give arrays of the same shape."""
        c, s = eval_cs(table_n1, 0.3)
        assert isinstance(c, float) and isinstance(s, float)
        c_arr, s_arr = eval_cs(table_n1, np.array([[0.3, 0.4]]))
        assert c_arr.shape == (1, 2) and s_arr.shape == (1, 2)
        assert c_arr[0, 0] == pytest.approx(c, abs=1e-15)

    def test_call_delegates_to_eval_cs(self, table_n1):
        """Test that the table is callable."""
        assert table_n1(1.234) == eval_cs(table_n1, 1.234)

    def test_matches_direct_integration(self, table_n2):
        """Test the interpolant between nodes against a tight ODE solution."""
        t = np.linspace(0.0, table_n2.T0, 37)
        sol = solve_ivp(
            lambda _, y: [y[1], -(y[0] ** 5)],
            (0.0, table_n2.T0),
            [1.0, 0.0],
            method="DOP853",
            rtol=1e-13,
            atol=1e-15,
            t_eval=t,
        )
        c, s = eval_cs(table_n2, t)
        np.testing.assert_allclose(c, sol.y[0], atol=1e-9)
        np.testing.assert_allclose(s, sol.y[1], atol=1e-9)

    def test_derivatives_follow_the_ode(self, table_n1):
        """Test that derivatives() returns (S, -C^3) and matches a central difference."""
        t, h = 0.7, 1e-5
        d_c, d_s = table_n1.derivatives(t)
        c, s = eval_cs(table_n1, t)
        assert d_c == s
        assert d_s == pytest.approx(-(c**3))
        c_plus, _ = eval_cs(table_n1, t + h)
        c_minus, _ = eval_cs(table_n1, t - h)
        assert (c_plus - c_minus) / (2 * h) == pytest.approx(d_c, abs=1e-8)

    @settings(max_examples=200, deadline=None)
    @given(t=times)
    def test_conservation_defect(self, table_n1, t):
        """Test (n+1) S^2 + C^(2n+2) = 1 everywhere."""
        c, s = eval_cs(table_n1, t)
        assert abs(table_n1.defect(c, s)) < 1e-9

    @settings(max_examples=200, deadline=None)
    @given(t=times)
    def test_parity(self, table_n1, t):
        """Test C(-t) = C(t) and S(-t) = -S(t)."""
        c, s = eval_cs(table_n1, t)
        c_neg, s_neg = eval_cs(table_n1, -t)
        assert c_neg == pytest.approx(c, abs=1e-10)
        assert s_neg == pytest.approx(-s, abs=1e-10)

    @settings(max_examples=200, deadline=None)
    @given(t=times)
    def test_half_period_antisymmetry(self, table_n2, t):
        """Test C(t + T0/2) = -C(t) and S(t + T0/2) = -S(t)."""
        c, s = eval_cs(table_n2, t)
        c_half, s_half = eval_cs(table_n2, t + 0.5 * table_n2.T0)
        assert c_half == pytest.approx(-c, abs=1e-10)
        assert s_half == pytest.approx(-s, abs=1e-10)

    @settings(max_examples=100, deadline=None)
    @given(t=st.floats(min_value=0.0, max_value=1.0))
    def test_periodicity(self, table_n1, t):
        """Test that shifting by T0 leaves (C, S) unchanged."""
        c, s = eval_cs(table_n1, t)
        c_shift, s_shift = eval_cs(table_n1, t + table_n1.T0)
        assert c_shift == pytest.approx(c, abs=1e-10)
        assert s_shift == pytest.approx(s, abs=1e-10)

    def test_finite_difference_derivatives_on_grid(self, table_n2):
        """Test dC/dt = S and dS/dt = -C^(2n+1) by central differences with step 1e-5 T0."""
        t = np.linspace(0.0, table_n2.T0, 101)
        h = 1e-5 * table_n2.T0
        c, s = eval_cs(table_n2, t)
        c_plus, s_plus = eval_cs(table_n2, t + h)
        c_minus, s_minus = eval_cs(table_n2, t - h)
        np.testing.assert_allclose((c_plus - c_minus) / (2 * h), s, atol=1e-6)
        np.testing.assert_allclose((s_plus - s_minus) / (2 * h), -(c**5), atol=1e-6)

    def test_zero_structure(self, table_n1):
        """Test that C vanishes only at T0/4, 3T0/4 and S only at 0, T0/2 on [0, T0)."""
        t = (np.arange(4000) + 0.5) * table_n1.T0 / 4000
        c, s = eval_cs(table_n1, t)
        c_changes = t[1:][np.diff(np.sign(c)) != 0]
        s_changes = t[1:][np.diff(np.sign(s)) != 0]
        period = table_n1.T0
        np.testing.assert_allclose(c_changes, [0.25 * period, 0.75 * period], atol=2e-3)
        np.testing.assert_allclose(s_changes, [0.5 * period], atol=2e-3)
        assert np.all(s[t < 0.5 * period] < 0)
