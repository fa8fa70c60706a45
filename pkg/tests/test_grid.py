"""
Unit tests for the circle grid: sampling, quadrature, derivatives, interpolation.
"""

import pytest
import numpy as np
from circle.grid import (
    CircleFunction,
    InvalidCircleFunctionError,
    differentiate,
    dirichlet_energy,
    grid_nodes,
    integrate,
    interp_eval,
    normalize_constraint,
    reparameterize,
)
from functionals.sobolev import constraint_integral


class TestGridNodes:
    """Test node placement."""

    def test_nodes_are_symmetric_about_zero(self):
        """
        θ = 0 sits at index n/2, θ = −π at index 0, and the grid is
        symmetric exactly (not just to rounding).
        """
        n = 16
        nodes = grid_nodes(n)

        assert nodes[n // 2] == 0.0
        assert np.isclose(nodes[0], -np.pi)
        for i in range(1, n // 2):
            assert nodes[n // 2 + i] == -nodes[n // 2 - i]

    def test_odd_grid_rejected(self):
        """Odd sizes cannot host the symmetric node layout."""
        with pytest.raises(InvalidCircleFunctionError, match="even"):
            grid_nodes(9)

    def test_tiny_grid_rejected(self):
        with pytest.raises(InvalidCircleFunctionError, match=">= 8"):
            CircleFunction(np.ones(6))


class TestCircleFunction:
    """Test construction invariants."""

    def test_v_form_requires_positive_samples(self):
        values = np.ones(16)
        values[3] = 0.0

        with pytest.raises(InvalidCircleFunctionError, match="positive"):
            CircleFunction(values, role='v')

    def test_generic_accepts_any_sign(self):
        u = CircleFunction(np.linspace(-1, 1, 16))
        assert u.role == 'generic'

    def test_non_finite_rejected(self):
        values = np.ones(16)
        values[0] = np.nan

        with pytest.raises(InvalidCircleFunctionError, match="finite"):
            CircleFunction(values)

    def test_unknown_role_rejected(self):
        with pytest.raises(ValueError, match="Unknown role"):
            CircleFunction(np.ones(16), role='g')

    def test_values_are_read_only(self):
        """Samples are shared between derived functions, so they must not mutate."""
        u = CircleFunction(np.ones(16))

        with pytest.raises(ValueError):
            u.values[0] = 2.0

    def test_with_values_inherits_role_and_smooth_flag(self):
        u = CircleFunction(np.ones(16), role='v', smooth=False)
        w = u.with_values(2.0 * np.ones(16))

        assert w.role == 'v'
        assert w.smooth is False


class TestQuadrature:
    """Test the periodic rectangle rule."""

    def test_constant_integrates_to_two_pi(self):
        assert np.isclose(integrate(CircleFunction(np.ones(64))), 2 * np.pi, rtol=1e-15)

    def test_trigonometric_modes_integrate_to_zero(self):
        for k in (1, 3, 7):
            u = CircleFunction.from_callable(lambda t: np.cos(k * t), 64)
            assert abs(integrate(u)) < 1e-12


class TestDerivatives:
    """Test spectral and central differentiation."""

    def test_spectral_first_derivative_exact_for_band_limited(self):
        u = CircleFunction.from_callable(lambda t: np.sin(2 * t), 64)
        du = differentiate(u, 'spectral')

        np.testing.assert_allclose(du.values, 2 * np.cos(2 * u.nodes), atol=1e-12)

    def test_spectral_second_derivative(self):
        u = CircleFunction.from_callable(lambda t: np.sin(2 * t), 64)
        d2u = differentiate(u, 'spectral', order=2)

        np.testing.assert_allclose(d2u.values, -4 * np.sin(2 * u.nodes), atol=1e-11)

    def test_central_derivative_second_order(self):
        """Central differences are O(h²): about 6e-6 at n = 1024."""
        u = CircleFunction.from_callable(np.sin, 1024)
        du = differentiate(u, 'central')

        np.testing.assert_allclose(du.values, np.cos(u.nodes), atol=1e-4)

    def test_derivative_is_generic(self):
        u = CircleFunction(np.ones(16), role='v')
        assert differentiate(u).role == 'generic'

    def test_unknown_scheme_rejected(self):
        with pytest.raises(ValueError, match="Unknown scheme"):
            differentiate(CircleFunction(np.ones(16)), 'upwind')

    def test_third_order_rejected(self):
        with pytest.raises(ValueError, match="order must be 1 or 2"):
            differentiate(CircleFunction(np.ones(16)), order=3)


class TestDirichletEnergy:
    """Test ∫(u′)² dθ in both schemes."""

    def test_spectral_energy_of_sine(self):
        u = CircleFunction.from_callable(np.sin, 64)
        assert np.isclose(dirichlet_energy(u, 'spectral'), np.pi, rtol=1e-12)

    def test_central_energy_underestimates_slightly(self):
        """
        Forward differences give π·(2 sin(h/2)/h)² for sin θ, just below π.
        """
        u = CircleFunction.from_callable(np.sin, 1024)
        energy = dirichlet_energy(u, 'central')

        assert energy < np.pi
        assert np.isclose(energy, np.pi, rtol=1e-5)


class TestInterpolation:
    """Test evaluation between nodes."""

    def test_fourier_interpolation_exact_for_trig_polynomial(self):
        u = CircleFunction.from_callable(lambda t: np.cos(t) + 0.5 * np.sin(3 * t), 32)
        theta = np.array([0.3, -2.1, 3.0])

        expected = np.cos(theta) + 0.5 * np.sin(3 * theta)
        np.testing.assert_allclose(interp_eval(u, theta), expected, atol=1e-12)

    def test_node_returns_stored_sample(self):
        """Angles on a node snap to the sample, bit for bit."""
        u = CircleFunction.from_callable(lambda t: np.exp(np.cos(t)), 64)

        assert interp_eval(u, u.nodes[5]) == u.values[5]
        assert interp_eval(u, u.nodes[5] + 2 * np.pi) == u.values[5]

    def test_cubic_used_for_non_smooth(self):
        u = CircleFunction.from_callable(np.cos, 256, smooth=False)
        assert np.isclose(interp_eval(u, 0.3), np.cos(0.3), atol=1e-6)

    def test_scalar_and_array_shapes(self):
        u = CircleFunction.from_callable(np.cos, 32)

        assert isinstance(interp_eval(u, 0.1), float)
        assert interp_eval(u, np.zeros((2, 3)) + 0.1).shape == (2, 3)

    def test_unknown_method_rejected(self):
        with pytest.raises(ValueError, match="interpolation method"):
            interp_eval(CircleFunction(np.ones(16)), 0.1, method='linear')


class TestReparameterize:
    """Test v/f/h conversions."""

    def test_v_to_f_to_h_and_back(self):
        v = CircleFunction.from_callable(lambda t: 1 + 0.3 * np.cos(t), 64, role='v')

        f = reparameterize(v, 'f')
        h = reparameterize(f, 'h')
        back = reparameterize(h, 'v')

        np.testing.assert_allclose(f.values, v.values ** -2)
        np.testing.assert_allclose(h.values, np.log(f.values))
        np.testing.assert_allclose(back.values, v.values, rtol=1e-14)

    def test_same_role_returns_input(self):
        v = CircleFunction(np.ones(16), role='v')
        assert reparameterize(v, 'v') is v

    def test_generic_cannot_be_reparameterized(self):
        with pytest.raises(ValueError, match="Cannot reparameterize"):
            reparameterize(CircleFunction(np.ones(16)), 'v')


class TestNormalizeConstraint:
    """Test rescaling onto ∫v⁻² = target."""

    def test_normalized_constraint_is_two_pi(self):
        v = CircleFunction.from_callable(lambda t: 2 + np.sin(t), 128, role='v')
        normalized = normalize_constraint(v)

        assert np.isclose(constraint_integral(normalized), 2 * np.pi, rtol=1e-13)

    def test_custom_target(self):
        v = CircleFunction(np.full(16, 3.0), role='v')
        normalized = normalize_constraint(v, target=1.0)

        assert np.isclose(constraint_integral(normalized), 1.0, rtol=1e-13)

    def test_non_positive_rejected(self):
        u = CircleFunction(np.linspace(-1, 1, 16))

        with pytest.raises(InvalidCircleFunctionError, match="positive"):
            normalize_constraint(u)
