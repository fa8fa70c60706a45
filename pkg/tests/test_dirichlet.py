"""
Unit tests for the constrained Dirichlet minimizers on [0, π].

Reference levels m = 1/2, M = 1 have thresholds
    π, 4.77737, 5.806898, 2π, 7.59759, 4π
"""

import pytest
import numpy as np
from closed_forms.dirichlet import (
    DirichletSpec,
    classify,
    dirichlet_energy_curve,
    dirichlet_solve,
    dirichlet_thresholds,
    energy_curve_report,
    energy_versus_min_level,
    threshold_continuity,
)


M_LEVEL = 1.0
m_LEVEL = 0.5


def _solve(c, m=m_LEVEL, M=M_LEVEL):
    return dirichlet_solve(DirichletSpec(m=m, M=M, c=c))


class TestThresholds:
    """Test the case boundaries in c."""

    def test_reference_values(self):
        t = dirichlet_thresholds(m_LEVEL, M_LEVEL)
        expected = (np.pi, 4.77737, 5.806898, 2 * np.pi, 7.59759, 4 * np.pi)

        np.testing.assert_allclose(t.as_tuple(), expected, rtol=1e-5)
        assert t.is_increasing()

    def test_collapse_as_levels_merge(self):
        """m → M⁻ squeezes every threshold onto π/M²."""
        t = dirichlet_thresholds(0.9999, 1.0)
        np.testing.assert_allclose(t.as_tuple(), np.pi, atol=1e-3)

    def test_levels_must_be_ordered(self):
        with pytest.raises(ValueError, match="0 < m < M"):
            dirichlet_thresholds(1.0, 0.5)

    def test_classification(self):
        t = dirichlet_thresholds(m_LEVEL, M_LEVEL)

        assert classify(4.0, t) == 'a'
        assert classify(5.3, t) == 'b'
        assert classify(t.c_bc, t) == 'c'
        assert classify(t.c_bc - 5e-5, t) == 'b'
        assert classify(t.c_bc + 5e-5, t) == 'd'
        assert classify(6.0, t) == 'd'
        assert classify(7.0, t) == 'd'
        assert classify(7.8, t) == 'e'


class TestDirichletSolve:
    """Test the closed-form solutions case by case."""

    @pytest.mark.parametrize("c,case", [(4.0, 'a'), (5.3, 'b'), (6.0, 'd'), (7.0, 'd'), (7.8, 'e')])
    def test_boundary_values_and_constraint(self, c, case):
        sol = _solve(c)

        assert sol.case == case
        assert np.isclose(sol.evaluate(0.0), M_LEVEL, atol=1e-9)
        assert np.isclose(sol.evaluate(np.pi), m_LEVEL, atol=1e-9)
        assert np.isclose(sol.constraint_by_quadrature(), c, atol=1e-7)

    @pytest.mark.parametrize("c", [4.0, 5.3, 6.0, 7.0, 7.8])
    def test_energy_matches_quadrature(self, c):
        sol = _solve(c)
        assert np.isclose(sol.energy_by_quadrature(), sol.energy, atol=1e-6)

    @pytest.mark.parametrize("c", [4.0, 5.3, 6.0, 7.0, 7.8])
    def test_multiplier_satisfies_euler_lagrange(self, c):
        """v″·v³ is the constant λ on the free part."""
        sol = _solve(c)
        assert np.isclose(sol.multiplier_by_finite_difference(), sol.lam, rtol=1e-4, atol=1e-6)

    @pytest.mark.parametrize("c", [4.0, 5.3, 7.0, 7.8])
    def test_energy_slope_is_multiplier(self, c):
        """dE/dc = λ."""
        dc = 1e-5
        slope = (_solve(c + dc).energy - _solve(c - dc).energy) / (2 * dc)

        assert np.isclose(slope, _solve(c).lam, rtol=1e-4)

    def test_multiplier_signs(self):
        assert _solve(4.0).lam < 0
        assert _solve(5.3).lam < 0
        assert _solve(6.0).lam < 0
        assert _solve(7.0).lam > 0
        assert _solve(7.8).lam > 0

    def test_multiplier_vanishes_at_c_lambda0(self):
        """c = π/(mM): λ = 0 and v² is a perfect square, E = 1/(4π)."""
        sol = _solve(2 * np.pi)

        assert sol.case == 'd'
        assert abs(sol.lam) < 1e-8
        assert np.isclose(sol.energy, 1 / (4 * np.pi), atol=1e-8)

    def test_case_c_is_linear_in_v_squared(self):
        c_bc = dirichlet_thresholds(m_LEVEL, M_LEVEL).c_bc
        sol = _solve(c_bc)

        assert sol.case == 'c'
        assert np.isclose(sol.energy, 0.0827383, atol=1e-7)
        theta = np.linspace(0, np.pi, 7)
        np.testing.assert_allclose(sol.evaluate(theta) ** 2, 1 - 0.75 * theta / np.pi)
        assert sol.requested_c == c_bc

    @pytest.mark.parametrize("offset,case", [(-5e-5, 'b'), (-1e-9, 'b'), (1e-9, 'd'), (5e-5, 'd')])
    def test_constraint_held_next_to_c_bc(self, offset, case):
        """Targets beside c_bc are solved at the requested c, not snapped onto the linear case."""
        c = dirichlet_thresholds(m_LEVEL, M_LEVEL).c_bc + offset
        sol = _solve(c)

        assert sol.case == case
        assert sol.requested_c == c
        assert np.isclose(sol.constraint_by_quadrature(), c, atol=1e-7)
        # E(c) ≈ E(c_bc) + λ(c_bc)·offset, λ(c_bc) = −(M² − m²)²/4π²
        energy_c = 0.75 / (4 * np.pi) * np.log(4.0)
        lam_c = -0.75 ** 2 / (4 * np.pi ** 2)
        assert np.isclose(sol.energy, energy_c + lam_c * offset, atol=1e-9)

    def test_breakpoints(self):
        assert 0 < _solve(4.0).breakpoint < np.pi
        assert 0 < _solve(7.8).breakpoint < np.pi
        assert _solve(6.0).breakpoint is None

    def test_flat_part_of_case_a(self):
        sol = _solve(4.0)
        alpha = sol.params['alpha']

        np.testing.assert_allclose(sol.evaluate(np.linspace(0, alpha, 5)), M_LEVEL)

    def test_solution_dict(self):
        d = _solve(7.0).to_dict()

        assert d['case'] == 'd'
        assert d['requested_c'] == 7.0
        assert {'t', 'k', 'mu'} <= set(d['params'])

    def test_c_outside_range_rejected(self):
        with pytest.raises(ValueError, match="outside"):
            DirichletSpec(m=m_LEVEL, M=M_LEVEL, c=np.pi)
        with pytest.raises(ValueError, match="outside"):
            DirichletSpec(m=m_LEVEL, M=M_LEVEL, c=13.0)

    def test_levels_must_be_positive(self):
        with pytest.raises(ValueError, match="0 < m < M"):
            DirichletSpec(m=0.0, M=1.0, c=5.0)


class TestEnergyCurve:
    """Test E(c) across the whole admissible range."""

    def test_cases_appear_in_order(self):
        grid = np.linspace(np.pi + 1e-3, 4 * np.pi - 1e-3, 40)
        cases = [p.case for p in dirichlet_energy_curve(m_LEVEL, M_LEVEL, grid)]

        assert cases == sorted(cases)
        assert {'a', 'b', 'd', 'e'} <= set(cases)

    def test_continuous_across_thresholds(self):
        jumps = threshold_continuity(m_LEVEL, M_LEVEL)

        assert set(jumps) == {'c_ab', 'c_bc', 'c_lambda0', 'c_de'}
        assert max(jumps.values()) <= 1e-5

    def test_minimum_and_sign_change_at_c_lambda0(self):
        grid = np.linspace(np.pi + 1e-3, 4 * np.pi - 1e-3, 60)
        step = grid[1] - grid[0]
        summary = energy_curve_report(dirichlet_energy_curve(m_LEVEL, M_LEVEL, grid))

        assert abs(summary['argmin_c'] - 2 * np.pi) <= step
        assert abs(summary['sign_change_c'] - 2 * np.pi) <= step

    def test_energy_blows_up_as_min_level_vanishes(self):
        """At fixed M and c, E grows without bound as m → 0."""
        energies = energy_versus_min_level(1.0, 4.0, [0.2, 0.1, 0.05, 0.02])

        assert np.all(np.diff(energies) > 0)
        assert energies[-1] > 5 * energies[0]
        assert np.isclose(energies[0], 2.007, atol=1e-2)
