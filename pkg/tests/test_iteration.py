"""
Unit tests for the competing-symmetries iteration and its trace diagnostics.
"""

import pytest
import numpy as np
from circle.grid import CircleFunction, normalize_constraint
from closed_forms.critical import critical_v_profile
from functionals.sobolev import constraint_integral
from iteration.competing import (
    IterationTrace,
    NotRearrangedError,
    SearchConfig,
    StepRecord,
    boosted_max,
    classify_boosted_max,
    golden_section,
    iterate_step,
    run_iteration,
    search_alpha,
    select_alpha,
    tail_flatness,
)
from iteration.diagnostics import DiagnosticTolerances, diagnose_trace
from oracle.corpus import CorpusSpec, random_corpus
from oracle.descent import descend_oracle


def _critical_start(n=256):
    """v with v⁻² = ν_{−1/2}: symmetric decreasing, peak at θ = 0."""
    return critical_v_profile(0.5, 0.0, n)


class TestGoldenSection:
    """Test the bracketing minimizer."""

    def test_finds_parabola_minimum(self):
        x, y = golden_section(lambda a: (a - 0.3) ** 2, 0.0, 1.0, 1e-9)

        assert np.isclose(x, 0.3, atol=1e-6)
        assert y < 1e-12

    def test_degenerate_bracket(self):
        x, _ = golden_section(lambda a: a, 0.5, 0.5, 1e-9)
        assert x == 0.5


class TestAlphaSearch:
    """Test M(α) and the least-minimizer selection."""

    def test_zero_boost_is_max_f(self):
        v = _critical_start()
        assert np.isclose(boosted_max(v, 0.0), np.max(v.values ** -2))

    def test_constant_selects_zero(self):
        v = CircleFunction(np.ones(64), role='v')
        assert select_alpha(v) == 0.0

    def test_critical_start_selects_one_half(self):
        """Boosting ν_{−1/2} by 1/2 returns the constant; anything else has a larger max."""
        selection = search_alpha(_critical_start())

        assert np.isclose(selection.alpha, 0.5, atol=1e-5)
        assert np.isclose(selection.boosted_max, 1.0, atol=1e-5)
        assert not selection.plateau

    def test_unrearranged_input_rejected(self):
        v = CircleFunction.from_callable(lambda t: 1 + 0.2 * np.sin(t), 64, role='v')

        with pytest.raises(NotRearrangedError, match="rearrange"):
            boosted_max(v, 0.1)

    def test_alpha_out_of_range_rejected(self):
        with pytest.raises(ValueError, match="alpha must be"):
            boosted_max(CircleFunction(np.ones(16), role='v'), 0.9999)

    def test_search_config_validation(self):
        with pytest.raises(ValueError, match="alpha_max"):
            SearchConfig(alpha_max=1.0)


class TestClassifyBoostedMax:
    """Test where the boosted maximum sits."""

    def test_flat_function_touches_quarter_angle(self):
        v = CircleFunction(np.ones(64), role='v')
        assert classify_boosted_max(v, 0.0) == 'a'

    def test_single_peak_at_pi(self):
        """f = ν_{−1/2} peaks only at θ = ±π."""
        assert classify_boosted_max(_critical_start(), 0.0) == 'none'


class TestIterateStep:
    """Test a single boost-then-rearrange step."""

    def test_constant_is_fixed(self):
        v = CircleFunction(np.ones(64), role='v')
        out, record = iterate_step(v, step=3)

        np.testing.assert_array_equal(out.values, 1.0)
        assert record.step == 3
        assert record.alpha_n == 0.0
        assert record.renorm_scale == 1.0

    def test_critical_start_boosts_to_constant(self):
        v = _critical_start()
        out, record = iterate_step(v, scheme='spectral')

        assert np.isclose(record.alpha_n, 0.5, atol=1e-5)
        np.testing.assert_allclose(out.values, 1.0, atol=1e-5)
        assert np.isclose(record.constraint, constraint_integral(v), rtol=1e-12)

    def test_unrearranged_input_rejected(self):
        v = CircleFunction.from_callable(lambda t: 1 + 0.2 * np.sin(t), 64, role='v')

        with pytest.raises(NotRearrangedError):
            iterate_step(v)


class TestRunIteration:
    """Test whole traces."""

    def test_constant_converges_immediately(self):
        trace = run_iteration(CircleFunction(np.ones(64), role='v'))

        assert trace.converged
        assert len(trace.steps) == 1
        assert trace.steps[0].alpha_n == 0.0

    def test_tail_flatness(self):
        """Spread of v over |θ| ≥ π/2: v(π/2) − v(π) for the critical start."""
        assert tail_flatness(CircleFunction(np.ones(16), role='v')) == 0.0

        expected = np.sqrt(0.75) ** -0.5 - (np.sqrt(0.75) / 0.5) ** -0.5
        assert np.isclose(tail_flatness(_critical_start(16)), expected, rtol=1e-12)

    def test_critical_start_reaches_constant_in_one_step(self):
        trace = run_iteration(_critical_start(), scheme='spectral')

        assert trace.converged
        assert len(trace.steps) == 2
        np.testing.assert_allclose(trace.final.values, 1.0, atol=1e-5)
        assert np.isclose(trace.steps[1].constraint, trace.steps[0].constraint, rtol=1e-13)

    def test_critical_start_attains_lower_product_bound(self):
        """max v⁻² drops by exactly sqrt((1 − α)/(1 + α)) along the critical family."""
        trace = run_iteration(_critical_start(), scheme='spectral')
        report = diagnose_trace(trace, DiagnosticTolerances(product_tol=1e-5))

        assert report.passed, report.violations
        assert np.isclose(report.checks['max_vinv2_ratio'], report.checks['product_lower'], atol=1e-5)
        assert report.checks['product_upper'] > report.checks['max_vinv2_ratio']

    def test_corpus_traces_pass_diagnostics(self):
        """Twenty seeded starts: flat-tail convergence with no monotonicity or product violations."""
        for i, v0 in enumerate(random_corpus(CorpusSpec(seed=42, count=20, n=512))):
            trace = run_iteration(v0)
            report = diagnose_trace(trace)

            assert trace.converged, f"member {i}"
            assert report.passed, (i, report.violations)
            assert np.all(np.diff(trace.column('F')) <= 1e-10 + 1e-6)

    def test_iteration_stops_in_flat_tail_class_above_oracle(self):
        """The iteration guarantees flatness on |θ| ≥ π/2, not the global minimum the descent reaches."""
        for v0 in random_corpus(CorpusSpec(seed=42, count=3, n=512)):
            v0 = normalize_constraint(v0)
            trace = run_iteration(v0)
            report = diagnose_trace(trace)
            _, F_oracle = descend_oracle(v0)

            assert trace.tail_flatness < 1e-3
            assert 'flat_class_bound' in report.checks
            assert report.passed, report.violations
            assert trace.steps[-1].F >= F_oracle - 1e-3
            assert trace.steps[-1].F >= -2 * np.pi - 1e-3

    def test_step_zero_records_rearranged_start(self):
        v0 = CircleFunction.from_callable(lambda t: 1 + 0.2 * np.sin(t), 64, role='v')
        trace = run_iteration(v0, max_steps=0)

        assert len(trace.steps) == 1
        assert trace.steps[0].step == 0
        assert not trace.converged


class TestDiagnostics:
    """Test violation reporting on synthetic traces."""

    @staticmethod
    def _record(step, alpha, F, min_v, constraint=2 * np.pi):
        return StepRecord(
            step=step, alpha_n=alpha, F=F, min_v=min_v, max_v=2.0,
            max_vinv2=min_v ** -2, constraint=constraint, boost_max=min_v ** -2, renorm_scale=1.0,
        )

    def test_increase_in_F_is_named(self):
        trace = IterationTrace(steps=[
            self._record(0, 0.0, -5.0, 0.8),
            self._record(1, 0.0, -4.0, 0.8),
        ])
        report = diagnose_trace(trace)

        assert not report.passed
        assert any("step 1: F increased" in v for v in report.violations)

    def test_constraint_drift_is_named(self):
        trace = IterationTrace(steps=[
            self._record(0, 0.0, -5.0, 0.8),
            self._record(1, 0.0, -5.0, 0.8, constraint=2 * np.pi + 1e-3),
        ])
        report = diagnose_trace(trace)

        assert any("constraint drifted" in v for v in report.violations)

    def test_upper_product_bound_violation(self):
        """A boost that leaves max v⁻² unchanged breaks Π sqrt(1 − α²) ≥ ratio."""
        trace = IterationTrace(steps=[
            self._record(0, 0.0, -5.0, 0.8),
            self._record(1, 0.6, -5.0, 0.8),
        ])
        report = diagnose_trace(trace)

        assert any("product bound" in v for v in report.violations)

    def test_lower_product_bound_violation(self):
        """A small boost cannot shrink max v⁻² below Π sqrt((1 − α)/(1 + α))."""
        trace = IterationTrace(steps=[
            self._record(0, 0.0, -5.0, 0.8),
            self._record(1, 0.1, -5.0, 2.0),
        ])
        report = diagnose_trace(trace)

        assert any("lower product" in v for v in report.violations)

    def test_empty_trace_rejected(self):
        with pytest.raises(ValueError, match="empty trace"):
            diagnose_trace(IterationTrace())
