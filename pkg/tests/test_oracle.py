"""
Unit tests for the seeded corpus and the projected descent oracle.
"""

import pytest
import numpy as np
from circle.grid import CircleFunction, normalize_constraint
from functionals.sobolev import constraint_integral, functional_v, inequality_report
from oracle.corpus import CorpusSpec, heat_smooth, random_corpus
from oracle.descent import _precondition, descend_oracle, projected_direction


class TestCorpus:
    """Test corpus generation."""

    def test_same_seed_same_corpus(self):
        spec = CorpusSpec(seed=3, count=5, n=128)
        first = random_corpus(spec)
        second = random_corpus(spec)

        for a, b in zip(first, second):
            np.testing.assert_array_equal(a.values, b.values)

    def test_members_independent_of_count(self):
        """Member i comes from its own spawned seed, so longer corpora extend shorter ones."""
        short = random_corpus(CorpusSpec(seed=3, count=2, n=128))
        long = random_corpus(CorpusSpec(seed=3, count=6, n=128))

        np.testing.assert_array_equal(short[1].values, long[1].values)

    def test_members_positive_above_floor(self):
        spec = CorpusSpec(seed=11, count=10, n=128, amplitude_cap=0.9, positivity_floor=0.3)

        for v in random_corpus(spec):
            assert v.role == 'v'
            assert v.values.min() >= 0.3

    def test_members_satisfy_inequality(self):
        for v in random_corpus(CorpusSpec(seed=42, count=10, n=256)):
            assert inequality_report(v).slack >= -1e-8

    def test_empty_corpus(self):
        assert random_corpus(CorpusSpec(count=0)) == []

    def test_invalid_spec_rejected(self):
        with pytest.raises(ValueError, match="positivity_floor"):
            CorpusSpec(positivity_floor=0.0)
        with pytest.raises(ValueError, match="max_harmonic"):
            CorpusSpec(max_harmonic=0)

    def test_heat_smoothing_zero_time_is_identity(self):
        values = np.random.default_rng(0).uniform(size=64)
        np.testing.assert_allclose(heat_smooth(values, 0.0), values, atol=1e-14)

    def test_heat_smoothing_preserves_mean(self):
        values = np.random.default_rng(1).uniform(size=64)
        assert np.isclose(heat_smooth(values, 0.1).mean(), values.mean())


class TestDescent:
    """Test the constrained descent."""

    def test_direction_is_tangent_to_constraint(self):
        """⟨g, C′(v)⟩ = 0 for the projected direction, C′ = −2v⁻³."""
        v = CircleFunction.from_callable(lambda t: 1 + 0.3 * np.cos(2 * t), 128, role='v')
        g = projected_direction(v)
        grad_c = -2.0 * v.values ** -3

        assert abs(np.dot(g, grad_c)) < 1e-10 * np.linalg.norm(g) * np.linalg.norm(grad_c)

    def test_preconditioner_damps_high_modes(self):
        n = 64
        theta = 2 * np.pi * np.arange(n) / n
        out = _precondition(np.cos(4 * theta))

        np.testing.assert_allclose(out, np.cos(4 * theta) / 17.0, atol=1e-13)

    def test_descent_reaches_sharp_constant(self):
        v0 = normalize_constraint(
            CircleFunction.from_callable(lambda t: 1 + 0.2 * np.cos(2 * t) + 0.1 * np.sin(t), 128, role='v')
        )
        v, F = descend_oracle(v0, steps=2000)

        assert abs(F + 2 * np.pi) < 1e-3
        assert np.isclose(constraint_integral(v), 2 * np.pi, rtol=1e-10)
        assert np.isclose(functional_v(v), F)

    def test_corpus_starts_reach_sharp_constant(self):
        """Twenty seeded starts all descend to F = −2π on the normalized constraint."""
        for i, v0 in enumerate(random_corpus(CorpusSpec(seed=42, count=20, n=128))):
            v, F = descend_oracle(normalize_constraint(v0))

            assert abs(F + 2 * np.pi) < 1e-3, (i, F)
            assert np.isclose(constraint_integral(v), 2 * np.pi, rtol=1e-10)

    def test_descent_never_increases_F(self):
        v0 = normalize_constraint(random_corpus(CorpusSpec(seed=5, count=1, n=128))[0])
        _, F = descend_oracle(v0, steps=50)

        assert F <= functional_v(v0) + 1e-12
        assert F >= -2 * np.pi - 1e-8

    def test_rate_must_be_positive(self):
        v0 = CircleFunction(np.ones(16), role='v')
        with pytest.raises(ValueError, match="rate"):
            descend_oracle(v0, rate=0.0)
