"""
Seeded corpora of smooth positive test functions.

Each member is
    v = 1 + Σ_{k=1..K} (a_k cos kθ + b_k sin kθ),   Σ|a_k| + |b_k| ≤ amplitude_cap
clamped at positivity_floor, passed through the heat kernel exp(−t k²) in
Fourier space, and clamped again.

Member i draws from its own child of SeedSequence(seed), so the corpus does
not depend on generation order.
"""

from dataclasses import dataclass
from typing import List

import numpy as np
from scipy import fft

from circle.grid import CircleFunction, grid_nodes


@dataclass(frozen=True)
class CorpusSpec:
    seed: int = 42
    count: int = 20
    max_harmonic: int = 4
    amplitude_cap: float = 0.5
    positivity_floor: float = 0.2
    n: int = 512
    smoothing: float = 1e-3

    def __post_init__(self):
        if self.count < 0:
            raise ValueError(f"count must be >= 0 (got {self.count})")
        if self.max_harmonic < 1:
            raise ValueError(f"max_harmonic must be >= 1 (got {self.max_harmonic})")
        if self.amplitude_cap < 0:
            raise ValueError(f"amplitude_cap must be >= 0 (got {self.amplitude_cap})")
        if self.positivity_floor <= 0:
            raise ValueError(f"positivity_floor must be > 0 (got {self.positivity_floor})")
        if self.smoothing < 0:
            raise ValueError(f"smoothing must be >= 0 (got {self.smoothing})")


def heat_smooth(values: np.ndarray, t: float) -> np.ndarray:
    """Multiply Fourier mode k by exp(−t k²)."""
    n = values.size
    k = np.arange(n // 2 + 1)
    return fft.irfft(fft.rfft(values) * np.exp(-t * k ** 2), n=n)


def corpus_member(rng: np.random.Generator, spec: CorpusSpec) -> CircleFunction:
    """One member drawn from rng."""
    theta = grid_nodes(spec.n)
    harmonics = np.arange(1, spec.max_harmonic + 1)

    a = rng.uniform(-1.0, 1.0, size=spec.max_harmonic)
    b = rng.uniform(-1.0, 1.0, size=spec.max_harmonic)
    amplitude = rng.uniform(0.0, spec.amplitude_cap)
    l1 = np.sum(np.abs(a)) + np.sum(np.abs(b))
    if l1 > 0:
        a = a * amplitude / l1
        b = b * amplitude / l1

    values = 1.0 + np.cos(np.outer(theta, harmonics)) @ a + np.sin(np.outer(theta, harmonics)) @ b
    values = np.maximum(values, spec.positivity_floor)
    values = heat_smooth(values, spec.smoothing)
    values = np.maximum(values, spec.positivity_floor)
    return CircleFunction(values, role='v')


def random_corpus(spec: CorpusSpec) -> List[CircleFunction]:
    """
    Deterministic list of spec.count positive v-form functions.

    Example:
        >>> random_corpus(CorpusSpec(count=0))
        []
    """
    children = np.random.SeedSequence(spec.seed).spawn(spec.count)
    return [corpus_member(np.random.default_rng(child), spec) for child in children]
