"""
Second variation of the constrained functional at the constant minimizer.

Operator on zero-mean functions:
    𝓛u = −8u″ − 8u
Eigenpairs:
    κ_m = 8m(m+2)  on span{sin((m+1)θ), cos((m+1)θ)},  m = 0, 1, 2, ...

κ_0 = 0 is the null space generated by the Lorentz boosts.
"""

import logging
from dataclasses import dataclass, field
from typing import List

import numpy as np

from circle.grid import CircleFunction, differentiate, integrate


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SpectrumEntry:
    m: int
    kappa: float
    dimension: int


@dataclass
class SpectrumReport:
    entries: List[SpectrumEntry] = field(default_factory=list)

    def kappas(self) -> np.ndarray:
        return np.array([e.kappa for e in self.entries])

    def to_rows(self) -> List[dict]:
        return [{'m': e.m, 'kappa': e.kappa, 'dimension': e.dimension} for e in self.entries]


def second_variation_operator(u: CircleFunction, scheme: str = 'spectral') -> CircleFunction:
    """Apply 𝓛u = −8u″ − 8u."""
    d2u = differentiate(u, scheme, order=2).values
    return u.with_values(-8.0 * d2u - 8.0 * u.values, role='generic')


def rayleigh_quotient(u: CircleFunction, scheme: str = 'spectral') -> float:
    """⟨𝓛u, u⟩ / ⟨u, u⟩ with the grid quadrature."""
    lu = second_variation_operator(u, scheme).values
    num = integrate(u.with_values(lu * u.values, role='generic'))
    den = integrate(u.with_values(u.values ** 2, role='generic'))
    if den <= 0:
        raise ValueError("Rayleigh quotient of the zero function is undefined")
    return num / den


def _default_grid(max_m: int) -> int:
    n = 64
    while n < 4 * (max_m + 2):
        n *= 2
    return n


def second_variation_spectrum(
    max_m: int,
    n: int = None,
    scheme: str = 'spectral',
    tol: float = 1e-9
) -> SpectrumReport:
    """
    Read κ_m off Rayleigh quotients of sin((m+1)θ) and cos((m+1)θ).

    Args:
        max_m: Largest index m (≥ 0)
        n: Grid size; defaults to a power of two resolving mode max_m + 1
        scheme: Differentiation scheme
        tol: Relative tolerance for counting a basis function into the
            eigenspace (quotient agreement and eigen-residual)

    Returns:
        SpectrumReport with one entry (m, κ_m, dimension) per m
    """
    if max_m < 0:
        raise ValueError(f"max_m must be >= 0 (got {max_m})")
    if n is None:
        n = _default_grid(max_m)
    if n <= 2 * (max_m + 1):
        raise ValueError(f"Grid n={n} cannot resolve mode {max_m + 1}")

    report = SpectrumReport()
    for m in range(max_m + 1):
        k = m + 1
        basis = [
            CircleFunction.from_callable(lambda t: np.sin(k * t), n),
            CircleFunction.from_callable(lambda t: np.cos(k * t), n),
        ]
        quotients = [rayleigh_quotient(b, scheme) for b in basis]
        kappa = float(np.mean(quotients))
        scale = max(1.0, abs(kappa))

        dimension = 0
        for b, q in zip(basis, quotients):
            lu = second_variation_operator(b, scheme).values
            residual = np.max(np.abs(lu - kappa * b.values))
            if abs(q - kappa) <= tol * scale and residual <= tol * scale:
                dimension += 1

        logger.debug("m=%d kappa=%.12g dimension=%d", m, kappa, dimension)
        report.entries.append(SpectrumEntry(m=m, kappa=kappa, dimension=dimension))

    return report


def dense_second_variation_spectrum(n: int, scheme: str = 'spectral') -> np.ndarray:
    """
    Eigenvalues of 𝓛 assembled as a dense n×n matrix on grid values.

    Columns are 𝓛 applied to the unit vectors. On the full space the
    constant mode contributes −8; every other mode pairs up at 8k² − 8.

    Returns:
        Sorted eigenvalues
    """
    identity = np.eye(n)
    columns = [second_variation_operator(CircleFunction(col), scheme).values for col in identity]
    matrix = np.column_stack(columns)
    matrix = 0.5 * (matrix + matrix.T)
    return np.sort(np.linalg.eigvalsh(matrix))
