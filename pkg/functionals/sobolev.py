"""
The Sobolev functional on the circle in its three parameterizations.

Formulas (all integrals over one period):
    F[v] = ∫ [4(v′)² − v²] dθ                       (v-form, v > 0)
    F[h] = ∫ e^{−h} [(h′)² − 1] dθ                   (h-form)
    F[f] = ∫ [−f⁻¹ + f⁻³(f′)²] dθ                     (f-form, f > 0)
    C[v] = ∫ v⁻² dθ                                  (constraint)
    Q[v] = F[v]·C[v]                                 (scale invariant)

Sharp inequality:
    F[v] ≥ −4π² / C[v]
with equality exactly on the critical family f = sqrt(1−α²)/(1 + α cos(θ−θ₀)).
"""

import logging
from dataclasses import dataclass, asdict
from typing import Dict

import numpy as np

from circle.grid import (
    CircleFunction,
    InvalidCircleFunctionError,
    differentiate,
    dirichlet_energy,
    integrate,
)


logger = logging.getLogger(__name__)

# ∫f dθ must match 2π to this tolerance before the λ = 1 residual applies
CONSTRAINT_TOL = 1e-8


class ConstraintError(ValueError):
    """Raised when a function is not on the normalized constraint manifold."""
    pass


@dataclass(frozen=True)
class FunctionalReport:
    """F, constraint, Q, sharp bound and slack for one v-form function."""
    F: float
    constraint: float
    Q: float
    bound: float
    slack: float

    def to_dict(self) -> Dict[str, float]:
        return asdict(self)


def _require_positive(u: CircleFunction, label: str) -> None:
    if np.any(u.values <= 0):
        raise InvalidCircleFunctionError(
            f"{label} requires positive samples (min {u.values.min():.6g})"
        )


def functional_v(v: CircleFunction, scheme: str = 'spectral') -> float:
    """
    F[v] = ∫ [4(v′)² − v²] dθ.

    Args:
        v: Positive samples
        scheme: 'spectral' or 'central'; the central scheme uses the
            forward-difference Dirichlet energy

    Returns:
        F[v]

    Example:
        >>> functional_v(CircleFunction(np.ones(64), role='v'))
        -6.283185307179586
    """
    _require_positive(v, "functional_v")
    energy = dirichlet_energy(v, scheme)
    return float(4.0 * energy - integrate(v.with_values(v.values ** 2)))


def functional_h(h: CircleFunction, scheme: str = 'spectral') -> float:
    """F[h] = ∫ e^{−h}[(h′)² − 1] dθ for h of any sign."""
    dh = differentiate(h, scheme).values
    integrand = np.exp(-h.values) * (dh ** 2 - 1.0)
    return integrate(h.with_values(integrand, role='generic'))


def functional_f(f: CircleFunction, scheme: str = 'spectral') -> float:
    """F[f] = ∫ [−f⁻¹ + f⁻³(f′)²] dθ for positive f."""
    _require_positive(f, "functional_f")
    df = differentiate(f, scheme).values
    integrand = -1.0 / f.values + df ** 2 / f.values ** 3
    return integrate(f.with_values(integrand, role='generic'))


def constraint_integral(v: CircleFunction) -> float:
    """C[v] = ∫ v⁻² dθ."""
    _require_positive(v, "constraint_integral")
    return integrate(v.with_values(v.values ** -2))


def sharp_bound(constraint: float) -> float:
    """Sharp lower bound −4π²/C for a given constraint value."""
    if constraint <= 0:
        raise ValueError(f"Constraint must be positive (got {constraint})")
    return float(-4.0 * np.pi ** 2 / constraint)


def q_functional(v: CircleFunction, scheme: str = 'spectral') -> float:
    """Scale-invariant Q[v] = F[v]·C[v]."""
    return functional_v(v, scheme) * constraint_integral(v)


def inequality_report(v: CircleFunction, scheme: str = 'spectral') -> FunctionalReport:
    """
    Evaluate both sides of F[v] ≥ −4π²/C[v].

    Args:
        v: Positive samples
        scheme: Differentiation scheme for the Dirichlet energy

    Returns:
        FunctionalReport with slack = F − bound (≥ 0 up to discretization)
    """
    F = functional_v(v, scheme)
    constraint = constraint_integral(v)
    bound = sharp_bound(constraint)
    report = FunctionalReport(
        F=F,
        constraint=constraint,
        Q=F * constraint,
        bound=bound,
        slack=F - bound,
    )
    logger.debug("inequality report n=%d scheme=%s: %s", v.n, scheme, report)
    return report


def el_residual(f: CircleFunction, scheme: str = 'spectral') -> CircleFunction:
    """
    Pointwise Euler–Lagrange residual with multiplier λ = 1.

    Formula:
        r = f⁻² + 3f⁻⁴(f′)² − 2f⁻³f″ − 1

    The multiplier is fixed, so f must already satisfy ∫f dθ = 2π.

    Raises:
        InvalidCircleFunctionError: If f has a non-positive sample
        ConstraintError: If |∫f dθ − 2π| > 1e-8
    """
    _require_positive(f, "el_residual")
    total = integrate(f)
    if abs(total - 2.0 * np.pi) > CONSTRAINT_TOL:
        raise ConstraintError(
            f"el_residual needs ∫f dθ = 2π (got {total:.12f}); normalize first"
        )

    vals = f.values
    df = differentiate(f, scheme, order=1).values
    d2f = differentiate(f, scheme, order=2).values
    residual = vals ** -2 + 3.0 * vals ** -4 * df ** 2 - 2.0 * vals ** -3 * d2f - 1.0
    return f.with_values(residual, role='generic')
