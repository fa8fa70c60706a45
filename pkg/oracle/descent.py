"""
Projected gradient descent on F under a fixed ∫v⁻² dθ.

Gradients (L²):
    F′(v) = −8v″ − 2v
    C′(v) = −2v⁻³
Step direction, Sobolev-preconditioned by K = (1 + k²)⁻¹ and projected onto
the tangent space of the constraint:
    g = K F′ − μ K C′,   μ = ⟨F′, K C′⟩ / ⟨C′, K C′⟩
After each step v is rescaled back onto the constraint. A step is accepted
only if F does not increase; otherwise the rate is halved.
"""

import logging
from typing import Tuple

import numpy as np
from scipy import fft

from circle.grid import CircleFunction, differentiate, integrate
from functionals.sobolev import constraint_integral, functional_v


logger = logging.getLogger(__name__)


class DivergenceError(RuntimeError):
    """Raised when the descent ends above its starting value."""
    pass


def _precondition(values: np.ndarray) -> np.ndarray:
    n = values.size
    k = np.arange(n // 2 + 1)
    return fft.irfft(fft.rfft(values) / (1.0 + k ** 2), n=n)


def projected_direction(v: CircleFunction, scheme: str = 'spectral') -> np.ndarray:
    """Preconditioned gradient of F, tangent to the constraint surface."""
    d2v = differentiate(v, scheme, order=2).values
    grad_f = -8.0 * d2v - 2.0 * v.values
    grad_c = -2.0 * v.values ** -3

    k_grad_f = _precondition(grad_f)
    k_grad_c = _precondition(grad_c)
    mu = np.dot(grad_f, k_grad_c) / np.dot(grad_c, k_grad_c)
    return k_grad_f - mu * k_grad_c


def descend_oracle(
    v0: CircleFunction,
    steps: int = 5000,
    rate: float = 0.1,
    scheme: str = 'spectral',
    min_rate: float = 1e-12,
    gtol: float = 1e-13
) -> Tuple[CircleFunction, float]:
    """
    Minimize F[v] from v0 keeping ∫v⁻² fixed.

    Args:
        v0: Positive start, normally with ∫v⁻² = 2π
        steps: Maximum number of accepted or rejected steps
        rate: Initial step size
        scheme: Differentiation scheme for F and F′
        min_rate: Stop once the rate falls below this
        gtol: Stop once the projected direction's L² norm falls below this

    Returns:
        (final v, final F)

    Raises:
        DivergenceError: If the final F exceeds the initial F
    """
    if rate <= 0:
        raise ValueError(f"rate must be positive (got {rate})")

    v = v0 if v0.role == 'v' else v0.with_values(v0.values, role='v')
    target = constraint_integral(v)
    F_start = F = functional_v(v, scheme)

    for step in range(steps):
        direction = projected_direction(v, scheme)
        norm = np.sqrt(integrate(v.with_values(direction ** 2, role='generic')))
        if norm < gtol:
            logger.debug("descent stopped at step %d: direction norm %.3e", step, norm)
            break

        trial_values = v.values - rate * direction
        if np.any(trial_values <= 0):
            rate *= 0.5
            continue
        trial = v.with_values(trial_values)
        trial = trial.with_values(trial.values * np.sqrt(constraint_integral(trial) / target))
        F_trial = functional_v(trial, scheme)

        if F_trial <= F:
            v, F = trial, F_trial
        else:
            rate *= 0.5

        if rate < min_rate:
            logger.warning("descent rate fell below %.1e at step %d (F=%.12g)", min_rate, step, F)
            break

    if F > F_start + 1e-10:
        raise DivergenceError(f"descent ended at F={F:.12g} above its start F={F_start:.12g}")

    logger.info("descent finished: F=%.12g", F)
    return v, float(F)
