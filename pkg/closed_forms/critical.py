"""
Critical points of F under ∫f dθ = 2π.

    f(θ) = sqrt(1−α²) / (1 + α cos(θ − θ₀)),   |α| < 1

Every member has F = −2π and Q = −4π², and they form one orbit of the
Lorentz group through f ≡ 1.
"""

import numpy as np

from circle.grid import CircleFunction, grid_nodes


def critical_values(theta, alpha: float, theta0: float = 0.0):
    """Closed-form f on arbitrary angles."""
    return np.sqrt(1.0 - alpha ** 2) / (1.0 + alpha * np.cos(np.asarray(theta) - theta0))


def critical_profile(alpha: float, theta0: float = 0.0, n: int = 2048) -> CircleFunction:
    """
    f-form critical profile on an n-point grid.

    Raises:
        ValueError: If |α| ≥ 1

    Example:
        >>> f = critical_profile(0.5, 0.0, n=64)
        >>> f.values[0]   # θ = −π
        1.7320508075688772
    """
    if not np.isfinite(alpha) or abs(alpha) >= 1.0:
        raise ValueError(f"Critical profile needs |alpha| < 1 (got {alpha})")
    return CircleFunction(critical_values(grid_nodes(n), alpha, theta0), role='f')


def critical_v_profile(alpha: float, theta0: float = 0.0, n: int = 2048) -> CircleFunction:
    """v-form of the critical profile, v = f^{−1/2}."""
    f = critical_profile(alpha, theta0, n)
    return CircleFunction(f.values ** -0.5, role='v')
