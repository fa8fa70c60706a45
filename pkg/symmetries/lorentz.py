"""
Lorentz transformations of the circle and their action on v, f and h.

A transformation is fixed by (α, θ₀, θ̄₀). The new angle θ̄ pulls back to θ via
    cos(θ−θ₀) = (cos(θ̄−θ̄₀) − α) / (1 − α cos(θ̄−θ̄₀))
    sin(θ−θ₀) = sqrt(1−α²) sin(θ̄−θ̄₀) / (1 − α cos(θ̄−θ̄₀))
with Jacobian
    dθ/dθ̄ = ν_{α,θ̄₀}(θ̄) = sqrt(1−α²) / (1 − α cos(θ̄−θ̄₀)).

Induced actions (all leave F and ∫v⁻² invariant):
    f̄(θ̄) = ν(θ̄)·f(θ(θ̄))
    h̄(θ̄) = h(θ(θ̄)) + log ν(θ̄)
    v̄(θ̄) = ν(θ̄)^{−1/2}·v(θ(θ̄))
"""

from dataclasses import dataclass
from typing import Union

import numpy as np

from circle.grid import CircleFunction, grid_nodes, interp_eval


# |α| guard keeping the Jacobian finite
ALPHA_GUARD = 1.0 - 1e-9


@dataclass(frozen=True)
class LorentzParams:
    alpha: float
    theta0: float = 0.0
    thetabar0: float = 0.0

    def __post_init__(self):
        if not np.isfinite(self.alpha) or abs(self.alpha) > ALPHA_GUARD:
            raise ValueError(f"|alpha| must be <= 1 - 1e-9 (got {self.alpha})")

    def inverse(self) -> 'LorentzParams':
        """Parameters of the inverse map: (−α, θ̄₀, θ₀)."""
        return LorentzParams(alpha=-self.alpha, theta0=self.thetabar0, thetabar0=self.theta0)

    @property
    def is_identity(self) -> bool:
        return self.alpha == 0.0 and self.theta0 == self.thetabar0


def _wrap(theta: np.ndarray) -> np.ndarray:
    """Reduce angles to (−π, π]."""
    return np.pi - np.mod(np.pi - theta, 2.0 * np.pi)


def nu_multiplier(
    theta: Union[float, np.ndarray],
    alpha: float,
    center: float = 0.0
) -> Union[float, np.ndarray]:
    """ν_{α,c}(θ) = sqrt(1−α²) / (1 − α cos(θ − c))."""
    out = np.sqrt(1.0 - alpha ** 2) / (1.0 - alpha * np.cos(np.asarray(theta) - center))
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class NuProfile:
    """k·ν_{α,c}: the multiplier family, also the critical family up to sign and scale."""
    alpha: float
    center: float = 0.0
    k: float = 1.0

    def __post_init__(self):
        if abs(self.alpha) >= 1.0:
            raise ValueError(f"|alpha| must be < 1 (got {self.alpha})")
        if self.k <= 0:
            raise ValueError(f"Scale k must be positive (got {self.k})")

    def evaluate(self, theta):
        return self.k * nu_multiplier(theta, self.alpha, self.center)

    def as_circle_function(self, n: int, role: str = 'f') -> CircleFunction:
        """Samples of the profile as an f-form, or its v-form ν^{−1/2}."""
        f = self.evaluate(grid_nodes(n))
        if role == 'f':
            return CircleFunction(f, role='f')
        if role == 'v':
            return CircleFunction(f ** -0.5, role='v')
        raise ValueError(f"NuProfile supports roles 'f' and 'v' (got {role!r})")


def pullback_angle(thetabar: Union[float, np.ndarray], p: LorentzParams) -> Union[float, np.ndarray]:
    """
    Angle θ in the original parameterization that θ̄ comes from.

    Returns:
        θ in (−π, π]; float for scalar input
    """
    delta = np.asarray(thetabar, dtype=float) - p.thetabar0
    denom = 1.0 - p.alpha * np.cos(delta)
    cos_part = (np.cos(delta) - p.alpha) / denom
    sin_part = np.sqrt(1.0 - p.alpha ** 2) * np.sin(delta) / denom
    theta = _wrap(p.theta0 + np.arctan2(sin_part, cos_part))
    return float(theta) if theta.ndim == 0 else theta


def _pulled_back_samples(u: CircleFunction, p: LorentzParams):
    thetabar = grid_nodes(u.n)
    theta = pullback_angle(thetabar, p)
    return thetabar, interp_eval(u, theta)


def lorentz_f(f: CircleFunction, p: LorentzParams) -> CircleFunction:
    """f̄(θ̄) = ν_{α,θ̄₀}(θ̄)·f(θ(θ̄))."""
    if p.is_identity:
        return f
    thetabar, pulled = _pulled_back_samples(f, p)
    nu = nu_multiplier(thetabar, p.alpha, p.thetabar0)
    return f.with_values(nu * pulled)


def lorentz_h(h: CircleFunction, p: LorentzParams) -> CircleFunction:
    """h̄(θ̄) = h(θ(θ̄)) + log ν_{α,θ̄₀}(θ̄)."""
    if p.is_identity:
        return h
    thetabar, pulled = _pulled_back_samples(h, p)
    nu = nu_multiplier(thetabar, p.alpha, p.thetabar0)
    return h.with_values(pulled + np.log(nu))


def lorentz_v(v: CircleFunction, p: LorentzParams) -> CircleFunction:
    """
    v̄(θ̄) = ν_{α,θ̄₀}(θ̄)^{−1/2}·v(θ(θ̄)).

    Interpolation follows v.smooth: trigonometric for smooth samples,
    periodic cubic after rearrangement.

    Example:
        >>> one = CircleFunction(np.ones(2048), role='v')
        >>> vbar = lorentz_v(one, LorentzParams(alpha=0.5))
        >>> vbar.values[1024]   # θ̄ = 0
        0.759836  # approximately
    """
    if p.is_identity:
        return v
    thetabar, pulled = _pulled_back_samples(v, p)
    nu = nu_multiplier(thetabar, p.alpha, p.thetabar0)
    return v.with_values(nu ** -0.5 * pulled)


def lorentz_transform(u: CircleFunction, p: LorentzParams) -> CircleFunction:
    """Dispatch on u.role to the matching action."""
    if u.role == 'v':
        return lorentz_v(u, p)
    if u.role == 'f':
        return lorentz_f(u, p)
    if u.role == 'h':
        return lorentz_h(u, p)
    raise ValueError(f"Lorentz action is undefined for role {u.role!r}")
