"""
Uniformly sampled periodic functions on the circle.

Nodes follow the convention
    θ_j = −π + 2πj/n,   j = 0..n−1,   n even and ≥ 8,
so θ = 0 sits at index n/2 and θ = ±π at index 0.

Every integral in the toolkit is the periodic rectangle rule
    ∫u dθ ≈ (2π/n) Σ u_j
which is spectrally accurate for smooth periodic integrands.

A CircleFunction carries a role telling which parameterization it holds:
    v-form  (v > 0, the functional F[v] = ∫ 4v′² − v²)
    f-form  (f = v⁻² > 0)
    h-form  (h = log f, any sign)
    generic (no positivity requirement)
"""

from functools import cached_property
from typing import Callable, Optional, Union

import numpy as np
from scipy import fft
from scipy.interpolate import CubicSpline


ROLES = ('v', 'h', 'f', 'generic')
SCHEMES = ('spectral', 'central')

# Node snapping threshold, in grid steps per node
_NODE_SNAP = 1e-12

# Fourier interpolation evaluates in chunks of this many points
_INTERP_CHUNK = 4096


class InvalidCircleFunctionError(ValueError):
    """Raised when samples violate the grid or role invariants."""
    pass


def grid_nodes(n: int) -> np.ndarray:
    """
    Return the n grid angles θ_j = −π + 2πj/n.

    The angles are built from integer offsets around n/2, so nodes at
    indices n/2 + i and n/2 − i are exact negatives of each other.
    """
    _check_size(n)
    offsets = np.arange(n) - n // 2
    return offsets * (2.0 * np.pi / n)


def _check_size(n: int) -> None:
    if n < 8 or n % 2 != 0:
        raise InvalidCircleFunctionError(
            f"Grid size must be even and >= 8 (got n={n})"
        )


def _check_scheme(scheme: str) -> None:
    if scheme not in SCHEMES:
        raise ValueError(f"Unknown scheme: {scheme}. Available: {list(SCHEMES)}")


class CircleFunction:
    """Samples of a 2π-periodic real function on the uniform grid."""

    def __init__(self, values, role: str = 'generic', smooth: bool = True):
        """
        Args:
            values: n samples at θ_j = −π + 2πj/n
            role: 'v', 'h', 'f' or 'generic'
            smooth: True when trigonometric interpolation is appropriate;
                False for merely continuous data (e.g. after rearrangement)

        Raises:
            InvalidCircleFunctionError: If n is odd or < 8, a sample is not
                finite, or a v-/f-form sample is not positive
        """
        if role not in ROLES:
            raise ValueError(f"Unknown role: {role}. Available: {list(ROLES)}")

        arr = np.array(values, dtype=float).ravel()
        _check_size(arr.size)

        if not np.all(np.isfinite(arr)):
            raise InvalidCircleFunctionError("All samples must be finite")

        if role in ('v', 'f') and np.any(arr <= 0):
            raise InvalidCircleFunctionError(
                f"{role}-form samples must be positive "
                f"(min sample {arr.min():.6g})"
            )

        arr.setflags(write=False)
        self.values = arr
        self.role = role
        self.smooth = bool(smooth)

    @classmethod
    def from_callable(
        cls,
        func: Callable[[np.ndarray], np.ndarray],
        n: int,
        role: str = 'generic',
        smooth: bool = True
    ) -> 'CircleFunction':
        """Sample func at the n grid nodes."""
        return cls(func(grid_nodes(n)), role=role, smooth=smooth)

    def with_values(
        self,
        values,
        role: Optional[str] = None,
        smooth: Optional[bool] = None
    ) -> 'CircleFunction':
        """New function on the same grid, inheriting role and smooth flag."""
        return CircleFunction(
            values,
            role=self.role if role is None else role,
            smooth=self.smooth if smooth is None else smooth,
        )

    @property
    def n(self) -> int:
        return self.values.size

    @property
    def nodes(self) -> np.ndarray:
        return grid_nodes(self.n)

    @property
    def step(self) -> float:
        return 2.0 * np.pi / self.n

    @cached_property
    def _fourier_coefficients(self) -> np.ndarray:
        coeffs = fft.rfft(self.values) / self.n
        coeffs[1:self.n // 2] *= 2.0
        return coeffs

    @cached_property
    def _cubic_spline(self) -> CubicSpline:
        knots = np.append(self.nodes, np.pi)
        samples = np.append(self.values, self.values[0])
        return CubicSpline(knots, samples, bc_type='periodic')

    def __repr__(self):
        return (
            f"CircleFunction(n={self.n}, role={self.role!r}, smooth={self.smooth}, "
            f"range {self.values.min():.6g}..{self.values.max():.6g})"
        )


def reparameterize(u: CircleFunction, role: str) -> CircleFunction:
    """
    Convert between the v-, f- and h-forms.

    Identities:
        f = v⁻² = e^h
    """
    if role == u.role:
        return u

    if u.role == 'v':
        f = u.values ** -2
    elif u.role == 'f':
        f = u.values
    elif u.role == 'h':
        f = np.exp(u.values)
    else:
        raise ValueError(f"Cannot reparameterize a {u.role!r} function")

    if role == 'v':
        out = f ** -0.5
    elif role == 'f':
        out = f
    elif role == 'h':
        out = np.log(f)
    else:
        raise ValueError(f"Cannot reparameterize into role {role!r}")

    return u.with_values(out, role=role)


def integrate(u: CircleFunction) -> float:
    """
    Periodic rectangle rule over one period.

    Example:
        >>> integrate(CircleFunction(np.ones(64)))
        6.283185307179586
    """
    return float(u.step * np.sum(u.values))


def differentiate(u: CircleFunction, scheme: str = 'spectral', order: int = 1) -> CircleFunction:
    """
    Derivative of u with respect to θ.

    Spectral: multiply the real FFT by (ik)^order; the Nyquist mode is
    dropped for odd orders. Exact for band-limited samples.

    Central:
        order 1: (u_{j+1} − u_{j−1})·n/(4π)
        order 2: (u_{j+1} − 2u_j + u_{j−1})·(n/2π)²

    Returns:
        Generic-role CircleFunction on the same grid
    """
    _check_scheme(scheme)
    if order not in (1, 2):
        raise ValueError(f"Derivative order must be 1 or 2 (got {order})")

    n = u.n
    vals = u.values

    if scheme == 'spectral':
        k = np.arange(n // 2 + 1)
        multiplier = (1j * k) ** order
        if order % 2 == 1:
            multiplier[-1] = 0.0
        out = fft.irfft(fft.rfft(vals) * multiplier, n=n)
    else:
        forward = np.roll(vals, -1)
        backward = np.roll(vals, 1)
        if order == 1:
            out = (forward - backward) * n / (4.0 * np.pi)
        else:
            out = (forward - 2.0 * vals + backward) * (n / (2.0 * np.pi)) ** 2

    return CircleFunction(out, role='generic', smooth=u.smooth)


def dirichlet_energy(u: CircleFunction, scheme: str = 'spectral') -> float:
    """
    Discrete ∫(u′)² dθ.

    The central scheme uses the staggered forward-difference energy
        (2π/n) Σ ((u_{j+1} − u_j)·n/2π)²
    which the cyclic symmetric decreasing rearrangement never increases.
    """
    _check_scheme(scheme)
    if scheme == 'spectral':
        du = differentiate(u, 'spectral')
        return integrate(du.with_values(du.values ** 2))

    diffs = (np.roll(u.values, -1) - u.values) / u.step
    return float(u.step * np.sum(diffs ** 2))


def interp_eval(
    u: CircleFunction,
    theta: Union[float, np.ndarray],
    method: Optional[str] = None
) -> Union[float, np.ndarray]:
    """
    Evaluate u between nodes.

    Args:
        u: Sampled function
        theta: Angle(s) in radians, reduced mod 2π
        method: 'fourier' (trigonometric interpolation) or 'cubic'
            (periodic cubic spline); defaults to 'fourier' when u.smooth

    Returns:
        float for scalar theta, otherwise an array of the same shape.
        Angles within 1e-12 grid steps of a node return the stored sample.
    """
    if method is None:
        method = 'fourier' if u.smooth else 'cubic'
    if method not in ('fourier', 'cubic'):
        raise ValueError(f"Unknown interpolation method: {method}")

    theta_arr = np.asarray(theta, dtype=float)
    flat = theta_arr.ravel()
    n = u.n

    # position in grid steps, 0 at θ = −π
    s = np.mod(flat + np.pi, 2.0 * np.pi)
    position = s / u.step
    nearest = np.rint(position)
    on_node = np.abs(position - nearest) < _NODE_SNAP * n

    result = np.empty_like(flat)
    result[on_node] = u.values[nearest[on_node].astype(int) % n]

    off = ~on_node
    if np.any(off):
        if method == 'fourier':
            result[off] = _fourier_eval(u, s[off])
        else:
            result[off] = u._cubic_spline(s[off] - np.pi)

    if theta_arr.ndim == 0:
        return float(result[0])
    return result.reshape(theta_arr.shape)


def _fourier_eval(u: CircleFunction, s: np.ndarray) -> np.ndarray:
    coeffs = u._fourier_coefficients
    k = np.arange(coeffs.size)
    out = np.empty(s.size)
    for start in range(0, s.size, _INTERP_CHUNK):
        chunk = s[start:start + _INTERP_CHUNK]
        phases = np.exp(1j * np.outer(chunk, k))
        out[start:start + _INTERP_CHUNK] = np.real(phases @ coeffs)
    return out


def normalize_constraint(v: CircleFunction, target: float = 2.0 * np.pi) -> CircleFunction:
    """
    Rescale v so that ∫v⁻² dθ = target.

    Formula:
        s = sqrt(∫v⁻² dθ / target),  result = s·v

    Raises:
        InvalidCircleFunctionError: If v has a non-positive sample
    """
    if np.any(v.values <= 0):
        raise InvalidCircleFunctionError(
            f"normalize_constraint requires positive samples (min {v.values.min():.6g})"
        )
    constraint = float(v.step * np.sum(v.values ** -2))
    scale = np.sqrt(constraint / target)
    return v.with_values(scale * v.values, role='v')
