"""
Rescaled and projected forms of the circle inequality.

Interval form, for v on [0, l]:
    ∫₀^l [(4l²/π²)(v′)² − v²] ds ≥ −l² / ∫₀^l v⁻² ds
Even extension to [−l, l] and θ = πs/l turn it into the circle inequality,
with every integral scaled by l/2π.

Line forms, through x = cot(θ/2) (dθ = 2dx/(1+x²)):
    (a) ∫ [(1+x²)(v_x)² − v²/(1+x²)] dx ≥ −π² / ∫ v⁻²/(1+x²) dx
        for v with one limit at x = ±∞; both sides are half the circle ones
    (b) ∫ [4(1+x²)(v_x)² − v²/(1+x²)] dx ≥ −π² / ∫ v⁻²/(1+x²) dx
        for v with separate limits at ±∞; both sides are half the interval
        quantities of w(s) = v(cot(s/2)) on [0, 2π]
With u = v·sqrt(1+x²), so that ∫u⁻² = ∫v⁻²/(1+x²):
    (a) ∫ [u_x² − d/dx(x u²/(1+x²))] dx ≥ −π² / ∫ u⁻² dx
    (b) 4∫ [u_x² − d/dx(x u²/(1+x²))] dx + 3∫ u²/(1+x²)² dx ≥ −π² / ∫ u⁻² dx

Vanishing form: if v vanishes somewhere on the circle,
    4∫ (v′)² dθ ≥ ∫ v² dθ
and on the line, for v with a zero,
    (a) ∫ (1+x²)(v_x)² dx ≥ ∫ v²/(1+x²) dx,   (b) with 4(1+x²)
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, Tuple, Union

import numpy as np
from scipy.integrate import quad

from circle.grid import CircleFunction, differentiate, dirichlet_energy, grid_nodes, integrate
from functionals.sobolev import FunctionalReport, inequality_report


logger = logging.getLogger(__name__)

# A sample counts as zero for the vanishing form below this
VANISHING_LEVEL = 1e-9

_QUAD_OPTIONS = {'epsabs': 1e-13, 'epsrel': 1e-12, 'limit': 400}

# Angle-grid size used to look for a zero of a LineProfile
_ZERO_SCAN = 4096


class MissingTailError(ValueError):
    """Raised when a line-side check needs analytic tails the input lacks."""
    pass


class LineProfile:
    """Positive function on the real line with known limits at ±∞."""

    def __init__(
        self,
        value: Callable[[float], float],
        derivative: Callable[[float], float],
        tail_plus: float,
        tail_minus: float,
        name: str = 'profile'
    ):
        """
        Args:
            value: v(x)
            derivative: v_x(x)
            tail_plus: lim v(x) as x → +∞
            tail_minus: lim v(x) as x → −∞
            name: Label for reports
        """
        if tail_plus <= 0 or tail_minus <= 0:
            raise ValueError(f"Tails must be positive (got {tail_plus}, {tail_minus})")
        self.value = value
        self.derivative = derivative
        self.tail_plus = float(tail_plus)
        self.tail_minus = float(tail_minus)
        self.name = name

    @classmethod
    def constant(cls, level: float = 1.0) -> 'LineProfile':
        return cls(
            value=lambda x: level,
            derivative=lambda x: 0.0,
            tail_plus=level,
            tail_minus=level,
            name=f'constant({level})',
        )

    @classmethod
    def half_angle_equality(cls, alpha: float, k: float = 1.0) -> 'LineProfile':
        """
        Equality profile of the two-tailed line form:
            v⁻² = K / (1 + α x/sqrt(1+x²)),   K = k·sqrt(1−α²)
        """
        if abs(alpha) >= 1 or k <= 0:
            raise ValueError(f"Need |alpha| < 1 and k > 0 (got {alpha}, {k})")
        K = k * np.sqrt(1.0 - alpha ** 2)

        def value(x):
            y = x / np.sqrt(1.0 + x * x)
            return np.sqrt((1.0 + alpha * y) / K)

        def derivative(x):
            dy = (1.0 + x * x) ** -1.5
            return alpha * dy / (2.0 * K * value(x))

        return cls(
            value=value,
            derivative=derivative,
            tail_plus=np.sqrt((1.0 + alpha) / K),
            tail_minus=np.sqrt((1.0 - alpha) / K),
            name=f'half_angle_equality(alpha={alpha}, k={k})',
        )

    @classmethod
    def vanishing_at_origin(cls) -> 'LineProfile':
        """
        |x| / sqrt(1+x²): zero at x = 0, tails 1. Equality profile of the
        one-tailed vanishing form (both sides π/2).
        """
        return cls(
            value=lambda x: abs(x) / np.sqrt(1.0 + x * x),
            derivative=lambda x: np.sign(x) * (1.0 + x * x) ** -1.5,
            tail_plus=1.0,
            tail_minus=1.0,
            name='vanishing_at_origin',
        )

    def at_angle(self, s: np.ndarray) -> np.ndarray:
        """w(s) = v(cot(s/2)) for s ∈ [0, 2π], tails at the endpoints."""
        s = np.asarray(s, dtype=float)
        out = np.empty_like(s)
        plus = s <= 0.0
        minus = s >= 2.0 * np.pi
        inner = ~(plus | minus)
        out[plus] = self.tail_plus
        out[minus] = self.tail_minus
        out[inner] = [self.value(x) for x in 1.0 / np.tan(s[inner] / 2.0)]
        return out


@dataclass
class StereoReport:
    circle_side: float
    line_side: float
    bound_side: float
    residual: float
    extras: Dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {
            'circle_side': self.circle_side,
            'line_side': self.line_side,
            'bound_side': self.bound_side,
            'residual': self.residual,
        }
        out.update(self.extras)
        return out


def _line_integral(func: Callable[[float], float]) -> float:
    value, _ = quad(func, -np.inf, np.inf, **_QUAD_OPTIONS)
    return float(value)


def _line_quantities(profile: LineProfile, variant: str) -> Dict[str, float]:
    v, dv = profile.value, profile.derivative
    weight = 4.0 if variant == 'b' else 1.0
    line = _line_integral(lambda x: weight * (1 + x * x) * dv(x) ** 2 - v(x) ** 2 / (1 + x * x))
    c_line = _line_integral(lambda x: v(x) ** -2 / (1 + x * x))

    # u = v·sqrt(1+x²); d/dx(x u²/(1+x²)) = d/dx(x v²) cancels the divergent part of u_x²
    def bracket(x):
        root = np.sqrt(1 + x * x)
        u_x = dv(x) * root + x * v(x) / root
        boundary = v(x) ** 2 + 2.0 * x * v(x) * dv(x)
        return u_x ** 2 - boundary

    u_bracket = _line_integral(bracket)
    if variant == 'a':
        u_side = u_bracket
    else:
        u_side = 4.0 * u_bracket + _line_integral(lambda x: 3.0 * v(x) ** 2 / (1 + x * x))

    u_constraint = _line_integral(lambda x: (v(x) ** 2 * (1 + x * x)) ** -1)
    return {'line': line, 'c_line': c_line, 'u_side': u_side, 'u_constraint': u_constraint}


def _line_density_on_grid(v: CircleFunction, scheme: str) -> np.ndarray:
    """Variant (a) line integrand pulled back to θ, times dx/dθ."""
    theta = v.nodes
    dv = differentiate(v, scheme).values
    vals = v.values
    density = np.empty(v.n)

    pole = np.isclose(theta, 0.0, atol=1e-14)
    t = theta[~pole]
    x = 1.0 / np.tan(t / 2.0)
    jac = 2.0 / (1.0 + x * x)
    v_x = -dv[~pole] * jac
    density[~pole] = ((1 + x * x) * v_x ** 2 - vals[~pole] ** 2 / (1 + x * x)) / jac
    # x = ±∞ limit
    density[pole] = 2.0 * dv[pole] ** 2 - vals[pole] ** 2 / 2.0
    return density


def stereographic_check(
    v: Union[CircleFunction, LineProfile],
    variant: str = 'a',
    scheme: str = 'spectral',
    n: int = 2048
) -> StereoReport:
    """
    Compare a line form of the inequality with its circle counterpart.

    Args:
        v: CircleFunction (variant a only) or LineProfile (either variant)
        variant: 'a' (one limit at infinity) or 'b' (two limits)
        scheme: Differentiation scheme on the circle side
        n: Grid size used to sample a LineProfile

    Returns:
        StereoReport with residual = |line_side − circle_side/2|; extras hold
        scale, circle_bound, slack and, for LineProfile input, u_side, u_bound

    Raises:
        MissingTailError: Variant b on a CircleFunction
        ValueError: Variant a on a LineProfile whose tails differ
    """
    if variant not in ('a', 'b'):
        raise ValueError(f"Unknown variant: {variant}. Available: ['a', 'b']")
    scale = 0.5

    if isinstance(v, CircleFunction):
        if variant == 'b':
            raise MissingTailError(
                "Variant b boundary terms need a LineProfile with analytic tails"
            )
        report = inequality_report(v, scheme)
        density = _line_density_on_grid(v, scheme)
        line = integrate(v.with_values(density, role='generic'))
        c_line = scale * report.constraint
        bound = -np.pi ** 2 / c_line
        return StereoReport(
            circle_side=report.F,
            line_side=line,
            bound_side=bound,
            residual=abs(line - scale * report.F),
            extras={'scale': scale, 'circle_bound': report.bound, 'slack': line - bound},
        )

    if variant == 'a':
        if not np.isclose(v.tail_plus, v.tail_minus, rtol=1e-12):
            raise ValueError(
                f"Variant a needs equal limits at ±∞ (got {v.tail_plus}, {v.tail_minus}); use variant b"
            )
        theta = grid_nodes(n)
        s = np.mod(theta, 2.0 * np.pi)
        circle = CircleFunction(v.at_angle(s), role='v')
        report = inequality_report(circle, scheme)
    else:
        m = n // 2
        samples = v.at_angle(2.0 * np.pi * np.arange(m + 1) / m)
        report = interval_check(samples, 2.0 * np.pi, scheme)

    quantities = _line_quantities(v, variant)
    bound = -np.pi ** 2 / quantities['c_line']
    u_bound = -np.pi ** 2 / quantities['u_constraint']
    logger.debug("stereographic %s on %s: %s", variant, v.name, quantities)
    return StereoReport(
        circle_side=report.F,
        line_side=quantities['line'],
        bound_side=bound,
        residual=abs(quantities['line'] - scale * report.F),
        extras={
            'scale': scale,
            'circle_bound': report.bound,
            'slack': quantities['line'] - bound,
            'u_side': quantities['u_side'],
            'u_bound': u_bound,
        },
    )


def _even_extension(samples) -> CircleFunction:
    """Samples at s_k = l·k/m, k = 0..m, as a 2m-point circle function."""
    arr = np.asarray(samples, dtype=float)
    m = arr.size - 1
    if m < 4:
        raise ValueError(f"Need at least 5 interval samples (got {arr.size})")
    j = np.arange(2 * m)
    return CircleFunction(arr[np.abs(j - m)], role='generic')


def interval_profile_samples(l: float, m: int, alpha: float = 0.5, k: float = 1.0) -> np.ndarray:
    """
    Equality profile of the interval form at s_k = l·k/m:
        v⁻² = k sqrt(1−α²) / (1 + α cos(πs/l))
    """
    if l <= 0:
        raise ValueError(f"Interval length must be positive (got {l})")
    s = l * np.arange(m + 1) / m
    f = k * np.sqrt(1.0 - alpha ** 2) / (1.0 + alpha * np.cos(np.pi * s / l))
    return f ** -0.5


def interval_check(samples, l: float, scheme: str = 'spectral') -> FunctionalReport:
    """
    Interval form of the inequality for samples on [0, l].

    Args:
        samples: v at s_k = l·k/m, k = 0..m (both endpoints included)
        l: Interval length
        scheme: Differentiation scheme on the even extension

    Returns:
        FunctionalReport with F = ∫[(4l²/π²)v′² − v²], constraint = ∫v⁻²,
        bound = −l²/constraint

    Raises:
        ValueError: If l ≤ 0 or a sample is not positive
    """
    if l <= 0:
        raise ValueError(f"Interval length must be positive (got {l})")
    extended = _even_extension(samples)
    circle = inequality_report(extended.with_values(extended.values, role='v'), scheme)

    factor = l / (2.0 * np.pi)
    F = factor * circle.F
    constraint = factor * circle.constraint
    bound = -l ** 2 / constraint
    return FunctionalReport(F=F, constraint=constraint, Q=F * constraint, bound=bound, slack=F - bound)


def vanishing_check(w: CircleFunction, scheme: str = 'central') -> Tuple[float, float]:
    """
    (4∫(w′)², ∫w²) for a function with a zero on the circle.

    Raises:
        ValueError: If no sample is ≤ 1e-9
    """
    if np.min(np.abs(w.values)) > VANISHING_LEVEL:
        raise ValueError(
            f"vanishing_check needs a sample <= {VANISHING_LEVEL} "
            f"(min |w| = {np.min(np.abs(w.values)):.3e}); use inequality_report instead"
        )
    lhs = 4.0 * dirichlet_energy(w, scheme)
    rhs = integrate(w.with_values(w.values ** 2))
    return float(lhs), float(rhs)


def vanishing_allowance(n: int, scheme: str = 'central') -> float:
    """
    Grid deficit of 4∫(w′)² on the equality profile |sin(θ/2)|.

    The forward-difference energy of |sin(θ/2)| is π·sinc²(h/4) with
    h = 2π/n, against ∫w² = π on the same grid, so the sharp case falls short
    by π(1 − sinc²(h/4)) ≈ πh²/48. The spectral scheme has no such bias.
    """
    if scheme != 'central':
        return 0.0
    x = np.pi / (2.0 * n)
    return float(np.pi * (1.0 - (np.sin(x) / x) ** 2))


def interval_vanishing_check(samples, l: float, scheme: str = 'central') -> Tuple[float, float]:
    """((4l²/π²)∫₀^l (w′)², ∫₀^l w²) for interval samples with a zero."""
    if l <= 0:
        raise ValueError(f"Interval length must be positive (got {l})")
    lhs, rhs = vanishing_check(_even_extension(samples), scheme)
    factor = l / (2.0 * np.pi)
    return factor * lhs, factor * rhs


def line_vanishing_check(profile: LineProfile, variant: str = 'a') -> Tuple[float, float]:
    """
    Vanishing form on the line for a profile with a zero:
        (a) ∫ (1+x²)(v_x)² dx  ≥ ∫ v²/(1+x²) dx
        (b) 4∫ (1+x²)(v_x)² dx ≥ ∫ v²/(1+x²) dx
    (a) is the circle form pulled back through x = cot(θ/2); (b) is the
    interval form on [0, 2π].

    Returns:
        (lhs, rhs)

    Raises:
        ValueError: Unknown variant, or no zero of v found on the angle grid
    """
    if variant not in ('a', 'b'):
        raise ValueError(f"Unknown variant: {variant}. Available: ['a', 'b']")
    samples = profile.at_angle(2.0 * np.pi * np.arange(1, _ZERO_SCAN) / _ZERO_SCAN)
    if np.min(np.abs(samples)) > VANISHING_LEVEL:
        raise ValueError(
            f"line_vanishing_check needs a zero of {profile.name} "
            f"(min |v| = {np.min(np.abs(samples)):.3e} on the angle grid)"
        )
    v, dv = profile.value, profile.derivative
    weight = 4.0 if variant == 'b' else 1.0
    lhs = weight * _line_integral(lambda x: (1 + x * x) * dv(x) ** 2)
    rhs = _line_integral(lambda x: v(x) ** 2 / (1 + x * x))
    return lhs, rhs


def vanishing_family(eps: float, n: int = 2048) -> CircleFunction:
    """v_ε = max(|sin(θ/2)|, ε)."""
    if eps <= 0:
        raise ValueError(f"eps must be positive (got {eps})")
    return CircleFunction.from_callable(
        lambda t: np.maximum(np.abs(np.sin(t / 2.0)), eps), n, role='v', smooth=False
    )


def truncated_family(w: CircleFunction, floor: float) -> CircleFunction:
    """max(w, floor): positive truncation of a non-negative function."""
    if floor <= 0:
        raise ValueError(f"floor must be positive (got {floor})")
    return w.with_values(np.maximum(w.values, floor), role='v', smooth=False)
