"""
Competing-symmetries iteration.

Starting from a symmetric decreasing v₀, each step
    (a) picks the smallest α_n ∈ [0, 0.999] minimizing
            M(α) = max_θ̄ φ_α(v_n⁻²)(θ̄)
        where φ_α is the f-form boost with θ₀ = θ̄₀ = 0,
    (b) boosts v_n by α_n, restores the constraint ∫v⁻² and rearranges.

F never increases along the sequence, min v never decreases and the
constraint is constant. The sequence is stopped once v is flat on |θ| ≥ π/2.
"""

import logging
import math
from dataclasses import dataclass, field, asdict
from typing import Callable, List, Optional, Tuple

import numpy as np

from circle.grid import CircleFunction, reparameterize
from functionals.sobolev import constraint_integral, functional_v
from symmetries.lorentz import LorentzParams, lorentz_f
from symmetries.rearrange import is_symmetric_decreasing, rearrange


logger = logging.getLogger(__name__)

INV_PHI = (math.sqrt(5) - 1) / 2  # 1 / phi
INV_PHI_SQUARE = (3 - math.sqrt(5)) / 2  # 1 / phi^2

# Monotonicity check on rearranged input
_REARRANGED_TOL = 1e-12


class NotRearrangedError(ValueError):
    """Raised when the boost search receives a non symmetric decreasing v."""
    pass


@dataclass(frozen=True)
class SearchConfig:
    """α search settings."""
    scan_step: float = 1.0 / 128
    alpha_max: float = 0.999
    refine_tol: float = 1e-9
    value_tol: float = 1e-6
    plateau_tol: float = 1e-4

    def __post_init__(self):
        if not 0 < self.alpha_max <= 0.999:
            raise ValueError(f"alpha_max must be in (0, 0.999] (got {self.alpha_max})")
        if self.scan_step <= 0 or self.refine_tol <= 0 or self.value_tol <= 0:
            raise ValueError("scan_step, refine_tol and value_tol must be positive")


@dataclass(frozen=True)
class AlphaSelection:
    alpha: float
    boosted_max: float
    refined_alpha: float
    plateau: bool


@dataclass
class StepRecord:
    step: int
    alpha_n: float
    F: float
    min_v: float
    max_v: float
    max_vinv2: float
    constraint: float
    boost_max: float
    renorm_scale: float
    plateau: bool = False

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class IterationTrace:
    steps: List[StepRecord] = field(default_factory=list)
    converged: bool = False
    tail_flatness: float = float('nan')
    final: Optional[CircleFunction] = None

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(s, name) for s in self.steps], dtype=float)


def tail_flatness(v: CircleFunction) -> float:
    """max − min of v over nodes with |θ| ≥ π/2."""
    mask = np.abs(v.nodes) >= np.pi / 2 - 1e-12
    tail = v.values[mask]
    return float(tail.max() - tail.min())


def _require_rearranged(v: CircleFunction) -> None:
    if not is_symmetric_decreasing(v, tol=_REARRANGED_TOL * max(1.0, float(np.max(v.values)))):
        raise NotRearrangedError(
            "Boost search needs a symmetric decreasing v (peak at θ = 0, "
            "nonincreasing toward ±π); call rearrange first"
        )


def _boost_f(v: CircleFunction, alpha: float) -> CircleFunction:
    f = reparameterize(v, 'f')
    if alpha == 0.0:
        return f
    return lorentz_f(f, LorentzParams(alpha=alpha))


def boosted_max(v: CircleFunction, alpha: float) -> float:
    """
    M(α) = max over nodes of the f-form boost of v⁻².

    Args:
        v: Symmetric decreasing v-form
        alpha: Boost in [0, 0.999]

    Raises:
        NotRearrangedError: If v is not symmetric decreasing
    """
    if not 0.0 <= alpha <= 0.999:
        raise ValueError(f"alpha must be in [0, 0.999] (got {alpha})")
    _require_rearranged(v)
    return float(np.max(_boost_f(v, alpha).values))


def golden_section(func: Callable[[float], float], a: float, b: float, tol: float) -> Tuple[float, float]:
    """
    Golden-section search for a minimum of func on [a, b].

    Returns:
        (x, func(x)) at the best point of the final bracket
    """
    a, b = min(a, b), max(a, b)
    h = b - a
    if h <= tol:
        x = 0.5 * (a + b)
        return x, func(x)

    steps = int(math.ceil(math.log(tol / h) / math.log(INV_PHI)))

    c = a + INV_PHI_SQUARE * h
    d = a + INV_PHI * h
    yc = func(c)
    yd = func(d)

    for _ in range(steps - 1):
        if yc < yd:
            b = d
            d = c
            yd = yc
            h = INV_PHI * h
            c = a + INV_PHI_SQUARE * h
            yc = func(c)
        else:
            a = c
            c = d
            yc = yd
            h = INV_PHI * h
            d = a + INV_PHI * h
            yd = func(d)

    return (c, yc) if yc < yd else (d, yd)


def search_alpha(v: CircleFunction, search: Optional[SearchConfig] = None) -> AlphaSelection:
    """
    Least minimizer of M(α) on [0, alpha_max].

    Coarse scan with step scan_step, golden-section refinement around the
    best scan point, then bisection for the leftmost α whose M(α) is within
    value_tol of the minimum.

    Returns:
        AlphaSelection; plateau is set when the refined minimizer sits more
        than plateau_tol to the right of the returned α
    """
    search = search or SearchConfig()
    _require_rearranged(v)

    def M(alpha: float) -> float:
        return float(np.max(_boost_f(v, alpha).values))

    grid = np.append(np.arange(0.0, search.alpha_max, search.scan_step), search.alpha_max)
    values = np.array([M(a) for a in grid])
    best = int(np.argmin(values))

    lo = grid[max(best - 1, 0)]
    hi = grid[min(best + 1, grid.size - 1)]
    refined, refined_value = golden_section(M, lo, hi, search.refine_tol)
    if values[best] <= refined_value:
        refined, refined_value = float(grid[best]), float(values[best])

    threshold = refined_value + search.value_tol

    if values[0] <= threshold:
        alpha, value = 0.0, float(values[0])
    else:
        admissible = np.nonzero(values <= threshold)[0]
        if admissible.size and grid[admissible[0]] <= refined:
            right = float(grid[admissible[0]])
            left = float(grid[admissible[0] - 1])
        else:
            right = refined
            left = float(grid[np.searchsorted(grid, refined) - 1])

        # invariant: M(left) > threshold >= M(right)
        while right - left > search.refine_tol:
            mid = 0.5 * (left + right)
            if M(mid) <= threshold:
                right = mid
            else:
                left = mid
        alpha, value = right, M(right)

    plateau = (refined - alpha) > search.plateau_tol
    if plateau:
        logger.warning(
            "Flat minimum of M(alpha): least minimizer %.6f, refined minimizer %.6f",
            alpha, refined
        )
    logger.debug("alpha search: alpha=%.9f M=%.12g refined=%.9f", alpha, value, refined)

    return AlphaSelection(alpha=alpha, boosted_max=value, refined_alpha=refined, plateau=plateau)


def select_alpha(v: CircleFunction, search: Optional[SearchConfig] = None) -> float:
    """Smallest α in [0, 0.999] attaining min M(α) within tolerance."""
    return search_alpha(v, search).alpha


def classify_boosted_max(v: CircleFunction, alpha: float, value_tol: float = 1e-9) -> str:
    """
    Where the boosted maximum sits relative to θ̄ = ±π/2.

    Returns:
        'a' if a maximizing node lies within one grid step of |θ̄| = π/2,
        'b' if maximizing nodes straddle π/2 (some inside, some outside),
        'none' otherwise
    """
    boosted = _boost_f(v, alpha)
    vals = boosted.values
    top = vals.max()
    near_max = vals >= top - value_tol * max(1.0, abs(top))
    radius = np.abs(boosted.nodes)

    if np.any(near_max & (np.abs(radius - np.pi / 2) <= boosted.step + 1e-12)):
        return 'a'
    if np.any(near_max & (radius < np.pi / 2)) and np.any(near_max & (radius > np.pi / 2)):
        return 'b'
    return 'none'


def _record(
    v: CircleFunction,
    step: int,
    alpha: float,
    boost_max: float,
    renorm_scale: float,
    plateau: bool,
    scheme: str
) -> StepRecord:
    min_v = float(np.min(v.values))
    return StepRecord(
        step=step,
        alpha_n=alpha,
        F=functional_v(v, scheme),
        min_v=min_v,
        max_v=float(np.max(v.values)),
        max_vinv2=min_v ** -2,
        constraint=constraint_integral(v),
        boost_max=boost_max,
        renorm_scale=renorm_scale,
        plateau=plateau,
    )


def iterate_step(
    v: CircleFunction,
    search: Optional[SearchConfig] = None,
    scheme: str = 'central',
    target_constraint: Optional[float] = None,
    step: int = 1
) -> Tuple[CircleFunction, StepRecord]:
    """
    One boost-then-rearrange step.

    Args:
        v: Symmetric decreasing v-form
        search: α search settings
        scheme: Scheme for the recorded F
        target_constraint: Constraint to restore after the boost;
            defaults to ∫v⁻² of the input
        step: Index stored in the record

    Returns:
        (v_{n+1}, StepRecord)

    Raises:
        NotRearrangedError: If v is not symmetric decreasing
    """
    selection = search_alpha(v, search)
    target = constraint_integral(v) if target_constraint is None else target_constraint

    if selection.alpha == 0.0:
        boosted = v
    else:
        boosted = reparameterize(_boost_f(v, selection.alpha), 'v')

    # restore ∫v⁻² lost to interpolation
    scale = float(np.sqrt(constraint_integral(boosted) / target))
    if scale != 1.0:
        boosted = boosted.with_values(scale * boosted.values)

    out = rearrange(boosted)
    record = _record(out, step, selection.alpha, selection.boosted_max, scale, selection.plateau, scheme)
    return out, record


def run_iteration(
    v0: CircleFunction,
    max_steps: int = 200,
    flat_tol: float = 1e-3,
    search: Optional[SearchConfig] = None,
    scheme: str = 'central'
) -> IterationTrace:
    """
    Iterate until tail_flatness < flat_tol or max_steps steps.

    v0 is rearranged first; step 0 of the trace records it with α = 0.
    Non-convergence is reported through trace.converged, never raised.

    Example:
        >>> trace = run_iteration(CircleFunction(np.ones(64), role='v'))
        >>> trace.converged, len(trace.steps)
        (True, 1)
    """
    if v0.role != 'v':
        v0 = reparameterize(v0, 'v')

    v = rearrange(v0)
    target = constraint_integral(v)
    trace = IterationTrace()
    trace.steps.append(_record(v, 0, 0.0, float(np.max(v.values ** -2)), 1.0, False, scheme))

    for step in range(1, max_steps + 1):
        flatness = tail_flatness(v)
        if flatness < flat_tol:
            trace.converged = True
            break
        v, record = iterate_step(v, search, scheme, target_constraint=target, step=step)
        trace.steps.append(record)
        logger.debug(
            "step %d: alpha=%.6f F=%.12g min_v=%.12g", step, record.alpha_n, record.F, record.min_v
        )
    else:
        trace.converged = tail_flatness(v) < flat_tol

    trace.tail_flatness = tail_flatness(v)
    trace.final = v

    if trace.converged:
        logger.info("Iteration converged after %d steps", len(trace.steps) - 1)
    else:
        logger.info("Iteration stopped at max_steps=%d (tail flatness %.3g)", max_steps, trace.tail_flatness)
    return trace
