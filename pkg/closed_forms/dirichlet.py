"""
Minimizers of the Dirichlet energy E = ∫₀^π (v′)² dθ over nonincreasing v on
[0, π] with v(0) = M, v(π) = m and ∫₀^π v⁻² dθ = c.

The Euler–Lagrange relation v″·v³ = λ makes v² a quadratic wherever v is
not held at M or m, and the energy is always
    E = μ·L − λ·∫ v⁻²     (w = v² = μθ² + ..., integrated over the free part)
with dE/dc = λ.

Thresholds in c (D = sqrt(M² − m²)):
    c_M      = π/M²
    c_ab     = π/(2MD)·log((M + D)/(M − D))
    c_bc     = π/(M² − m²)·log(M²/m²)
    c_lambda0 = π/(mM)
    c_de     = π/(mD)·arctan(D/m)
    c_m      = π/m²

Cases:
    a  (c_M,  c_ab)  v = M on [0, α], then v² = M² − K(θ−α)²
    b  [c_ab, c_bc)  v² = M² − 2kaθ − k²θ²,  λ < 0
    c  c = c_bc      v² = M² − (M² − m²)θ/π
    d  (c_bc, c_de]  v² = M² − 2kAθ + k²θ²,  λ changes sign at c_lambda0
    e  (c_de, c_m)   v² = m² + K(θ−β)² on [0, β), then v = m
Cases b and d are parameterized by t = λ/μ; c(t) comes from quadrature.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np
from scipy.integrate import simpson
from scipy.optimize import bisect


logger = logging.getLogger(__name__)

CASES = ('a', 'b', 'c', 'd', 'e')

# Half-open composite rule size for c(t)
QUADRATURE_NODES = 4097

# |c − c_bc| below which case c is returned directly; round-off of c_bc only
BOUNDARY_TOL = 1e-12

_XTOL = 1e-14


class BracketError(RuntimeError):
    """Raised when a case solve cannot bracket its root."""
    pass


@dataclass(frozen=True)
class DirichletSpec:
    m: float
    M: float
    c: float

    def __post_init__(self):
        if not 0 < self.m < self.M:
            raise ValueError(f"Need 0 < m < M (got m={self.m}, M={self.M})")
        lo, hi = np.pi / self.M ** 2, np.pi / self.m ** 2
        if not lo < self.c < hi:
            raise ValueError(
                f"c={self.c} outside the open interval ({lo:.9f}, {hi:.9f})"
            )


@dataclass(frozen=True)
class ThresholdSet:
    c_M: float
    c_ab: float
    c_bc: float
    c_lambda0: float
    c_de: float
    c_m: float

    def as_tuple(self):
        return (self.c_M, self.c_ab, self.c_bc, self.c_lambda0, self.c_de, self.c_m)

    def is_increasing(self) -> bool:
        return bool(np.all(np.diff(self.as_tuple()) > 0))


def dirichlet_thresholds(m: float, M: float) -> ThresholdSet:
    """
    Case boundaries in c for levels 0 < m < M.

    Example:
        >>> dirichlet_thresholds(0.5, 1.0).c_ab
        4.777...  # approximately
    """
    if not 0 < m < M:
        raise ValueError(f"Need 0 < m < M (got m={m}, M={M})")
    D = np.sqrt(M ** 2 - m ** 2)
    return ThresholdSet(
        c_M=np.pi / M ** 2,
        c_ab=np.pi / (2.0 * M * D) * np.log((M + D) / (M - D)),
        c_bc=np.pi / (M ** 2 - m ** 2) * np.log(M ** 2 / m ** 2),
        c_lambda0=np.pi / (m * M),
        c_de=np.pi / (m * D) * np.arctan(D / m),
        c_m=np.pi / m ** 2,
    )


@dataclass
class DirichletSolution:
    """
    Closed-form minimizer on [0, π].

    params holds the case parameters:
        a: alpha, K         b/d: t, k, mu, Lambda
        c: slope            e: beta, K
    """
    case: str
    m: float
    M: float
    c: float
    lam: float
    energy: float
    params: Dict[str, float] = field(default_factory=dict)
    requested_c: Optional[float] = None

    def _w(self, theta: np.ndarray) -> np.ndarray:
        p, M, m = self.params, self.M, self.m
        if self.case == 'a':
            s = np.clip(theta - p['alpha'], 0.0, None)
            return M ** 2 - p['K'] * s ** 2
        if self.case == 'b':
            return M ** 2 - 2.0 * p['k'] * p['a'] * theta - p['k'] ** 2 * theta ** 2
        if self.case == 'c':
            return M ** 2 - (M ** 2 - m ** 2) * theta / np.pi
        if self.case == 'd':
            return M ** 2 - 2.0 * p['k'] * p['A'] * theta + p['k'] ** 2 * theta ** 2
        s = np.clip(p['beta'] - theta, 0.0, None)
        return m ** 2 + p['K'] * s ** 2

    def _dw(self, theta: np.ndarray) -> np.ndarray:
        p, M, m = self.params, self.M, self.m
        if self.case == 'a':
            return -2.0 * p['K'] * np.clip(theta - p['alpha'], 0.0, None)
        if self.case == 'b':
            return -2.0 * p['k'] * p['a'] - 2.0 * p['k'] ** 2 * theta
        if self.case == 'c':
            return np.full_like(theta, -(M ** 2 - m ** 2) / np.pi)
        if self.case == 'd':
            return -2.0 * p['k'] * p['A'] + 2.0 * p['k'] ** 2 * theta
        return -2.0 * p['K'] * np.clip(p['beta'] - theta, 0.0, None)

    def evaluate(self, theta):
        """v₀(θ) on [0, π]."""
        theta_arr = np.asarray(theta, dtype=float)
        out = np.sqrt(self._w(theta_arr))
        return float(out) if out.ndim == 0 else out

    def derivative(self, theta):
        """v₀′(θ) = w′/(2v)."""
        theta_arr = np.asarray(theta, dtype=float)
        out = self._dw(theta_arr) / (2.0 * np.sqrt(self._w(theta_arr)))
        return float(out) if out.ndim == 0 else out

    @property
    def breakpoint(self) -> Optional[float]:
        if self.case == 'a':
            return self.params['alpha']
        if self.case == 'e':
            return self.params['beta']
        return None

    def _piecewise_integral(self, integrand) -> float:
        edges = [0.0, np.pi]
        if self.breakpoint is not None and 0.0 < self.breakpoint < np.pi:
            edges = [0.0, self.breakpoint, np.pi]
        total = 0.0
        for lo, hi in zip(edges, edges[1:]):
            theta = np.linspace(lo, hi, QUADRATURE_NODES)
            total += simpson(integrand(theta), x=theta)
        return float(total)

    def constraint_by_quadrature(self) -> float:
        """∫₀^π v₀⁻² dθ."""
        return self._piecewise_integral(lambda t: 1.0 / self._w(t))

    def energy_by_quadrature(self) -> float:
        """∫₀^π (v₀′)² dθ."""
        return self._piecewise_integral(lambda t: self.derivative(t) ** 2)

    def multiplier_by_finite_difference(self, theta: Optional[float] = None, h: float = 1e-4) -> float:
        """v₀″·v₀³ at an interior point of the free part."""
        if theta is None:
            if self.case == 'a':
                theta = 0.5 * (self.params['alpha'] + np.pi)
            elif self.case == 'e':
                theta = 0.5 * self.params['beta']
            else:
                theta = 0.5 * np.pi
        v = self.evaluate(theta)
        d2v = (self.evaluate(theta + h) - 2.0 * v + self.evaluate(theta - h)) / h ** 2
        return float(d2v * v ** 3)

    def to_dict(self) -> dict:
        return {
            'case': self.case,
            'm': self.m,
            'M': self.M,
            'c': self.c,
            'requested_c': self.c if self.requested_c is None else self.requested_c,
            'lambda': self.lam,
            'energy': self.energy,
            'params': dict(self.params),
        }


def _constraint_of_w(w_func) -> float:
    theta = np.linspace(0.0, np.pi, QUADRATURE_NODES)
    return float(simpson(1.0 / w_func(theta), x=theta))


def _solve_case_a(m: float, M: float, c: float) -> DirichletSolution:
    D = np.sqrt(M ** 2 - m ** 2)
    log_term = np.log((M + D) / (M - D))

    def c_of_alpha(alpha):
        return alpha / M ** 2 + (np.pi - alpha) / (2.0 * M * D) * log_term

    alpha = bisect(lambda a: c_of_alpha(a) - c, 0.0, np.pi, xtol=_XTOL)
    L = np.pi - alpha
    K = (M ** 2 - m ** 2) / L ** 2
    lam = -K * M ** 2
    energy = -(M ** 2 - m ** 2) / L + M * D / (2.0 * L) * log_term
    return DirichletSolution('a', m, M, c, lam, energy, {'alpha': alpha, 'K': K})


def _solve_case_e(m: float, M: float, c: float) -> DirichletSolution:
    D = np.sqrt(M ** 2 - m ** 2)
    atan_term = np.arctan(D / m)

    def c_of_beta(beta):
        return (np.pi - beta) / m ** 2 + beta / (m * D) * atan_term

    beta = bisect(lambda b: c_of_beta(b) - c, 0.0, np.pi, xtol=_XTOL)
    K = (M ** 2 - m ** 2) / beta ** 2
    lam = K * m ** 2
    energy = (M ** 2 - m ** 2) / beta - m * D / beta * atan_term
    return DirichletSolution('e', m, M, c, lam, energy, {'beta': beta, 'K': K})


def _case_b_params(m: float, M: float, w: float) -> Dict[str, float]:
    t = M ** 2 + w / (1.0 - w)
    a = np.sqrt(t - M ** 2)
    b = np.sqrt(t - m ** 2)
    k = (M ** 2 - m ** 2) / (np.pi * (a + b))
    return {'t': t, 'a': a, 'k': k, 'mu': -k ** 2, 'Lambda': a / k}


def _case_d_params(m: float, M: float, w: float) -> Dict[str, float]:
    t = m ** 2 - w / (1.0 - w)
    A = np.sqrt(M ** 2 - t)
    B = np.sqrt(m ** 2 - t)
    k = (M ** 2 - m ** 2) / (np.pi * (A + B))
    return {'t': t, 'A': A, 'k': k, 'mu': k ** 2, 'Lambda': -A / k}


def _solve_quadratic_case(case: str, m: float, M: float, c: float) -> DirichletSolution:
    """Cases b and d: bisection in w ∈ [0, 1) with t = t(w) and c(t) by quadrature."""
    make_params = _case_b_params if case == 'b' else _case_d_params

    def c_minus_target(w):
        p = make_params(m, M, w)
        if case == 'b':
            w_func = lambda th: M ** 2 - 2.0 * p['k'] * p['a'] * th - p['k'] ** 2 * th ** 2
        else:
            w_func = lambda th: M ** 2 - 2.0 * p['k'] * p['A'] * th + p['k'] ** 2 * th ** 2
        return _constraint_of_w(w_func) - c

    lo_value = c_minus_target(0.0)
    if lo_value == 0.0:
        w_root = 0.0
    else:
        hi = None
        for exponent in range(1, 16):
            candidate = 1.0 - 10.0 ** (-exponent)
            if np.sign(c_minus_target(candidate)) != np.sign(lo_value):
                hi = candidate
                break
        if hi is None:
            raise BracketError(
                f"case {case}: c(t) does not bracket c={c} for m={m}, M={M}; "
                f"threshold classification is inconsistent"
            )
        w_root = bisect(c_minus_target, 0.0, hi, xtol=_XTOL)
        logger.debug("case %s: w=%.15f bracket [0, %.12f]", case, w_root, hi)

    p = make_params(m, M, w_root)
    lam = p['t'] * p['mu']
    energy = p['mu'] * np.pi - lam * c
    return DirichletSolution(case, m, M, c, lam, energy, p)


def _case_c(m: float, M: float, c_bc: float, requested: float) -> DirichletSolution:
    slope = (M ** 2 - m ** 2) / np.pi
    lam = -(M ** 2 - m ** 2) ** 2 / (4.0 * np.pi ** 2)
    energy = (M ** 2 - m ** 2) / (4.0 * np.pi) * np.log(M ** 2 / m ** 2)
    return DirichletSolution('c', m, M, c_bc, lam, energy, {'slope': slope}, requested_c=requested)


def classify(c: float, thresholds: ThresholdSet, boundary_tol: float = BOUNDARY_TOL) -> str:
    """Case letter for c given the thresholds."""
    if abs(c - thresholds.c_bc) <= boundary_tol:
        return 'c'
    if c < thresholds.c_ab:
        return 'a'
    if c < thresholds.c_bc:
        return 'b'
    if c <= thresholds.c_de:
        return 'd'
    return 'e'


def dirichlet_solve(spec: DirichletSpec, boundary_tol: float = BOUNDARY_TOL) -> DirichletSolution:
    """
    Classify c against the thresholds and solve the matching case.

    Args:
        spec: Levels m < M and target constraint c
        boundary_tol: Width of the band around c_bc answered by case c

    Returns:
        DirichletSolution

    Raises:
        ValueError: If c is outside (π/M², π/m²)
        BracketError: If a case b/d solve cannot bracket its root
    """
    m, M, c = spec.m, spec.M, spec.c
    thresholds = dirichlet_thresholds(m, M)
    case = classify(c, thresholds, boundary_tol)
    logger.debug("dirichlet c=%.9f -> case %s", c, case)

    if case == 'a':
        solution = _solve_case_a(m, M, c)
    elif case == 'e':
        solution = _solve_case_e(m, M, c)
    elif case == 'c':
        solution = _case_c(m, M, thresholds.c_bc, requested=c)
    else:
        solution = _solve_quadratic_case(case, m, M, c)

    if solution.requested_c is None:
        solution.requested_c = c
    return solution


@dataclass(frozen=True)
class EnergyPoint:
    c: float
    energy: float
    lam: float
    case: str


def dirichlet_energy_curve(
    m: float,
    M: float,
    c_grid: Sequence[float],
    boundary_tol: float = BOUNDARY_TOL
) -> List[EnergyPoint]:
    """Solve at every c in c_grid, in order."""
    points = []
    for c in c_grid:
        sol = dirichlet_solve(DirichletSpec(m=m, M=M, c=float(c)), boundary_tol)
        points.append(EnergyPoint(c=float(c), energy=sol.energy, lam=sol.lam, case=sol.case))
    return points


def energy_curve_report(points: Sequence[EnergyPoint]) -> Dict[str, float]:
    """
    Shape diagnostics of a sampled E(c) curve.

    Returns:
        Dict with:
            max_case_jump: largest |ΔE| between neighbours in different cases
            max_slope_error: largest relative |dE/dc − λ| at interior points
                whose neighbours share their case and |λ| > 1e-3
            argmin_c, min_energy: sampled minimum
            sign_change_c: first c where λ turns nonnegative (nan if none)
    """
    c = np.array([p.c for p in points])
    E = np.array([p.energy for p in points])
    lam = np.array([p.lam for p in points])
    cases = [p.case for p in points]

    jumps = [abs(E[i + 1] - E[i]) for i in range(len(points) - 1) if cases[i] != cases[i + 1]]

    slope_errors = []
    for i in range(1, len(points) - 1):
        if cases[i - 1] == cases[i] == cases[i + 1] and abs(lam[i]) > 1e-3:
            slope = (E[i + 1] - E[i - 1]) / (c[i + 1] - c[i - 1])
            slope_errors.append(abs(slope - lam[i]) / abs(lam[i]))

    nonneg = np.nonzero(lam >= 0)[0]
    best = int(np.argmin(E))
    return {
        'max_case_jump': float(max(jumps)) if jumps else 0.0,
        'max_slope_error': float(max(slope_errors)) if slope_errors else 0.0,
        'argmin_c': float(c[best]),
        'min_energy': float(E[best]),
        'sign_change_c': float(c[nonneg[0]]) if nonneg.size else float('nan'),
    }


def threshold_continuity(m: float, M: float, delta: float = 1e-6, boundary_tol: float = BOUNDARY_TOL) -> Dict[str, float]:
    """|E(c + delta) − E(c − delta)| at each interior threshold."""
    thresholds = dirichlet_thresholds(m, M)
    pairs = {
        'c_ab': (thresholds.c_ab - delta, thresholds.c_ab + delta),
        'c_bc': (thresholds.c_bc - delta, thresholds.c_bc + delta),
        'c_lambda0': (thresholds.c_lambda0 - delta, thresholds.c_lambda0 + delta),
        'c_de': (thresholds.c_de - delta, thresholds.c_de + delta),
    }
    jumps = {}
    for name, (lo, hi) in pairs.items():
        e_lo = dirichlet_solve(DirichletSpec(m=m, M=M, c=lo), boundary_tol).energy
        e_hi = dirichlet_solve(DirichletSpec(m=m, M=M, c=hi), boundary_tol).energy
        jumps[name] = abs(e_hi - e_lo)
    return jumps


def energy_versus_min_level(M: float, c: float, m_values: Sequence[float]) -> List[float]:
    """Minimum energy at fixed M and c for each m; grows without bound as m → 0."""
    return [dirichlet_solve(DirichletSpec(m=m, M=M, c=c)).energy for m in m_values]
