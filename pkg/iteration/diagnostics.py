"""
Trace diagnostics for the competing-symmetries iteration.

Checks, per step n → n+1:
    F_{n+1} ≤ F_n                 (up to step_tol + boost_tol)
    min v_{n+1} ≥ min v_n
    max v_{n+1}⁻² ≤ max v_n⁻²
    |C_n − C_0| ≤ constraint_tol

Whole-trace bounds on m_n = max v_n⁻²:
    Π sqrt(1 − α_n²)          ≥ m_final / m_0 − product_tol
    Π sqrt((1 − α_n)/(1 + α_n)) ≤ m_final / m_0 + product_tol
The second bound comes from θ̄ = π, a fixed node of every boost; the
critical family attains it with equality.

When the final iterate is flat on |θ| ≥ π/2, also:
    normalized min v ∈ [√2/2, 1]
    F ≥ (16/π)(M − m)² − πM² − πm²      (M = max v, m = min v)
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List

import numpy as np

from iteration.competing import IterationTrace


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DiagnosticTolerances:
    step_tol: float = 1e-10
    boost_tol: float = 1e-6
    constraint_tol: float = 1e-8
    product_tol: float = 1e-6
    flat_tol: float = 1e-3


@dataclass
class DiagnosticsReport:
    passed: bool = True
    violations: List[str] = field(default_factory=list)
    checks: Dict[str, float] = field(default_factory=dict)

    def fail(self, message: str) -> None:
        self.passed = False
        self.violations.append(message)


def diagnose_trace(trace: IterationTrace, tolerances: DiagnosticTolerances = None) -> DiagnosticsReport:
    """
    Check a trace against the monotonicity and product bounds.

    Args:
        trace: Non-empty iteration trace
        tolerances: Per-check tolerances

    Returns:
        DiagnosticsReport; each violation names its step

    Raises:
        ValueError: If the trace has no steps
    """
    if not trace.steps:
        raise ValueError("Cannot diagnose an empty trace")
    tol = tolerances or DiagnosticTolerances()
    report = DiagnosticsReport()
    steps = trace.steps
    per_step = tol.step_tol + tol.boost_tol

    C0 = steps[0].constraint
    for prev, cur in zip(steps, steps[1:]):
        if cur.F > prev.F + per_step:
            report.fail(f"step {cur.step}: F increased by {cur.F - prev.F:.3e}")
        if cur.min_v < prev.min_v - per_step:
            report.fail(f"step {cur.step}: min_v decreased by {prev.min_v - cur.min_v:.3e}")
        if cur.max_vinv2 > prev.max_vinv2 + per_step:
            report.fail(f"step {cur.step}: max_vinv2 increased by {cur.max_vinv2 - prev.max_vinv2:.3e}")
        if abs(cur.constraint - C0) > tol.constraint_tol:
            report.fail(f"step {cur.step}: constraint drifted by {cur.constraint - C0:.3e}")

    alphas = np.array([s.alpha_n for s in steps[1:]])
    ratio = steps[-1].max_vinv2 / steps[0].max_vinv2
    upper = float(np.prod(np.sqrt(1.0 - alphas ** 2)))
    lower = float(np.prod(np.sqrt((1.0 - alphas) / (1.0 + alphas))))
    report.checks['max_vinv2_ratio'] = ratio
    report.checks['product_upper'] = upper
    report.checks['product_lower'] = lower

    if upper < ratio - tol.product_tol:
        report.fail(f"step {steps[-1].step}: product bound {upper:.9f} < ratio {ratio:.9f}")
    if lower > ratio + tol.product_tol:
        report.fail(f"step {steps[-1].step}: lower product {lower:.9f} > ratio {ratio:.9f}")

    sup_max_v = max(s.max_v for s in steps)
    report.checks['sup_max_v'] = sup_max_v
    if not np.isfinite(sup_max_v):
        report.fail("max v is unbounded along the trace")

    if np.isfinite(trace.tail_flatness) and trace.tail_flatness < tol.flat_tol:
        _check_flat_class(report, trace, tol)

    if report.violations:
        logger.info("Trace diagnostics: %d violation(s)", len(report.violations))
    return report


def _check_flat_class(report: DiagnosticsReport, trace: IterationTrace, tol: DiagnosticTolerances) -> None:
    last = trace.steps[-1]
    normalized_min = last.min_v * np.sqrt(last.constraint / (2.0 * np.pi))
    report.checks['normalized_min_v'] = float(normalized_min)

    low = np.sqrt(2.0) / 2.0 - tol.flat_tol - 1e-6
    if not low <= normalized_min <= 1.0 + 1e-6:
        report.fail(
            f"step {last.step}: normalized min v {normalized_min:.9f} outside [sqrt(2)/2, 1]"
        )

    M, m = last.max_v, last.min_v
    flat_bound = 16.0 / np.pi * (M - m) ** 2 - np.pi * M ** 2 - np.pi * m ** 2
    report.checks['flat_class_bound'] = float(flat_bound)
    slack_tol = tol.flat_tol * (32.0 / np.pi * M + 2.0 * np.pi * M) + tol.boost_tol
    if last.F < flat_bound - slack_tol:
        report.fail(f"step {last.step}: F {last.F:.9f} below flat-class bound {flat_bound:.9f}")
