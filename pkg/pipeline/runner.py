"""
Command-line runner for the circle Sobolev toolkit.

Every subcommand evaluates one family of checks and writes a report:
    JSON  {command, config, results[], assertions[]}
    CSV   per-step traces, spectra and Dirichlet series (other reports as a
          name/value/tolerance table)

Exit codes: 0 all assertions pass, 1 an assertion failed (named on stderr),
2 usage error.

Usage:
    python -m pipeline.runner critical --alpha 0.5
    python -m pipeline.runner spectrum --max-m 3
    python -m pipeline.runner dirichlet --m 0.5 --M 1 --c 6.2831853
    python -m pipeline.runner iterate --profile cosine --amplitude 0.3 --format csv
"""

import argparse
import io
import json
import logging
import os
import sys
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, TextIO

import numpy as np
import pandas as pd

from circle.grid import CircleFunction, normalize_constraint
from closed_forms.critical import critical_profile
from closed_forms.dirichlet import (
    BOUNDARY_TOL,
    DirichletSpec,
    dirichlet_energy_curve,
    dirichlet_solve,
    dirichlet_thresholds,
    energy_curve_report,
    threshold_continuity,
)
from functionals.sobolev import constraint_integral, el_residual, functional_v, inequality_report
from functionals.spectrum import second_variation_spectrum
from iteration.competing import SearchConfig, run_iteration
from iteration.diagnostics import DiagnosticTolerances, diagnose_trace
from oracle.corpus import CorpusSpec, random_corpus
from oracle.descent import descend_oracle
from oracle.variants import (
    LineProfile,
    interval_check,
    interval_profile_samples,
    line_vanishing_check,
    stereographic_check,
    vanishing_allowance,
    vanishing_check,
    vanishing_family,
)
from pipeline.profiles import PROFILE_NAMES, build_profile, load_profile_csv
from pipeline.settings import DEFAULT_CONFIG_PATH, RunConfig, apply_env_overrides, load_config


logger = logging.getLogger(__name__)

TOLERANCE_NAMES = (
    'slack', 'critical', 'el_residual', 'spectrum', 'step', 'boost', 'constraint',
    'product', 'stereo', 'interval', 'vanishing', 'dirichlet', 'oracle',
)

TRACE_COLUMNS = [
    'step', 'alpha_n', 'F', 'min_v', 'max_v', 'max_vinv2', 'constraint',
    'boost_max', 'renorm_scale', 'plateau',
]


def _num(value: float, tolerance: Optional[float] = None) -> Dict[str, Any]:
    return {'value': float(value), 'tolerance': None if tolerance is None else float(tolerance)}


class Report:
    """Results, assertions and an optional CSV table for one command."""

    def __init__(self, command: str, config: RunConfig):
        self.command = command
        self.config = config
        self.results: List[Dict[str, Any]] = []
        self.assertions: List[Dict[str, Any]] = []
        self.table: Optional[pd.DataFrame] = None

    def add(self, record: Dict[str, Any]) -> None:
        self.results.append(record)

    def check(self, name: str, passed: bool, value: float = None, tolerance: float = None) -> None:
        self.assertions.append({
            'name': name,
            'passed': bool(passed),
            'value': None if value is None else float(value),
            'tolerance': None if tolerance is None else float(tolerance),
        })

    @property
    def failures(self) -> List[str]:
        return [a['name'] for a in self.assertions if not a['passed']]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'command': self.command,
            'config': self.config.to_dict(),
            'results': self.results,
            'assertions': self.assertions,
        }


def export_json(report: Report, stream: TextIO):
    """Write the report as indented JSON."""
    json.dump(report.to_dict(), stream, indent=2)
    stream.write('\n')


def export_csv(report: Report, stream: TextIO):
    """
    Write the report table, or a name/value/tolerance table when the
    command has no natural table.
    """
    if report.table is not None:
        df = report.table
    else:
        rows = []
        for index, record in enumerate(report.results):
            for key, entry in record.items():
                if isinstance(entry, dict) and 'value' in entry:
                    rows.append({
                        'record': index,
                        'name': key,
                        'value': entry['value'],
                        'tolerance': entry['tolerance'],
                    })
        df = pd.DataFrame(rows, columns=['record', 'name', 'value', 'tolerance'])
    df.to_csv(stream, index=False)


# ----------------------------------------
# Inputs
# ----------------------------------------

def _profile_inputs(args, n: int, cfg: RunConfig) -> List[Dict[str, Any]]:
    """Functions to check: a corpus, a CSV input or one named profile."""
    if getattr(args, 'corpus', None):
        corpus_cfg = cfg.section('corpus')
        spec = CorpusSpec(
            seed=cfg.seed,
            count=args.corpus,
            max_harmonic=int(corpus_cfg.get('max_harmonic', 4)),
            amplitude_cap=float(corpus_cfg.get('amplitude_cap', 0.5)),
            positivity_floor=float(corpus_cfg.get('positivity_floor', 0.2)),
            n=n,
            smoothing=float(corpus_cfg.get('smoothing', 1e-3)),
        )
        return [{'label': f'corpus[{i}]', 'v': v} for i, v in enumerate(random_corpus(spec))]

    if getattr(args, 'input', None):
        return [{'label': str(args.input), 'v': load_profile_csv(Path(args.input))}]

    v = build_profile(
        args.profile,
        n,
        level=args.level,
        alpha=args.alpha,
        theta0=args.theta0,
        k=args.k,
        amplitude=args.amplitude,
        harmonic=args.harmonic,
    )
    return [{'label': args.profile, 'v': v}]


def _search_config(cfg: RunConfig) -> SearchConfig:
    search = cfg.section('search')
    return SearchConfig(
        scan_step=float(search.get('scan_step', 1.0 / 128)),
        alpha_max=float(search.get('alpha_max', 0.999)),
        refine_tol=float(search.get('refine_tol', 1e-9)),
        value_tol=float(search.get('value_tol', 1e-6)),
        plateau_tol=float(search.get('plateau_tol', 1e-4)),
    )


# ----------------------------------------
# Subcommands
# ----------------------------------------

def cmd_check(args, cfg: RunConfig, report: Report):
    tol = cfg.tol('slack', 1e-6)
    for item in _profile_inputs(args, cfg.n, cfg):
        r = inequality_report(item['v'], cfg.scheme)
        report.add({
            'profile': item['label'],
            'F': _num(r.F, tol),
            'constraint': _num(r.constraint, tol),
            'Q': _num(r.Q, tol),
            'bound': _num(r.bound, tol),
            'slack': _num(r.slack, tol),
        })
        report.check(f"{item['label']}: slack >= -{tol:g}", r.slack >= -tol, r.slack, tol)


def cmd_iterate(args, cfg: RunConfig, report: Report):
    it_cfg = cfg.section('iteration')
    n = args.n if args.n is not None else int(it_cfg.get('n', cfg.n))
    scheme = args.scheme or it_cfg.get('scheme', 'central')
    max_steps = args.max_steps if args.max_steps is not None else int(it_cfg.get('max_steps', 200))
    flat_tol = args.flat_tol if args.flat_tol is not None else float(it_cfg.get('flat_tol', 1e-3))
    tolerances = DiagnosticTolerances(
        step_tol=cfg.tol('step', 1e-10),
        boost_tol=cfg.tol('boost', 1e-6),
        constraint_tol=cfg.tol('constraint', 1e-8),
        product_tol=cfg.tol('product', 1e-6),
        flat_tol=flat_tol,
    )

    frames = []
    for item in _profile_inputs(args, n, cfg):
        trace = run_iteration(item['v'], max_steps, flat_tol, _search_config(cfg), scheme)
        diagnostics = diagnose_trace(trace, tolerances)

        df = pd.DataFrame([s.to_dict() for s in trace.steps], columns=TRACE_COLUMNS)
        df.insert(0, 'profile', item['label'])
        frames.append(df)

        last = trace.steps[-1]
        report.add({
            'profile': item['label'],
            'steps': _num(len(trace.steps) - 1, 0.0),
            'converged': bool(trace.converged),
            'tail_flatness': _num(trace.tail_flatness, flat_tol),
            'final_F': _num(last.F, tolerances.step_tol + tolerances.boost_tol),
            'final_min_v': _num(last.min_v, tolerances.step_tol + tolerances.boost_tol),
            'constraint': _num(last.constraint, tolerances.constraint_tol),
            'checks': {k: _num(v) for k, v in diagnostics.checks.items()},
        })
        report.check(f"{item['label']}: trace diagnostics", diagnostics.passed, len(diagnostics.violations))
        for violation in diagnostics.violations:
            report.check(f"{item['label']}: {violation}", False)

    report.table = pd.concat(frames, ignore_index=True)


def cmd_critical(args, cfg: RunConfig, report: Report):
    tol = cfg.tol('critical', 1e-8)
    el_tol = cfg.tol('el_residual', 1e-7)
    f = critical_profile(args.alpha, args.theta0, cfg.n)
    v = CircleFunction(f.values ** -0.5, role='v')

    residual = float(np.max(np.abs(el_residual(f, 'spectral').values)))
    r = inequality_report(v, cfg.scheme)
    report.add({
        'alpha': _num(args.alpha, 0.0),
        'theta0': _num(args.theta0, 0.0),
        'F': _num(r.F, tol),
        'Q': _num(r.Q, tol * 4 * np.pi ** 2),
        'slack': _num(r.slack, tol),
        'el_residual_max': _num(residual, el_tol),
    })
    report.check("F = -2*pi", abs(r.F + 2 * np.pi) <= tol, r.F, tol)
    report.check("slack = 0", abs(r.slack) <= tol, r.slack, tol)
    report.check("Euler-Lagrange residual", residual <= el_tol, residual, el_tol)


def cmd_spectrum(args, cfg: RunConfig, report: Report):
    tol = cfg.tol('spectrum', 1e-9)
    spectrum = second_variation_spectrum(args.max_m, scheme='spectral', tol=tol)
    rows = []
    for entry in spectrum.entries:
        expected = 8 * entry.m * (entry.m + 2)
        report.add({'m': _num(entry.m, 0.0), 'kappa': _num(entry.kappa, tol), 'dimension': _num(entry.dimension, 0.0)})
        rows.append({'m': entry.m, 'kappa': entry.kappa, 'dimension': entry.dimension})
        report.check(f"kappa_{entry.m} = {expected}", abs(entry.kappa - expected) <= tol * max(1, expected),
                     entry.kappa, tol)
        report.check(f"dimension_{entry.m} = 2", entry.dimension == 2, entry.dimension)
    report.table = pd.DataFrame(rows, columns=['m', 'kappa', 'dimension'])


def cmd_dirichlet(args, cfg: RunConfig, report: Report):
    d_cfg = cfg.section('dirichlet')
    tol = cfg.tol('dirichlet', 1e-6)
    boundary_tol = float(d_cfg.get('boundary_tol', BOUNDARY_TOL))
    thresholds = dirichlet_thresholds(args.m, args.M)
    report.add({'thresholds': {k: _num(v) for k, v in zip(
        ['c_M', 'c_ab', 'c_bc', 'c_lambda0', 'c_de', 'c_m'], thresholds.as_tuple())}})
    report.check("thresholds increasing", thresholds.is_increasing())

    if args.c is not None:
        solution = dirichlet_solve(DirichletSpec(m=args.m, M=args.M, c=args.c), boundary_tol)
        constraint = solution.constraint_by_quadrature()
        energy = solution.energy_by_quadrature()
        report.add({
            'case': solution.case,
            'c': _num(solution.c),
            'requested_c': _num(solution.requested_c),
            'lambda': _num(solution.lam, tol),
            'energy': _num(solution.energy, tol),
            'params': {k: _num(v) for k, v in solution.params.items()},
        })
        report.check("v(0) = M", abs(solution.evaluate(0.0) - args.M) <= 1e-9, solution.evaluate(0.0), 1e-9)
        report.check("v(pi) = m", abs(solution.evaluate(np.pi) - args.m) <= 1e-9, solution.evaluate(np.pi), 1e-9)
        report.check("constraint by quadrature", abs(constraint - solution.requested_c) <= 1e-7, constraint, 1e-7)
        report.check("energy by quadrature", abs(energy - solution.energy) <= tol, energy, tol)
        report.table = pd.DataFrame(
            [{'c': solution.c, 'energy': solution.energy, 'lam': solution.lam, 'case': solution.case}]
        )
        return

    points_count = args.points or int(d_cfg.get('sweep_points', 200))
    margin = float(d_cfg.get('sweep_margin', 1e-3))
    c_grid = np.linspace(thresholds.c_M + margin, thresholds.c_m - margin, points_count)
    points = dirichlet_energy_curve(args.m, args.M, c_grid, boundary_tol)
    summary = energy_curve_report(points)
    jumps = threshold_continuity(args.m, args.M, boundary_tol=boundary_tol)
    step = c_grid[1] - c_grid[0]

    report.add({
        'curve': {k: _num(v) for k, v in summary.items()},
        'threshold_jumps': {k: _num(v, 1e-5) for k, v in jumps.items()},
    })
    report.check("continuity at thresholds", max(jumps.values()) <= 1e-5, max(jumps.values()), 1e-5)
    report.check("lambda sign change at c_lambda0",
                 abs(summary['sign_change_c'] - thresholds.c_lambda0) <= step,
                 summary['sign_change_c'], step)
    report.check("minimum at c_lambda0", abs(summary['argmin_c'] - thresholds.c_lambda0) <= step,
                 summary['argmin_c'], step)
    report.table = pd.DataFrame(
        [{'c': p.c, 'energy': p.energy, 'lam': p.lam, 'case': p.case} for p in points],
        columns=['c', 'energy', 'lam', 'case'],
    )


def cmd_oracle(args, cfg: RunConfig, report: Report):
    o_cfg = cfg.section('oracle')
    n = args.n if args.n is not None else int(o_cfg.get('n', cfg.n))
    tol = cfg.tol('oracle', 1e-3)
    steps = args.steps if args.steps is not None else int(o_cfg.get('steps', 5000))
    rate = args.rate if args.rate is not None else float(o_cfg.get('rate', 0.1))

    for item in _profile_inputs(args, n, cfg):
        v0 = normalize_constraint(item['v'])
        F0 = functional_v(v0, 'spectral')
        _, F = descend_oracle(v0, steps, rate, 'spectral', float(o_cfg.get('min_rate', 1e-12)))
        report.add({'profile': item['label'], 'F_start': _num(F0), 'F_final': _num(F, tol)})
        report.check(f"{item['label']}: F -> -2*pi", abs(F + 2 * np.pi) <= tol, F, tol)


def cmd_stereo(args, cfg: RunConfig, report: Report):
    tol = cfg.tol('stereo', 1e-6)
    if args.line_profile == 'constant':
        target = LineProfile.constant(args.level)
    elif args.line_profile == 'half_angle':
        target = LineProfile.half_angle_equality(args.alpha, args.k)
    else:
        target = _profile_inputs(args, cfg.n, cfg)[0]['v']

    r = stereographic_check(target, args.variant, cfg.scheme, cfg.n)
    report.add({k: _num(v, tol) for k, v in r.to_dict().items()})
    report.check("line side = circle side / 2", r.residual <= tol, r.residual, tol)
    slack = r.extras['slack']
    report.check("line inequality", slack >= -tol, slack, tol)


def cmd_interval(args, cfg: RunConfig, report: Report):
    tol = cfg.tol('interval', 1e-6)
    m = cfg.n // 2
    if args.interval_profile == 'equality':
        samples = interval_profile_samples(args.length, m, args.alpha, args.k)
    else:
        s = args.length * np.arange(m + 1) / m
        samples = 1.0 + s / args.length

    r = interval_check(samples, args.length, cfg.scheme)
    report.add({'l': _num(args.length, 0.0), 'profile': args.interval_profile,
                **{k: _num(v, tol) for k, v in r.to_dict().items()}})
    report.check("interval inequality", r.slack >= -tol, r.slack, tol)
    if args.interval_profile == 'equality':
        report.check("equality profile slack = 0", abs(r.slack) <= tol, r.slack, tol)


def cmd_vanishing(args, cfg: RunConfig, report: Report):
    tol = cfg.tol('vanishing', 1e-6)
    profiles = {
        'abs_sin_half': lambda t: np.abs(np.sin(t / 2)),
        'sin_half_squared': lambda t: np.sin(t / 2) ** 2,
        'zero': lambda t: np.zeros_like(t),
    }
    # forward-difference energy of the sharp profile sits ≈ πh²/48 below ∫w²
    grid_tol = tol + vanishing_allowance(cfg.n, 'central')
    for name in args.profiles:
        w = CircleFunction.from_callable(profiles[name], cfg.n, smooth=False)
        lhs, rhs = vanishing_check(w, 'central')
        report.add({'profile': name, 'lhs': _num(lhs, grid_tol), 'rhs': _num(rhs, grid_tol)})
        report.check(f"{name}: 4*int(w'^2) >= int(w^2)", lhs >= rhs - grid_tol, lhs - rhs, grid_tol)

    line_profile = LineProfile.vanishing_at_origin()
    for variant in ('a', 'b'):
        lhs, rhs = line_vanishing_check(line_profile, variant)
        report.add({'profile': f'{line_profile.name} ({variant})', 'lhs': _num(lhs, tol), 'rhs': _num(rhs, tol)})
        report.check(f"line {variant}: weighted int((1+x^2) v_x^2) >= int(v^2/(1+x^2))",
                     lhs >= rhs - tol, lhs - rhs, tol)

    eps_values = [1e-1, 1e-2, 1e-3, 1e-4]
    constraints = [constraint_integral(vanishing_family(eps, cfg.n)) for eps in eps_values]
    report.add({'vanishing_family': [{'eps': _num(e, 0.0), 'constraint': _num(c)} for e, c in zip(eps_values, constraints)]})
    report.check("constraint grows as eps -> 0", bool(np.all(np.diff(constraints) > 0)))


COMMANDS = {
    'check': cmd_check,
    'iterate': cmd_iterate,
    'critical': cmd_critical,
    'spectrum': cmd_spectrum,
    'dirichlet': cmd_dirichlet,
    'oracle': cmd_oracle,
    'stereo': cmd_stereo,
    'interval': cmd_interval,
    'vanishing': cmd_vanishing,
}


# ----------------------------------------
# Parser
# ----------------------------------------

def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--n', type=int, default=None, help='grid size (even, >= 8)')
    common.add_argument('--scheme', choices=['spectral', 'central'], default=None)
    common.add_argument('--seed', type=int, default=None)
    common.add_argument('--format', choices=['json', 'csv'], default=None)
    common.add_argument('--out', type=Path, default=None, help='write the report here instead of stdout')
    common.add_argument('--config', type=Path, default=DEFAULT_CONFIG_PATH)
    common.add_argument('--log-level', default=None)
    for name in TOLERANCE_NAMES:
        common.add_argument(f"--tol-{name.replace('_', '-')}", dest=f'tol_{name}', type=float, default=None)
    return common


def _profile_parser() -> argparse.ArgumentParser:
    profile = argparse.ArgumentParser(add_help=False)
    profile.add_argument('--profile', choices=PROFILE_NAMES, default='cosine')
    profile.add_argument('--input', type=Path, default=None, help="CSV with a 'value' column")
    profile.add_argument('--corpus', type=int, default=None, help='run a seeded corpus of COUNT members')
    profile.add_argument('--level', type=float, default=1.0)
    profile.add_argument('--alpha', type=float, default=0.5)
    profile.add_argument('--theta0', type=float, default=0.0)
    profile.add_argument('--k', type=float, default=1.0)
    profile.add_argument('--amplitude', type=float, default=0.1)
    profile.add_argument('--harmonic', type=int, default=1)
    return profile


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='python -m pipeline.runner',
        description='Numerical checks of the sharp Sobolev inequality on the circle',
    )
    common = _common_parser()
    profile = _profile_parser()
    sub = parser.add_subparsers(dest='command', required=True)

    sub.add_parser('check', parents=[common, profile], help='inequality report on a profile or corpus')

    p = sub.add_parser('iterate', parents=[common, profile], help='competing-symmetries iteration')
    p.add_argument('--max-steps', type=int, default=None)
    p.add_argument('--flat-tol', type=float, default=None)

    p = sub.add_parser('critical', parents=[common], help='critical profile, residual and slack')
    p.add_argument('--alpha', type=float, default=0.5)
    p.add_argument('--theta0', type=float, default=0.0)

    p = sub.add_parser('spectrum', parents=[common], help='second-variation eigenvalues')
    p.add_argument('--max-m', type=int, default=3)

    p = sub.add_parser('dirichlet', parents=[common], help='constrained Dirichlet minimizers')
    p.add_argument('--m', type=float, required=True)
    p.add_argument('--M', type=float, required=True)
    p.add_argument('--c', type=float, default=None, help='solve at c; omit for a sweep')
    p.add_argument('--points', type=int, default=None)

    p = sub.add_parser('oracle', parents=[common, profile], help='projected descent oracle')
    p.add_argument('--steps', type=int, default=None)
    p.add_argument('--rate', type=float, default=None)

    p = sub.add_parser('stereo', parents=[common, profile], help='stereographic line forms')
    p.add_argument('--variant', choices=['a', 'b'], default='a')
    p.add_argument('--line-profile', choices=['constant', 'half_angle'], default=None)

    p = sub.add_parser('interval', parents=[common], help='interval form')
    p.add_argument('--length', type=float, default=np.pi)
    p.add_argument('--interval-profile', choices=['equality', 'linear'], default='equality')
    p.add_argument('--alpha', type=float, default=0.5)
    p.add_argument('--k', type=float, default=1.0)

    p = sub.add_parser('vanishing', parents=[common], help='vanishing-point form')
    p.add_argument('--profiles', nargs='+', choices=['abs_sin_half', 'sin_half_squared', 'zero'],
                   default=['abs_sin_half', 'sin_half_squared', 'zero'])

    return parser


def run_command(
    argv: List[str],
    environ: Optional[Mapping[str, str]] = None,
    stdout: Optional[TextIO] = None,
    stderr: Optional[TextIO] = None
) -> int:
    """
    Parse argv, run one subcommand and write its report.

    Returns:
        0 if every assertion passed, 1 if any failed, 2 on usage errors
    """
    environ = os.environ if environ is None else environ
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr

    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        config = apply_env_overrides(load_config(args.config), environ)
        cfg = RunConfig.from_sources(config, args)
    except (OSError, ValueError) as exc:
        stderr.write(f"usage error: {exc}\n")
        return 2

    level = args.log_level or cfg.section('logging').get('level', 'WARNING')
    logging.basicConfig(level=str(level).upper(), stream=stderr,
                        format='%(levelname)s %(name)s: %(message)s')

    report = Report(args.command, cfg)
    try:
        COMMANDS[args.command](args, cfg, report)
    except ValueError as exc:
        stderr.write(f"usage error: {exc}\n")
        return 2

    buffer = io.StringIO()
    if cfg.output_format == 'csv':
        export_csv(report, buffer)
    else:
        export_json(report, buffer)

    if args.out is not None:
        args.out.write_text(buffer.getvalue())
    else:
        stdout.write(buffer.getvalue())

    for name in report.failures:
        stderr.write(f"assertion failed: {name}\n")
    return 1 if report.failures else 0


def main():
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
