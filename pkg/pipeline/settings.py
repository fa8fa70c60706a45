"""
Run configuration: YAML defaults, SOBOLEV_* environment overrides, CLI flags.

Precedence: CLI flag > environment > YAML file > built-in default.
"""

import copy
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Mapping, Optional

import yaml


DEFAULT_CONFIG_PATH = Path(__file__).resolve().parent.parent / 'config' / 'toolkit_params.yaml'

ENV_PREFIX = 'SOBOLEV_'

REQUIRED_SECTIONS = ['grid', 'tolerances']


def load_config(config_path: Path = DEFAULT_CONFIG_PATH) -> Dict[str, Any]:
    """Load toolkit parameters from YAML config."""
    with open(config_path, 'r') as f:
        config = yaml.safe_load(f) or {}

    for key in REQUIRED_SECTIONS:
        if key not in config:
            raise ValueError(f"Missing required parameter: {key}")
    return config


def apply_env_overrides(config: Dict[str, Any], environ: Mapping[str, str]) -> Dict[str, Any]:
    """
    Return a copy of config with SOBOLEV_* variables applied.

    Recognized:
        SOBOLEV_N, SOBOLEV_SCHEME, SOBOLEV_SEED, SOBOLEV_FORMAT,
        SOBOLEV_TOL_<NAME> (lower-cased into tolerances.<name>)
    """
    out = copy.deepcopy(config)
    out.setdefault('grid', {})
    out.setdefault('tolerances', {})
    out.setdefault('corpus', {})
    out.setdefault('output', {})

    for key, raw in environ.items():
        if not key.startswith(ENV_PREFIX):
            continue
        name = key[len(ENV_PREFIX):]
        if name == 'N':
            out['grid']['n'] = int(raw)
        elif name == 'SCHEME':
            out['grid']['scheme'] = raw
        elif name == 'SEED':
            out['corpus']['seed'] = int(raw)
        elif name == 'FORMAT':
            out['output']['format'] = raw
        elif name.startswith('TOL_'):
            out['tolerances'][name[4:].lower()] = float(raw)
    return out


@dataclass
class RunConfig:
    n: int = 2048
    scheme: str = 'spectral'
    seed: int = 42
    tolerances: Dict[str, float] = field(default_factory=dict)
    output_format: str = 'json'
    sections: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.n < 8 or self.n % 2 != 0:
            raise ValueError(f"Grid size must be even and >= 8 (got n={self.n})")
        if self.scheme not in ('spectral', 'central'):
            raise ValueError(f"Unknown scheme: {self.scheme}")
        if self.output_format not in ('json', 'csv'):
            raise ValueError(f"Unknown output format: {self.output_format}")
        for name, value in self.tolerances.items():
            if not value > 0:
                raise ValueError(f"Tolerance {name} must be positive (got {value})")

    @classmethod
    def from_sources(cls, config: Dict[str, Any], args: Optional[Any] = None) -> 'RunConfig':
        """Merge a loaded (and env-overridden) config with parsed CLI args."""
        grid = config.get('grid', {})
        tolerances = dict(config.get('tolerances', {}))
        n = grid.get('n', 2048)
        scheme = grid.get('scheme', 'spectral')
        seed = config.get('corpus', {}).get('seed', 42)
        output_format = config.get('output', {}).get('format', 'json')

        if args is not None:
            n = args.n if getattr(args, 'n', None) is not None else n
            scheme = args.scheme if getattr(args, 'scheme', None) is not None else scheme
            seed = args.seed if getattr(args, 'seed', None) is not None else seed
            output_format = args.format if getattr(args, 'format', None) is not None else output_format
            for key, value in vars(args).items():
                if key.startswith('tol_') and value is not None:
                    tolerances[key[4:]] = float(value)

        return cls(
            n=int(n),
            scheme=scheme,
            seed=int(seed),
            tolerances=tolerances,
            output_format=output_format,
            sections=config,
        )

    def tol(self, name: str, default: float) -> float:
        return float(self.tolerances.get(name, default))

    def section(self, name: str) -> Dict[str, Any]:
        return dict(self.sections.get(name, {}) or {})

    def to_dict(self) -> Dict[str, Any]:
        return {
            'n': self.n,
            'scheme': self.scheme,
            'seed': self.seed,
            'tolerances': dict(sorted(self.tolerances.items())),
            'format': self.output_format,
        }
