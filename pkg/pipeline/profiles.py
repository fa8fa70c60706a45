"""
Input profiles for the command line: named closed forms or a CSV of samples.

Named profiles (v-form):
    constant  v ≡ level
    nu        v⁻² = k·sqrt(1−α²)/(1 − α cos(θ − θ₀))
    cosine    v = 1 + amplitude·cos(harmonic·θ)
    critical  v⁻² = sqrt(1−α²)/(1 + α cos(θ − θ₀))
"""

from pathlib import Path

import numpy as np
import pandas as pd

from circle.grid import CircleFunction
from closed_forms.critical import critical_v_profile
from symmetries.lorentz import NuProfile


PROFILE_NAMES = ('constant', 'nu', 'cosine', 'critical')


def build_profile(
    name: str,
    n: int,
    level: float = 1.0,
    alpha: float = 0.5,
    theta0: float = 0.0,
    k: float = 1.0,
    amplitude: float = 0.1,
    harmonic: int = 1
) -> CircleFunction:
    """
    Sample a named profile on an n-point grid.

    Raises:
        ValueError: Unknown name or parameters outside the profile's domain
    """
    if name == 'constant':
        if level <= 0:
            raise ValueError(f"constant level must be positive (got {level})")
        return CircleFunction(np.full(n, float(level)), role='v')
    if name == 'nu':
        return NuProfile(alpha=alpha, center=theta0, k=k).as_circle_function(n, role='v')
    if name == 'cosine':
        if abs(amplitude) >= 1:
            raise ValueError(f"cosine amplitude must be < 1 in magnitude (got {amplitude})")
        return CircleFunction.from_callable(
            lambda t: 1.0 + amplitude * np.cos(harmonic * t), n, role='v'
        )
    if name == 'critical':
        return critical_v_profile(alpha, theta0, n)
    raise ValueError(f"Unknown profile: {name}. Available: {list(PROFILE_NAMES)}")


def load_profile_csv(path: Path, column: str = 'value', smooth: bool = False) -> CircleFunction:
    """
    Read v-form samples from a CSV column (one row per node, θ_0 = −π first).

    Raises:
        ValueError: If the column is missing
    """
    df = pd.read_csv(path)
    if column not in df.columns:
        raise ValueError(f"Missing required column: {column}. Available: {list(df.columns)}")
    return CircleFunction(df[column].to_numpy(dtype=float), role='v', smooth=smooth)
