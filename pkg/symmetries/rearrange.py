"""
Cyclic symmetric decreasing rearrangement on the grid.

Samples are sorted in decreasing order (ties keep their original index order)
and placed organ-pipe style around θ = 0:
    rank 0        -> index n/2
    rank 2i − 1   -> index n/2 + i
    rank 2i       -> index n/2 − i
indices taken mod n, so the smallest sample lands at index 0 (θ = −π).

This placement maximizes the cyclic sum Σ v_j v_{j+1} over all orderings of
the same samples, hence Σ (v_{j+1} − v_j)² can only go down.
"""

import numpy as np

from circle.grid import CircleFunction


def placement_indices(n: int) -> np.ndarray:
    """Target index for each rank in decreasing order."""
    ranks = np.arange(n)
    half = n // 2
    offsets = np.where(ranks % 2 == 1, (ranks + 1) // 2, -(ranks // 2))
    return (half + offsets) % n


def rearrange(v: CircleFunction) -> CircleFunction:
    """
    Symmetric decreasing rearrangement v* of the samples.

    Returns:
        CircleFunction with the same sample multiset, peak at index n/2.
        The smooth flag is cleared unless the samples were already in place.

    Example:
        >>> u = CircleFunction([1, 4, 0.5, 3, 2, 3, 1, 2])
        >>> rearrange(u).values
        array([0.5, 1. , 2. , 3. , 4. , 3. , 2. , 1. ])
    """
    order = np.argsort(-v.values, kind='stable')
    out = np.empty(v.n)
    out[placement_indices(v.n)] = v.values[order]

    if np.array_equal(out, v.values):
        return v
    return v.with_values(out, smooth=False)


def is_symmetric_decreasing(u: CircleFunction, tol: float = 0.0) -> bool:
    """
    True if samples do not increase walking from index n/2 toward index 0
    in either direction (up to tol).
    """
    half = u.n // 2
    vals = u.values
    right = np.append(vals[half:], vals[0])
    left = vals[half::-1]
    return bool(np.all(np.diff(right) <= tol) and np.all(np.diff(left) <= tol))


def cyclic_difference_energy(values) -> float:
    """Σ_j (v_{j+1} − v_j)² with periodic wraparound."""
    arr = np.asarray(values, dtype=float)
    return float(np.sum((np.roll(arr, -1) - arr) ** 2))
