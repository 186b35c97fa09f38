"""Small helpers for functions that accept a scalar or an array."""

import numpy as np

from .errors import DomainError


def unit_interval(s) -> np.ndarray:
    s = np.asarray(s, dtype=float)
    if np.any(~((s >= 0.0) & (s <= 1.0))):
        raise DomainError(f"s must lie in [0, 1], got {s}")
    return s


def scalar_or_array(x):
    """A Python float for 0-d input, the array otherwise."""
    x = np.asarray(x)
    return float(x) if x.ndim == 0 else x
