"""Derivative-free scalar searches, vectorized elementwise over numpy arrays.

Every routine accepts array-valued parameters and runs one independent search
per element. Golden-section brackets all shrink by the same factor per step,
so the elements advance in lockstep and the iteration count matches the
scalar case.
"""

import math
from typing import Callable, NamedTuple

import numpy as np

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
S_TOL = 1e-10
MAX_ITER = 200


class ScalarMax(NamedTuple):
    x: np.ndarray
    value: np.ndarray
    iterations: int


def golden_section_max(
    f: Callable[[np.ndarray], np.ndarray],
    lo,
    hi,
    tol: float = S_TOL,
    max_iter: int = MAX_ITER,
) -> ScalarMax:
    """Maximize unimodal functions on ``[lo, hi]``, one per array element.

    ``f`` maps an array of abscissae to values of the same shape. The bracket
    shrinks until narrower than ``tol`` or ``max_iter`` steps have run; the
    endpoints are compared at the end so a boundary maximum is exact.
    """
    lo, hi = np.broadcast_arrays(np.asarray(lo, dtype=float), np.asarray(hi, dtype=float))
    a, b = lo.copy(), hi.copy()
    x1 = b - INV_PHI * (b - a)
    x2 = a + INV_PHI * (b - a)
    f1, f2 = f(x1), f(x2)
    it = 0
    while np.max(b - a, initial=0.0) > tol and it < max_iter:
        left = f1 >= f2
        a = np.where(left, a, x1)
        b = np.where(left, x2, b)
        probe = np.where(left, b - INV_PHI * (b - a), a + INV_PHI * (b - a))
        fp = f(probe)
        x1, x2 = np.where(left, probe, x2), np.where(left, x1, probe)
        f1, f2 = np.where(left, fp, f2), np.where(left, f1, fp)
        it += 1
    xs = np.stack([x1, x2, lo, hi])
    fs = np.stack([f1, f2, f(lo), f(hi)])
    best = np.argmax(fs, axis=0)[np.newaxis]
    return ScalarMax(
        np.take_along_axis(xs, best, 0)[0], np.take_along_axis(fs, best, 0)[0], it
    )


def legendre_transform(phi: Callable[[np.ndarray], np.ndarray], a, lo: float = 0.0, hi: float = 1.0) -> np.ndarray:
    """``max_{lo <= s <= hi} (a s - phi(s))`` for convex ``phi``, elementwise in ``a``."""
    a = np.asarray(a, dtype=float)
    return golden_section_max(lambda s: a * s - phi(s), np.full(a.shape, lo), np.full(a.shape, hi)).value


def decreasing_root(
    f: Callable[[np.ndarray], np.ndarray],
    target,
    lo: float,
    hi: float,
    xtol: float = S_TOL,
    ftol: float = 1e-12,
    max_iter: int = MAX_ITER,
) -> np.ndarray:
    """Bisection for ``f(x) = target`` with ``f`` nonincreasing on ``[lo, hi]``.

    Targets whose residual at an endpoint is within ``ftol`` (or lies beyond
    it, from rounding) resolve to that endpoint.
    """
    target = np.asarray(target, dtype=float)
    a = np.full(target.shape, float(lo))
    b = np.full(target.shape, float(hi))
    g_lo = f(a) - target
    g_hi = f(b) - target
    at_lo = (np.abs(g_lo) <= ftol) | (g_lo < 0)
    at_hi = ~at_lo & ((np.abs(g_hi) <= ftol) | (g_hi > 0))
    it = 0
    while (b - a).max(initial=0.0) > xtol and it < max_iter:
        mid = 0.5 * (a + b)
        right = f(mid) - target > 0
        a = np.where(right, mid, a)
        b = np.where(right, b, mid)
        it += 1
    return np.where(at_lo, float(lo), np.where(at_hi, float(hi), 0.5 * (a + b)))
