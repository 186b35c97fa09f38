"""Exact finite-n tail probabilities of the log-likelihood ratio.

For a classical pair ``(p, q)`` and ``n`` i.i.d. draws, with the per-symbol
log-likelihood ratio ``llr = log(q/p)``::

    f_n(b) = p^n { sum_t llr(w_t) >= n b }
    g_n(b) = q^n { sum_t llr(w_t) <  n b }

Both are evaluated exactly by summing over type classes (compositions of
``n`` over the alphabet) in log space.
"""

import itertools
import math
from typing import NamedTuple

import numpy as np
from scipy.special import gammaln, logsumexp

from ._arrays import scalar_or_array
from .errors import DomainError, ResourceError, ValidationError
from .nussbaum_szkola import ClassicalPair, classical_phi, classical_relative_entropy, swap
from .optimize import legendre_transform

#: Max number of type classes enumerated in one call.
DEFAULT_TYPE_CAP = 2_000_000
#: Boundary guard on ``sum counts * llr - n b``, per draw.
GUARD = 1e-12


class TypeClasses(NamedTuple):
    """All compositions of ``n`` into ``m`` parts, in lexicographic order."""

    counts: np.ndarray
    log_multinomial: np.ndarray


def type_count(n: int, m: int) -> int:
    return math.comb(n + m - 1, m - 1)


def type_classes(n: int, m: int, cap: int = DEFAULT_TYPE_CAP) -> TypeClasses:
    if n < 1 or m < 1:
        raise ValidationError(f"need n >= 1 and m >= 1, got n={n}, m={m}")
    total = type_count(n, m)
    if total > cap:
        raise ResourceError(f"{total} type classes for n={n}, m={m} exceed the cap {cap}")
    # stars and bars: m - 1 bar positions among n + m - 1 slots
    bars = np.fromiter(
        itertools.chain.from_iterable(itertools.combinations(range(n + m - 1), m - 1)),
        dtype=np.int64,
        count=total * (m - 1),
    ).reshape(total, m - 1)
    edges = np.hstack([np.full((total, 1), -1), bars, np.full((total, 1), n + m - 1)])
    counts = np.diff(edges, axis=1) - 1
    counts = counts[np.lexsort(counts.T[::-1])]
    log_mult = gammaln(n + 1) - gammaln(counts + 1).sum(axis=1)
    return TypeClasses(counts, log_mult)


def _upper_event(counts: np.ndarray, llr: np.ndarray, n: int, b: float, guard: float) -> np.ndarray:
    """Types in ``{sum counts * llr >= n b}``; boundary cases within the guard are included."""
    finite = np.isfinite(llr)
    total = counts[:, finite] @ llr[finite]
    neg = (counts[:, llr == -np.inf] > 0).any(axis=1)
    pos = (counts[:, llr == np.inf] > 0).any(axis=1)
    return ~neg & (pos | (total >= n * b - guard * n))


def event_log_mass(
    cp: ClassicalPair,
    n: int,
    b: float,
    measure: str = "p",
    event: str = "f",
    cap: int = DEFAULT_TYPE_CAP,
    guard: float = GUARD,
) -> float:
    """Log of the ``measure``-probability (``"p"`` or ``"q"``) of an LLR event.

    ``event="f"`` is ``{(1/n) log(q^n/p^n) >= b}``; ``event="g"`` is its
    complement ``{... < b}``. Only symbols of positive ``measure``-mass enter
    the enumeration.
    """
    if measure not in ("p", "q") or event not in ("f", "g"):
        raise ValidationError(f"unknown measure/event {measure!r}/{event!r}")
    if n < 1:
        raise ValidationError(f"n must be a positive integer, got {n}")
    weights = cp.p if measure == "p" else cp.q
    alive = weights > 0
    w, p, q = weights[alive], cp.p[alive], cp.q[alive]
    with np.errstate(divide="ignore"):
        llr = np.log(q) - np.log(p)
    types = type_classes(n, w.size, cap)
    upper = _upper_event(types.counts, llr, n, float(b), guard)
    mask = upper if event == "f" else ~upper
    if not mask.any():
        return -math.inf
    logw = types.log_multinomial[mask] + types.counts[mask] @ np.log(w)
    return float(logsumexp(logw))


def iid_tails_log(
    cp: ClassicalPair, n: int, b: float, cap: int = DEFAULT_TYPE_CAP, guard: float = GUARD
) -> tuple:
    """``(log f_n(b), log g_n(b))``."""
    return (
        event_log_mass(cp, n, b, "p", "f", cap, guard),
        event_log_mass(cp, n, b, "q", "g", cap, guard),
    )


def iid_tail_f(cp: ClassicalPair, n: int, b: float, cap: int = DEFAULT_TYPE_CAP) -> float:
    """``p^n{p^n <= e^(-nb) q^n}``; ties count towards the event."""
    return math.exp(event_log_mass(cp, n, b, "p", "f", cap))


def iid_tail_g(cp: ClassicalPair, n: int, b: float, cap: int = DEFAULT_TYPE_CAP) -> float:
    """``q^n{p^n > e^(-nb) q^n}``; the complement of the ``f`` event."""
    return math.exp(event_log_mass(cp, n, b, "q", "g", cap))


def iid_lower_bound(cp: ClassicalPair, n: int, b: float, cap: int = DEFAULT_TYPE_CAP) -> float:
    """``(1/2) [f_n(b) + e^(-nb) g_n(b)]``."""
    log_f, log_g = iid_tails_log(cp, n, b, cap)
    return 0.5 * (math.exp(log_f) + math.exp(log_g - n * b))


def rate_interval(cp: ClassicalPair) -> tuple:
    """The open interval ``(-D(p||q), D(q||p))`` on which both rates are positive and finite."""
    return -classical_relative_entropy(cp), classical_relative_entropy(swap(cp))


def _check_open(cp: ClassicalPair, b) -> np.ndarray:
    lo, hi = rate_interval(cp)
    b = np.asarray(b, dtype=float)
    if np.any(b <= lo) or np.any(b >= hi):
        raise DomainError(f"b={b} outside the open interval ({lo:.12g}, {hi:.12g})")
    return b


def cramer_rate_upper(cp: ClassicalPair, b):
    """Rate of ``f_n(b)``: ``max_{0<=s<=1} (b s - phi(s))`` with the classical ``phi``."""
    b = _check_open(cp, b)
    return scalar_or_array(legendre_transform(lambda s: classical_phi(cp, s), b))


def cramer_rate_lower(cp: ClassicalPair, b):
    """Rate of ``g_n(b)``: the upper rate minus ``b``."""
    b = _check_open(cp, b)
    return scalar_or_array(legendre_transform(lambda s: classical_phi(cp, s), b) - b)


class TailRow(NamedTuple):
    n: int
    b: float
    f_n: float
    g_n: float
    rate_f: float
    rate_g: float
    target_phi: float
    target_psi: float
    gap_f: float
    gap_g: float


def tails_sweep(cp: ClassicalPair, ns, b: float, cap: int = DEFAULT_TYPE_CAP, guard: float = GUARD) -> list:
    """Finite-n rates ``-(1/n) log f_n``, ``-(1/n) log g_n`` against their limits."""
    target_phi = cramer_rate_upper(cp, b)
    target_psi = target_phi - b
    rows = []
    for n in ns:
        log_f, log_g = iid_tails_log(cp, n, b, cap, guard)
        rate_f, rate_g = -log_f / n, -log_g / n
        rows.append(
            TailRow(
                n, b, math.exp(log_f), math.exp(log_g), rate_f, rate_g,
                target_phi, target_psi, rate_f - target_phi, rate_g - target_psi,
            )
        )
    return rows
