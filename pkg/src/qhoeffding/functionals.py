"""Error-exponent functionals of a pair of density operators.

All logarithms are natural. The central object is

    phi(s) = log Tr[rho^(1-s) sigma^s],   0 <= s <= 1,

from which the Legendre pair ``capital_phi``/``capital_psi``, the Hoeffding
exponent ``hoeffding_bound`` and its Golden-Thompson variant ``b_tilde`` are
built.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, NamedTuple

import numpy as np
from scipy.special import logsumexp

from ._arrays import scalar_or_array, unit_interval
from .errors import ConsistencyError, DomainError, ValidationError
from .linalg import (
    EPS_SPEC,
    SpectralDecomposition,
    as_density,
    spectral_decompose,
    spectral_function,
)
from .optimize import decreasing_root, golden_section_max, legendre_transform

log = logging.getLogger(__name__)

FULL_RANK_TOL = 1e-10
#: Slack allowed when a scalar argument sits just outside its closed domain.
DOMAIN_SLACK = 1e-9
S_CAP = 1.0 - 1e-8
AGREE_TOL = 1e-6
FAIL_TOL = 1e-4
FD_STEP = 1e-4


@dataclass(frozen=True, eq=False)
class StatePair:
    """Two density operators of equal dimension, validated on construction.

    Spectral decompositions and the two relative entropies are computed
    lazily and cached; the instance is otherwise immutable.
    """

    rho: np.ndarray
    sigma: np.ndarray

    def __post_init__(self):
        rho = as_density(self.rho)
        sigma = as_density(self.sigma)
        if rho.shape != sigma.shape:
            raise ValidationError(f"state dimensions differ: {rho.shape[0]} vs {sigma.shape[0]}")
        rho.flags.writeable = False
        sigma.flags.writeable = False
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "sigma", sigma)

    @classmethod
    def from_diagonals(cls, p, q) -> "StatePair":
        return cls(np.diag(np.asarray(p, dtype=float)), np.diag(np.asarray(q, dtype=float)))

    @property
    def dim(self) -> int:
        return self.rho.shape[0]

    @cached_property
    def rho_spectrum(self) -> SpectralDecomposition:
        return spectral_decompose(self.rho)

    @cached_property
    def sigma_spectrum(self) -> SpectralDecomposition:
        return spectral_decompose(self.sigma)

    @cached_property
    def full_rank(self) -> bool:
        return bool(
            self.rho_spectrum.eigenvalues.min() > FULL_RANK_TOL
            and self.sigma_spectrum.eigenvalues.min() > FULL_RANK_TOL
        )

    @cached_property
    def commuting(self) -> bool:
        comm = self.rho @ self.sigma - self.sigma @ self.rho
        return bool(np.max(np.abs(comm)) < 1e-12)

    @cached_property
    def d_rho_sigma(self) -> float:
        return relative_entropy(self)

    @cached_property
    def d_sigma_rho(self) -> float:
        return relative_entropy(self.swapped())

    @cached_property
    def _log_rho(self) -> np.ndarray:
        return spectral_function(self.rho_spectrum, np.log(self.rho_spectrum.eigenvalues))

    @cached_property
    def _log_sigma(self) -> np.ndarray:
        return spectral_function(self.sigma_spectrum, np.log(self.sigma_spectrum.eigenvalues))

    def swapped(self) -> "StatePair":
        return StatePair(self.sigma, self.rho)


def _require_full_rank(pair: StatePair, what: str) -> None:
    if not pair.full_rank:
        raise DomainError(f"{what} requires full-rank states (eigenvalues > {FULL_RANK_TOL:g})")


def _clip_to(x, lo: float, hi: float, name: str) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if np.any(x < lo - DOMAIN_SLACK) or np.any(x > hi + DOMAIN_SLACK) or np.any(np.isnan(x)):
        raise DomainError(f"{name}={x} outside the valid interval [{lo:.12g}, {hi:.12g}]")
    return np.clip(x, lo, hi)


def _support_powers(w: np.ndarray, t: np.ndarray) -> np.ndarray:
    # w**t for w > EPS_SPEC, else 0 (t >= 0); shape t.shape + w.shape
    support = w > EPS_SPEC
    base = np.where(support, w, 1.0)
    return np.where(support, base ** t[..., np.newaxis], 0.0)


def trace_overlap(pair: StatePair, s):
    """``Tr[rho^(1-s) sigma^s]`` with the support convention ``0^0 = 0``.

    Vectorized over ``s``: each power is assembled from its own spectral
    decomposition, then the trace of the product is taken.
    """
    s = unit_interval(s)
    lam, x = pair.rho_spectrum
    gam, y = pair.sigma_spectrum
    a = (x * _support_powers(lam, 1.0 - s)[..., np.newaxis, :]) @ x.conj().T
    b = (y * _support_powers(gam, s)[..., np.newaxis, :]) @ y.conj().T
    # Tr[A B] = sum_ij A_ij B_ji
    return scalar_or_array(np.sum(a * np.swapaxes(b, -1, -2), axis=(-2, -1)).real)


def phi(pair: StatePair, s):
    """``log Tr[rho^(1-s) sigma^s]``; ``-inf`` where the overlap vanishes."""
    t = np.asarray(trace_overlap(pair, s))
    with np.errstate(divide="ignore"):
        return scalar_or_array(np.where(t > 0, np.log(np.where(t > 0, t, 1.0)), -np.inf))


def phi_tilde(pair: StatePair, s):
    """``log Tr exp((1-s) log rho + s log sigma)``; full-rank states only."""
    s = unit_interval(s)
    _require_full_rank(pair, "phi_tilde")
    w = s[..., np.newaxis, np.newaxis]
    h = (1.0 - w) * pair._log_rho + w * pair._log_sigma
    return scalar_or_array(logsumexp(np.linalg.eigvalsh(h), axis=-1))


def relative_entropy(pair: StatePair) -> float:
    """``D(rho||sigma) = Tr[rho (log rho - log sigma)]`` in nats.

    Raises
    ------
    DomainError
        If the support of ``rho`` is not contained in that of ``sigma``.
    """
    lam = pair.rho_spectrum.eigenvalues
    gam, y = pair.sigma_spectrum
    # <y_j| rho |y_j>
    weights = np.einsum("ij,ik,kj->j", y.conj(), pair.rho, y).real
    null = gam <= EPS_SPEC
    leak = float(weights[null].sum()) if null.any() else 0.0
    if leak > 1e-12:
        raise DomainError(f"relative entropy is infinite: rho has weight {leak:.3e} outside supp(sigma)")
    pos = lam > EPS_SPEC
    entropy_term = float(np.sum(lam[pos] * np.log(lam[pos])))
    cross_term = float(np.sum(weights[~null] * np.log(gam[~null])))
    return entropy_term - cross_term


def a_domain(pair: StatePair) -> tuple:
    """The closed interval ``[-D(rho||sigma), D(sigma||rho)]`` on which Phi, Psi live."""
    return -pair.d_rho_sigma, pair.d_sigma_rho


def capital_phi(pair: StatePair, a):
    """Legendre transform ``max_{0<=s<=1} (a s - phi(s))`` by golden-section search."""
    lo, hi = a_domain(pair)
    a = _clip_to(a, lo, hi, "a")
    return scalar_or_array(legendre_transform(lambda s: phi(pair, s), a))


def capital_psi(pair: StatePair, a):
    """``capital_phi(a) - a``; decreasing from ``D(rho||sigma)`` to 0 over the domain."""
    lo, hi = a_domain(pair)
    a = _clip_to(a, lo, hi, "a")
    return scalar_or_array(legendre_transform(lambda s: phi(pair, s), a) - a)


def invert_psi(pair: StatePair, r):
    """The unique ``a`` with ``capital_psi(a) = r``, for ``0 <= r <= D(rho||sigma)``.

    Bisection on the decreasing map to ``1e-10`` in ``a``; vectorized over ``r``.
    """
    lo, hi = a_domain(pair)
    r = _clip_to(r, 0.0, pair.d_rho_sigma, "r")
    psi = lambda a: legendre_transform(lambda s: phi(pair, s), a) - a  # noqa: E731
    return scalar_or_array(decreasing_root(psi, r, lo, hi))


class HoeffdingResult(NamedTuple):
    """``value`` is the duality route ``a_star + r``; ``direct`` the s-search."""

    r: np.ndarray
    value: np.ndarray
    direct: np.ndarray
    a_star: np.ndarray


def _hoeffding(
    phi_fn, r, lo: float, hi: float, d: float, what: str, fail_tol: float = FAIL_TOL
) -> HoeffdingResult:
    if d <= DOMAIN_SLACK:
        raise DomainError(f"{what}: D(rho||sigma) = {d:.3e} is zero, the r-range (0, D] is empty")
    r = _clip_to(r, 0.0, d, "r")

    def objective(s):
        return (-s * r - phi_fn(s)) / (1.0 - s)

    direct = golden_section_max(objective, np.zeros(r.shape), np.full(r.shape, S_CAP)).value
    a_star = decreasing_root(lambda a: legendre_transform(phi_fn, a) - a, r, lo, hi)
    dual = a_star + r
    gap = float(np.max(np.abs(direct - dual), initial=0.0))
    if gap > fail_tol:
        raise ConsistencyError(f"{what}: direct search and duality route differ by {gap:.3e}")
    if gap > AGREE_TOL:
        log.warning("%s: direct and duality routes differ by %.2e", what, gap)
    return HoeffdingResult(scalar_or_array(r), scalar_or_array(dual), scalar_or_array(direct), scalar_or_array(a_star))


def hoeffding_details(pair: StatePair, r, fail_tol: float = FAIL_TOL) -> HoeffdingResult:
    """Both routes to ``b(r)``: direct search over ``s`` and ``a* + r`` with ``Psi(a*) = r``.

    ``r = 0`` is accepted and yields the limiting value ``D(sigma||rho)``.
    Raises ConsistencyError when the two routes differ by more than ``fail_tol``.
    """
    lo, hi = a_domain(pair)
    return _hoeffding(lambda s: phi(pair, s), r, lo, hi, pair.d_rho_sigma, "hoeffding_bound", fail_tol)


def hoeffding_bound(pair: StatePair, r):
    """``b(r) = max_{0<=s<1} (-s r - phi(s)) / (1 - s)``, vectorized over ``r``."""
    return hoeffding_details(pair, r).value


def b_tilde(pair: StatePair, r, fail_tol: float = FAIL_TOL):
    """Hoeffding-type exponent with ``phi_tilde`` in place of ``phi``."""
    _require_full_rank(pair, "b_tilde")
    lo, hi = a_domain(pair)
    return _hoeffding(lambda s: phi_tilde(pair, s), r, lo, hi, pair.d_rho_sigma, "b_tilde", fail_tol).value


def xi(pair: StatePair, t):
    """``(t + 1) phi(t / (t + 1))`` for ``t >= 0``."""
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise DomainError(f"xi needs t >= 0, got {t}")
    return scalar_or_array((t + 1.0) * phi(pair, t / (t + 1.0)))


def default_r_grid(pair: StatePair, points: int = 2000) -> np.ndarray:
    """Quadratically spaced grid on ``(0, D(rho||sigma)]``, dense near ``r = 0``."""
    u = np.arange(1, points + 1) / points
    return pair.d_rho_sigma * u**2


def conversion_check(pair: StatePair, s_grid, r_grid) -> float:
    """Max over ``s`` of ``|max_r (-s r - (1-s) b(r)) - phi(s)|`` on the given grids."""
    _require_full_rank(pair, "conversion_check")
    d = pair.d_rho_sigma
    if d <= DOMAIN_SLACK:
        raise DomainError(f"conversion_check: D(rho||sigma) = {d:.3e} is zero")
    r = np.asarray(r_grid, dtype=float)
    if r.size == 0 or r.min() <= 0 or r.max() > d + DOMAIN_SLACK:
        raise DomainError(f"r_grid must lie in (0, {d:.12g}]")
    s = unit_interval(s_grid)
    b = np.asarray(hoeffding_bound(pair, r))
    recon = np.max(-np.outer(s, r) - np.outer(1.0 - s, b), axis=1)
    return float(np.max(np.abs(recon - phi(pair, s))))


@dataclass(frozen=True)
class ExponentProfile:
    """phi sampled on an s-grid together with one-sided slopes at s = 0 and s = 1."""

    s_grid: np.ndarray
    phi_values: np.ndarray
    slope_at_0: float
    slope_at_1: float


def one_sided_slope(f: Callable[[float], float], x: float, h: float) -> float:
    """Second-order one-sided difference; ``h < 0`` steps to the left."""
    return (-3.0 * f(x) + 4.0 * f(x + h) - f(x + 2.0 * h)) / (2.0 * h)


def exponent_profile(pair: StatePair, s_grid, step: float = FD_STEP) -> ExponentProfile:
    s = np.atleast_1d(unit_interval(s_grid))
    f = lambda x: phi(pair, x)  # noqa: E731
    return ExponentProfile(s, phi(pair, s), one_sided_slope(f, 0.0, step), one_sided_slope(f, 1.0, -step))
