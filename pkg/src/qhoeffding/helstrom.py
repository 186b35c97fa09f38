"""Finite-n quantum tests on ``rho^(x)n`` versus ``sigma^(x)n``.

A test is a Hermitian ``0 <= T <= I``; it accepts ``rho``. Errors of the
first and second kind are ``alpha = 1 - Tr[rho_n T]`` and
``beta = Tr[sigma_n T]``. The projector ``{rho_n - delta sigma_n > 0}``
minimizes ``alpha + delta beta`` over all tests.
"""

import logging
import math
from typing import NamedTuple

import numpy as np

from .classical_iid import DEFAULT_TYPE_CAP, iid_lower_bound, iid_tails_log
from .errors import DomainError, ValidationError
from .functionals import StatePair, a_domain, capital_phi
from .linalg import (
    DEFAULT_DIM_CAP,
    EPS_SPEC,
    as_hermitian,
    check_tensor_dim,
    positive_part_projection,
    spectral_decompose,
    tensor_power,
)
from .nussbaum_szkola import ns_distributions

log = logging.getLogger(__name__)

TEST_TOL = 1e-10


class ErrorProbabilities(NamedTuple):
    alpha: float
    beta: float


class SpectralTails(NamedTuple):
    F: float
    G: float


class ProbeRow(NamedTuple):
    n: int
    a: float
    rate_F: float
    rate_G: float
    Phi: float
    Psi: float
    gap_F: float
    gap_G: float


def as_test_operator(t) -> np.ndarray:
    """Validate ``0 <= T <= I`` (eigenvalues within ``1e-10`` of [0, 1])."""
    t = as_hermitian(t)
    w = np.linalg.eigvalsh(t)
    if w[0] < -TEST_TOL or w[-1] > 1.0 + TEST_TOL:
        raise ValidationError(
            f"test operator eigenvalues must lie in [0, 1]: found range [{w[0]:.3e}, {w[-1]:.3e}]"
        )
    return t


def _expectation(state: np.ndarray, op: np.ndarray) -> float:
    return float(np.sum(state * op.T).real)


def _prob(x: float, what: str) -> float:
    if x < -TEST_TOL or x > 1.0 + TEST_TOL:
        raise ValidationError(f"{what} = {x:.3e} is not a probability")
    if x < 0.0 or x > 1.0:
        log.debug("clamped %s = %.3e into [0, 1]", what, x)
    return min(max(x, 0.0), 1.0)


def error_probabilities(rho_n, sigma_n, test) -> ErrorProbabilities:
    """``(alpha, beta) = (1 - Tr[rho_n T], Tr[sigma_n T])``, clamped into [0, 1]."""
    rho_n, sigma_n, test = np.asarray(rho_n), np.asarray(sigma_n), np.asarray(test)
    if not rho_n.shape == sigma_n.shape == test.shape:
        raise ValidationError(
            f"dimension mismatch: rho {rho_n.shape}, sigma {sigma_n.shape}, test {test.shape}"
        )
    alpha = 1.0 - _expectation(rho_n, test)
    beta = _expectation(sigma_n, test)
    return ErrorProbabilities(_prob(alpha, "alpha"), _prob(beta, "beta"))


def helstrom_test(rho_n, sigma_n, delta: float) -> np.ndarray:
    """The projector ``{rho_n - delta sigma_n > 0}``."""
    if delta <= 0:
        raise DomainError(f"delta must be positive, got {delta}")
    rho_n, sigma_n = np.asarray(rho_n), np.asarray(sigma_n)
    if rho_n.shape != sigma_n.shape:
        raise ValidationError(f"dimension mismatch: {rho_n.shape} vs {sigma_n.shape}")
    return positive_part_projection(rho_n - delta * sigma_n)


def _diagonal(a: np.ndarray) -> bool:
    return not np.any(a[~np.eye(a.shape[0], dtype=bool)])


def spectral_tails(
    pair: StatePair, n: int, a: float, cap: int = DEFAULT_DIM_CAP, exploit_diagonal: bool = True
) -> SpectralTails:
    """``F_n(a) = Tr[rho_n {A <= 0}]`` and ``G_n(a) = Tr[sigma_n {A > 0}]``.

    Here ``A = rho_n - exp(-n a) sigma_n``. The two projectors come from one
    eigendecomposition and are exact complements. When both states are
    diagonal and ``exploit_diagonal`` is set, the tensor powers are formed as
    vectors instead of matrices; the result is the same.
    """
    delta = math.exp(-n * a)
    check_tensor_dim(pair.dim, n, cap)
    if exploit_diagonal and _diagonal(pair.rho) and _diagonal(pair.sigma):
        rv = _kron_vector(pair.rho.diagonal().real, n)
        sv = _kron_vector(pair.sigma.diagonal().real, n)
        diff = rv - delta * sv
        pos = diff > EPS_SPEC
        return SpectralTails(float(rv[~pos].sum()), float(sv[pos].sum()))
    rho_n = tensor_power(pair.rho, n, cap)
    sigma_n = tensor_power(pair.sigma, n, cap)
    w, v = spectral_decompose(rho_n - delta * sigma_n)
    pos = w > EPS_SPEC
    # <v_k| X |v_k> for every eigenvector
    rho_diag = np.sum(v.conj() * (rho_n @ v), axis=0).real
    sigma_diag = np.sum(v.conj() * (sigma_n @ v), axis=0).real
    return SpectralTails(float(rho_diag[~pos].sum()), float(sigma_diag[pos].sum()))


def _kron_vector(x: np.ndarray, n: int) -> np.ndarray:
    out = x
    for _ in range(n - 1):
        out = np.multiply.outer(out, x).ravel()
    return out


def lemma_check(pair: StatePair, n: int, test, delta: float, cap: int = DEFAULT_TYPE_CAP) -> float:
    """Slack of ``alpha_n[T] + delta beta_n[T] >= min-overlap of (p^n, q^n) at delta``.

    The right side is evaluated on the i.i.d. extension of the classical pair
    of ``pair`` through the type-class engine at ``b = -log(delta) / n``.
    """
    if delta <= 0:
        raise DomainError(f"delta must be positive, got {delta}")
    rho_n = tensor_power(pair.rho, n)
    sigma_n = tensor_power(pair.sigma, n)
    test = np.asarray(test)
    if test.shape != rho_n.shape:
        raise ValidationError(f"test has shape {test.shape}, expected {rho_n.shape}")
    alpha, beta = error_probabilities(rho_n, sigma_n, test)
    bound = iid_lower_bound(ns_distributions(pair), n, -math.log(delta) / n, cap)
    return alpha + delta * beta - bound


def conjecture_probe(pair: StatePair, a: float, n_max: int, cap: int = DEFAULT_DIM_CAP) -> list:
    """Finite-n rates ``-(1/n) log F_n(a)``, ``-(1/n) log G_n(a)`` beside ``Phi(a)``, ``Psi(a)``.

    Diagnostic only: no convergence is asserted here for non-commuting pairs.
    """
    lo, hi = a_domain(pair)
    if not lo < a < hi:
        raise DomainError(f"a={a} outside the open interval ({lo:.12g}, {hi:.12g})")
    check_tensor_dim(pair.dim, n_max, cap)
    big_phi = capital_phi(pair, a)
    big_psi = big_phi - a
    rows = []
    for n in range(1, n_max + 1):
        f, g = spectral_tails(pair, n, a, cap)
        rate_f = -math.log(f) / n if f > 0 else math.inf
        rate_g = -math.log(g) / n if g > 0 else math.inf
        rows.append(ProbeRow(n, a, rate_f, rate_g, big_phi, big_psi, rate_f - big_phi, rate_g - big_psi))
    return rows


def classical_tails_for(pair: StatePair, n: int, a: float) -> tuple:
    """``(f_n(a), g_n(a))`` of the classical pair of ``pair``."""
    log_f, log_g = iid_tails_log(ns_distributions(pair), n, a)
    return math.exp(log_f), math.exp(log_g)
