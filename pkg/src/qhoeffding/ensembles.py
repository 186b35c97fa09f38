"""Random and reference inputs: states, pairs, tests."""

import numpy as np

from .functionals import StatePair


def _rng(rng) -> np.random.Generator:
    return rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)


def ginibre(rows: int, cols: int, rng=None) -> np.ndarray:
    rng = _rng(rng)
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2)


def random_density(dim: int, rng=None, rank: int = None) -> np.ndarray:
    """Hilbert-Schmidt random state ``G G^dagger / Tr``; full rank unless ``rank`` is given."""
    g = ginibre(dim, rank or dim, rng)
    rho = g @ g.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return rho / np.trace(rho).real


def random_pair(dim: int, rng=None) -> StatePair:
    rng = _rng(rng)
    return StatePair(random_density(dim, rng), random_density(dim, rng))


def random_probability(dim: int, rng=None, floor: float = 0.0) -> np.ndarray:
    """Dirichlet(1) vector mixed with the uniform distribution at weight ``floor``."""
    p = _rng(rng).dirichlet(np.ones(dim))
    return (1.0 - floor) * p + floor / dim


def random_diagonal_pair(dim: int, rng=None, floor: float = 0.2) -> StatePair:
    rng = _rng(rng)
    return StatePair.from_diagonals(random_probability(dim, rng, floor), random_probability(dim, rng, floor))


def random_hermitian(dim: int, rng=None) -> np.ndarray:
    g = ginibre(dim, dim, rng)
    return (g + g.conj().T) / 2.0


def random_test(dim: int, rng=None) -> np.ndarray:
    """A test ``0 <= T <= I``: random Hermitian with eigenvalues clipped into [0, 1]."""
    h = 0.5 * np.eye(dim) + 0.5 * random_hermitian(dim, rng) / np.sqrt(dim)
    w, v = np.linalg.eigh(h)
    t = (v * np.clip(w, 0.0, 1.0)) @ v.conj().T
    return 0.5 * (t + t.conj().T)


def reference_pair() -> StatePair:
    """Non-commuting qubit pair: ``diag(0.75, 0.25)`` against ``0.6|+><+| + 0.4|-><-|``."""
    plus = np.array([1.0, 1.0]) / np.sqrt(2)
    minus = np.array([1.0, -1.0]) / np.sqrt(2)
    sigma = 0.6 * np.outer(plus, plus) + 0.4 * np.outer(minus, minus)
    return StatePair(np.diag([0.75, 0.25]), sigma)


def bernoulli_pair() -> StatePair:
    """Commuting qubit pair ``diag(1/2, 1/2)`` against ``diag(1/4, 3/4)``."""
    return StatePair.from_diagonals([0.5, 0.5], [0.25, 0.75])
