"""Classical distributions built from the two eigenbases of a state pair.

For ``rho = sum_i lam_i |x_i><x_i|`` and ``sigma = sum_j gam_j |y_j><y_j|``
the pair

    p(i, j) = lam_i |<x_i|y_j>|^2,    q(i, j) = gam_j |<x_i|y_j>|^2

reproduces ``phi`` of the quantum pair exactly, and the Helstrom-type risk of
any quantum test is bounded below by a minimum-overlap functional of (p, q).
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp, rel_entr

from ._arrays import scalar_or_array, unit_interval
from .errors import DomainError, ValidationError
from .functionals import StatePair
from .linalg import EPS_SPEC

SUPPORT_FLOOR = 1e-15
NORM_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class ClassicalPair:
    """Probability vectors ``p`` and ``q`` aligned on a common list of index pairs."""

    support: tuple
    p: np.ndarray
    q: np.ndarray

    def __post_init__(self):
        support = tuple(tuple(int(k) for k in item) for item in self.support)
        p = np.asarray(self.p, dtype=float).copy()
        q = np.asarray(self.q, dtype=float).copy()
        if p.ndim != 1 or p.shape != q.shape or len(support) != p.size:
            raise ValidationError(
                f"support, p and q must align: lengths {len(support)}, {p.size}, {q.size}"
            )
        if len(set(support)) != len(support):
            raise ValidationError("support entries must be unique")
        for name, v in (("p", p), ("q", q)):
            if v.size and v.min() < 0:
                raise ValidationError(f"{name} has a negative entry {v.min():.3e}")
            if abs(v.sum() - 1.0) > NORM_TOL:
                raise ValidationError(f"{name} must sum to 1: |sum - 1| = {abs(v.sum() - 1.0):.3e}")
        p.flags.writeable = False
        q.flags.writeable = False
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @classmethod
    def from_vectors(cls, p, q) -> "ClassicalPair":
        """Pair on the diagonal support ``(i, i)``, as produced for commuting diagonal states."""
        n = len(p)
        return cls(tuple((i, i) for i in range(n)), p, q)

    @property
    def size(self) -> int:
        return self.p.size

    def to_json(self) -> dict:
        return {
            "support": [list(item) for item in self.support],
            "p": self.p.tolist(),
            "q": self.q.tolist(),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ClassicalPair":
        try:
            return cls(tuple(tuple(x) for x in obj["support"]), obj["p"], obj["q"])
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed classical pair JSON: {exc}") from exc


def ns_distributions(pair: StatePair, floor: float = SUPPORT_FLOOR) -> ClassicalPair:
    """The classical pair ``(p, q)`` of ``pair``.

    Index pairs where both ``p`` and ``q`` fall below ``floor`` are dropped
    from the common support. Eigenvalues at or below ``EPS_SPEC`` count as
    zero, matching the support convention of :func:`~qhoeffding.functionals.phi`.
    """
    if not isinstance(pair, StatePair):
        raise ValidationError("ns_distributions expects a StatePair")
    lam, x = pair.rho_spectrum
    gam, y = pair.sigma_spectrum
    lam = np.where(lam > EPS_SPEC, lam, 0.0)
    gam = np.where(gam > EPS_SPEC, gam, 0.0)
    overlap = np.abs(x.conj().T @ y) ** 2
    p = lam[:, None] * overlap
    q = gam[None, :] * overlap
    keep = (p > floor) | (q > floor)
    support = tuple(map(tuple, np.argwhere(keep).tolist()))
    return ClassicalPair(support, p[keep], q[keep])


def classical_phi(cp: ClassicalPair, s):
    """``log sum_w p(w)^(1-s) q(w)^s`` by log-sum-exp; vectorized over ``s``.

    Only outcomes with ``p > 0`` and ``q > 0`` contribute, which is the
    ``0^0 = 0`` convention at ``s = 0`` and ``s = 1``.
    """
    s = unit_interval(s)
    both = (cp.p > 0) & (cp.q > 0)
    if not both.any():
        return scalar_or_array(np.full(s.shape, -np.inf))
    lp, lq = np.log(cp.p[both]), np.log(cp.q[both])
    terms = (1.0 - s)[..., None] * lp + s[..., None] * lq
    return scalar_or_array(logsumexp(terms, axis=-1))


def min_overlap(cp: ClassicalPair, delta: float) -> float:
    """``(1/2) [p{p <= delta q} + delta q{p > delta q}]``; ties go to the ``p`` side."""
    if delta <= 0:
        raise DomainError(f"delta must be positive, got {delta}")
    low = cp.p <= delta * cp.q
    return 0.5 * (float(cp.p[low].sum()) + delta * float(cp.q[~low].sum()))


def classical_relative_entropy(cp: ClassicalPair) -> float:
    """``D(p||q) = sum p log(p/q)`` in nats."""
    terms = rel_entr(cp.p, cp.q)
    if np.isinf(terms).any():
        raise DomainError("D(p||q) is infinite: supp(p) is not contained in supp(q)")
    return float(terms.sum())


def swap(cp: ClassicalPair) -> ClassicalPair:
    """The pair with the roles of ``p`` and ``q`` exchanged."""
    return ClassicalPair(cp.support, cp.q, cp.p)
