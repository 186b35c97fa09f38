"""Quantum channels in Kraus form and data-processing checks."""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError, ValidationError
from .functionals import FULL_RANK_TOL, StatePair, relative_entropy, trace_overlap

COMPLETENESS_TOL = 1e-10
REGULARIZATION = 1e-9


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """``rho -> sum_k K_k rho K_k^dagger`` with ``sum_k K_k^dagger K_k = I``."""

    kraus_ops: tuple

    def __post_init__(self):
        ops = tuple(np.array(k, dtype=complex, ndmin=2) for k in self.kraus_ops)
        if not ops:
            raise ValidationError("a channel needs at least one Kraus operator")
        shape = ops[0].shape
        if any(k.shape != shape for k in ops):
            raise ValidationError(f"Kraus operators must share one shape, got {[k.shape for k in ops]}")
        residual = completeness_residual(ops)
        if residual > COMPLETENESS_TOL:
            raise ValidationError(f"Kraus operators are not trace preserving: residual {residual:.3e}")
        for k in ops:
            k.flags.writeable = False
        object.__setattr__(self, "kraus_ops", ops)

    @property
    def d_out(self) -> int:
        return self.kraus_ops[0].shape[0]

    @property
    def d_in(self) -> int:
        return self.kraus_ops[0].shape[1]

    def apply(self, rho) -> np.ndarray:
        return apply(self, rho)

    def to_json(self) -> dict:
        return {
            "d_in": self.d_in,
            "d_out": self.d_out,
            "kraus": [{"re": k.real.tolist(), "im": k.imag.tolist()} for k in self.kraus_ops],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "KrausChannel":
        try:
            ops = [np.asarray(k["re"], dtype=float) + 1j * np.asarray(k["im"], dtype=float) for k in obj["kraus"]]
            d_in, d_out = int(obj["d_in"]), int(obj["d_out"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"malformed channel JSON: {exc}") from exc
        ch = cls(tuple(ops))
        if (ch.d_in, ch.d_out) != (d_in, d_out):
            raise ValidationError(
                f"declared dims ({d_in}, {d_out}) differ from Kraus shape ({ch.d_in}, {ch.d_out})"
            )
        return ch


def completeness_residual(kraus_ops) -> float:
    total = sum(k.conj().T @ k for k in kraus_ops)
    return float(np.max(np.abs(total - np.eye(total.shape[0]))))


def apply(channel: KrausChannel, rho) -> np.ndarray:
    rho = np.asarray(rho)
    if rho.shape != (channel.d_in, channel.d_in):
        raise ValidationError(f"channel expects a {channel.d_in}x{channel.d_in} input, got {rho.shape}")
    out = sum(k @ rho @ k.conj().T for k in channel.kraus_ops)
    return 0.5 * (out + out.conj().T)


def identity_channel(dim: int) -> KrausChannel:
    return KrausChannel((np.eye(dim),))


def depolarizing_qubit() -> KrausChannel:
    """Fully depolarizing qubit channel: Kraus set ``{I, X, Y, Z} / 2``."""
    paulis = (
        np.eye(2),
        np.array([[0, 1], [1, 0]]),
        np.array([[0, -1j], [1j, 0]]),
        np.array([[1, 0], [0, -1]]),
    )
    return KrausChannel(tuple(0.5 * p for p in paulis))


def random_channel(d_in: int, d_out: int, k: int, seed=None) -> KrausChannel:
    """Channel from a random isometry ``C^d_in -> C^(k d_out)`` sliced into ``k`` blocks.

    The isometry is the Q factor of a seeded complex Gaussian matrix, with the
    phases of R's diagonal absorbed and the global phase fixed so that the
    first nonzero entry is real positive.
    """
    if min(d_in, d_out, k) < 1:
        raise ValidationError(f"dimensions and Kraus count must be positive, got {d_in}, {d_out}, {k}")
    if k * d_out < d_in:
        raise ValidationError(f"no isometry from dimension {d_in} into {k} x {d_out}")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((k * d_out, d_in)) + 1j * rng.standard_normal((k * d_out, d_in))
    q, r = np.linalg.qr(g)
    diag = np.diag(r)
    q = q * (diag / np.abs(diag))
    lead = q.flat[np.argmax(np.abs(q.ravel()) > 1e-12)]
    q = q * (np.abs(lead) / lead)
    return KrausChannel(tuple(q[i * d_out:(i + 1) * d_out] for i in range(k)))


def _check_dims(pair: StatePair, channel: KrausChannel) -> None:
    if pair.dim != channel.d_in:
        raise ValidationError(f"states have dimension {pair.dim}, channel expects {channel.d_in}")


def output_pair(pair: StatePair, channel: KrausChannel) -> StatePair:
    _check_dims(pair, channel)
    return StatePair(apply(channel, pair.rho), apply(channel, pair.sigma))


def renyi_monotonicity_check(pair: StatePair, channel: KrausChannel, s_grid) -> float:
    """``max_s (Tr[rho^(1-s) sigma^s] - Tr[E(rho)^(1-s) E(sigma)^s])``; nonpositive in theory."""
    out = output_pair(pair, channel)
    s = np.atleast_1d(np.asarray(s_grid, dtype=float))
    return float(np.max(np.asarray(trace_overlap(pair, s)) - np.asarray(trace_overlap(out, s))))


class RelentCheck(NamedTuple):
    violation: float
    regularization: float


def relent_monotonicity_check(
    pair: StatePair, channel: KrausChannel, regularization: float = REGULARIZATION
) -> RelentCheck:
    """``D(E(rho)||E(sigma)) - D(rho||sigma)``; nonpositive in theory.

    If ``E(sigma)`` is not full rank both outputs are mixed with the maximally
    mixed state at weight ``regularization``. That mixing is itself a channel,
    so the inequality being checked is unchanged; the weight used is returned.
    """
    out = output_pair(pair, channel)
    used = 0.0
    if out.sigma_spectrum.eigenvalues.min() <= FULL_RANK_TOL:
        used = regularization
        mix = np.eye(out.dim) / out.dim
        out = StatePair((1 - used) * out.rho + used * mix, (1 - used) * out.sigma + used * mix)
    try:
        d_out = relative_entropy(out)
    except DomainError as exc:
        raise DomainError(f"output relative entropy undefined after regularization: {exc}") from exc
    return RelentCheck(d_out - relative_entropy(pair), used)
