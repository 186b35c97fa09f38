"""Dense Hermitian linear algebra used throughout the package.

Matrices are plain ``numpy`` arrays. The ``as_*`` helpers validate an array
against an invariant and return a cleaned copy; everything else is a pure
function of its inputs.
"""

from functools import reduce
from typing import NamedTuple

import numpy as np

from .errors import DomainError, ResourceError, ValidationError

#: Eigenvalues at or below this are treated as zero (support convention).
EPS_SPEC = 1e-12
#: Allowed max-entry asymmetry, relative to ``max(1, max|A|)``.
HERMITIAN_TOL = 1e-12
#: Allowed negative eigenvalue / trace defect for density operators.
STATE_TOL = 1e-12
#: Default cap on the dimension of tensor powers.
DEFAULT_DIM_CAP = 4096

_TIE_TOL = 1e-10
_PHASE_TOL = 1e-10
_KEY_DECIMALS = 9


class SpectralDecomposition(NamedTuple):
    """Eigenvalues (descending) and orthonormal eigenvectors (as columns)."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def as_square(a) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise ValidationError(f"expected a non-empty square matrix, got shape {a.shape}")
    return a


def hermitian_asymmetry(a) -> float:
    a = as_square(a)
    return float(np.max(np.abs(a - a.conj().T)))


def as_hermitian(a, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Return ``(A + A^dagger) / 2`` after checking ``A`` is Hermitian.

    Raises
    ------
    ValidationError
        If the max-entry asymmetry exceeds ``tol * max(1, max|A|)``.
    """
    a = as_square(a)
    asym = float(np.max(np.abs(a - a.conj().T)))
    bound = tol * max(1.0, float(np.max(np.abs(a))))
    if asym > bound:
        raise ValidationError(
            f"matrix is not Hermitian: max asymmetry {asym:.3e} exceeds {bound:.1e}"
        )
    return 0.5 * (a + a.conj().T)


def as_density(a, tol: float = STATE_TOL) -> np.ndarray:
    """Validate a density operator: Hermitian, PSD and unit trace."""
    h = as_hermitian(a)
    trace = float(np.trace(h).real)
    if abs(trace - 1.0) > tol:
        raise ValidationError(
            f"density operator must have unit trace: |trace - 1| = {abs(trace - 1.0):.3e}"
        )
    lowest = float(np.linalg.eigvalsh(h)[0])
    if lowest < -tol:
        raise ValidationError(
            f"density operator must be positive semidefinite: min eigenvalue {lowest:.3e}"
        )
    return h


def _is_diagonal(a: np.ndarray) -> bool:
    return not np.any(a[~np.eye(a.shape[0], dtype=bool)])


def _normalize_phases(v: np.ndarray) -> np.ndarray:
    # first entry with modulus above _PHASE_TOL made real positive
    idx = np.argmax(np.abs(v) > _PHASE_TOL, axis=0)
    lead = v[idx, np.arange(v.shape[1])]
    return v * (np.abs(lead) / lead)


def _canonical_order(w: np.ndarray, v: np.ndarray) -> np.ndarray:
    order = np.argsort(-w, kind="stable")
    w = w[order]
    scale = max(1.0, float(np.max(np.abs(w))))
    breaks = np.flatnonzero(np.diff(w) < -_TIE_TOL * scale) + 1
    groups = np.split(np.arange(len(w)), breaks)
    out = []
    for g in groups:
        cols = order[g]
        if len(cols) > 1:
            block = np.round(v[:, cols], _KEY_DECIMALS)
            keys = []
            for row in block[::-1]:
                keys.extend([-row.imag, -row.real])
            # lexsort's primary key is the last one: the first component, real part
            cols = cols[np.lexsort(keys)]
        out.append(cols)
    return np.concatenate(out)


def spectral_decompose(a) -> SpectralDecomposition:
    """Eigendecomposition with a deterministic, canonical eigenbasis.

    Eigenvalues are sorted in descending order. Each eigenvector has its first
    non-negligible component made real positive, and eigenvectors sharing an
    eigenvalue (within ``1e-10`` relative) are sorted lexicographically in
    descending order. An exactly diagonal input short-circuits to the standard
    basis.
    """
    h = as_hermitian(a)
    if _is_diagonal(h):
        w = h.diagonal().real.copy()
        order = np.argsort(-w, kind="stable")
        return SpectralDecomposition(w[order], np.eye(len(w), dtype=complex)[:, order])
    w, v = np.linalg.eigh(h)
    v = _normalize_phases(v)
    order = _canonical_order(w, v)
    return SpectralDecomposition(w[order], v[:, order])


def spectral_function(dec: SpectralDecomposition, values) -> np.ndarray:
    """Assemble ``sum_i values[i] |x_i><x_i|`` from a decomposition."""
    v = dec.eigenvectors
    return (v * np.asarray(values)) @ v.conj().T


def _check_psd(w: np.ndarray) -> None:
    if w.size and w.min() < -STATE_TOL:
        raise ValidationError(f"matrix must be positive semidefinite: min eigenvalue {w.min():.3e}")


def power_values(w: np.ndarray, t: float) -> np.ndarray:
    """Elementwise ``w**t`` under the support convention ``0**t = 0`` for ``t >= 0``."""
    _check_psd(w)
    support = w > EPS_SPEC
    if t < 0 and not support.all():
        raise DomainError(f"negative power {t} of a singular matrix (support violation)")
    out = np.zeros_like(w, dtype=float)
    out[support] = w[support] ** t
    return out


def spectral_power(dec: SpectralDecomposition, t: float) -> np.ndarray:
    return spectral_function(dec, power_values(dec.eigenvalues, t))


def matrix_power(a, t: float) -> np.ndarray:
    """Power of a PSD matrix; eigenvalues ``<= EPS_SPEC`` map to zero when ``t >= 0``.

    In particular ``matrix_power(a, 0)`` is the projector onto the support of ``a``.
    """
    return spectral_power(spectral_decompose(a), t)


def matrix_log(a) -> np.ndarray:
    dec = spectral_decompose(a)
    w = dec.eigenvalues
    if w.min() <= EPS_SPEC:
        raise DomainError(f"matrix log needs a full-rank positive matrix: min eigenvalue {w.min():.3e}")
    return spectral_function(dec, np.log(w))


def matrix_exp(a) -> np.ndarray:
    dec = spectral_decompose(a)
    return spectral_function(dec, np.exp(dec.eigenvalues))


def tensor_power(a, n: int, cap: int = DEFAULT_DIM_CAP) -> np.ndarray:
    """n-fold Kronecker power of a square matrix.

    Raises
    ------
    ResourceError
        If ``dim(a)**n`` exceeds ``cap``.
    """
    a = as_square(a)
    check_tensor_dim(a.shape[0], n, cap)
    return reduce(np.kron, [a] * n)


def check_tensor_dim(dim: int, n: int, cap: int = DEFAULT_DIM_CAP) -> int:
    """Return ``dim**n``, raising ``ResourceError`` when it exceeds ``cap``."""
    if n < 1:
        raise ValidationError(f"tensor power needs n >= 1, got {n}")
    required = dim**n
    if required > cap:
        raise ResourceError(f"tensor power needs dimension {required}, cap is {cap}")
    return required


def positive_part_projection(a, tol: float = EPS_SPEC) -> np.ndarray:
    """Projector ``{A > 0}`` onto eigenvectors with eigenvalue above ``tol``.

    ``I - positive_part_projection(a)`` is the complementary projector ``{A <= 0}``.
    """
    dec = spectral_decompose(a)
    v = dec.eigenvectors[:, dec.eigenvalues > tol]
    return v @ v.conj().T
