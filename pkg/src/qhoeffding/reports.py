"""Tables behind the command-line tools.

Each builder returns a :class:`Table`: column names, rows in grid order, and
the subset of columns holding log-scale quantities (converted by ``--base2``).
Independent grid points may be evaluated by a thread pool; ``map`` keeps the
input order, so the pool size never changes the output.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from typing import NamedTuple

import numpy as np

from .channels import relent_monotonicity_check, renyi_monotonicity_check
from .classical_iid import DEFAULT_TYPE_CAP, GUARD, iid_lower_bound, tails_sweep
from .ensembles import random_test
from .errors import DomainError
from .functionals import (
    FAIL_TOL,
    StatePair,
    b_tilde,
    capital_phi,
    capital_psi,
    exponent_profile,
    hoeffding_details,
    phi,
    phi_tilde,
)
from .helstrom import conjecture_probe, error_probabilities, helstrom_test
from .linalg import DEFAULT_DIM_CAP, tensor_power
from .nussbaum_szkola import ClassicalPair, classical_phi, ns_distributions

#: phi_tilde may exceed phi by at most this much before it is flagged.
GT_SLACK = 1e-10
#: Tolerance for the finite-difference endpoint slopes of phi.
SLOPE_TOL = 1e-6


class Table(NamedTuple):
    columns: tuple
    rows: list
    log_columns: frozenset = frozenset()

    def in_base2(self) -> "Table":
        """Divide the log-scale columns by ``ln 2``; other columns are untouched."""
        idx = [i for i, c in enumerate(self.columns) if c in self.log_columns]
        rows = []
        for row in self.rows:
            row = list(row)
            for i in idx:
                if isinstance(row[i], float):
                    row[i] = row[i] / math.log(2)
            rows.append(tuple(row))
        return Table(self.columns, rows, self.log_columns)


def parallel_map(fn, items, workers: int = 1) -> list:
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _flag(ok: bool) -> str:
    return "ok" if ok else "fail"


def bounds_table(pair: StatePair, r_grid, fail_tol: float = FAIL_TOL) -> Table:
    """``r, b(r), b_tilde(r), a*, Phi(a*), Psi(a*), D(rho||sigma), D(sigma||rho)`` per ``r``.

    ``b_tilde`` is ``nan`` for rank-deficient pairs, where it is undefined.
    """
    r = np.asarray(r_grid, dtype=float)
    det = hoeffding_details(pair, r, fail_tol)
    value, a_star = np.atleast_1d(det.value), np.atleast_1d(det.a_star)
    bt = np.atleast_1d(b_tilde(pair, r, fail_tol)) if pair.full_rank else np.full(r.shape, np.nan)
    big_phi = np.atleast_1d(capital_phi(pair, a_star))
    big_psi = np.atleast_1d(capital_psi(pair, a_star))
    d1, d2 = pair.d_rho_sigma, pair.d_sigma_rho
    rows = [
        (float(r[i]), float(value[i]), float(bt[i]), float(a_star[i]), float(big_phi[i]), float(big_psi[i]), d1, d2)
        for i in range(r.size)
    ]
    columns = ("r", "b", "b_tilde", "a_star", "Phi", "Psi", "D_rho_sigma", "D_sigma_rho")
    return Table(columns, rows, frozenset(columns))


def phi_sweep_table(pair: StatePair, s_grid, tol: float = 1e-9) -> Table:
    """Long-format table of phi and its companions on an s-grid.

    Quantities: ``phi`` (spectral), ``phi_ns`` (classical pair, flagged
    against ``phi`` at ``tol``), ``phi_tilde`` (full-rank pairs only, flagged
    if above ``phi``), ``slope`` at ``s = 0`` and ``s = 1`` (flagged against
    ``-D(rho||sigma)`` and ``D(sigma||rho)``), and the two relative entropies.
    """
    s = np.asarray(s_grid, dtype=float)
    values = np.atleast_1d(phi(pair, s))
    ns_values = np.atleast_1d(classical_phi(ns_distributions(pair), s))
    rows = []
    for i, si in enumerate(s):
        v, c = float(values[i]), float(ns_values[i])
        diff = 0.0 if v == c else abs(v - c)
        rows.append(("phi", float(si), v, "spectral", ""))
        rows.append(("phi_ns", float(si), c, "nussbaum-szkola", _flag(diff <= tol)))
    if pair.full_rank:
        tilde = np.atleast_1d(phi_tilde(pair, s))
        for i, si in enumerate(s):
            rows.append(("phi_tilde", float(si), float(tilde[i]), "golden-thompson", _flag(tilde[i] <= values[i] + GT_SLACK)))
        profile = exponent_profile(pair, s)
        d1, d2 = pair.d_rho_sigma, pair.d_sigma_rho
        rows.append(("slope", 0.0, profile.slope_at_0, "finite-difference", _flag(abs(profile.slope_at_0 + d1) <= SLOPE_TOL)))
        rows.append(("slope", 1.0, profile.slope_at_1, "finite-difference", _flag(abs(profile.slope_at_1 - d2) <= SLOPE_TOL)))
        rows.append(("D_rho_sigma", "", d1, "spectral", ""))
        rows.append(("D_sigma_rho", "", d2, "spectral", ""))
    return Table(("quantity", "parameter", "value", "method", "tolerance_flag"), rows, frozenset({"value"}))


def ns_report(pair: StatePair, s_grid) -> dict:
    """The classical pair as JSON together with ``max_s |phi - phi_classical|``."""
    cp = ns_distributions(pair)
    s = np.asarray(s_grid, dtype=float)
    q_vals = np.atleast_1d(phi(pair, s))
    c_vals = np.atleast_1d(classical_phi(cp, s))
    diff = np.where(q_vals == c_vals, 0.0, np.abs(q_vals - c_vals))
    return {"classical_pair": cp.to_json(), "s_grid": s.tolist(), "residual": float(np.max(diff))}


def tails_table(
    cp: ClassicalPair, ns, b: float, cap: int = DEFAULT_TYPE_CAP, workers: int = 1, guard: float = GUARD
) -> Table:
    rows = parallel_map(lambda n: tuple(tails_sweep(cp, [n], b, cap, guard)[0]), ns, workers)
    columns = ("n", "b", "f_n", "g_n", "rate_f", "rate_g", "target_phi", "target_psi", "gap_f", "gap_g")
    return Table(columns, rows, frozenset(columns[4:]) | {"b"})


def simulate_table(
    pair: StatePair,
    ns,
    deltas,
    cap: int = DEFAULT_DIM_CAP,
    random_tests: int = 0,
    seed=None,
    workers: int = 1,
) -> Table:
    """Helstrom-test errors for every ``(n, delta)``, with the classical lower bound.

    ``risk = alpha + delta beta``; ``ns_bound`` is the minimum-overlap bound
    of the i.i.d. classical pair; ``slack = risk - ns_bound``. With
    ``random_tests > 0`` the smallest risk among that many seeded random tests
    is added, which the Helstrom risk never exceeds.
    """
    cp = ns_distributions(pair)
    grid = [(int(n), float(d)) for n in ns for d in deltas]
    seeds = np.random.SeedSequence(seed).spawn(len(grid))

    def row(k):
        n, delta = grid[k]
        if delta <= 0:
            raise DomainError(f"delta must be positive, got {delta}")
        rho_n, sigma_n = tensor_power(pair.rho, n, cap), tensor_power(pair.sigma, n, cap)
        alpha, beta = error_probabilities(rho_n, sigma_n, helstrom_test(rho_n, sigma_n, delta))
        risk = alpha + delta * beta
        bound = iid_lower_bound(cp, n, -math.log(delta) / n)
        out = (n, delta, alpha, beta, risk, bound, risk - bound)
        if random_tests:
            rng = np.random.default_rng(seeds[k])
            best = math.inf
            for _ in range(random_tests):
                ra, rb = error_probabilities(rho_n, sigma_n, random_test(rho_n.shape[0], rng))
                best = min(best, ra + delta * rb)
            out = out + (best,)
        return out

    columns = ("n", "delta", "alpha", "beta", "risk", "ns_bound", "slack")
    if random_tests:
        columns = columns + ("random_min_risk",)
    return Table(columns, parallel_map(row, range(len(grid)), workers))


def probe_table(pair: StatePair, a: float, n_max: int, cap: int = DEFAULT_DIM_CAP) -> Table:
    rows = [tuple(r) for r in conjecture_probe(pair, a, n_max, cap)]
    columns = ("n", "a", "rateF", "rateG", "Phi", "Psi", "gapF", "gapG")
    return Table(columns, rows, frozenset(columns[1:]))


def channel_check_table(pair: StatePair, channels, s_grid, tol: float, relent_tol: float, workers: int = 1) -> Table:
    """Data-processing violations of ``Tr[rho^(1-s) sigma^s]`` and of ``D`` per channel.

    Positive violations indicate a numerical problem; flags compare them with
    ``tol`` and ``relent_tol``.
    """
    s = np.asarray(s_grid, dtype=float)

    def row(k):
        ch = channels[k]
        renyi = renyi_monotonicity_check(pair, ch, s)
        try:
            rel_v, reg = relent_monotonicity_check(pair, ch)
        except DomainError:
            # D(rho||sigma) is infinite: nothing to check
            rel_v, reg = math.nan, math.nan
        return (k, ch.d_in, ch.d_out, len(ch.kraus_ops), renyi, rel_v, reg,
                _flag(renyi <= tol), _flag(not rel_v > relent_tol))

    columns = ("channel", "d_in", "d_out", "kraus", "renyi_violation", "relent_violation",
               "regularization", "renyi_flag", "relent_flag")
    return Table(columns, parallel_map(row, range(len(channels)), workers), frozenset({"relent_violation"}))
