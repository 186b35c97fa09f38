import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

import oracles
from qhoeffding.classical_iid import (
    cramer_rate_lower,
    cramer_rate_upper,
    event_log_mass,
    iid_lower_bound,
    iid_tail_f,
    iid_tail_g,
    rate_interval,
    tails_sweep,
    type_classes,
    type_count,
)
from qhoeffding.errors import DomainError, ResourceError
from qhoeffding.nussbaum_szkola import ClassicalPair, ns_distributions
from qhoeffding.ensembles import reference_pair

BERN = ClassicalPair.from_vectors(oracles.BERN_P, oracles.BERN_Q)


def test_type_classes_enumeration():
    tc = type_classes(3, 3)
    assert tc.counts.shape == (type_count(3, 3), 3) == (10, 3)
    assert np.all(tc.counts.sum(axis=1) == 3)
    assert_allclose(np.exp(tc.log_multinomial).sum(), 3**3)
    assert len({tuple(c) for c in tc.counts}) == 10


def test_type_cap():
    with pytest.raises(ResourceError):
        type_classes(30, 6, cap=1000)


def test_bernoulli_n2_by_hand():
    # llr = log(q/p) is log(1/2) and log(3/2); a sum >= 0 needs at least one "3/2" symbol
    # ... except (3/2, 1/2) sums to log(3/4) < 0, so only both-second counts: f_2 = 1/4
    assert iid_tail_f(BERN, 2, 0.0) == pytest.approx(0.25)
    assert iid_tail_g(BERN, 2, 0.0) == pytest.approx(0.4375)
    assert iid_lower_bound(BERN, 2, 0.0) == pytest.approx(11 / 32)


@pytest.mark.parametrize("n", [1, 3, 5, 7])
@pytest.mark.parametrize("b", [-0.1, 0.0, 0.05])
def test_tails_match_sequence_enumeration(n, b):
    f, g = oracles.enumerate_tails(oracles.BERN_P, oracles.BERN_Q, n, b)
    assert_allclose(iid_tail_f(BERN, n, b), f, atol=1e-13)
    assert_allclose(iid_tail_g(BERN, n, b), g, atol=1e-13)


@pytest.mark.parametrize("n", [1, 2, 4])
def test_reference_tails_match_enumeration(n):
    cp = ns_distributions(reference_pair())
    for b in (-0.05, 0.0, 0.1):
        f, g = oracles.enumerate_tails(cp.p, cp.q, n, b)
        assert_allclose(iid_tail_f(cp, n, b), f, atol=1e-13)
        assert_allclose(iid_tail_g(cp, n, b), g, atol=1e-13)


def test_cramer_rates_against_grid_oracle():
    for b in (-0.1, 0.0, 0.1):
        phi_rate = oracles.grid_legendre(oracles.bern_phi, b)
        assert_allclose(cramer_rate_upper(BERN, b), phi_rate, atol=1e-9)
        assert_allclose(cramer_rate_lower(BERN, b), phi_rate - b, atol=1e-9)


def test_rate_interval_is_open():
    lo, hi = rate_interval(BERN)
    assert_allclose((lo, hi), (-oracles.BERN_D_PQ, oracles.BERN_D_QP))
    with pytest.raises(DomainError):
        cramer_rate_upper(BERN, hi)


def test_rate_gap_shrinks():
    rows = tails_sweep(BERN, [8, 40], 0.0)
    assert rows[1].gap_f < rows[0].gap_f
    assert_allclose(rows[0].gap_f, 0.2071, atol=1e-4)
    assert_allclose(rows[1].gap_f, 0.04557, atol=1e-5)
    for row in rows:
        assert row.rate_f >= row.target_phi


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 6), b=st.floats(-0.2, 0.2))
def test_tails_are_complementary_under_their_measures(seed, n, b):
    rng = np.random.default_rng(seed)
    p, q = rng.dirichlet(np.ones(3)), rng.dirichlet(np.ones(3))
    cp = ClassicalPair.from_vectors(p, q)
    f, g = oracles.enumerate_tails(p, q, n, b)
    assert_allclose(iid_tail_f(cp, n, b), f, atol=1e-12)
    assert_allclose(iid_tail_g(cp, n, b), g, atol=1e-12)
    # Chernoff-type bounds: f <= exp(-n Phi), g <= exp(-n Psi)
    lo, hi = rate_interval(cp)
    if lo < b < hi:
        assert f <= math.exp(-n * cramer_rate_upper(cp, b)) * (1 + 1e-9)
        assert g <= math.exp(-n * cramer_rate_lower(cp, b)) * (1 + 1e-9)


def test_identical_distributions():
    cp = ClassicalPair.from_vectors([0.3, 0.7], [0.3, 0.7])
    for n in (1, 4):
        assert iid_tail_f(cp, n, 0.0) == pytest.approx(1.0)
        assert iid_tail_g(cp, n, 0.0) == 0.0
        assert iid_lower_bound(cp, n, 0.0) == pytest.approx(0.5)
    with pytest.raises(DomainError):
        cramer_rate_upper(cp, 0.0)


def test_whole_space_and_single_draw():
    llr = np.log(BERN.q / BERN.p)
    assert iid_tail_f(BERN, 3, llr.min() - 0.01) == pytest.approx(1.0)
    assert iid_tail_g(BERN, 1, llr.max() + 0.01) == pytest.approx(1.0)
    assert iid_tail_f(BERN, 1, 0.0) == pytest.approx(BERN.p[llr >= 0].sum())


@pytest.mark.parametrize("n", [1, 3, 6])
@pytest.mark.parametrize("b", [-0.2, 0.0, 0.1])
def test_events_partition_under_p(n, b):
    f = event_log_mass(BERN, n, b, "p", "f")
    g = event_log_mass(BERN, n, b, "p", "g")
    assert_allclose(math.exp(f) + math.exp(g), 1.0, atol=1e-10)


def test_disjoint_supports():
    cp = ClassicalPair(((0, 0), (1, 1)), [1.0, 0.0], [0.0, 1.0])
    # llr is -inf on every p-sample and +inf on every q-sample, so both error events are null
    for n in (1, 3):
        assert iid_tail_f(cp, n, 0.0) == 0.0
        assert iid_tail_g(cp, n, 0.0) == 0.0
        assert iid_lower_bound(cp, n, 0.1) == 0.0


def test_rate_vanishes_at_lower_end():
    lo, _ = rate_interval(BERN)
    assert cramer_rate_upper(BERN, lo + 1e-9) == pytest.approx(0.0, abs=1e-8)


def test_gap_bound_and_chernoff_for_g():
    rows = tails_sweep(BERN, range(1, 41), 0.0)
    m = 2
    for row in rows:
        assert row.gap_f < (m * math.log(row.n + 1) + 2) / row.n
        assert row.gap_g < (m * math.log(row.n + 1) + 2) / row.n
        assert row.rate_g >= row.target_psi - 1e-9
