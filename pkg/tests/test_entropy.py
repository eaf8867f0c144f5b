import math

import pytest
from hypothesis import given, settings, strategies as st

from stabcap.ams import Box
from stabcap.entropy import (CoverageError, draw_samples, entropy_rate_fit, greedy_spanning_estimate,
                             in_box_counts, lattice_candidates, spanning_count_oracle_affine,
                             verify_spanning_set)
from stabcap.errors import InputError
from stabcap.models import Distribution, linear_model
from stabcap.policies import ZoomPolicy

B = Box.interval(-1, 1)


def test_oracle_examples():
    assert spanning_count_oracle_affine(2, 1, 1) == 1
    assert spanning_count_oracle_affine(2, 1, 4) == 8
    assert spanning_count_oracle_affine(3, 1, 3) == 9
    assert spanning_count_oracle_affine(1.5, 1, 3) == 3
    with pytest.raises(InputError):
        spanning_count_oracle_affine(1.0, 1, 3)


def test_policy_candidates_sandwich(doubling):
    n = 500
    count, sset = greedy_spanning_estimate(doubling, B, 4, 0.0, 0.0, n, "policy", seed=3,
                                           policy=ZoomPolicy(3))
    assert 8 <= count <= 8 * (1 + math.log(n))
    assert verify_spanning_set(doubling, sset)


@pytest.mark.parametrize("T", [2, 5, 8])
def test_lattice_hits_oracle(doubling, T):
    count, sset = greedy_spanning_estimate(doubling, B, T, 0.0, 0.0, 1000, "lattice", seed=1,
                                           sampling="stratified")
    assert count == spanning_count_oracle_affine(2, 1, T)
    assert sset.covered.all() and verify_spanning_set(doubling, sset)


def test_stable_model_single_sequence(uniform11):
    m = linear_model([[0.5]], init=uniform11)
    count, _ = greedy_spanning_estimate(m, B, 10, 0.0, 0.0, 200, "policy", seed=0,
                                        policy=ZoomPolicy(2, gain=0.5))
    assert count == 1


def test_high_rho_single_sequence(doubling):
    count, _ = greedy_spanning_estimate(doubling, B, 6, 0.99, 0.0, 100, "lattice", seed=0)
    assert count == 1


def test_coverage_unreachable(doubling):
    with pytest.raises(CoverageError) as info:
        greedy_spanning_estimate(doubling, B, 6, 0.0, 0.0, 100, "lattice", seed=0,
                                 control_range=(5.0, 6.0))
    assert 0 <= info.value.max_coverage < 1


def test_fit_examples():
    assert entropy_rate_fit({T: 2 ** (T - 1) for T in range(2, 11)}).slope == pytest.approx(1.0)
    assert entropy_rate_fit({2: 5, 3: 5, 4: 5}).slope == pytest.approx(0.0)
    assert entropy_rate_fit({T: 4 ** T for T in (1, 2, 3)}).slope == pytest.approx(2.0)
    with pytest.raises(InputError):
        entropy_rate_fit({1: 1, 2: 2})
    assert "limsup" in entropy_rate_fit({1: 1, 2: 2, 3: 4}).caveat


def test_greedy_reproducible(doubling):
    a = greedy_spanning_estimate(doubling, B, 5, 0.0, 0.0, 300, "policy", seed=4)[1]
    b = greedy_spanning_estimate(doubling, B, 5, 0.0, 0.0, 300, "policy", seed=4)[1]
    assert a.selected == b.selected


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 1000), st.floats(0, 0.5), st.floats(0, 0.5))
def test_monotone_in_tolerances(seed, rho, r):
    # same samples and candidates; larger tolerances never need more sequences
    m = linear_model([[2.0]], noise=Distribution("uniform", {"low": -0.1, "high": 0.1}),
                     init=Distribution("uniform", {"low": -1, "high": 1}))
    T = 5
    cands = lattice_candidates(T, 1, 1, (-1.0, 1.0))
    smp = draw_samples(m, T, 200, seed)
    counts = in_box_counts(m, B, T, cands, smp)
    from stabcap.entropy import _greedy

    def run(rho_, r_):
        try:
            return _greedy(counts, cands, B, T, rho_, r_, smp)[0]
        except CoverageError:
            return math.inf
    assert run(rho, r) <= run(0.0, r) and run(rho, r) <= run(rho, 0.0)
