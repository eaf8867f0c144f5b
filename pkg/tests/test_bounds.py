import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from stabcap.ams import Box
from stabcap.bounds import (CERTIFIED, cocycle_rate_lower, inf_logdet, linear_bound,
                            logdet_integral_estimate, moment_bound, radial_profile, selgrade_sum,
                            volume_bound)
from stabcap.errors import CapabilityError, InputError
from stabcap.models import linear_model, sample_ensemble, semilinear_model, sqrt_decay_scalar


def test_inf_logdet_examples():
    assert inf_logdet(linear_model([[2.0]]), Box.interval(-5, 5)).value == pytest.approx(1.0)
    assert inf_logdet(sqrt_decay_scalar(), Box.interval(-3, 3)).value == pytest.approx(1 / math.sqrt(3), abs=1e-9)
    assert inf_logdet(linear_model([[1.0]]), Box.interval(-1, 1)).value == 0.0


def test_inf_logdet_unbounded():
    with pytest.raises(InputError):
        inf_logdet(linear_model([[2.0]]), Box.interval(-np.inf, 1))


def test_volume_bound_examples():
    assert volume_bound(1.0, 1.0).value == 1.0
    assert volume_bound(0.0, 0.7).value == 0.0
    assert volume_bound(2 / 3, 1 / math.sqrt(3)).value == pytest.approx(2 / (3 * math.sqrt(3)))
    with pytest.raises(InputError):
        volume_bound(1.5, 1.0)


def test_volume_bound_clamps():
    rep = volume_bound(0.5, -1.0)
    assert rep.value == 0.0 and rep.raw == -0.5 and rep.notes


def test_volume_region_monotone():
    m = sqrt_decay_scalar()
    inner = inf_logdet(m, Box.interval(-2, 2)).value
    outer = inf_logdet(m, Box.interval(-6, 6)).value
    assert volume_bound(0.8, outer).value <= volume_bound(0.8, inner).value


def test_moment_examples():
    res = moment_bound(lambda k: 1 / math.sqrt(k), 1.0, 1.0, 100.0)
    assert res.kappa == pytest.approx(3, abs=1e-3)
    assert res.bound == pytest.approx(2 / (3 * math.sqrt(3)), abs=1e-6)
    assert moment_bound(lambda k: 0.0, 1.0, 1.0, 10.0).bound == 0.0
    cap = moment_bound(lambda k: 1.0, 1.0, 2.0, 1e3)
    assert cap.bound >= 1 - 1e-6 and cap.at_cap and cap.report.notes


def test_moment_profile_from_model():
    res = moment_bound(radial_profile(sqrt_decay_scalar()), 1.0, 1.0, 100.0)
    assert res.kappa == pytest.approx(3, abs=1e-3)


def test_moment_profile_failure():
    def bad(k):
        raise ValueError("no")
    with pytest.raises(CapabilityError):
        moment_bound(bad, 1.0, 1.0, 10.0)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.1, 5), st.floats(0.5, 3), st.floats(0.1, 1.5))
def test_moment_dominates_grid(M, p, s):
    prof = lambda k: 1.0 / (1.0 + k) ** s
    kmax = 50 * M ** (1 / p) + 1
    res = moment_bound(prof, M, p, kmax)
    for k in np.geomspace(M ** (1 / p), kmax, 200):
        assert res.bound >= (1 - M / k ** p) * prof(k) - 1e-9


def test_linear_examples():
    assert linear_bound(np.diag([2, 3, 0.5])).value == pytest.approx(math.log2(6), abs=1e-9)
    assert linear_bound(np.eye(3)).value == 0.0
    assert linear_bound([[1, -1], [1, 1]]).value == pytest.approx(1.0, abs=1e-9)


def test_linear_against_charpoly():
    rng = np.random.default_rng(0)
    for _ in range(20):
        A = rng.normal(size=(4, 4)) * 1.5
        roots = np.roots(np.poly(A))
        oracle = sum(max(0.0, math.log2(abs(z))) for z in roots)
        assert linear_bound(A).value == pytest.approx(oracle, abs=1e-6)


def test_cocycle_examples():
    m = semilinear_model({"u1": [[2.0]], "u2": [[3.0]]}).semilinear
    r = cocycle_rate_lower(m, [0], 8)
    assert r.per_step == pytest.approx([1.0] * 8) and r.report.status == CERTIFIED
    assert cocycle_rate_lower(semilinear_model({"u": [[2.0]]}).semilinear, [0], 4).rate == pytest.approx(1)
    neg = cocycle_rate_lower(semilinear_model({"a": [[2.0]], "b": [[0.5]]}).semilinear, [0], 6)
    assert neg.report.value == 0.0 and neg.report.raw == pytest.approx(-1.0)


def test_cocycle_matches_exhaustive():
    import itertools
    rng = np.random.default_rng(5)
    mats = {"a": rng.normal(size=(2, 2)) + 2 * np.eye(2), "b": rng.normal(size=(2, 2)) + 2 * np.eye(2)}
    m = semilinear_model(mats).semilinear
    r = cocycle_rate_lower(m, [0, 1], 6)
    for n in range(1, 7):
        brute = min(math.log2(abs(np.linalg.det(m.transition(w))))
                    for w in itertools.product("ab", repeat=n))
        assert r.a[n - 1] == pytest.approx(brute, abs=1e-9 * n)


def test_cocycle_block_check():
    m = semilinear_model({"a": [[2.0, 0.0], [1.0, 3.0]]}).semilinear
    with pytest.raises(InputError):
        cocycle_rate_lower(m, [0], 3)
    assert cocycle_rate_lower(m, [1], 3).rate == pytest.approx(math.log2(3))


def test_cocycle_monotone_in_horizon():
    rng = np.random.default_rng(2)
    m = semilinear_model({"a": rng.normal(size=(2, 2)) + np.eye(2),
                          "b": rng.normal(size=(2, 2)) + np.eye(2)}).semilinear
    rates = [cocycle_rate_lower(m, [0, 1], n).rate for n in range(1, 8)]
    assert all(b >= a for a, b in zip(rates, rates[1:]))


def test_selgrade_examples():
    assert selgrade_sum([1.0, 0.585]).value == pytest.approx(1.585)
    assert selgrade_sum([-1.0]).value == 0.0
    assert selgrade_sum([0.3]).value == 0.3


def test_integral_estimate_is_not_certified(uniform11):
    m = linear_model([[2.0]], init=uniform11)
    ens = sample_ensemble(m, None, 10, 5, seed=0)
    rep = logdet_integral_estimate(m, ens, 5)
    assert rep.status != CERTIFIED and rep.value == pytest.approx(1.0)
