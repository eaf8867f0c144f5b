import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from stabcap.channels import noiseless
from stabcap.errors import CapabilityError, InputError
from stabcap.estimation import (bin_pipeline, conditioned_set, contraction_bound, coupling_tv,
                                estimation_experiment, step5_feasibility, tail_ratio)
from stabcap.models import Distribution, linear_model
from stabcap.policies import ZoomPolicy


def test_conditioned_examples(doubling):
    z = np.zeros(5)
    cs = conditioned_set(doubling, z, z, 1.0, 0.0, 1)
    assert cs.low == -1 and cs.high == 1 and cs.midpoint == pytest.approx(0)
    cs = conditioned_set(doubling, z, z, 1.0, 0.0, 3)
    assert cs.low == pytest.approx(-0.25, abs=cs.cell) and cs.high == pytest.approx(0.25, abs=cs.cell)
    assert cs.midpoint == pytest.approx(0, abs=1e-12)


def test_conditioned_empty(uniform11):
    m = linear_model([[2.0]], init=uniform11, noise=Distribution("gaussian", {"std": 1.0}))
    w = np.random.default_rng(0).normal(size=5)
    cs = conditioned_set(m, np.zeros(5), w, 0.0, 0.0, 3)
    assert cs.empty and math.isnan(cs.diameter)


def test_conditioned_grid_too_coarse(doubling):
    with pytest.raises(InputError, match="at least"):
        conditioned_set(doubling, np.zeros(20), np.zeros(20), 1.0, 0.1, 20, grid=1000)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from([4, 7, 10]))
def test_contraction_property(seed, T):
    m = linear_model([[2.0]], init=Distribution("uniform", {"low": -1, "high": 1}))
    rng = np.random.default_rng(seed)
    u = rng.uniform(-1, 1, T)
    cs = conditioned_set(m, u, np.zeros(T), 1.0, 0.1, T)
    if not cs.empty:
        assert cs.diameter <= contraction_bound(1.0, 2.0, 0.1, T) + cs.cell


def test_bin_examples(uniform11):
    single = bin_pipeline([0.2], 0.05, 3, (-1, 1), 0.5, 0.5, uniform11)
    assert single.n1 == single.n2 == 1 and single.n3 == 1
    assert single.measure_m == pytest.approx(single.measure_m_bar)
    r = bin_pipeline([0, 0.1, 0.3, 0.5], 0.05, 2, (-1, 1), 0.5, 0.5)
    assert r.c_index == [0, 2, 3] and r.n2 == 3 and r.n3 == 2
    spaced = bin_pipeline([-0.6, -0.2, 0.2, 0.6], 0.1, 2, (-1, 1), 0.5, 0.5)
    assert spaced.n2 == 4 and all(len(d) == 1 for d in spaced.d_sets)


def test_bin_errors():
    with pytest.raises(InputError):
        bin_pipeline([0.0], 0.1, 1, (-1, 1), 0.0, 1.0)
    with pytest.raises(InputError):
        bin_pipeline([0.0], 0.1, 1, (-1, 1), 2.0, 1.0)


def test_bins_outside_support_dropped():
    r = bin_pipeline([0.0, 0.97], 0.05, 1, (-1, 1), 0.5, 0.5)
    assert r.dropped == [1] and r.n1 == 1


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(-0.9, 0.9), min_size=1, max_size=40), st.floats(0.005, 0.1),
       st.integers(1, 5))
def test_pipeline_invariants(centers, radius, L):
    r = bin_pipeline(centers, radius, L, (-1, 1), 0.5, 0.5)
    rho = 2 * radius
    cs = sorted(r.c_bins)
    assert all(b[0] > a[1] for a, b in zip(cs, cs[1:]))
    pieces = sorted(p for d in r.d_sets for p in d)
    assert all(b[0] >= a[1] - 1e-12 for a, b in zip(pieces, pieces[1:]))
    assert sorted(k for g in r.e_groups for k in g) == list(range(r.n2))
    assert r.n3 == r.n2 // L + 1
    assert r.measure_m <= 2 * r.n3 * L * rho + 1e-9
    assert r.n2 >= 0.5 * r.measure_m / rho - 1 - 1e-9
    for d in r.d_sets:
        assert sum(b - a for a, b in d[1:]) <= (d[0][1] - d[0][0]) + 1e-9
    for g, m in zip(r.e_groups, r.group_measures):
        if len(g) == L:
            assert m >= L * rho - 1e-9


def test_coupling_examples():
    assert coupling_tv([0.25] * 4, 4) == pytest.approx(0)
    assert coupling_tv([0.75, 0.25], 2) == pytest.approx(0.25)
    assert coupling_tv([1.0, 0.0], 2) == pytest.approx(0.5)
    with pytest.raises(InputError):
        coupling_tv([-0.1, 1.1], 2)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 30))
def test_coupling_is_half_l1(seed, n):
    P = np.random.default_rng(seed).dirichlet(np.ones(n))
    assert coupling_tv(P, n) == pytest.approx(0.5 * np.abs(P - 1 / n).sum(), abs=1e-12)


def test_step5_examples():
    v, flag = step5_feasibility(1.0, 1.0, 0.1, 0.001, 100)
    direct = 1 - 0.5 * 0.099 / 0.1 + 1 / 200 + 2 * 0.001 / 0.099
    assert v == pytest.approx(direct) and flag
    v, _ = step5_feasibility(1.0, 1.0, 0.1, 1e-12, 10 ** 12)
    assert v == pytest.approx(0.5, abs=1e-9)
    v, flag = step5_feasibility(1.0, 10.0, 0.1, 0.001, 2)
    assert v > 1 and not flag
    with pytest.raises(InputError):
        step5_feasibility(1.0, 1.0, 0.4, 0.001, 2)


def test_tail_ratio_examples():
    g = tail_ratio("gaussian", [0.1, 0.01, 0.001])
    assert g[0] > g[1] > g[2] > 0
    lap = tail_ratio("laplace", [0.1, 0.01, 0.001])
    assert max(lap) / min(lap) - 1 < 0.05
    assert tail_ratio("uniform", [0.01]) == [0.0]
    with pytest.raises(CapabilityError):
        tail_ratio("zero", [0.1])


def test_experiment_examples(doubling):
    rich = estimation_experiment(doubling, noiseless(8), ZoomPolicy(3), 1.0, 0.1, [4, 8, 12], 60, seed=1)
    assert rich.exceedance[-1] == 0.0
    poor = estimation_experiment(doubling, noiseless(1), ZoomPolicy(0), 1.0, 0.1, [4, 8, 12], 60, seed=1)
    assert poor.distinct_controls == [1, 1, 1] and poor.control_rate == [0.0] * 3
    assert poor.exceedance[-1] >= 0.9
    again = estimation_experiment(doubling, noiseless(8), ZoomPolicy(3), 1.0, 0.1, [4, 8, 12], 60, seed=1)
    assert again.exceedance == rich.exceedance


def test_experiment_fixed_noise(uniform11):
    m = linear_model([[2.0]], init=uniform11, noise=Distribution("uniform", {"low": -0.01, "high": 0.01}))
    rep = estimation_experiment(m, noiseless(8), ZoomPolicy(3, noise_bound=0.01), 1.0, 0.1, [6],
                                20, seed=2, noise_mode="fixed")
    assert rep.noise_mode == "fixed" and len(rep.exceedance) == 1
