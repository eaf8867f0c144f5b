import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from stabcap.errors import CapabilityError, InputError, NumericError
from stabcap.models import (Distribution, DensityBounds, additive_model, check_volume_expanding,
                            jacobian_logdet, linear_model, sample_ensemble, semilinear_model,
                            simulate, sqrt_decay_scalar, step, trajectory_rng)


def test_step_additive():
    m = linear_model([[2.0]])
    assert step(m, [1.0], 0.0, 0.0) == pytest.approx([2.0])
    assert step(m, [1.0], -2.0, 0.5) == pytest.approx([0.5])


def test_step_semilinear_diagonal():
    m = semilinear_model({"u1": np.diag([2.0, 3.0])})
    assert step(m, [1.0, 1.0], "u1", [0.0, 0.0]) == pytest.approx([2.0, 3.0])


def test_step_dimension_mismatch():
    m = linear_model(np.eye(2))
    with pytest.raises(InputError):
        step(m, [1.0], 0.0, 0.0)


def test_step_overflow_is_reported():
    m = linear_model([[1e300]])
    with pytest.raises(NumericError):
        step(m, [1e300], 0.0, 0.0)


def test_simulate_examples():
    m = linear_model([[2.0]])
    assert simulate(m, [1.0], [0, 0, 0], [0, 0, 0]).states[:, 0].tolist() == [1, 2, 4, 8]
    assert simulate(m, [1.0], [-2, -2, -2], [0, 0, 0]).states[:, 0].tolist() == [1, 0, -2, -6]


def test_simulate_semilinear_block():
    m = semilinear_model({"u1": np.diag([2.0, 3.0])})
    tr = simulate(m, [1.0, 0.0], ["u1", "u1"], np.zeros((2, 2)))
    assert tr.states.tolist() == [[1, 0], [2, 0], [4, 0]]


def test_simulate_error_carries_time_index():
    m = linear_model([[1e200]])
    with pytest.raises(NumericError, match="t=1"):
        simulate(m, [1.0], [0, 0, 0], [0, 0, 0])


def test_simulate_length_mismatch():
    with pytest.raises(InputError):
        simulate(linear_model([[2.0]]), [1.0], [0, 0], [0])


def test_jacobian_logdet_examples():
    assert jacobian_logdet(linear_model([[2.0]]), [0.3]) == pytest.approx(1.0)
    assert jacobian_logdet(sqrt_decay_scalar(), [4.0]) == pytest.approx(0.5)
    assert jacobian_logdet(linear_model(np.diag([2.0, 3.0])), [0, 0]) == pytest.approx(np.log2(6))


def test_jacobian_missing_profile():
    m = additive_model(lambda x: 2 * x, 1)
    with pytest.raises(CapabilityError):
        jacobian_logdet(m, [0.0])


def test_sqrt_decay_derivative_matches_profile():
    m = sqrt_decay_scalar()
    xs = np.array([-7.3, -2.0, -0.5, 0.2, 1.5, 4.0, 30.0])
    h = 1e-6
    d = (m.drift(xs + h) - m.drift(xs - h)) / (2 * h)
    assert np.log2(d) == pytest.approx(m.logdet(xs[:, None]), abs=1e-6)
    assert check_volume_expanding(m, -50, 50)


def test_volume_expanding_flag_detects_contraction():
    assert not check_volume_expanding(linear_model([[0.5]]), -1, 1)


def test_density_bounds_validation():
    with pytest.raises(InputError):
        DensityBounds(0.0, 1.0, (0, 1))
    with pytest.raises(InputError):
        DensityBounds(2.0, 1.0, (0, 1))


def test_unsupported_family():
    with pytest.raises(CapabilityError):
        Distribution("cauchy")


def test_ensemble_degenerate():
    m = linear_model([[2.0]], init=Distribution("point", {"value": 1.0}))
    ens = sample_ensemble(m, None, 3, 2, seed=0)
    assert ens.states[:, :, 0].tolist() == [[1, 2, 4]] * 3


def test_ensemble_mean_uniform(uniform11):
    m = linear_model([[2.0]], init=uniform11)
    ens = sample_ensemble(m, None, 10_000, 0, seed=3)
    assert abs(ens.states[:, 0, 0].mean()) < 0.05


def test_ensemble_reproducible(uniform11):
    m = linear_model([[0.5]], noise=uniform11, init=uniform11)
    a = sample_ensemble(m, None, 20, 15, seed=9)
    b = sample_ensemble(m, None, 20, 15, seed=9)
    assert np.array_equal(a.states, b.states)


def test_ensemble_order_independent(uniform11):
    # trajectory i depends only on (seed, i), not on how many are drawn
    m = linear_model([[0.5]], noise=uniform11, init=uniform11)
    big = sample_ensemble(m, None, 30, 5, seed=2)
    small = sample_ensemble(m, None, 7, 5, seed=2)
    assert np.array_equal(big.states[:7], small.states)


def test_trajectory_rng_streams_differ():
    assert trajectory_rng(1, 0).uniform() != trajectory_rng(1, 1).uniform()


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 1000), st.integers(1, 20))
def test_semilinear_matches_matrix_product(seed, T):
    rng = np.random.default_rng(seed)
    mats = {"a": rng.normal(size=(3, 3)) + 2 * np.eye(3), "b": rng.normal(size=(3, 3)) + 2 * np.eye(3)}
    m = semilinear_model(mats)
    word = [("a", "b")[k] for k in rng.integers(0, 2, size=T)]
    x0 = rng.normal(size=3)
    tr = simulate(m, x0, word, np.zeros((T, 3)))
    expect = m.semilinear.transition(word) @ x0
    assert np.allclose(tr.states[-1], expect, rtol=1e-10, atol=1e-12 * np.abs(expect).max())


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 1000), st.integers(1, 10))
def test_inhomogeneous_term_matches_simulation(seed, T):
    rng = np.random.default_rng(seed)
    mats = {"a": rng.normal(size=(2, 2)) + 2 * np.eye(2), "b": rng.normal(size=(2, 2)) + 2 * np.eye(2)}
    B = rng.normal(size=(2, 1))
    m = semilinear_model(mats, B)
    word = [("a", "b")[k] for k in rng.integers(0, 2, size=T)]
    v = rng.normal(size=(T, 1))
    w = rng.normal(size=(T, 2))
    x0 = rng.normal(size=2)
    tr = simulate(m, x0, list(zip(word, v)), w)
    expect = m.semilinear.transition(word) @ x0 + m.semilinear.inhomogeneous_term(word, v, w)
    assert np.allclose(tr.states[-1], expect, rtol=1e-9, atol=1e-9)


def test_singular_matrix_rejected():
    with pytest.raises(InputError):
        semilinear_model({"a": np.zeros((2, 2))})
