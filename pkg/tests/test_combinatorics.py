import math

import pytest
from hypothesis import given, settings, strategies as st

from stabcap.combinatorics import (IntervalCollection, binomial_count_rate, binomial_tail_rate,
                                   disjoint_subcollection, entropy_bits, measure, sanov_rate,
                                   subset_rate)
from stabcap.errors import InputError


def test_tail_rate_examples():
    assert binomial_tail_rate(4, 0.5) == pytest.approx(0.25 * math.log2(11 / 16))
    assert binomial_tail_rate(1, 1.0) == pytest.approx(0.0)
    assert abs(binomial_tail_rate(512, 0.25) - sanov_rate(0.25)) < 0.03


def test_tail_rate_against_direct_sum():
    for T, r, a in [(10, 0.3, 0.6), (33, 0.1, 0.2), (50, 0.45, 0.5)]:
        lo = math.ceil((1 - r) * T - 1e-9)
        direct = sum(math.comb(T, t) * a ** t * (1 - a) ** (T - t) for t in range(lo, T + 1))
        assert binomial_tail_rate(T, r, a, 1 - a) == pytest.approx(math.log2(direct) / T, rel=1e-10)


def test_large_T_uses_log_gamma():
    v = binomial_tail_rate(20_000, 0.25)
    assert abs(v - sanov_rate(0.25)) < 1e-3


def test_sanov_examples():
    assert sanov_rate(0.25) == pytest.approx(entropy_bits(0.25) - 1)
    assert subset_rate(0.25) == pytest.approx(0.811278, abs=1e-6)
    assert sanov_rate(0.6, 0.6, 0.4) == 0.0
    assert sanov_rate(0.0) == -1.0


def test_range_errors():
    with pytest.raises(InputError):
        binomial_tail_rate(10, 0.2, 0.5, 0.6)
    with pytest.raises(InputError):
        binomial_tail_rate(10, 1.2)


def test_rate_convergence_decreasing():
    gaps = [abs(binomial_tail_rate(T, 0.25) - sanov_rate(0.25)) for T in (64, 128, 256, 512)]
    assert all(b < a for a, b in zip(gaps, gaps[1:]))


def test_count_rate():
    assert abs(binomial_count_rate(512, 0.25) - entropy_bits(0.25)) < 0.03


def test_interval_examples():
    assert disjoint_subcollection([(0, 1), (2, 3)]).selected == [0, 1]
    sel = disjoint_subcollection([(0, 1), (0.5, 1.5), (1, 2)])
    assert sel.selected == [0] and sel.selected_measure == 1 and sel.union_measure == 2
    assert disjoint_subcollection([(0, 1)] * 5).selected == [0]


def test_unequal_lengths():
    with pytest.raises(InputError):
        IntervalCollection(((0, 1), (0, 2)))


@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(-50, 50, allow_nan=False), min_size=1, max_size=50), st.floats(0.01, 10))
def test_interval_lemma(lefts, length):
    iv = [(a, a + length) for a in lefts]
    sel = disjoint_subcollection(iv)
    chosen = sorted(iv[i] for i in sel.selected)
    assert all(b[0] > a[1] for a, b in zip(chosen, chosen[1:]))
    assert sel.selected_measure >= 0.5 * sel.union_measure - 1e-9
    for piece in sel.leftovers + [sel.tail]:
        assert measure(piece) <= sel.length + 1e-9
