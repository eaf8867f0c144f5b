"""
Binomial tails and disjoint intervals
=====================================

Exact binomial tail exponents converge to the Sanov closed form, and a
greedy sweep over equal-length intervals keeps a disjoint half of their union.
"""
import numpy as np

from stabcap.combinatorics import (binomial_count_rate, binomial_tail_rate, disjoint_subcollection,
                                   entropy_bits, sanov_rate)

r = 0.25
print("Sanov rate:", sanov_rate(r), " H(r):", entropy_bits(r))
for T in (64, 128, 256, 512, 2048):
    exact = binomial_tail_rate(T, r)
    print(f"T={T:5d}: exact {exact:.6f}  gap {abs(exact - sanov_rate(r)):.6f}  "
          f"count rate {binomial_count_rate(T, r):.6f}")

rng = np.random.default_rng(3)
lefts = rng.uniform(0, 8, size=12)
intervals = [(a, a + 1.0) for a in lefts]
sel = disjoint_subcollection(intervals)
print("selected:", [tuple(np.round(intervals[i], 3)) for i in sel.selected])
print(f"union {sel.union_measure:.3f}, selected {sel.selected_measure:.3f}")
