"""Binomial tail exponents and disjoint extraction from equal-length intervals."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln, logsumexp

from .errors import InputError

EXACT_LIMIT = 10_000
LENGTH_TOL = 1e-12


def entropy_bits(r: float) -> float:
    if r <= 0 or r >= 1:
        return 0.0
    return -(r * math.log2(r) + (1 - r) * math.log2(1 - r))


def _check_rate_args(r, alpha, beta, allow_r_one=False):
    if not (0 < alpha < 1 and 0 < beta < 1) or abs(alpha + beta - 1) > 1e-12:
        raise InputError("need alpha, beta in (0, 1) with alpha + beta = 1")
    upper_ok = r <= 1 if allow_r_one else r < 1
    if not (0 < r and upper_ok):
        raise InputError("need 0 < r < 1")


def _first_index(T: int, r: float) -> int:
    # ceil((1 - r) T), guarding against representation error in (1 - r) T
    return math.ceil((1 - r) * T - 1e-9)


def log2_tail_sum(T: int, r: float, alpha: float = 0.5, beta: float = 0.5) -> float:
    """log2 sum_{t >= ceil((1-r)T)} C(T, t) alpha^t beta^(T-t).

    Exact integer binomials up to ``EXACT_LIMIT``, log-gamma beyond.
    """
    lo = _first_index(T, r)
    ts = range(lo, T + 1)
    if alpha == beta == 0.5 and T <= EXACT_LIMIT:
        return math.log2(sum(math.comb(T, t) for t in ts)) - T
    if T <= EXACT_LIMIT:
        logc = np.array([math.log(math.comb(T, t)) for t in ts])
    else:
        t = np.arange(lo, T + 1)
        logc = gammaln(T + 1) - gammaln(t + 1) - gammaln(T - t + 1)
    t = np.arange(lo, T + 1)
    terms = logc + t * math.log(alpha) + (T - t) * math.log(beta)
    return float(logsumexp(terms) / math.log(2))


def binomial_tail_rate(T: int, r: float, alpha: float = 0.5, beta: float = 0.5) -> float:
    """(1/T) log2 of the binomial upper tail, computed exactly."""
    if T < 1:
        raise InputError("T must be a positive integer")
    _check_rate_args(r, alpha, beta, allow_r_one=True)
    return log2_tail_sum(T, r, alpha, beta) / T


def binomial_count_rate(T: int, r: float) -> float:
    """(1/T) log2 sum_{t >= ceil((1-r)T)} C(T, t)."""
    return binomial_tail_rate(T, r) + 1.0


def sanov_rate(r: float, alpha: float = 0.5, beta: float = 0.5) -> float:
    """Large-deviation limit of :func:`binomial_tail_rate` as T grows.

    H(r) + r log beta + (1 - r) log alpha when beta > r, else 0.  ``r = 0``
    is accepted as the limit r -> 0+.
    """
    if not (0 < alpha < 1 and 0 < beta < 1) or abs(alpha + beta - 1) > 1e-12:
        raise InputError("need alpha, beta in (0, 1) with alpha + beta = 1")
    if not 0 <= r < 1:
        raise InputError("need 0 <= r < 1")
    if beta <= r:
        return 0.0
    return entropy_bits(r) + r * math.log2(beta) + (1 - r) * math.log2(alpha)


def subset_rate(r: float) -> float:
    """Growth rate of #{subsets of [0, T) with at least (1-r)T elements}: H(r), r < 1/2."""
    if not 0 < r < 0.5:
        raise InputError("subset rate needs 0 < r < 1/2")
    return sanov_rate(r) + 1.0


# ---------------------------------------------------------------------------
# intervals


@dataclass(frozen=True)
class IntervalCollection:
    """Closed intervals [a_i, b_i] of a common length."""

    intervals: tuple

    def __post_init__(self):
        iv = tuple((float(a), float(b)) for a, b in self.intervals)
        if not iv:
            raise InputError("interval collection is empty")
        lengths = np.array([b - a for a, b in iv])
        if np.any(lengths < 0):
            raise InputError("interval with right endpoint below left endpoint")
        if np.ptp(lengths) > LENGTH_TOL:
            raise InputError("intervals must all have the same length")
        object.__setattr__(self, "intervals", iv)

    @property
    def length(self) -> float:
        return self.intervals[0][1] - self.intervals[0][0]

    def __len__(self):
        return len(self.intervals)


def merge(intervals) -> list:
    """Union of closed intervals as a sorted list of disjoint pieces."""
    out = []
    for a, b in sorted(intervals):
        if out and a <= out[-1][1]:
            out[-1][1] = max(out[-1][1], b)
        else:
            out.append([a, b])
    return [tuple(p) for p in out]


def measure(intervals) -> float:
    return float(sum(b - a for a, b in merge(intervals)))


def clip(pieces, lo: float, hi: float) -> list:
    """Intersect disjoint pieces with (lo, hi); measure is insensitive to endpoints."""
    out = []
    for a, b in pieces:
        a2, b2 = max(a, lo), min(b, hi)
        if b2 > a2:
            out.append((a2, b2))
    return out


@dataclass
class IntervalSelection:
    selected: list           # original indices, left to right
    order: list              # original indices sorted by left endpoint
    leftovers: list          # leftovers[k]: pieces of the union strictly between selected k and k+1
    tail: list               # pieces of the union right of the last selected interval
    union_measure: float
    selected_measure: float
    length: float
    notes: list = field(default_factory=list)


def disjoint_subcollection(collection) -> IntervalSelection:
    """Greedy left-to-right extraction of pairwise disjoint intervals.

    Sort by left endpoint (stable), keep the first interval, then keep each
    next interval that does not meet the last kept one.  Intervals are closed,
    so a shared endpoint counts as intersecting.  The kept intervals cover at
    least half of the union.
    """
    if not isinstance(collection, IntervalCollection):
        collection = IntervalCollection(tuple(collection))
    iv = collection.intervals
    order = sorted(range(len(iv)), key=lambda i: iv[i][0])
    selected = [order[0]]
    for i in order[1:]:
        if iv[i][0] > iv[selected[-1]][1]:
            selected.append(i)
    union = merge(iv)
    leftovers = []
    for k in range(len(selected) - 1):
        leftovers.append(clip(union, iv[selected[k]][1], iv[selected[k + 1]][0]))
    tail = clip(union, iv[selected[-1]][1], math.inf)
    l = collection.length
    return IntervalSelection(selected, order, leftovers, tail, measure(iv),
                             len(selected) * l, l)
