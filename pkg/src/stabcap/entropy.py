"""Monte Carlo spanning sets and stabilization-entropy estimates.

A set S of open-loop control sequences of length T spans (B, rho, r) on a
sample of initial states and noise paths when at least a (1 - rho) fraction
of the samples has some sequence in S keeping the state in B for at least a
(1 - r) fraction of the times t = 0..T-1.  Minimal spanning sets are set-cover
optima; the greedy cover is within a factor 1 + ln n of the optimum.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .ams import Box
from .channels import noiseless
from .errors import CapabilityError, InputError
from .models import SystemModel, batch_step, draw_initial_and_noise
from .policies import ZoomPolicy, run_zoom_loop

MAX_CANDIDATES = 1 << 16
LIMSUP_CAVEAT = ("the entropy is a limsup over T; a finite-horizon slope cannot "
                 "distinguish limsup from liminf")


class CoverageError(CapabilityError):
    """The candidate pool cannot reach the requested coverage."""

    def __init__(self, message: str, max_coverage: float):
        super().__init__(message)
        self.max_coverage = max_coverage


def spanning_count_oracle_affine(a: float, b_half: float, T: int) -> int:
    """Minimal spanning count for x' = a x + u, x0 ~ U[-b, b], B = [-b, b], rho = r = 0.

    Every fixed control sequence keeps an initial interval of length
    2 b |a|^-(T-1), so covering B takes ceil(|a|^(T-1)) sequences.
    """
    if T < 1:
        raise InputError("T must be at least 1")
    if b_half <= 0:
        raise InputError("half-width must be positive")
    if abs(a) <= 1:
        raise InputError(f"|a| = {abs(a)} <= 1: the count is 1 at every T (degenerate case)")
    if float(a).is_integer():
        return abs(int(a)) ** (T - 1)
    return math.ceil(abs(a) ** (T - 1) - 1e-9)


@dataclass
class SampleSet:
    x0: np.ndarray      # (n, N)
    noise: np.ndarray   # (n, T, N)
    seed: int
    sampling: str


def draw_samples(model: SystemModel, T: int, n: int, seed: int, sampling: str = "iid") -> SampleSet:
    """Initial states and noise paths from per-sample seed streams.

    ``sampling="stratified"`` (scalar models only) replaces the i.i.d. draw of
    x0 by one draw per probability stratum [j/n, (j+1)/n) of the initial law.
    """
    if n < 1:
        raise InputError("need at least one sample")
    N = model.dimension
    x0 = np.empty((n, N))
    w = np.empty((n, T, N))
    strat = np.empty(n)
    for j in range(n):
        x0[j], w[j], rng = draw_initial_and_noise(model, seed, j, T)
        strat[j] = rng.uniform()
    if sampling == "stratified":
        if N != 1:
            raise InputError("stratified sampling is implemented for scalar models only")
        x0[:, 0] = model.init.quantile((np.arange(n) + strat) / n)
    elif sampling != "iid":
        raise InputError(f"unknown sampling scheme {sampling!r}")
    return SampleSet(x0, w, seed, sampling)


def in_box_counts(model: SystemModel, box: Box, T: int, candidates: np.ndarray,
                  samples: SampleSet, chunk: int = 256) -> np.ndarray:
    """#{t < T : x_t in B} for every (candidate, sample) pair, shape (C, n)."""
    C = candidates.shape[0]
    n, N = samples.x0.shape
    out = np.empty((C, n), dtype=np.int32)
    for s in range(0, C, chunk):
        cand = candidates[s:s + chunk]                    # (c, T, N)
        c = cand.shape[0]
        x = np.broadcast_to(samples.x0, (c, n, N)).reshape(c * n, N)
        count = box.contains(x).astype(np.int32)
        for t in range(T - 1):
            u = np.repeat(cand[:, t], n, axis=0)
            w = np.tile(samples.noise[:, t], (c, 1))
            with np.errstate(over="ignore", invalid="ignore"):
                x = batch_step(model, x, u, w)
            count += box.contains(x)
        out[s:s + c] = count.reshape(c, n)
    return out


def lattice_candidates(T: int, dimension: int, bits: int, control_range) -> np.ndarray:
    """All sequences over a uniform grid of 2**bits control levels per step.

    The control at t = T-1 cannot influence x_0..x_{T-1}, so it is fixed to 0.
    """
    lo, hi = control_range
    levels = np.linspace(lo, hi, 2 ** bits)
    per_step = np.array(list(itertools.product(levels, repeat=dimension)))  # (L^N, N)
    total = len(per_step) ** (T - 1)
    if total > MAX_CANDIDATES:
        raise CapabilityError(f"lattice has {total} candidates (> {MAX_CANDIDATES}); "
                              "lower the resolution or the horizon")
    out = np.zeros((total, T, dimension))
    for k, combo in enumerate(itertools.product(range(len(per_step)), repeat=T - 1)):
        out[k, :T - 1] = per_step[list(combo)] if combo else out[k, :T - 1]
    return out


def policy_candidates(model: SystemModel, policy: ZoomPolicy, samples: SampleSet, T: int) -> np.ndarray:
    """One candidate per sample: the controls the zoom policy applies to it."""
    ch = noiseless(policy.alphabet_size(model.dimension))
    n = samples.x0.shape[0]
    res = run_zoom_loop(model, policy, ch, samples.x0, samples.noise, np.zeros((n, T)), samples.seed)
    return res.controls


@dataclass
class SpanningSet:
    horizon: int
    box: Box
    rho: float
    r: float
    candidates: np.ndarray          # (C, T, N)
    selected: list                  # candidate indices in selection order
    covered_fraction: float
    best_frequency: np.ndarray      # per sample, best in-B frequency over the selected set
    covered: np.ndarray             # per sample bool
    samples: SampleSet = field(repr=False, default=None)

    @property
    def count(self) -> int:
        return len(self.selected)


def _required_hits(T: int, r: float) -> int:
    return math.ceil((1 - r) * T - 1e-9)


def greedy_spanning_estimate(model: SystemModel, box: Box, T: int, rho: float, r: float,
                             samples: int, candidate_source: str = "policy", seed: int = 0,
                             policy: Optional[ZoomPolicy] = None, lattice_bits: int = 1,
                             control_range=(-1.0, 1.0), sampling: str = "iid"):
    """Greedy set cover of the sample by candidate control sequences.

    Returns ``(count, SpanningSet)``.  Ties go to the lowest candidate index.
    """
    if T < 1:
        raise InputError("T must be at least 1")
    if not (0 <= rho < 1 and 0 <= r < 1):
        raise InputError("need 0 <= rho < 1 and 0 <= r < 1")
    if box.dimension != model.dimension:
        raise InputError("box dimension does not match the model")
    smp = draw_samples(model, T, samples, seed, sampling)
    if candidate_source == "policy":
        cands = policy_candidates(model, policy or ZoomPolicy(3, gain=2.0), smp, T)
    elif candidate_source == "lattice":
        cands = lattice_candidates(T, model.dimension, lattice_bits, control_range)
    else:
        raise InputError(f"unknown candidate source {candidate_source!r}")
    counts = in_box_counts(model, box, T, cands, smp)
    return _greedy(counts, cands, box, T, rho, r, smp)


def _greedy(counts, cands, box, T, rho, r, smp):
    n = counts.shape[1]
    cover = counts >= _required_hits(T, r)
    need = math.ceil((1 - rho) * n - 1e-9)
    reachable = cover.any(axis=0)
    if reachable.sum() < need:
        frac = float(reachable.mean())
        raise CoverageError(f"candidates cover at most {frac:.4f} of the sample; "
                            f"{1 - rho:.4f} required", frac)
    covered = np.zeros(n, dtype=bool)
    selected = []
    while covered.sum() < need:
        gains = (cover & ~covered).sum(axis=1)
        k = int(np.argmax(gains))
        selected.append(k)
        covered |= cover[k]
    best = counts[selected].max(axis=0) / T if selected else np.zeros(n)
    sset = SpanningSet(T, box, rho, r, cands, selected, float(covered.mean()), best, covered, smp)
    return len(selected), sset


def verify_spanning_set(model: SystemModel, sset: SpanningSet) -> bool:
    """Replay every selected sequence on every covered sample."""
    chosen = sset.candidates[sset.selected]
    counts = in_box_counts(model, sset.box, sset.horizon, chosen, sset.samples)
    ok = counts.max(axis=0) >= _required_hits(sset.horizon, sset.r)
    if np.any(sset.covered & ~ok):
        return False
    n = len(ok)
    return bool(ok.sum() >= math.ceil((1 - sset.rho) * n - 1e-9))


@dataclass
class RateFit:
    slope: float
    intercept: float
    residuals: list
    max_abs_residual: float
    horizons: list
    caveat: str = LIMSUP_CAVEAT


def entropy_rate_fit(counts: dict) -> RateFit:
    """Least-squares slope of log2(count) against T."""
    if len(counts) < 3:
        raise InputError("need counts at three or more horizons")
    T = np.array(sorted(counts), dtype=float)
    y = np.log2([counts[int(t)] for t in T])
    slope, intercept = np.polyfit(T, y, 1)
    res = y - (slope * T + intercept)
    return RateFit(float(slope), float(intercept), res.tolist(), float(np.max(np.abs(res))),
                   [int(t) for t in T])
