"""Noiseless finite-alphabet channels and discrete memoryless channels.

Feedback is not a property of the channel: the closed-loop driver in
:mod:`stabcap.policies` hands received symbols back to the encoder.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .errors import CapabilityError, InputError, NumericError

ROW_TOL = 1e-12
MAX_EXPLICIT_CODEWORDS = 4096


@dataclass(frozen=True)
class ChannelModel:
    kind: str             # "noiseless" | "dmc"
    matrix: np.ndarray    # P(q'|q), rows = inputs

    def __post_init__(self):
        P = np.atleast_2d(np.asarray(self.matrix, dtype=float))
        if self.kind not in ("noiseless", "dmc"):
            raise InputError(f"unknown channel kind {self.kind!r}")
        if np.any(P < 0) or np.any(np.abs(P.sum(axis=1) - 1.0) > ROW_TOL):
            raise InputError("transition matrix must be row-stochastic (rows sum to 1 within 1e-12)")
        if self.kind == "noiseless" and (P.shape[0] != P.shape[1] or not np.array_equal(P, np.eye(P.shape[0]))):
            raise InputError("noiseless channel must have identity transitions")
        P.setflags(write=False)
        object.__setattr__(self, "matrix", P)

    @property
    def n_inputs(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_outputs(self) -> int:
        return self.matrix.shape[1]

    @property
    def is_bsc(self) -> bool:
        P = self.matrix
        return P.shape == (2, 2) and P[0, 1] == P[1, 0] and P[0, 1] <= 0.5

    def to_dict(self) -> dict:
        if self.kind == "noiseless":
            return {"kind": "noiseless", "size": self.n_inputs}
        return {"kind": "dmc", "matrix": self.matrix.tolist()}


def noiseless(size: int) -> ChannelModel:
    if size < 1:
        raise InputError("alphabet size must be positive")
    return ChannelModel("noiseless", np.eye(size))


def bsc(p: float) -> ChannelModel:
    if not 0 <= p <= 1:
        raise InputError("crossover probability must lie in [0, 1]")
    return ChannelModel("dmc", np.array([[1 - p, p], [p, 1 - p]]))


def dmc(matrix) -> ChannelModel:
    return ChannelModel("dmc", np.asarray(matrix, dtype=float))


def load_matrix_csv(path) -> np.ndarray:
    """Transition matrix from CSV, one row per input symbol, no header."""
    return np.loadtxt(path, delimiter=",", ndmin=2)


def _check_symbols(channel: ChannelModel, symbols):
    s = np.asarray(symbols)
    if not np.issubdtype(s.dtype, np.integer) or np.any(s < 0) or np.any(s >= channel.n_inputs):
        raise InputError(f"symbol outside input alphabet of size {channel.n_inputs}")
    return s


def transmit(channel: ChannelModel, symbol, rng: np.random.Generator) -> int:
    return int(transmit_many(channel, np.array([symbol]), rng.uniform(size=1))[0])


def transmit_many(channel: ChannelModel, symbols, uniforms) -> np.ndarray:
    """Pass symbols through the channel using caller-supplied U(0,1) variates.

    Inverse-cdf sampling on each row, so a fixed variate stream reproduces the
    same outputs regardless of batching.
    """
    s = _check_symbols(channel, symbols)
    if channel.kind == "noiseless":
        return s.copy()
    cum = np.cumsum(channel.matrix, axis=1)
    cum[:, -1] = 1.0
    out = (np.asarray(uniforms)[..., None] >= cum[s]).sum(axis=-1)
    return np.minimum(out, channel.n_outputs - 1)


@dataclass(frozen=True)
class CapacityResult:
    capacity: float
    lower: float
    upper: float
    input_distribution: np.ndarray
    iterations: int


def _divergences(P: np.ndarray, p: np.ndarray) -> np.ndarray:
    # D(P(.|x) || q) in bits for every input x, q = p P
    q = p @ P
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(P > 0, P * np.log2(P / q), 0.0)
    return terms.sum(axis=1)


def dmc_capacity(channel: ChannelModel, tol: float = 1e-9, max_iter: int = 100_000) -> CapacityResult:
    """Blahut-Arimoto iteration with the standard max/mean capacity brackets.

    With d_x = D(P(.|x) || pP), ``lower = sum_x p_x d_x`` is I(p) and
    ``upper = max_x d_x``; the true capacity lies between them.
    """
    if tol <= 0:
        raise InputError("tol must be positive")
    P = channel.matrix
    m = P.shape[0]
    p = np.full(m, 1.0 / m)
    for it in range(1, max_iter + 1):
        d = _divergences(P, p)
        lower = float(p @ d)
        upper = float(d.max())
        if upper - lower <= tol:
            return CapacityResult(lower, lower, upper, p, it)
        p = p * np.exp2(d)
        p /= p.sum()
    raise NumericError(f"Blahut-Arimoto did not reach gap {tol} within {max_iter} iterations")


def binary_entropy(p: float) -> float:
    if p <= 0 or p >= 1:
        return 0.0
    return -(p * math.log2(p) + (1 - p) * math.log2(1 - p))


# ---------------------------------------------------------------------------
# random coding


def _codebook_size(channel: ChannelModel, rate: float, n: int) -> float:
    if rate <= 0:
        raise InputError("rate must be positive")
    if n < 1:
        raise InputError("blocklength must be at least 1")
    return 2.0 ** (rate * n)


def random_code_experiment(channel: ChannelModel, rate: float, blocklength: int, trials: int,
                           seed: int, max_codewords: int = MAX_EXPLICIT_CODEWORDS) -> float:
    """Block-error frequency of uniformly random codes under ML decoding.

    ``ceil(2**(rate*n))`` codewords are drawn uniformly (distinct) from the
    input sequences, a uniform message is sent and decoded by maximum
    likelihood with uniformly random tie-breaking; a fresh codebook is drawn
    every trial.  Codebooks up to ``max_codewords`` are materialised.  Larger
    ones are only supported on binary symmetric channels, where competitors
    enter solely through their Hamming distance to the received word (see
    :func:`_bsc_implicit_trial`).
    """
    size = _codebook_size(channel, rate, blocklength)
    if trials < 1:
        raise InputError("trials must be at least 1")
    root = np.random.SeedSequence(seed)
    rngs = [np.random.default_rng(s) for s in root.spawn(trials)]
    if size <= max_codewords:
        M = int(math.ceil(size - 1e-9))
        errors = sum(_explicit_trial(channel, M, blocklength, rng) for rng in rngs)
    elif channel.is_bsc or (channel.kind == "noiseless" and channel.n_inputs == 2):
        p = float(channel.matrix[0, 1])
        errors = sum(_bsc_implicit_trial(p, size, blocklength, rng) for rng in rngs)
    else:
        raise CapabilityError(
            f"codebook of 2^{rate * blocklength:.1f} words exceeds the explicit cap "
            f"{max_codewords}; use a smaller blocklength*rate or a binary symmetric channel")
    return errors / trials


def _distinct_codebook(m_in: int, M: int, n: int, rng: np.random.Generator) -> np.ndarray:
    population = m_in ** n
    if M > population:
        raise InputError(f"{M} codewords requested but only {population} sequences exist")
    if population <= 2 ** 62:
        idx = rng.choice(population, size=M, replace=False)
        digits = np.empty((M, n), dtype=np.int64)
        for i in range(n):
            digits[:, i] = idx % m_in
            idx = idx // m_in
        return digits
    while True:
        book = rng.integers(0, m_in, size=(M, n))
        if len(np.unique(book, axis=0)) == M:
            return book


def _explicit_trial(channel: ChannelModel, M: int, n: int, rng: np.random.Generator) -> bool:
    book = _distinct_codebook(channel.n_inputs, M, n, rng)
    msg = rng.integers(M)
    received = transmit_many(channel, book[msg], rng.uniform(size=n))
    with np.errstate(divide="ignore"):
        logP = np.log(channel.matrix)
    scores = logP[book, received[None, :]].sum(axis=1)
    best = np.flatnonzero(scores == scores.max())
    return bool(rng.choice(best) != msg)


def _bsc_implicit_trial(p: float, size: float, n: int, rng: np.random.Generator) -> bool:
    """One trial of the i.i.d. random-code ensemble on BSC(p), p <= 1/2.

    ML decoding on a BSC picks the codeword nearest in Hamming distance.  The
    sent word is at distance d ~ Bin(n, p) from the output; each of the
    M - 1 competitors is an independent uniform word, at distance
    Bin(n, 1/2).  Attach an independent uniform tie-break key to every word:
    a competitor beats the sent word with probability
    q = P(D < d) + P(D = d) * key, independently, so decoding succeeds with
    probability (1 - q)**(M - 1).
    """
    d = rng.binomial(n, p) if p > 0 else 0
    key = rng.uniform()
    q = stats.binom.cdf(d - 1, n, 0.5) + stats.binom.pmf(d, n, 0.5) * key
    log_success = (size - 1.0) * math.log1p(-q) if q < 1 else -math.inf
    return bool(rng.uniform() >= math.exp(log_success))
