"""Zoom-quantizer coding/control policy and the closed-loop driver.

Each coordinate keeps a range ``[c - D, c + D]`` split into ``2**R - 1``
equal cells plus one escape symbol.  A cell symbol makes the controller
cancel the predicted growth of the cell midpoint; the escape symbol applies
no control and widens the range.  Encoder and decoder run the same update on
the *received* symbol (the encoder learns it over the feedback link), so
their states coincide on every channel.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .channels import ChannelModel, transmit_many
from .errors import InputError, NumericError
from .models import SystemModel, TrajectoryEnsemble, batch_step, draw_initial_and_noise


@dataclass(frozen=True)
class ZoomPolicy:
    rate_bits: int
    gain: float | tuple = 2.0
    initial_range: float = 1.0
    initial_center: float = 0.0
    zoom_out: float = 2.0
    zoom_in: float = 1.0
    safety: float = 1.2
    noise_bound: float = 0.0
    min_range: float = 1e-12

    def __post_init__(self):
        if int(self.rate_bits) != self.rate_bits or self.rate_bits < 0:
            raise InputError("rate_bits must be a nonnegative integer")
        if self.zoom_out <= 1:
            raise InputError("zoom_out must exceed 1")
        if not 0 < self.zoom_in <= 1:
            raise InputError("zoom_in must lie in (0, 1]")
        if self.initial_range <= 0 or self.min_range <= 0:
            raise InputError("ranges must be positive")

    @property
    def cells(self) -> int:
        return 2 ** self.rate_bits - 1

    def gains(self, dimension: int) -> np.ndarray:
        a = np.broadcast_to(np.asarray(self.gain, dtype=float), (dimension,))
        return a.copy()

    def alphabet_size(self, dimension: int) -> int:
        return 2 ** (self.rate_bits * dimension)

    def to_dict(self) -> dict:
        d = {k: getattr(self, k) for k in self.__dataclass_fields__}
        d["gain"] = list(np.atleast_1d(self.gain).tolist()) if np.ndim(self.gain) else self.gain
        return d


@dataclass(frozen=True)
class PolicyState:
    """Encoder and decoder quantizer states; arrays of shape (..., N)."""

    policy: ZoomPolicy
    encoder_range: np.ndarray
    encoder_center: np.ndarray
    decoder_range: np.ndarray
    decoder_center: np.ndarray

    @classmethod
    def initial(cls, policy: ZoomPolicy, dimension: int, batch: tuple = ()) -> "PolicyState":
        shape = batch + (dimension,)
        r = np.full(shape, float(policy.initial_range))
        c = np.full(shape, float(policy.initial_center))
        return cls(policy, r, c, r.copy(), c.copy())


def encode(policy: ZoomPolicy, rng_state: np.ndarray, center: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Per-coordinate symbol: cell index in [0, K) or K for escape."""
    K = policy.cells
    if K == 0:
        return np.zeros(np.shape(x), dtype=np.int64)
    lo = center - rng_state
    inside = np.abs(x - center) <= rng_state
    with np.errstate(invalid="ignore", over="ignore"):
        idx = np.floor((x - lo) / (2 * rng_state / K))
    idx = np.where(inside, np.clip(np.nan_to_num(idx), 0, K - 1), K)
    return idx.astype(np.int64)


def decode(policy: ZoomPolicy, gains: np.ndarray, rng_state: np.ndarray, center: np.ndarray,
           digits: np.ndarray):
    """Control and next (range, center) from received per-coordinate symbols."""
    K = policy.cells
    escape = digits >= K
    if K > 0:
        width = 2 * rng_state / K
        mid = center - rng_state + (np.minimum(digits, K - 1) + 0.5) * width
    else:
        mid = center
    u = np.where(escape, 0.0, -gains * mid)
    grown = policy.zoom_out * np.abs(gains) * rng_state
    shrunk = policy.zoom_in * policy.safety * np.abs(gains) * rng_state / max(K, 1)
    new_range = np.where(escape, grown, shrunk) + policy.noise_bound
    new_range = np.maximum(new_range, policy.min_range)
    new_center = np.where(escape, gains * center, gains * mid + u)
    return u, new_range, new_center


def _combine(digits: np.ndarray, base: int) -> np.ndarray:
    weights = base ** np.arange(digits.shape[-1], dtype=np.int64)
    return (digits * weights).sum(axis=-1)


def _split(symbols: np.ndarray, base: int, dimension: int) -> np.ndarray:
    out = np.empty(np.shape(symbols) + (dimension,), dtype=np.int64)
    s = np.asarray(symbols, dtype=np.int64)
    for j in range(dimension):
        out[..., j] = s % base
        s = s // base
    return out


def _check_channel(policy: ZoomPolicy, channel: ChannelModel, dimension: int):
    need = policy.alphabet_size(dimension)
    if channel.n_inputs < need:
        raise InputError(f"channel input alphabet {channel.n_inputs} < 2^(R*N) = {need}")
    if channel.kind == "dmc" and dimension > 1:
        raise InputError("zoom policy over a DMC is only supported for scalar models")


def zoom_policy_step(state: PolicyState, x, channel: ChannelModel, rng: np.random.Generator):
    """One causal encode/transmit/decode round.

    Returns ``(u, q, q_received, new_state)``; works on a single state of
    shape (N,) or a batch (n, N).
    """
    p = state.policy
    x = np.asarray(x, dtype=float)
    N = x.shape[-1]
    _check_channel(p, channel, N)
    if np.any(state.encoder_range <= 0) or np.any(state.decoder_range <= 0):
        raise NumericError("quantizer range must stay positive")
    base = p.cells + 1
    q = _combine(encode(p, state.encoder_range, state.encoder_center, x), base)
    q_recv = transmit_many(channel, q, rng.uniform(size=np.shape(q)))
    digits = _split(np.minimum(q_recv, base ** N - 1), base, N)
    a = p.gains(N)
    u, r_new, c_new = decode(p, a, state.decoder_range, state.decoder_center, digits)
    # feedback: encoder mirrors the decoder update on the received symbol
    new = replace(state, encoder_range=r_new, encoder_center=c_new,
                  decoder_range=r_new.copy(), decoder_center=c_new.copy())
    return u, q, q_recv, new


@dataclass(frozen=True)
class ClosedLoopResult:
    ensemble: TrajectoryEnsemble
    sent: np.ndarray       # (n, T) channel inputs q_t
    received: np.ndarray   # (n, T) channel outputs q'_t
    ranges: np.ndarray     # (n, T+1, N) decoder ranges
    policy: ZoomPolicy

    @property
    def controls(self) -> np.ndarray:
        return self.ensemble.controls

    def distinct_control_count(self, horizon: int) -> int:
        if not 0 < horizon <= self.ensemble.horizon:
            raise InputError("horizon outside the run")
        u = np.ascontiguousarray(self.controls[:, :horizon].reshape(self.ensemble.count, -1))
        return len(np.unique(u, axis=0))

    def control_rate(self, horizon: int) -> float:
        """(1/T) log2 of the number of distinct realised control sequences."""
        return float(np.log2(self.distinct_control_count(horizon)) / horizon)

    def symbol_log(self, index: int = 0) -> list[dict]:
        u = self.controls[index]
        return [{"t": t, "q": int(self.sent[index, t]), "q_prime": int(self.received[index, t]),
                 "u": float(u[t, 0]) if u.shape[1] == 1 else u[t].tolist()}
                for t in range(self.sent.shape[1])]


def closed_loop_run(model: SystemModel, policy: ZoomPolicy, channel: ChannelModel,
                    horizon: int, count: int, seed: int) -> ClosedLoopResult:
    """``count`` closed-loop runs of the zoom policy over ``channel``.

    Trajectory i draws x0, the noise sequence and then the channel variates
    from its own seed stream, so the run is reproducible and each trajectory
    is independent of the others.
    """
    if count < 1 or horizon < 1:
        raise InputError("count and horizon must be positive")
    N = model.dimension
    x0 = np.empty((count, N))
    w = np.empty((count, horizon, N))
    ch_u = np.empty((count, horizon))
    for i in range(count):
        x0[i], w[i], rng = draw_initial_and_noise(model, seed, i, horizon)
        ch_u[i] = rng.uniform(size=horizon)
    return run_zoom_loop(model, policy, channel, x0, w, ch_u, seed)


def run_zoom_loop(model: SystemModel, policy: ZoomPolicy, channel: ChannelModel,
                  x0: np.ndarray, noise: np.ndarray, channel_uniforms: np.ndarray,
                  seed=None) -> ClosedLoopResult:
    """Closed loop from given initial states, noise and channel variates (batched)."""
    if model.kind == "semilinear":
        raise InputError("closed-loop zoom control needs an additive or general model")
    count, horizon, N = noise.shape
    _check_channel(policy, channel, N)
    base = policy.cells + 1
    a = policy.gains(N)
    states = np.empty((count, horizon + 1, N))
    controls = np.empty((count, horizon, N))
    ranges = np.empty((count, horizon + 1, N))
    sent = np.empty((count, horizon), dtype=np.int64)
    recv = np.empty((count, horizon), dtype=np.int64)
    st = PolicyState.initial(policy, N, (count,))
    x = np.asarray(x0, dtype=float).reshape(count, N)
    states[:, 0] = x
    ranges[:, 0] = st.decoder_range
    for t in range(horizon):
        q = _combine(encode(policy, st.encoder_range, st.encoder_center, x), base)
        qr = transmit_many(channel, q, channel_uniforms[:, t])
        digits = _split(np.minimum(qr, base ** N - 1), base, N)
        u, r_new, c_new = decode(policy, a, st.decoder_range, st.decoder_center, digits)
        st = PolicyState(policy, r_new, c_new, r_new, c_new)
        x = batch_step(model, x, u, noise[:, t])
        if not np.all(np.isfinite(x)):
            bad = int(np.argmax(~np.all(np.isfinite(x), axis=1)))
            raise NumericError(f"t={t}: state overflow in trajectory {bad}")
        states[:, t + 1] = x
        controls[:, t] = u
        ranges[:, t + 1] = r_new
        sent[:, t] = q
        recv[:, t] = qr
    ens = TrajectoryEnsemble(states, controls, np.asarray(noise, dtype=float), seed)
    return ClosedLoopResult(ens, sent, recv, ranges, policy)


def replay_decoder(policy: ZoomPolicy, received: np.ndarray, dimension: int = 1) -> np.ndarray:
    """Controls reconstructed from received symbols alone (causality check)."""
    received = np.atleast_2d(received)
    n, T = received.shape
    base = policy.cells + 1
    a = policy.gains(dimension)
    st = PolicyState.initial(policy, dimension, (n,))
    r, c = st.decoder_range, st.decoder_center
    out = np.empty((n, T, dimension))
    for t in range(T):
        digits = _split(np.minimum(received[:, t], base ** dimension - 1), base, dimension)
        out[:, t], r, c = decode(policy, a, r, c, digits)
    return out
