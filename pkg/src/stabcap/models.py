"""System models x_{t+1} = f(x_t, u_t, w_t) and open-loop simulation.

Three model kinds are supported:

* ``general``    -- ``drift(x, u, w)`` is evaluated as given.
* ``additive``   -- ``x' = drift(x) + u + w`` (volume-expanding family).
* ``semilinear`` -- ``x' = A(u) x + B v + w`` with a finite alphabet for ``u``.

Drifts and log-determinant profiles must be vectorised over leading axes:
they receive arrays of shape ``(..., N)`` and return ``(..., N)`` (drift) or
``(...)`` (log-determinant, in bits).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Optional, Sequence

import numpy as np
from scipy import special, stats

from .errors import CapabilityError, InputError, NumericError

NOISE_FAMILIES = ("zero", "point", "uniform", "gaussian", "truncated_gaussian", "laplace")


@dataclass(frozen=True)
class Distribution:
    """A named one-dimensional law, applied i.i.d. to every coordinate."""

    family: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.family not in NOISE_FAMILIES:
            raise CapabilityError(
                f"unsupported distribution family {self.family!r}; "
                f"expected one of {', '.join(NOISE_FAMILIES)}")
        p = self.params
        if self.family == "uniform" and not p.get("low", 0.0) < p.get("high", 1.0):
            raise InputError("uniform requires low < high")
        if self.family in ("gaussian", "truncated_gaussian", "laplace"):
            if p.get("std", p.get("scale", 1.0)) <= 0:
                raise InputError(f"{self.family} requires a positive scale")
        if self.family == "truncated_gaussian" and not p["low"] < p["high"]:
            raise InputError("truncated_gaussian requires low < high")

    # scipy frozen law for the continuous families
    def _law(self):
        p = self.params
        if self.family == "uniform":
            lo, hi = p.get("low", 0.0), p.get("high", 1.0)
            return stats.uniform(loc=lo, scale=hi - lo)
        if self.family == "gaussian":
            return stats.norm(loc=p.get("mean", 0.0), scale=p.get("std", 1.0))
        if self.family == "laplace":
            return stats.laplace(loc=p.get("loc", 0.0), scale=p.get("scale", 1.0))
        if self.family == "truncated_gaussian":
            mu, sd = p.get("mean", 0.0), p.get("std", 1.0)
            a, b = (p["low"] - mu) / sd, (p["high"] - mu) / sd
            return stats.truncnorm(a, b, loc=mu, scale=sd)
        return None

    def sample(self, rng: np.random.Generator, shape) -> np.ndarray:
        p = self.params
        if self.family == "zero":
            return np.zeros(shape)
        if self.family == "point":
            return np.full(shape, float(p.get("value", 0.0)))
        if self.family == "uniform":
            return rng.uniform(p.get("low", 0.0), p.get("high", 1.0), size=shape)
        if self.family == "gaussian":
            return rng.normal(p.get("mean", 0.0), p.get("std", 1.0), size=shape)
        if self.family == "laplace":
            return rng.laplace(p.get("loc", 0.0), p.get("scale", 1.0), size=shape)
        # truncated gaussian via inverse cdf keeps the stream layout simple
        return self._law().ppf(rng.uniform(size=shape))

    def quantile(self, q) -> np.ndarray:
        q = np.asarray(q, dtype=float)
        if self.family == "zero":
            return np.zeros_like(q)
        if self.family == "point":
            return np.full_like(q, float(self.params.get("value", 0.0)))
        return self._law().ppf(q)

    def cdf(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.family in ("zero", "point"):
            v = 0.0 if self.family == "zero" else float(self.params.get("value", 0.0))
            return (x >= v).astype(float)
        return self._law().cdf(x)

    def mass(self, lo: float, hi: float) -> float:
        """Probability of the interval [lo, hi]."""
        if self.family in ("zero", "point"):
            v = 0.0 if self.family == "zero" else float(self.params.get("value", 0.0))
            return float(lo <= v <= hi)
        return float(self.cdf(hi) - self.cdf(lo))

    @property
    def support(self) -> Optional[tuple[float, float]]:
        p = self.params
        if self.family == "zero":
            return (0.0, 0.0)
        if self.family == "point":
            v = float(p.get("value", 0.0))
            return (v, v)
        if self.family == "uniform":
            return (float(p.get("low", 0.0)), float(p.get("high", 1.0)))
        if self.family == "truncated_gaussian":
            return (float(p["low"]), float(p["high"]))
        return None

    def to_dict(self) -> dict:
        return {"family": self.family, **self.params}


ZERO = Distribution("zero")


@dataclass(frozen=True)
class DensityBounds:
    """Bounds p_min <= density <= p_max of the initial law on ``support``."""

    p_min: float
    p_max: float
    support: tuple[float, float]

    def __post_init__(self):
        if not (0 < self.p_min <= self.p_max < np.inf):
            raise InputError("density bounds must satisfy 0 < p_min <= p_max < inf")
        if not self.support[0] < self.support[1]:
            raise InputError("density support must be a nondegenerate interval")


@dataclass(frozen=True)
class SemilinearModel:
    """Matrix family A: U -> GL(N) over a finite alphabet plus input matrix B."""

    alphabet: tuple
    matrices: dict
    input_matrix: Optional[np.ndarray] = None

    def __post_init__(self):
        if not self.alphabet:
            raise InputError("semilinear alphabet must be nonempty")
        mats = {}
        dim = None
        for label in self.alphabet:
            if label not in self.matrices:
                raise InputError(f"no matrix for control label {label!r}")
            a = np.atleast_2d(np.asarray(self.matrices[label], dtype=float))
            if a.shape[0] != a.shape[1]:
                raise InputError(f"A({label!r}) is not square")
            if dim is None:
                dim = a.shape[0]
            elif a.shape[0] != dim:
                raise InputError("all A(u) must share one dimension")
            if np.linalg.det(a) == 0.0:
                raise InputError(f"A({label!r}) is singular")
            mats[label] = a
        object.__setattr__(self, "matrices", mats)
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        if self.input_matrix is not None:
            b = np.atleast_2d(np.asarray(self.input_matrix, dtype=float))
            if b.shape[0] != dim:
                raise InputError("input matrix B must have N rows")
            object.__setattr__(self, "input_matrix", b)

    @property
    def dimension(self) -> int:
        return next(iter(self.matrices.values())).shape[0]

    @property
    def control_dimension(self) -> int:
        return 0 if self.input_matrix is None else self.input_matrix.shape[1]

    def A(self, u) -> np.ndarray:
        try:
            return self.matrices[u]
        except KeyError:
            raise InputError(f"control {u!r} not in alphabet {self.alphabet}") from None

    def transition(self, controls: Sequence) -> np.ndarray:
        """Phi(t, u) = A(u_{t-1}) ... A(u_0); the identity for an empty sequence."""
        phi = np.eye(self.dimension)
        for u in controls:
            phi = self.A(u) @ phi
        return phi

    def inhomogeneous_term(self, controls: Sequence, v=None, w=None) -> np.ndarray:
        """beta(t) = sum_s Phi(t, s+1) (B v_s + w_s), the forced part of x_t."""
        t = len(controls)
        n = self.dimension
        beta = np.zeros(n)
        for s in range(t):
            forcing = np.zeros(n)
            if v is not None and self.input_matrix is not None:
                forcing = forcing + self.input_matrix @ np.atleast_1d(v[s])
            if w is not None:
                forcing = forcing + np.atleast_1d(w[s])
            beta = self.A(controls[s]) @ beta + forcing
        return beta


@dataclass(frozen=True)
class SystemModel:
    dimension: int
    kind: str
    drift: Optional[Callable] = None
    logdet: Optional[Callable] = None
    noise: Distribution = ZERO
    init: Distribution = ZERO
    density_bounds: Optional[DensityBounds] = None
    volume_expanding: bool = False
    semilinear: Optional[SemilinearModel] = None
    name: str = ""
    spec: Optional[dict] = None  # resolved config, when built from one

    def __post_init__(self):
        if self.dimension < 1:
            raise InputError("dimension must be a positive integer")
        if self.kind not in ("general", "additive", "semilinear"):
            raise InputError(f"unknown model kind {self.kind!r}")
        if self.kind == "semilinear":
            if self.semilinear is None:
                raise InputError("semilinear kind requires a SemilinearModel")
            if self.semilinear.dimension != self.dimension:
                raise InputError("semilinear matrices do not match the dimension")
        elif self.drift is None:
            raise InputError(f"{self.kind} model requires a drift")


@dataclass(frozen=True)
class Trajectory:
    states: np.ndarray  # (T+1, N)
    controls: Any       # (T, N) array, or a tuple of labels / (label, v) pairs
    noise: np.ndarray   # (T, N)
    seed: Optional[int] = None

    @property
    def horizon(self) -> int:
        return self.states.shape[0] - 1


@dataclass(frozen=True)
class TrajectoryEnsemble:
    states: np.ndarray    # (n, T+1, N)
    controls: np.ndarray  # (n, T, ...)
    noise: np.ndarray     # (n, T, N)
    seed: Optional[int] = None

    @property
    def count(self) -> int:
        return self.states.shape[0]

    @property
    def horizon(self) -> int:
        return self.states.shape[1] - 1

    @property
    def dimension(self) -> int:
        return self.states.shape[2]

    def trajectory(self, i: int) -> Trajectory:
        return Trajectory(self.states[i], self.controls[i], self.noise[i], self.seed)


def trajectory_rng(seed: int, index: int) -> np.random.Generator:
    """Stream for trajectory ``index``: the ``index``-th spawn child of ``seed``.

    Equivalent to ``np.random.SeedSequence(seed).spawn(index + 1)[index]``, so
    every trajectory can be regenerated alone and in any order.
    """
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(index,)))


# ---------------------------------------------------------------------------
# constructors


def linear_model(A, noise: Distribution = ZERO, init: Distribution = ZERO,
                 density_bounds: Optional[DensityBounds] = None, name: str = "") -> SystemModel:
    """Additive model with f(x) = A x."""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    if A.shape[0] != A.shape[1]:
        raise InputError("A must be square")
    logdet_value = float(np.log2(abs(np.linalg.det(A)))) if np.linalg.det(A) != 0 else -np.inf

    def drift(x):
        return x @ A.T

    def logdet(x):
        return np.full(np.shape(x)[:-1], logdet_value)

    return SystemModel(A.shape[0], "additive", drift, logdet, noise, init, density_bounds,
                       volume_expanding=logdet_value >= 0, name=name or "linear")


_LN2 = np.log(2.0)


def _sqrt_decay_primitive(s):
    # antiderivative of 2**(1/sqrt(s)) on s > 0, via y = ln2/sqrt(s)
    y = _LN2 / np.sqrt(s)
    return np.exp(y) * (s + _LN2 * np.sqrt(s)) - _LN2 ** 2 * special.expi(y)


def sqrt_decay_scalar(noise: Distribution = ZERO, init: Distribution = ZERO,
                      density_bounds: Optional[DensityBounds] = None) -> SystemModel:
    """Odd scalar map with f'(x) = 2 on |x| <= 1 and 2**(1/sqrt|x|) beyond.

    f' > 1 everywhere but tends to 1 as |x| grows, so the log-derivative
    infimum over [-k, k] is 1/sqrt(k) for k > 1.
    """
    base = _sqrt_decay_primitive(1.0)

    def drift(x):
        x = np.asarray(x, dtype=float)
        ax = np.abs(x)
        out = 2.0 * x
        far = ax > 1
        if np.any(far):
            out = np.where(far, np.sign(x) * (2.0 + _sqrt_decay_primitive(np.maximum(ax, 1.0)) - base), out)
        return out

    def logdet(x):
        ax = np.abs(np.asarray(x, dtype=float))[..., 0]
        with np.errstate(divide="ignore"):
            return np.where(ax <= 1, 1.0, 1.0 / np.sqrt(np.maximum(ax, 1.0)))

    return SystemModel(1, "additive", drift, logdet, noise, init, density_bounds,
                       volume_expanding=True, name="sqrt_decay")


def additive_model(drift: Callable, dimension: int, logdet: Optional[Callable] = None,
                   noise: Distribution = ZERO, init: Distribution = ZERO,
                   density_bounds: Optional[DensityBounds] = None,
                   volume_expanding: bool = False, name: str = "") -> SystemModel:
    return SystemModel(dimension, "additive", drift, logdet, noise, init, density_bounds,
                       volume_expanding, name=name)


def semilinear_model(matrices: dict, input_matrix=None, noise: Distribution = ZERO,
                     init: Distribution = ZERO, name: str = "") -> SystemModel:
    sl = SemilinearModel(tuple(matrices), matrices, input_matrix)
    return SystemModel(sl.dimension, "semilinear", None, None, noise, init,
                       semilinear=sl, name=name or "semilinear")


# ---------------------------------------------------------------------------
# dynamics


def _as_state(model: SystemModel, x, what: str) -> np.ndarray:
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.shape != (model.dimension,):
        raise InputError(f"{what} has shape {x.shape}, expected ({model.dimension},)")
    return x


def _broadcast_scalar(model: SystemModel, v):
    v = np.asarray(v, dtype=float)
    return np.full(model.dimension, float(v)) if v.ndim == 0 else v


def step(model: SystemModel, x, u, w):
    """One application of the model map to (x, u, w)."""
    x = _as_state(model, x, "state")
    w = _as_state(model, _broadcast_scalar(model, 0.0 if w is None else w), "noise")
    if model.kind == "semilinear":
        label, v = (u if isinstance(u, tuple) else (u, None))
        sl = model.semilinear
        out = sl.A(label) @ x + w
        if v is not None:
            if sl.input_matrix is None:
                raise InputError("additive control given but model has no input matrix")
            v = np.atleast_1d(np.asarray(v, dtype=float))
            if v.shape != (sl.control_dimension,):
                raise InputError(f"control v has shape {v.shape}, expected ({sl.control_dimension},)")
            out = out + sl.input_matrix @ v
    elif model.kind == "additive":
        u = _as_state(model, _broadcast_scalar(model, u), "control")
        with np.errstate(over="ignore", invalid="ignore"):
            out = np.asarray(model.drift(x), dtype=float) + u + w
    else:
        with np.errstate(over="ignore", invalid="ignore"):
            out = np.asarray(model.drift(x, u, w), dtype=float)
    if not np.all(np.isfinite(out)):
        raise NumericError("state overflow: model map returned a non-finite value")
    return out


def simulate(model: SystemModel, x0, controls, noise) -> Trajectory:
    """Run the recursion from ``x0`` under the given control and noise sequences."""
    if len(controls) != len(noise):
        raise InputError(f"controls ({len(controls)}) and noise ({len(noise)}) lengths differ")
    x = _as_state(model, x0, "x0")
    states = [x]
    for t, (u, w) in enumerate(zip(controls, noise)):
        try:
            x = step(model, x, u, w)
        except (InputError, NumericError) as exc:
            raise type(exc)(f"t={t}: {exc}") from exc
        states.append(x)
    noise_arr = np.array([np.broadcast_to(np.asarray(w, dtype=float), (model.dimension,)) for w in noise])
    noise_arr = noise_arr.reshape(len(noise), model.dimension)
    if model.kind == "semilinear":
        ctrl = tuple(controls)
    else:
        ctrl = np.asarray(controls, dtype=float).reshape(len(controls), -1)
    return Trajectory(np.array(states), ctrl, noise_arr)


def jacobian_logdet(model: SystemModel, x) -> float:
    """log2 |det Df(x)| from the model's profile."""
    if model.logdet is None:
        raise CapabilityError(f"model {model.name or model.kind!r} has no Jacobian log-determinant profile")
    x = _as_state(model, x, "state")
    return float(model.logdet(x[None, :])[0])


def check_volume_expanding(model: SystemModel, low, high, count: int = 10_000, seed: int = 0,
                           tol: float = 1e-12) -> bool:
    """Sample ``count`` points uniformly in the box and test log|det Df| >= -tol."""
    if model.logdet is None:
        raise CapabilityError("volume-expansion check needs a log-determinant profile")
    rng = np.random.default_rng(seed)
    lo = np.broadcast_to(np.asarray(low, dtype=float), (model.dimension,))
    hi = np.broadcast_to(np.asarray(high, dtype=float), (model.dimension,))
    pts = rng.uniform(lo, hi, size=(count, model.dimension))
    return bool(np.all(np.asarray(model.logdet(pts)) >= -tol))


def batch_step(model: SystemModel, x: np.ndarray, u: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Vectorised step for additive/general models over a leading batch axis."""
    with np.errstate(over="ignore", invalid="ignore"):
        if model.kind == "additive":
            return np.asarray(model.drift(x), dtype=float) + u + w
        if model.kind == "general":
            return np.asarray(model.drift(x, u, w), dtype=float)
    raise CapabilityError("batch stepping of semilinear models takes label controls; use simulate")


def draw_initial_and_noise(model: SystemModel, seed: int, index: int, horizon: int):
    """Draw x0 ~ pi0 and w ~ nu^T from the stream of trajectory ``index``."""
    rng = trajectory_rng(seed, index)
    x0 = model.init.sample(rng, (model.dimension,))
    w = model.noise.sample(rng, (horizon, model.dimension))
    return x0, w, rng


def sample_ensemble(model: SystemModel, controls, count: int, horizon: int, seed: int) -> TrajectoryEnsemble:
    """``count`` open-loop trajectories under a shared control sequence.

    ``controls`` may be None (all-zero controls for additive models).
    """
    if count < 1:
        raise InputError("ensemble count must be at least 1")
    if horizon < 0:
        raise InputError("horizon must be nonnegative")
    n, N = count, model.dimension
    x0 = np.empty((n, N))
    w = np.empty((n, horizon, N))
    for i in range(n):
        x0[i], w[i], _ = draw_initial_and_noise(model, seed, i, horizon)

    if model.kind == "semilinear":
        if controls is None or len(controls) != horizon:
            raise InputError("semilinear ensembles need a control sequence of length horizon")
        states = np.empty((n, horizon + 1, N))
        for i in range(n):
            states[i] = simulate(model, x0[i], controls, w[i]).states
        ctrl = np.broadcast_to(np.asarray(controls, dtype=object), (n, horizon)).copy()
        return TrajectoryEnsemble(states, ctrl, w, seed)

    if controls is None:
        u = np.zeros((horizon, N))
    else:
        u = np.asarray(controls, dtype=float).reshape(horizon, -1)
        if u.shape[1] != N and model.kind == "additive":
            raise InputError(f"controls have width {u.shape[1]}, expected {N}")
    states = np.empty((n, horizon + 1, N))
    states[:, 0] = x0
    x = x0
    for t in range(horizon):
        x = batch_step(model, x, u[t], w[:, t])
        if not np.all(np.isfinite(x)):
            bad = int(np.argmax(~np.all(np.isfinite(x), axis=1)))
            raise NumericError(f"t={t}: state overflow in trajectory {bad}")
        states[:, t + 1] = x
    return TrajectoryEnsemble(states, np.broadcast_to(u, (n,) + u.shape).copy(), w, seed)
