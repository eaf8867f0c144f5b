"""Empirical time-averaged (Cesaro) occupation measures and moments."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .errors import InputError
from .models import TrajectoryEnsemble

EPS_AMS = 0.05
FINITE_T_CAVEAT = ("finite-horizon window agreement is only a surrogate for asymptotic "
                   "mean stationarity; it cannot certify the limit")


@dataclass(frozen=True)
class Box:
    """Closed axis-aligned box [low, high] in R^N."""

    low: tuple
    high: tuple

    def __post_init__(self):
        lo = tuple(float(v) for v in np.atleast_1d(self.low))
        hi = tuple(float(v) for v in np.atleast_1d(self.high))
        if len(lo) != len(hi):
            raise InputError("box bounds differ in dimension")
        if any(a > b for a, b in zip(lo, hi)):
            raise InputError("box requires low <= high in every coordinate")
        object.__setattr__(self, "low", lo)
        object.__setattr__(self, "high", hi)

    @classmethod
    def interval(cls, a: float, b: float) -> "Box":
        return cls((a,), (b,))

    @classmethod
    def ball(cls, radius: float, dimension: int = 1) -> "Box":
        """Sup-norm ball of the given radius around 0."""
        return cls((-radius,) * dimension, (radius,) * dimension)

    @property
    def dimension(self) -> int:
        return len(self.low)

    @property
    def bounded(self) -> bool:
        return all(np.isfinite(self.low)) and all(np.isfinite(self.high))

    def contains(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        with np.errstate(invalid="ignore"):
            return np.all((x >= np.array(self.low)) & (x <= np.array(self.high)), axis=-1)

    def to_dict(self) -> dict:
        return {"low": list(self.low), "high": list(self.high)}


BoxSet = Union[Box, Sequence[Box]]


def _indicator(states: np.ndarray, sets: BoxSet) -> np.ndarray:
    boxes = [sets] if isinstance(sets, Box) else list(sets)
    if not boxes:
        raise InputError("empty set specification")
    for b in boxes:
        if b.dimension != states.shape[-1]:
            raise InputError(f"box dimension {b.dimension} != state dimension {states.shape[-1]}")
    hit = np.zeros(states.shape[:-1], dtype=bool)
    for b in boxes:
        hit |= b.contains(states)
    return hit


def _check(ensemble: TrajectoryEnsemble, horizon: int):
    if ensemble.count == 0:
        raise InputError("empty ensemble")
    if not 0 < horizon <= ensemble.horizon + 1:
        raise InputError(f"horizon {horizon} outside [1, {ensemble.horizon + 1}]")


def cesaro_count(ensemble: TrajectoryEnsemble, sets: BoxSet, horizon: int) -> int:
    """Number of (trajectory, t) pairs, t < horizon, with x_t in the set."""
    _check(ensemble, horizon)
    return int(_indicator(ensemble.states[:, :horizon], sets).sum())


def cesaro_measure(ensemble: TrajectoryEnsemble, sets: BoxSet, horizon: int) -> float:
    """Mean over trajectories of (1/T) #{t < T : x_t in B}.

    ``sets`` is a box or a list of boxes read as their union.
    """
    return cesaro_count(ensemble, sets, horizon) / (ensemble.count * horizon)


@dataclass(frozen=True)
class MomentEstimate:
    value: float
    p: float
    horizon: int
    diverged: bool


def empirical_moment(ensemble: TrajectoryEnsemble, p: float, horizon: int) -> MomentEstimate:
    """Time and ensemble average of |x_t|^p (Euclidean norm) over t < horizon."""
    if p <= 0:
        raise InputError("moment exponent must be positive")
    _check(ensemble, horizon)
    x = ensemble.states[:, :horizon]
    if not np.all(np.isfinite(x)):
        return MomentEstimate(float("inf"), p, horizon, True)
    norms = np.linalg.norm(x, axis=-1) ** p
    value = float(np.mean(norms))
    return MomentEstimate(value, p, horizon, not np.isfinite(value))


@dataclass
class AMSReport:
    converged: bool
    windows: list
    values: list
    max_gap: float
    epsilon: float
    caveat: str = FINITE_T_CAVEAT
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"converged": self.converged, "windows": [list(w) for w in self.windows],
                "values": self.values, "max_gap": self.max_gap, "epsilon": self.epsilon,
                "caveat": self.caveat, "notes": self.notes}


def window_measure(ensemble: TrajectoryEnsemble, sets: BoxSet, start: int, stop: int) -> float:
    """Cesaro average of the indicator over t in [start, stop)."""
    if not 0 <= start < stop <= ensemble.horizon + 1:
        raise InputError(f"window [{start}, {stop}) exceeds the ensemble horizon {ensemble.horizon}")
    hit = _indicator(ensemble.states[:, start:stop], sets)
    return float(hit.mean())


def ams_convergence_diagnostic(ensemble: TrajectoryEnsemble, sets: BoxSet, windows,
                               epsilon: float = EPS_AMS) -> AMSReport:
    """Compare windowed Cesaro averages; converged iff every pairwise gap <= epsilon."""
    windows = [tuple(int(v) for v in w) for w in windows]
    if len(windows) < 2:
        raise InputError("need at least two time windows")
    ordered = sorted(windows)
    for (a0, a1), (b0, _) in zip(ordered, ordered[1:]):
        if b0 < a1:
            raise InputError("time windows must be disjoint")
    values = [window_measure(ensemble, sets, a, b) for a, b in windows]
    gap = max(abs(u - v) for u, v in itertools.combinations(values, 2))
    return AMSReport(gap <= epsilon, windows, values, gap, epsilon)


def halves(horizon: int) -> list:
    """The two windows [0, T/2) and [T/2, T)."""
    h = horizon // 2
    return [(0, h), (h, horizon)]
