"""Capacity lower bounds: volume growth, moment constraint, linear spectrum,
and certified volume-growth rates of invariant blocks of semilinear systems.

All values are in bits per time step.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .ams import Box
from .errors import CapabilityError, InputError, NumericError
from .models import SemilinearModel, SystemModel, TrajectoryEnsemble

CERTIFIED = "certified-lower-bound"
ESTIMATE = "estimate"
DEFAULT_GRID = 10_000
FEKETE_TOL = 1e-9
_INV_PHI = (math.sqrt(5) - 1) / 2


@dataclass
class BoundReport:
    value: float
    theorem: str               # volume | moment | linear | cocycle
    parameters: dict
    status: str = ESTIMATE
    notes: list = field(default_factory=list)
    raw: Optional[float] = None

    def to_dict(self) -> dict:
        return {"value": self.value, "raw": self.raw, "theorem": self.theorem,
                "parameters": self.parameters, "status": self.status, "notes": list(self.notes)}


def _clamped(raw: float, theorem: str, parameters: dict, status: str, notes=None) -> BoundReport:
    notes = list(notes or [])
    if raw < 0:
        notes.append(f"raw value {raw:.12g} is negative; reported bound clamped to 0")
    return BoundReport(max(raw, 0.0), theorem, parameters, status, notes, raw)


# ---------------------------------------------------------------------------
# volume growth


@dataclass(frozen=True)
class InfLogdet:
    value: float               # minimum over the grid
    argmin: tuple
    grid_step: tuple
    certified: bool
    certified_value: Optional[float] = None  # grid min minus the continuity allowance


def _grid(region: Box, points_per_axis: int):
    axes = [np.linspace(lo, hi, points_per_axis if hi > lo else 1)
            for lo, hi in zip(region.low, region.high)]
    steps = tuple(float(ax[1] - ax[0]) if len(ax) > 1 else 0.0 for ax in axes)
    return axes, steps


def inf_logdet(model: SystemModel, region: Box, grid: Optional[int] = None,
               budget: Optional[int] = None, lipschitz: Optional[float] = None) -> InfLogdet:
    """Grid minimum of log2|det Df| over a bounded box (endpoints included).

    Without ``lipschitz`` the result is an estimate.  Given a Lipschitz
    constant of the profile (sup norm), the grid minimum minus
    ``lipschitz * max_step / 2`` is a certified lower bound for the infimum.
    """
    if model.logdet is None:
        raise CapabilityError("model has no Jacobian log-determinant profile")
    if not region.bounded:
        raise InputError("inf_logdet needs a bounded region")
    if region.dimension != model.dimension:
        raise InputError("region dimension does not match the model")
    N = model.dimension
    if grid is None:
        if N > 2 and budget is None:
            raise InputError("dimension > 2 needs an explicit grid budget")
        grid = DEFAULT_GRID if N <= 2 else max(2, int(budget ** (1.0 / N)))
    if budget is not None and grid ** N > budget:
        raise InputError(f"grid {grid}^{N} exceeds budget {budget}")
    axes, steps = _grid(region, grid)
    mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, N)
    vals = np.asarray(model.logdet(mesh), dtype=float)
    k = int(np.argmin(vals))
    best = float(vals[k])
    if lipschitz is None:
        return InfLogdet(best, tuple(mesh[k]), steps, False)
    allowance = lipschitz * max(steps) / 2
    return InfLogdet(best, tuple(mesh[k]), steps, True, best - allowance)


def volume_bound(q_of_B: float, inf_logdet_B: float, certified: bool = False) -> BoundReport:
    """C >= Q(B) * inf_B log|det Df|, clamped at zero."""
    if not 0 <= q_of_B <= 1:
        raise InputError("Q(B) must lie in [0, 1]")
    raw = 0.0 if q_of_B == 0 else q_of_B * inf_logdet_B
    return _clamped(raw, "volume", {"Q(B)": q_of_B, "inf_logdet": inf_logdet_B},
                    CERTIFIED if certified else ESTIMATE)


def logdet_integral_estimate(model: SystemModel, ensemble: TrajectoryEnsemble, horizon: int) -> BoundReport:
    """Cesaro/ensemble average of log|det Df(x_t)|.

    Exposed for comparison only: it is not known to bound the capacity, so it
    is always reported as an estimate.
    """
    if model.logdet is None:
        raise CapabilityError("model has no Jacobian log-determinant profile")
    x = ensemble.states[:, :horizon].reshape(-1, model.dimension)
    value = float(np.mean(model.logdet(x)))
    return BoundReport(value, "volume-integral", {"horizon": horizon}, ESTIMATE,
                       ["integral of log|det Df| against the empirical measure; "
                        "conjectural as a capacity bound, never certified"], value)


# ---------------------------------------------------------------------------
# moment constraint


def radial_profile(model: SystemModel, grid: int = DEFAULT_GRID) -> Callable[[float], float]:
    """kappa -> grid min of log|det Df| over the sup-norm ball of radius kappa."""
    def profile(kappa: float) -> float:
        return inf_logdet(model, Box.ball(kappa, model.dimension), grid=grid).value
    return profile


def _golden_max(g: Callable[[float], float], a: float, b: float, tol: float = 1e-10):
    c, d = b - _INV_PHI * (b - a), a + _INV_PHI * (b - a)
    gc, gd = g(c), g(d)
    while b - a > tol * max(1.0, abs(a) + abs(b)):
        if gc >= gd:
            b, d, gd = d, c, gc
            c = b - _INV_PHI * (b - a)
            gc = g(c)
        else:
            a, c, gc = c, d, gd
            d = a + _INV_PHI * (b - a)
            gd = g(d)
    x = (a + b) / 2
    return x, g(x)


@dataclass
class MomentBoundResult:
    kappa: float
    bound: float
    at_cap: bool
    report: BoundReport


def moment_bound(profile: Callable[[float], float], moment: float, p: float, kappa_max: float,
                 grid: int = 200) -> MomentBoundResult:
    """Maximise (1 - M/kappa^p) * profile(kappa) over M^(1/p) <= kappa <= kappa_max.

    Log-spaced grid search, then golden-section refinement on the two cells
    around the best grid point.  The returned value is never below the grid
    maximum.
    """
    if moment <= 0 or p <= 0:
        raise InputError("moment and exponent must be positive")
    k0 = moment ** (1.0 / p)
    if not kappa_max > k0:
        raise InputError(f"kappa_max must exceed M^(1/p) = {k0}")

    def g(kappa: float) -> float:
        try:
            prof = float(profile(kappa))
        except Exception as exc:  # noqa: BLE001 -- any failure of a user profile
            raise CapabilityError(f"profile not evaluable at kappa={kappa}: {exc}") from exc
        if not np.isfinite(prof):
            raise CapabilityError(f"profile not finite at kappa={kappa}")
        return (1.0 - moment / kappa ** p) * prof

    ks = np.geomspace(k0, kappa_max, grid)
    vals = np.array([g(k) for k in ks])
    j = int(np.argmax(vals))
    best_k, best_v = float(ks[j]), float(vals[j])
    lo, hi = float(ks[max(j - 1, 0)]), float(ks[min(j + 1, grid - 1)])
    if hi > lo:
        k_ref, v_ref = _golden_max(g, lo, hi)
        if v_ref > best_v:
            best_k, best_v = k_ref, v_ref
    at_cap = best_k >= kappa_max * (1 - 1e-12)
    notes = []
    if at_cap:
        notes.append(f"maximiser at the search cap kappa_max={kappa_max}; the supremum may be larger")
    rep = _clamped(best_v, "moment", {"M_p": moment, "p": p, "kappa_max": kappa_max,
                                      "kappa*": best_k}, ESTIMATE, notes)
    return MomentBoundResult(best_k, rep.value, at_cap, rep)


# ---------------------------------------------------------------------------
# linear systems


def linear_bound(A) -> BoundReport:
    """Sum over eigenvalues (with multiplicity) of max(0, log2|lambda|)."""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InputError("A must be a square matrix")
    try:
        eig = np.linalg.eigvals(A)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"eigenvalue computation failed: {exc}") from exc
    mags = np.abs(eig)
    with np.errstate(divide="ignore"):
        logs = np.log2(mags)
    value = float(np.sum(np.maximum(logs, 0.0)))
    return BoundReport(value, "linear", {"eigenvalues": [[float(e.real), float(e.imag)] for e in eig]},
                       CERTIFIED, [], value)


# ---------------------------------------------------------------------------
# semilinear cocycle rates


def check_invariant_block(model: SemilinearModel, block: Sequence[int], tol: float = 0.0) -> None:
    """Raise unless span{e_i : i in block} is invariant under every A(u)."""
    N = model.dimension
    block = sorted(set(int(i) for i in block))
    if not block or block[0] < 0 or block[-1] >= N:
        raise InputError(f"block indices must be a nonempty subset of 0..{N - 1}")
    rest = [i for i in range(N) if i not in block]
    for u in model.alphabet:
        off = model.A(u)[np.ix_(rest, block)]
        if off.size and np.max(np.abs(off)) > tol:
            raise InputError(f"block {block} is not invariant under A({u!r})")


@dataclass
class CocycleResult:
    a: list                  # a_n for n = 1..n_max
    per_step: list           # a_n / n
    rate: float              # certified: max_n a_n / n (clamped report in `report`)
    minimisers: list         # one minimising word per n
    partial: bool
    nodes: int
    report: BoundReport


def _block_logdet(model: SemilinearModel, word, block) -> float:
    phi = model.transition(word)[np.ix_(block, block)]
    sign, logabs = np.linalg.slogdet(phi)
    return float(logabs / math.log(2)) if sign != 0 else -math.inf


def _min_over_words(model, block, n, step_vals, labels, budget):
    """Branch and bound for min over words of log|det Phi(n, word)|_block|.

    The block is invariant, so the block of Phi is the product of the diagonal
    blocks of the A(u_t) and its log-determinant is the sum of the one-letter
    values.  Summing them (rather than forming products) keeps the cocycle
    identity exact up to float addition.  A prefix is dropped once its value
    plus (remaining letters) * (smallest one-letter value) is no smaller than
    the incumbent.
    """
    min_step = min(step_vals.values())
    u_star = min(labels, key=lambda u: step_vals[u])
    best_word = (u_star,) * n
    best = n * step_vals[u_star]
    nodes = 0
    stack = [((), 0.0)]
    while stack:
        word, val = stack.pop()
        nodes += 1
        if nodes > budget:
            return best, best_word, nodes, True
        k = len(word)
        if k == n:
            if val < best:
                best, best_word = val, word
            continue
        if val + (n - k) * min_step >= best:
            continue
        for u in reversed(labels):
            stack.append((word + (u,), val + step_vals[u]))
    return best, best_word, nodes, False


def cocycle_rate_lower(model: SemilinearModel, block: Sequence[int], n_max: int,
                       budget: int = 1_000_000) -> CocycleResult:
    """Certified lower bound on lim (1/n) inf_u log2|det Phi(n, u)| on an invariant block.

    ``a_n`` (the infimum over words of length n) is superadditive, so
    ``max_{n <= n_max} a_n / n`` never exceeds the limit.  Superadditivity is
    re-checked on the computed values; a violation raises NumericError.
    """
    if n_max < 1:
        raise InputError("n_max must be at least 1")
    check_invariant_block(model, block)
    block = sorted(set(int(i) for i in block))
    labels = list(model.alphabet)
    step_vals = {u: _block_logdet(model, (u,), block) for u in labels}
    a, words = [], []
    nodes_total, partial = 0, False
    for n in range(1, n_max + 1):
        val, word, nodes, cut = _min_over_words(model, block, n, step_vals, labels, budget)
        a.append(val)
        words.append(list(word))
        nodes_total += nodes
        partial |= cut
    for n, m in itertools.product(range(1, n_max + 1), repeat=2):
        if n + m <= n_max and a[n + m - 1] < a[n - 1] + a[m - 1] - FEKETE_TOL:
            raise NumericError(f"superadditivity violated: a_{n + m} < a_{n} + a_{m}")
    per_step = [v / (i + 1) for i, v in enumerate(a)]
    rate = max(per_step)
    status = ESTIMATE if partial else CERTIFIED
    notes = ["search budget exceeded; a_n are upper estimates, not certified"] if partial else []
    rep = _clamped(rate, "cocycle", {"block": block, "n_max": n_max, "alphabet": [str(u) for u in labels]},
                   status, notes)
    return CocycleResult(a, per_step, rate, words, partial, nodes_total, rep)


def selgrade_sum(block_rates: Sequence[float]) -> BoundReport:
    """Sum of the strictly positive certified block rates (zero if none)."""
    rates = [float(r) for r in block_rates]
    positive = [r for r in rates if r > 0]
    value = float(sum(positive))
    notes = [] if positive else ["no block with positive rate; bound is zero"]
    return BoundReport(value, "cocycle", {"block_rates": rates, "selected": len(positive)},
                       CERTIFIED, notes, float(sum(rates)))
