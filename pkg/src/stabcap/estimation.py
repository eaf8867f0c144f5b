"""Initial-state estimation from control sequences, bin grouping and the
quantities that enter the noisy-channel error estimate."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .channels import ChannelModel
from .combinatorics import disjoint_subcollection, measure
from .errors import CapabilityError, InputError
from .models import Distribution, SystemModel, batch_step, draw_initial_and_noise
from .policies import ZoomPolicy, run_zoom_loop

MAX_GRID = 20_000_000
GRID_OVERSAMPLE = 4


# ---------------------------------------------------------------------------
# conditioned sets


@dataclass(frozen=True)
class ConditionedSet:
    empty: bool
    low: float
    high: float
    midpoint: float
    cell: float
    points: int            # grid points inside the set
    components: int        # maximal runs of consecutive grid points

    @property
    def diameter(self) -> float:
        """Enclosing-interval width plus one grid cell."""
        return math.nan if self.empty else self.high - self.low + self.cell

    def to_dict(self) -> dict:
        return {"empty": self.empty, "low": self.low, "high": self.high, "midpoint": self.midpoint,
                "diameter": self.diameter, "cell": self.cell, "points": self.points,
                "components": self.components}


def _scalar(model: SystemModel):
    if model.dimension != 1 or model.kind == "semilinear":
        raise InputError("conditioned sets need a scalar additive or general model")


def default_domain(model: SystemModel) -> tuple:
    if model.init.support is not None and model.init.support[0] < model.init.support[1]:
        return model.init.support
    if model.density_bounds is not None:
        return model.density_bounds.support
    raise InputError("initial law has unbounded support; pass an explicit domain")


def expansion_constant(model: SystemModel, domain: tuple, b: float, points: int = 4097) -> float:
    """c = inf |f'| over the domain and the target box, from the log-Jacobian."""
    _scalar(model)
    if model.logdet is None:
        raise InputError("model has no log-Jacobian; pass the expansion constant explicitly")
    lo, hi = min(domain[0], -b), max(domain[1], b)
    xs = np.linspace(lo, hi, points)[:, None]
    return float(2.0 ** np.min(model.logdet(xs)))


def required_grid(domain: tuple, b: float, c: float, T: int) -> int:
    """Smallest point count whose spacing is below b c^-T."""
    width = domain[1] - domain[0]
    return int(math.floor(width / (b * c ** (-T)))) + 2


def conditioned_set(model: SystemModel, controls, noise, b: float, r_star: float, T: int,
                    grid: Optional[int] = None, domain: Optional[tuple] = None,
                    expansion: Optional[float] = None) -> ConditionedSet:
    """Initial states whose trajectory under (controls, noise) lies in [-b, b]
    at a fraction >= 1 - r_star of the times t = 0..T-1.

    Membership is evaluated on a uniform grid over ``domain``; the spacing must
    be below b c^-T, where c = inf |f'|.  ``grid=None`` picks
    ``GRID_OVERSAMPLE`` times the minimum.
    """
    _scalar(model)
    if T < 1:
        raise InputError("T must be at least 1")
    if b < 0:
        raise InputError("b must be nonnegative")
    if not 0 <= r_star < 1:
        raise InputError("need 0 <= r_star < 1")
    domain = tuple(float(v) for v in (domain or default_domain(model)))
    if not domain[0] < domain[1]:
        raise InputError("domain must be a nondegenerate interval")
    u = np.asarray(controls, dtype=float).reshape(-1)
    w = np.asarray(noise, dtype=float).reshape(-1)
    if len(u) < T - 1 or len(w) < T - 1:
        raise InputError(f"need at least {T - 1} controls and noise values")
    if b > 0:
        c = expansion if expansion is not None else expansion_constant(model, domain, b)
        if c <= 1:
            raise InputError(f"expansion constant c = {c:.6g} must exceed 1")
        need = required_grid(domain, b, c, T)
        if grid is None:
            grid = GRID_OVERSAMPLE * need
        if grid < need:
            raise InputError(f"grid of {grid} points is too coarse for T={T}: "
                             f"at least {need} points (spacing < {b * c ** (-T):.3g}) required")
    elif grid is None:
        grid = 10_001
    if grid > MAX_GRID:
        raise CapabilityError(f"grid of {grid} points exceeds the limit {MAX_GRID}")
    xs = np.linspace(domain[0], domain[1], grid)
    cell = float(xs[1] - xs[0])
    x = xs[:, None]
    hits = (np.abs(x[:, 0]) <= b).astype(np.int32)
    for t in range(T - 1):
        with np.errstate(over="ignore", invalid="ignore"):
            x = batch_step(model, x, np.array([u[t]]), np.array([w[t]]))
        hits += np.abs(x[:, 0]) <= b
    inside = hits >= math.ceil((1 - r_star) * T - 1e-9)
    idx = np.flatnonzero(inside)
    if len(idx) == 0:
        return ConditionedSet(True, math.nan, math.nan, math.nan, cell, 0, 0)
    lo, hi = float(xs[idx[0]]), float(xs[idx[-1]])
    comps = 1 + int(np.sum(np.diff(idx) > 1))
    return ConditionedSet(False, lo, hi, 0.5 * (lo + hi), cell, len(idx), comps)


def contraction_bound(b: float, c: float, r_star: float, T: int) -> float:
    """2 b c^-(1 - 3 r_star) T."""
    return 2 * b * c ** (-(1 - 3 * r_star) * T)


# ---------------------------------------------------------------------------
# bins


@dataclass
class BinPipelineResult:
    centers: np.ndarray
    radius: float
    L: int
    support: tuple
    b_bins: list            # kept B-bins (inside K), in input order
    dropped: list           # input indices of bins not inside K
    kept_index: list        # input index of each kept B-bin
    c_bins: list            # selected B-bins, left to right
    c_index: list           # input indices of the C-bins
    d_sets: list            # list of piece lists
    e_groups: list          # list of lists of D indices
    m_T: list               # union of B-bins, disjoint pieces
    m_bar_T: list           # pieces of the union minus the leftovers of every L-th D-set
    measure_m: float
    measure_m_bar: float
    group_measures: np.ndarray
    group_mass: np.ndarray          # P(i), exact when the initial law is known
    group_mass_bounds: np.ndarray   # (n3, 2) from p_min / p_max
    beta: float
    mass_exact: bool
    notes: list = field(default_factory=list)

    @property
    def n1(self) -> int:
        return len(self.b_bins)

    @property
    def n2(self) -> int:
        return len(self.c_bins)

    @property
    def n3(self) -> int:
        return len(self.e_groups)

    @property
    def rho(self) -> float:
        return 2 * self.radius

    def to_dict(self) -> dict:
        return {"n1": self.n1, "n2": self.n2, "n3": self.n3, "radius": self.radius, "L": self.L,
                "support": list(self.support), "dropped": self.dropped, "c_index": self.c_index,
                "c_bins": [list(b) for b in self.c_bins],
                "e_groups": self.e_groups, "measure_m": self.measure_m,
                "measure_m_bar": self.measure_m_bar, "group_measures": self.group_measures.tolist(),
                "group_mass": self.group_mass.tolist(),
                "group_mass_bounds": self.group_mass_bounds.tolist(), "beta": self.beta,
                "mass_exact": self.mass_exact, "notes": self.notes}


def _minus(pieces, holes):
    """Set difference of two lists of disjoint intervals (measure sense)."""
    out = list(pieces)
    for a, b in holes:
        nxt = []
        for p, q in out:
            if b <= p or a >= q:
                nxt.append((p, q))
                continue
            if a > p:
                nxt.append((p, a))
            if b < q:
                nxt.append((b, q))
        out = nxt
    return out


def bin_pipeline(centers: Sequence[float], radius: float, L: int, support: tuple,
                 p_min: float, p_max: float, init: Optional[Distribution] = None) -> BinPipelineResult:
    """B-bins around the centers, disjoint C-bins, D-sets with leftovers,
    E-groups of L consecutive D-sets, and the induced group distribution.

    Bins not contained in ``support`` are dropped.  When ``init`` is given the
    group masses are exact; otherwise P(i) is the lower bound p_min m(E_i)
    and beta is an upper bound.
    """
    if not (0 < p_min <= p_max):
        raise InputError("need 0 < p_min <= p_max")
    if radius <= 0:
        raise InputError("bin radius must be positive")
    if int(L) != L or L < 1:
        raise InputError("L must be a positive integer")
    L = int(L)
    lo, hi = float(support[0]), float(support[1])
    if not lo < hi:
        raise InputError("support must be a nondegenerate interval")
    centers = np.asarray(centers, dtype=float).reshape(-1)
    if len(centers) == 0:
        raise InputError("no centers")
    bins, kept, dropped = [], [], []
    for i, x in enumerate(centers):
        if x - radius >= lo and x + radius <= hi:
            bins.append((x - radius, x + radius))
            kept.append(i)
        else:
            dropped.append(i)
    if not bins:
        raise InputError("every bin falls outside the support")
    sel = disjoint_subcollection(bins)
    c_bins = [bins[i] for i in sel.selected]
    c_index = [kept[i] for i in sel.selected]
    d_sets = []
    for k, cb in enumerate(c_bins):
        extra = sel.leftovers[k] if k < len(sel.leftovers) else sel.tail
        d_sets.append([cb] + list(extra))
    n2 = len(c_bins)
    n3 = n2 // L + 1
    groups = [list(range(g * L, min((g + 1) * L, n2))) for g in range(n3)]
    m_T = [tuple(p) for p in sorted(sum(d_sets, []))]
    holes = []
    for g in groups:
        if len(g) == L:   # D_{iL} exists only for full groups
            holes.extend(d_sets[g[-1]][1:])
    m_bar = _minus(m_T, holes)
    gm = np.array([sum(b - a for k in g for a, b in d_sets[k]) for g in groups])
    bounds = np.column_stack([p_min * gm, p_max * gm])
    if init is not None:
        mass = np.array([sum(init.mass(a, b) for k in g for a, b in d_sets[k]) for g in groups])
    else:
        mass = bounds[:, 0].copy()
    notes = []
    if len(groups[-1]) == 0:
        notes.append("last E-group is empty (L divides n2)")
    if dropped:
        notes.append(f"{len(dropped)} bins outside the support dropped")
    if init is None:
        notes.append("group masses are lower bounds p_min * measure, so beta is an upper bound")
    return BinPipelineResult(centers, float(radius), L, (lo, hi), bins, dropped, kept, c_bins,
                             c_index, d_sets, groups, m_T, m_bar, measure(m_T), measure(m_bar),
                             gm, mass, bounds, coupling_tv(mass, n3), init is not None, notes)


def coupling_tv(P, n: int) -> float:
    """P(Y != W) under the maximal coupling of Y ~ P with W uniform on n points."""
    P = np.asarray(P, dtype=float).reshape(-1)
    if n < 1:
        raise InputError("support size must be positive")
    if np.any(P < 0):
        raise InputError("negative probability mass")
    if P.sum() > 1 + 1e-9:
        raise InputError("masses sum above 1")
    if len(P) > n:
        raise InputError("distribution has more atoms than the support size")
    P = np.concatenate([P, np.zeros(n - len(P))])
    return float(1.0 - np.minimum(P, 1.0 / n).sum())


# ---------------------------------------------------------------------------
# error-bound arithmetic


def step5_feasibility(p_min: float, p_max: float, r_star: float, alpha: float, L: int):
    """Asymptotic decoding-error bound for the grouped bins; returns (value, value < 1)."""
    if not (0 < p_min <= p_max):
        raise InputError("need 0 < p_min <= p_max")
    if not (0 < alpha < r_star < 1 / 3):
        raise InputError("need 0 < alpha < r_star < 1/3")
    if L < 1:
        raise InputError("L must be at least 1")
    q = p_max / p_min
    value = (1 - 0.5 * (r_star - alpha) / (q * r_star) + q * q / (2 * L)
             + 2 * q * alpha / (r_star - alpha))
    return float(value), bool(value < 1)


def _as_distribution(density) -> Distribution:
    if isinstance(density, Distribution):
        return density
    if isinstance(density, str):
        name = {"normal": "gaussian", "exponential": "laplace", "two_sided_exponential": "laplace"}
        fam = name.get(density, density)
        if fam == "uniform":
            return Distribution("uniform", {"low": -1.0, "high": 1.0})
        return Distribution(fam, {})
    if isinstance(density, dict):
        d = dict(density)
        return Distribution(d.pop("family"), d)
    raise InputError(f"cannot read a density from {density!r}")


def tail_ratio(density, eps_grid: Sequence[float]) -> list:
    """(mass outside K_eps) / (inf of the density on K_eps) for each eps.

    K_eps is the symmetric-quantile interval of mass 1 - eps; for a compactly
    supported law it is the support itself, so the ratio is 0.
    """
    dist = _as_distribution(density)
    if dist.family not in ("gaussian", "laplace", "uniform", "truncated_gaussian"):
        raise CapabilityError(f"tail ratio is not available for family {dist.family!r}")
    law = dist._law()
    out = []
    for eps in eps_grid:
        if not 0 < eps < 1:
            raise InputError("eps must lie in (0, 1)")
        if dist.support is not None:
            out.append(0.0)
            continue
        lo, hi = law.ppf(eps / 2), law.ppf(1 - eps / 2)
        xs = np.linspace(lo, hi, 2049)
        inf_density = float(np.min(law.pdf(xs)))
        out.append(float(eps / inf_density))
    return out


# ---------------------------------------------------------------------------
# experiment


@dataclass
class EstimationReport:
    horizons: list
    exceedance: list
    empty_fraction: list
    control_rate: list
    distinct_controls: list
    thresholds: list
    expansion: float
    noise_mode: str
    trials: int
    seed: int
    centers: list = field(default_factory=list)   # per T: estimates, one per distinct control sequence
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def estimation_experiment(model: SystemModel, channel: ChannelModel, policy: ZoomPolicy, b: float,
                          r_star: float, T_list: Sequence[int], trials: int, seed: int,
                          noise_mode: str = "per_trial", domain: Optional[tuple] = None,
                          grid: Optional[int] = None) -> EstimationReport:
    """Frequency of |x_0 - xhat_0| > b c^-(1 - 3 r_star) T over closed-loop trials.

    ``noise_mode="fixed"`` reuses the noise path of trial 0 for every trial,
    so the statistic is conditional on one realisation; ``"per_trial"``
    averages over realisations.  An empty conditioned set counts as an
    exceedance.
    """
    _scalar(model)
    if trials < 1:
        raise InputError("trials must be positive")
    if noise_mode not in ("per_trial", "fixed"):
        raise InputError("noise_mode must be 'per_trial' or 'fixed'")
    domain = tuple(domain or default_domain(model))
    c = expansion_constant(model, domain, b)
    if c <= 1:
        raise InputError(f"expansion constant c = {c:.6g} must exceed 1")
    rep = EstimationReport([], [], [], [], [], [], c, noise_mode, trials, seed)
    rep.notes.append("statistics conditional on the noise path of trial 0" if noise_mode == "fixed"
                     else "statistics averaged over independent noise paths")
    for T in T_list:
        x0 = np.empty((trials, 1))
        w = np.empty((trials, T, 1))
        ch_u = np.empty((trials, T))
        for i in range(trials):
            x0[i], w[i], rng = draw_initial_and_noise(model, seed, i, T)
            ch_u[i] = rng.uniform(size=T)
        if noise_mode == "fixed":
            w[:] = w[0]
        res = run_zoom_loop(model, policy, channel, x0, w, ch_u, seed)
        thr = 0.5 * contraction_bound(b, c, r_star, T)
        miss = empty = 0
        seen = {}
        for i in range(trials):
            cs = conditioned_set(model, res.controls[i, :, 0], w[i, :, 0], b, r_star, T,
                                 grid=grid, domain=domain, expansion=c)
            if cs.empty:
                empty += 1
                miss += 1
                continue
            seen.setdefault(res.controls[i, :, 0].tobytes(), cs.midpoint)
            if abs(x0[i, 0] - cs.midpoint) > thr + 0.5 * cs.cell:
                miss += 1
        distinct = res.distinct_control_count(T)
        rep.horizons.append(int(T))
        rep.exceedance.append(miss / trials)
        rep.empty_fraction.append(empty / trials)
        rep.distinct_controls.append(int(distinct))
        rep.control_rate.append(float(np.log2(distinct) / T))
        rep.thresholds.append(thr)
        rep.centers.append(list(seen.values()))
    if any(r_star * T < 1 for T in T_list):
        rep.notes.append("for r_star * T < 1 the contraction threshold is not guaranteed")
    return rep
