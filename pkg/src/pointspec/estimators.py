"""Empirical statistics of a spectrum under a random translate: correlation
sums in three normalizations, occupation counts, spacing vectors, the Palm
cross-check, and moment statistics of counting increments.

Time averages are Monte Carlo by default (with reported standard errors);
a deterministic midpoint grid is available for reproducible runs.  All
sample reductions use a fixed pairwise summation tree, so results do not
depend on how the samples would be distributed over workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np

from .pointproc import PointConfiguration, palm_samples, tessellate
from .unfold import UnfoldedSpectrum, density_L

__all__ = [
    "TestFunction",
    "EmpiricalDistribution",
    "AveragingPlan",
    "Estimate",
    "unit_density",
    "corr_fixed_scaling",
    "corr_varying_scaling",
    "corr_unfolded",
    "pair_correlation_histogram",
    "occupancy_distribution",
    "spacing_vectors",
    "PalmSpacingReport",
    "palm_spacing_check",
    "fujii_moment",
]

DEFAULT_SAMPLES = 10_000


def _pairwise_sum(values: np.ndarray) -> float:
    """Sum in a fixed binary tree order, independent of any chunking."""
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        return 0.0
    while arr.size > 1:
        m = arr.size // 2
        folded = arr[: 2 * m : 2] + arr[1 : 2 * m : 2]
        if arr.size % 2:
            folded = np.concatenate([folded, arr[-1:]])
        arr = folded
    return float(arr[0])


def unit_density(t):
    """Density factor for synthetic spectra that already have unit spacing."""
    arr = np.asarray(t, dtype=float)
    if np.isscalar(t) or arr.ndim == 0:
        return 1.0
    return np.ones_like(arr)


@dataclass(frozen=True, eq=False)
class TestFunction:
    """Compactly supported continuous function on R^k with a declared box.

    Evaluation outside the box is forced to zero, so correlation sums may
    restrict enumeration to the box.
    """

    arity: int
    support: np.ndarray  # shape (k, 2)
    family: str
    rule: Callable[[np.ndarray], np.ndarray]

    def __post_init__(self):
        box = np.asarray(self.support, dtype=float).reshape(self.arity, 2)
        object.__setattr__(self, "support", box)
        if np.any(box[:, 0] >= box[:, 1]):
            raise ValueError("support box must have positive extent per axis")
        if self.family not in ("tent", "bump", "product", "custom"):
            raise ValueError("unknown test-function family")

    def __call__(self, x: np.ndarray) -> np.ndarray:
        pts = np.asarray(x, dtype=float)
        if pts.ndim == 1:
            pts = pts.reshape(-1, self.arity)
        if pts.shape[1] != self.arity:
            raise ValueError("evaluation points must have one column per axis")
        inside = np.all((pts >= self.support[:, 0]) & (pts <= self.support[:, 1]), axis=1)
        out = np.zeros(pts.shape[0])
        if inside.any():
            out[inside] = self.rule(pts[inside])
        return out

    @classmethod
    def tent(cls, centers, half_widths, heights=None) -> "TestFunction":
        """Product of one-dimensional tents; height defaults to 1/half_width
        per axis so each one-dimensional factor integrates to 1."""
        c = np.atleast_1d(np.asarray(centers, dtype=float))
        w = np.atleast_1d(np.asarray(half_widths, dtype=float))
        if np.any(w <= 0):
            raise ValueError("half widths must be positive")
        h = 1.0 / w if heights is None else np.atleast_1d(np.asarray(heights, dtype=float))
        box = np.stack([c - w, c + w], axis=1)

        def rule(x):
            vals = h * np.maximum(0.0, 1.0 - np.abs(x - c) / w)
            return np.prod(vals, axis=1)

        return cls(arity=len(c), support=box, family="tent", rule=rule)

    @classmethod
    def bump(cls, centers, half_widths) -> "TestFunction":
        """Product of smooth bumps exp(1 - 1/(1 - u^2)), peak value 1."""
        c = np.atleast_1d(np.asarray(centers, dtype=float))
        w = np.atleast_1d(np.asarray(half_widths, dtype=float))
        if np.any(w <= 0):
            raise ValueError("half widths must be positive")
        box = np.stack([c - w, c + w], axis=1)

        def rule(x):
            u = (x - c) / w
            inside = np.abs(u) < 1.0
            vals = np.zeros_like(u)
            vals[inside] = np.exp(1.0 - 1.0 / (1.0 - u[inside] ** 2))
            return np.prod(vals, axis=1)

        return cls(arity=len(c), support=box, family="bump", rule=rule)

    @classmethod
    def indicator(cls, intervals, shoulder: float = 0.01) -> "TestFunction":
        """Continuous stand-in for a box indicator: 1 on the interior,
        tent-shaped shoulders of the given width running down to 0 at the
        box faces.  The bias against the true indicator is at most
        shoulder * (local intensity) per axis."""
        box = np.asarray(intervals, dtype=float).reshape(-1, 2)
        if shoulder <= 0:
            raise ValueError("shoulder width must be positive")
        if np.any(box[:, 1] - box[:, 0] <= 2.0 * shoulder):
            raise ValueError("intervals must be wider than two shoulders")

        def rule(x):
            vals = np.ones(x.shape[0])
            for axis in range(box.shape[0]):
                lo, hi = box[axis]
                ramp = np.minimum((x[:, axis] - lo) / shoulder, (hi - x[:, axis]) / shoulder)
                vals *= np.clip(ramp, 0.0, 1.0)
            return vals

        return cls(arity=box.shape[0], support=box, family="product", rule=rule)

    @classmethod
    def product_of_1d(cls, factors) -> "TestFunction":
        """Product of per-axis (callable, (lo, hi)) pairs."""
        funcs = [f for f, _ in factors]
        box = np.array([iv for _, iv in factors], dtype=float)

        def rule(x):
            vals = np.ones(x.shape[0])
            for axis, func in enumerate(funcs):
                vals *= func(x[:, axis])
            return vals

        return cls(arity=len(funcs), support=box, family="product", rule=rule)

    @classmethod
    def from_callable(cls, func, support) -> "TestFunction":
        box = np.asarray(support, dtype=float)
        box = box.reshape(-1, 2)
        return cls(arity=box.shape[0], support=box, family="custom", rule=func)


@dataclass(frozen=True, eq=False)
class EmpiricalDistribution:
    """A law estimated from data: histogram masses, an integer-vector pmf,
    or weighted samples."""

    kind: str
    total_mass: float
    sample_count: int
    is_probability: bool
    bin_edges: np.ndarray | None = None
    masses: np.ndarray | None = None
    pmf: Mapping[tuple, float] | None = None
    samples: np.ndarray | None = None
    weights: np.ndarray | None = None

    def __post_init__(self):
        if self.is_probability and abs(self.total_mass - 1.0) > 1e-12:
            raise ValueError("probability law must have total mass 1")

    @classmethod
    def from_histogram(cls, bin_edges, masses, sample_count, probability=False):
        edges = np.asarray(bin_edges, dtype=float)
        mass = np.asarray(masses, dtype=float)
        if mass.size != edges.size - 1:
            raise ValueError("need one mass per bin")
        if np.any(mass < -1e-15):
            raise ValueError("masses must be non-negative")
        return cls(
            kind="histogram",
            total_mass=float(np.sum(mass)),
            sample_count=int(sample_count),
            is_probability=probability,
            bin_edges=edges,
            masses=mass,
        )

    @classmethod
    def from_pmf(cls, pmf, sample_count):
        table = {tuple(int(i) for i in key): float(v) for key, v in pmf.items()}
        if any(v < -1e-15 for v in table.values()):
            raise ValueError("masses must be non-negative")
        return cls(
            kind="pmf",
            total_mass=float(sum(table.values())),
            sample_count=int(sample_count),
            is_probability=True,
            pmf=table,
        )

    @classmethod
    def from_samples(cls, samples, weights=None):
        pts = np.asarray(samples, dtype=float)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1)
        n = pts.shape[0]
        w = np.full(n, 1.0 / n) if weights is None else np.asarray(weights, dtype=float)
        if w.size != n or np.any(w < 0):
            raise ValueError("need one non-negative weight per sample")
        return cls(
            kind="samples",
            total_mass=float(np.sum(w)),
            sample_count=n,
            is_probability=abs(float(np.sum(w)) - 1.0) <= 1e-12,
            samples=pts,
            weights=w,
        )

    @property
    def dimension(self) -> int:
        if self.kind == "samples":
            return self.samples.shape[1]
        if self.kind == "pmf":
            return len(next(iter(self.pmf))) if self.pmf else 0
        return 1

    def mean(self) -> np.ndarray:
        if self.kind == "samples":
            return self.samples.T @ self.weights / self.total_mass
        if self.kind == "pmf":
            keys = np.array(list(self.pmf.keys()), dtype=float)
            vals = np.array(list(self.pmf.values()))
            return keys.T @ vals / self.total_mass
        centers = 0.5 * (self.bin_edges[:-1] + self.bin_edges[1:])
        return np.atleast_1d(centers @ self.masses / self.total_mass)

    def marginal_cdf(self, x, axis: int = 0) -> np.ndarray:
        if self.kind != "samples":
            raise ValueError("marginal CDF is defined for sample-based laws")
        order = np.argsort(self.samples[:, axis], kind="stable")
        sorted_vals = self.samples[order, axis]
        cum = np.cumsum(self.weights[order]) / self.total_mass
        idx = np.searchsorted(sorted_vals, np.asarray(x, dtype=float), side="right")
        return np.where(idx > 0, cum[np.maximum(idx - 1, 0)], 0.0)

    def sup_distance(self, other: "EmpiricalDistribution") -> float:
        """Exact sup |F - G| between two equally weighted sample laws.

        The common sample rows cancel exactly, so the sup is evaluated on
        the corner grid generated by the multiset symmetric difference.
        """
        if self.kind != "samples" or other.kind != "samples":
            raise ValueError("sup distance is defined for sample-based laws")
        a, b = self.samples, other.samples
        if a.shape[0] != b.shape[0] or a.shape[1] != b.shape[1]:
            raise ValueError("sample clouds must have matching shape")
        n, dim = a.shape
        if dim == 1:
            xs = np.sort(a[:, 0])
            ys = np.sort(b[:, 0])
            grid = np.concatenate([xs, ys])
            fa = np.searchsorted(xs, grid, side="right") / n
            fb = np.searchsorted(ys, grid, side="right") / n
            return float(np.max(np.abs(fa - fb)))
        ledger: dict[bytes, int] = {}
        for row in a:
            key = row.tobytes()
            ledger[key] = ledger.get(key, 0) + 1
        for row in b:
            key = row.tobytes()
            ledger[key] = ledger.get(key, 0) - 1
        extra_a = [np.frombuffer(k) for k, v in ledger.items() for _ in range(v) if v > 0]
        extra_b = [np.frombuffer(k) for k, v in ledger.items() for _ in range(-v) if v < 0]
        if not extra_a and not extra_b:
            return 0.0
        diff_a = np.array(extra_a).reshape(-1, dim)
        diff_b = np.array(extra_b).reshape(-1, dim)
        coords = [np.unique(np.concatenate([diff_a[:, d], diff_b[:, d]])) for d in range(dim)]
        if math.prod(len(c) for c in coords) > 1_000_000:
            raise ValueError("symmetric difference too large for exact corner evaluation")
        grids = np.meshgrid(*coords, indexing="ij")
        corners = np.stack([g.ravel() for g in grids], axis=1)
        count_a = np.sum(np.all(diff_a[None, :, :] <= corners[:, None, :], axis=2), axis=1)
        count_b = np.sum(np.all(diff_b[None, :, :] <= corners[:, None, :], axis=2), axis=1)
        return float(np.max(np.abs(count_a - count_b)) / n)


@dataclass(frozen=True)
class AveragingPlan:
    """How to average over the translate t: window, sampler, and budget."""

    t_min: float
    t_max: float
    sampler: str = "mc"
    m: int = DEFAULT_SAMPLES
    seed: int = 0

    def __post_init__(self):
        if self.t_min >= self.t_max:
            raise ValueError("averaging window must be nonempty")
        if self.m < 1:
            raise ValueError("need at least one sample")
        if self.sampler not in ("grid", "mc"):
            raise ValueError("sampler must be 'grid' or 'mc'")

    def sample(self) -> np.ndarray:
        span = self.t_max - self.t_min
        if self.sampler == "grid":
            return self.t_min + (np.arange(self.m) + 0.5) * (span / self.m)
        gen = np.random.Generator(np.random.PCG64(np.random.SeedSequence(self.seed)))
        return self.t_max - span * gen.random(self.m)


@dataclass(frozen=True)
class Estimate:
    """A time-averaged value with its Monte Carlo standard error."""

    value: float
    stderr: float
    n_samples: int
    skipped_fraction: float = 0.0

    def __float__(self) -> float:
        return self.value


def _reduce_samples(values: np.ndarray, n_skipped: int) -> Estimate:
    m = values.size
    mean = _pairwise_sum(values) / m
    if m > 1:
        var = _pairwise_sum((values - mean) ** 2) / (m - 1)
        stderr = math.sqrt(var / m)
    else:
        stderr = math.inf
    total = m + n_skipped
    return Estimate(value=mean, stderr=stderr, n_samples=m, skipped_fraction=n_skipped / total)


def _raw_config(spectrum) -> PointConfiguration:
    if isinstance(spectrum, UnfoldedSpectrum):
        return spectrum.raw
    if isinstance(spectrum, PointConfiguration):
        return spectrum
    raise TypeError("expected an UnfoldedSpectrum or PointConfiguration")


def _unfolded_config(spectrum) -> PointConfiguration:
    if isinstance(spectrum, UnfoldedSpectrum):
        return spectrum.unfolded
    if isinstance(spectrum, PointConfiguration):
        return spectrum
    raise TypeError("expected an UnfoldedSpectrum or PointConfiguration")


def _window_sum(pts: np.ndarray, k: int, f: TestFunction, t: float, lam: float) -> float:
    """Correlation sum of f over the configuration lam * (pts - t)."""
    index_sets = []
    for lo, hi in f.support:
        i0 = int(np.searchsorted(pts, t + lo / lam, side="left"))
        i1 = int(np.searchsorted(pts, t + hi / lam, side="right"))
        if i1 <= i0:
            return 0.0
        index_sets.append(np.arange(i0, i1))
    if k == 1:
        x = lam * (pts[index_sets[0]] - t)
        return float(np.sum(f(x.reshape(-1, 1))))
    if math.prod(len(ix) for ix in index_sets) > 2_000_000:
        raise ValueError("support box contains too many points for tuple enumeration")
    grids = np.meshgrid(*index_sets, indexing="ij")
    tuples = np.stack([g.ravel() for g in grids], axis=1)
    distinct = np.ones(tuples.shape[0], dtype=bool)
    for i in range(k):
        for j in range(i + 1, k):
            distinct &= tuples[:, i] != tuples[:, j]
    if not distinct.any():
        return 0.0
    coords = lam * (pts[tuples[distinct]] - t)
    return float(np.sum(f(coords)))


def _check_plan_window(plan: AveragingPlan, lo: float, hi: float):
    if plan.t_min < lo - 1e-9 or plan.t_max > hi + 1e-9:
        raise ValueError("averaging window must lie inside the allowed range")


def _require_coverage(config: PointConfiguration, query_lo: float, query_hi: float):
    if query_hi > config.window_end or (config.window_start > 0 and query_lo < config.window_start):
        raise ValueError("insufficient data: spectrum does not cover the queried range")


def corr_fixed_scaling(
    spectrum, k: int, f: TestFunction, T: float, plan: AveragingPlan | None = None,
    density=density_L,
) -> Estimate:
    """Dyadic-window estimator: average over t in [T, 2T] of the correlation
    sum of {density(T) * (c_n - t)} against f."""
    config = _raw_config(spectrum)
    if plan is None:
        plan = AveragingPlan(T, 2.0 * T)
    _check_plan_window(plan, T, 2.0 * T)
    lam = float(density(T))
    lo = float(np.min(f.support[:, 0]))
    hi = float(np.max(f.support[:, 1]))
    _require_coverage(config, plan.t_min + lo / lam, plan.t_max + hi / lam)
    ts = plan.sample()
    values = np.array([_window_sum(config.points, k, f, t, lam) for t in ts])
    return _reduce_samples(values, 0)


def corr_varying_scaling(
    spectrum, k: int, f: TestFunction, T: float, plan: AveragingPlan | None = None,
    density=density_L,
) -> Estimate:
    """Full-window estimator with per-translate dilation density(t), averaged
    over t in (0, T].  Translates where the density is undefined are skipped
    and reported in the skipped fraction."""
    config = _raw_config(spectrum)
    if plan is None:
        plan = AveragingPlan(0.0, T)
    _check_plan_window(plan, 0.0, T)
    lo = float(np.min(f.support[:, 0]))
    hi = float(np.max(f.support[:, 1]))
    ts = plan.sample()
    values = []
    skipped = 0
    lam_top = None
    try:
        lam_top = float(density(plan.t_max))
    except ValueError:
        pass
    if lam_top is not None and plan.t_max + hi / lam_top > config.window_end:
        raise ValueError("insufficient data: spectrum does not cover the queried range")
    for t in ts:
        try:
            lam = float(density(t))
        except ValueError:
            skipped += 1
            continue
        if lam <= 0.0:
            skipped += 1
            continue
        values.append(_window_sum(config.points, k, f, t, lam))
    if not values:
        raise ValueError("all translates were skipped; averaging window too low")
    return _reduce_samples(np.array(values), skipped)


def corr_unfolded(
    spectrum, k: int, f: TestFunction, T: float, plan: AveragingPlan | None = None
) -> Estimate:
    """Unfolded estimator: average over t in (0, T] of the correlation sum
    of {unfolded_n - t} against f."""
    config = _unfolded_config(spectrum)
    if plan is None:
        plan = AveragingPlan(0.0, T)
    _check_plan_window(plan, 0.0, T)
    hi = float(np.max(f.support[:, 1]))
    if plan.t_max + hi > config.window_end:
        raise ValueError("insufficient data: spectrum does not cover the queried range")
    ts = plan.sample()
    values = np.array([_window_sum(config.points, k, f, t, 1.0) for t in ts])
    return _reduce_samples(values, 0)


def pair_correlation_histogram(
    spectrum, T: float, bin_width: float, max_sep: float
) -> EmpiricalDistribution:
    """Binned law of positive separations between unfolded points.

    Each bin mass is (ordered pairs with separation in the bin) / T, which
    estimates the integral of 1 - S(u)^2 over the bin.
    """
    if bin_width <= 0:
        raise ValueError("bin width must be positive")
    if max_sep <= 0:
        raise ValueError("maximum separation must be positive")
    config = _unfolded_config(spectrum)
    pts = config.points
    if T + max_sep > config.window_end:
        raise ValueError("insufficient data: separations reach beyond the spectrum")
    n_bins = int(math.ceil(max_sep / bin_width - 1e-9))
    edges = bin_width * np.arange(n_bins + 1)
    counts = np.zeros(n_bins)
    i0 = int(np.searchsorted(pts, 0.0, side="right"))
    i1 = int(np.searchsorted(pts, T, side="right"))
    total_pairs = 0
    for offset in range(1, pts.size):
        left = np.arange(i0, i1)
        right = left + offset
        left = left[right < pts.size]
        right = right[right < pts.size]
        if left.size == 0:
            break
        seps = pts[right] - pts[left]
        kept = seps[(seps > 0.0) & (seps <= edges[-1])]
        counts += np.bincount(
            np.searchsorted(edges, kept, side="left") - 1, minlength=n_bins
        )[:n_bins]
        total_pairs += int(kept.size)
        if float(np.min(seps)) > edges[-1]:
            break
    return EmpiricalDistribution.from_histogram(
        edges, counts / T, sample_count=total_pairs, probability=False
    )


def occupancy_distribution(
    spectrum, intervals, T: float, plan: AveragingPlan | None = None
) -> EmpiricalDistribution:
    """Joint pmf of the count vector (points in t + I_1, ..., t + I_k) over
    the time average."""
    config = _unfolded_config(spectrum)
    ivs = [(float(a), float(b)) for a, b in intervals]
    if any(a > b for a, b in ivs):
        raise ValueError("interval endpoints must satisfy a <= b")
    if plan is None:
        plan = AveragingPlan(0.0, T)
    _check_plan_window(plan, 0.0, T)
    top = max(b for _, b in ivs)
    if plan.t_max + top > config.window_end:
        raise ValueError("insufficient data: intervals reach beyond the spectrum")
    ts = plan.sample()
    pts = config.points
    count_cols = []
    for a, b in ivs:
        hi_idx = np.searchsorted(pts, ts + b, side="right")
        lo_idx = np.searchsorted(pts, ts + a, side="right")
        count_cols.append(hi_idx - lo_idx)
    vectors = np.stack(count_cols, axis=1)
    pmf: dict[tuple, float] = {}
    weight = 1.0 / len(ts)
    for row in vectors:
        key = tuple(int(c) for c in row)
        pmf[key] = pmf.get(key, 0.0) + weight
    return EmpiricalDistribution.from_pmf(pmf, sample_count=len(ts))


def spacing_vectors(spectrum, K: int, N: int) -> EmpiricalDistribution:
    """The exact uniform-index law of gap vectors to the next K points:
    full enumeration over n = 1..N, no Monte Carlo."""
    if K <= 0:
        raise ValueError("need at least one forward gap")
    config = _unfolded_config(spectrum)
    pts = config.points
    if N < 1 or N + K > pts.size:
        raise ValueError("N too large: need N + K points in the spectrum")
    starts = pts[:N]
    vectors = np.stack([pts[j : N + j] - starts for j in range(1, K + 1)], axis=1)
    return EmpiricalDistribution.from_samples(vectors)


@dataclass(frozen=True)
class PalmSpacingReport:
    sup_distance: float
    bound: float
    passed: bool
    n_used: int
    k: int
    period: float


def palm_spacing_check(spectrum, K: int, N: int, period: float | None = None) -> PalmSpacingReport:
    """Compare the spacing-vector law computed directly against the one read
    off the Palm samples of the tessellation.

    Both enumerations produce the same gap vectors except for up to K
    wrapped indices at the window boundary, so the sup-distance between the
    empirical CDFs is at most K/N.  The default period is the smallest
    integer window containing the first N points; for an exactly periodic
    configuration (the shifted lattice) the wrap then reproduces the true
    continuation and the distance is exactly 0.
    """
    config = _unfolded_config(spectrum)
    pts = config.points
    if K <= 0 or N < 1 or N + K > pts.size:
        raise ValueError("need N + K points in the spectrum")
    work = pts[: N + K]
    if work[0] <= 0.0:
        work = work + (1.0 - work[0])
    base = work[:N]
    if period is None:
        period = float(math.ceil(base[-1]))
    if period < base[-1]:
        raise ValueError("period must cover the first N points")

    direct = np.stack([work[j : N + j] - base for j in range(1, K + 1)], axis=1)

    tess = tessellate(PointConfiguration(base, window_end=period))
    ext = np.concatenate([base, base[:K] + period])
    radius = float(np.max(ext[K:] - ext[: ext.size - K])) * (1.0 + 1e-12) + 1e-12
    palm_vectors = np.stack(
        [cc.gaps_to_next(K) for cc in palm_samples(tess, radius)], axis=0
    )

    dist = EmpiricalDistribution.from_samples(direct).sup_distance(
        EmpiricalDistribution.from_samples(palm_vectors)
    )
    bound = K / N
    return PalmSpacingReport(
        sup_distance=dist,
        bound=bound,
        passed=dist <= bound + 1e-15,
        n_used=N,
        k=K,
        period=period,
    )


def fujii_moment(
    spectrum,
    variant: str,
    k: int,
    T: float,
    A: float | None = None,
    interval=(0.0, 1.0),
    plan: AveragingPlan | None = None,
) -> Estimate:
    """Time-averaged k-th absolute moment of a short-window count increment.

    variant "height": counts of raw ordinates in (t, t + A/log T] for t
    averaged over [T, 2T].  variant "unfolded": counts of unfolded points in
    t + I for t averaged over (0, T].
    """
    if k < 0:
        raise ValueError("moment order must be non-negative")
    if variant == "height":
        if A is None or A <= 0:
            raise ValueError("height variant requires a positive window constant A")
        config = _raw_config(spectrum)
        if plan is None:
            plan = AveragingPlan(T, 2.0 * T)
        _check_plan_window(plan, T, 2.0 * T)
        width = A / math.log(T)
        lo_shift, hi_shift = 0.0, width
    elif variant == "unfolded":
        config = _unfolded_config(spectrum)
        if plan is None:
            plan = AveragingPlan(0.0, T)
        _check_plan_window(plan, 0.0, T)
        lo_shift, hi_shift = float(interval[0]), float(interval[1])
        if lo_shift > hi_shift:
            raise ValueError("interval endpoints must satisfy a <= b")
    else:
        raise ValueError("variant must be 'height' or 'unfolded'")
    if plan.t_max + hi_shift > config.window_end:
        raise ValueError("insufficient data: counting window reaches beyond the spectrum")
    ts = plan.sample()
    pts = config.points
    counts = (
        np.searchsorted(pts, ts + hi_shift, side="right")
        - np.searchsorted(pts, ts + lo_shift, side="right")
    ).astype(float)
    return _reduce_samples(np.abs(counts) ** k if k > 0 else np.ones_like(counts), 0)
