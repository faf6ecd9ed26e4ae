"""Point configurations on a half-open window, their periodic tessellation,
and centered (Palm-style) samples.

Counting uses the half-open convention throughout: an interval (a, b]
contains a point p iff a < p <= b.  Labels are two-sided: x_1 is the first
point strictly right of the origin, x_0 the first point at or left of it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "PointConfiguration",
    "TessellatedConfiguration",
    "CenteredConfiguration",
    "label_point",
    "count_in_interval",
    "translate",
    "tessellate",
    "palm_samples",
    "correlation_sum",
    "falling_factorial_count",
    "CORRELATION_ARITY_CAP",
]

# Tuple enumeration is O(m^k) with m = points per support window; beyond
# k = 6 this is not desk-scale.
CORRELATION_ARITY_CAP = 6

# Refuse correlation sums whose tuple grid would not fit in memory.
_TUPLE_BUDGET = 20_000_000


def _frozen_array(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.ndim != 1:
        raise ValueError("points must form a one-dimensional array")
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class PointConfiguration:
    """Finite non-decreasing multiset of reals on (window_start, window_end]."""

    points: np.ndarray
    window_end: float
    window_start: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "points", _frozen_array(self.points))
        pts = self.points
        if not self.window_start < self.window_end:
            raise ValueError("window must be nonempty")
        if pts.size:
            if np.any(np.diff(pts) < 0):
                raise ValueError("points must be non-decreasing")
            if pts[0] <= self.window_start or pts[-1] > self.window_end:
                raise ValueError("points must lie in (window_start, window_end]")

    @property
    def n(self) -> int:
        return int(self.points.size)

    def count_in(self, a: float, b: float) -> int:
        if a > b:
            raise ValueError("interval endpoints must satisfy a <= b")
        pts = self.points
        return int(np.searchsorted(pts, b, side="right") - np.searchsorted(pts, a, side="right"))

    def translate(self, s: float) -> "PointConfiguration":
        return PointConfiguration(
            self.points - s, window_end=self.window_end - s, window_start=self.window_start - s
        )


@dataclass(frozen=True, eq=False)
class TessellatedConfiguration:
    """Periodic extension of a configuration on (0, T] to all of the line.

    The points are base[m] + r*period for every integer r; the label of
    base[m] + r*period is m + r*N with m in 1..N.
    """

    base: PointConfiguration
    period: float

    def __post_init__(self):
        if self.base.n == 0:
            raise ValueError("no points")
        if self.base.window_start != 0.0:
            raise ValueError("tessellation requires a canonical (0, T] window")
        if self.period != self.base.window_end:
            raise ValueError("period must equal the base window length")

    @property
    def n_per_period(self) -> int:
        return self.base.n

    def label(self, n: int) -> float:
        r, m = divmod(n - 1, self.base.n)
        return float(self.base.points[m] + r * self.period)

    def labels(self, n: np.ndarray) -> np.ndarray:
        r, m = np.divmod(np.asarray(n) - 1, self.base.n)
        return self.base.points[m] + r * self.period

    def _cumulative(self, x: float, side: str = "right") -> int:
        # Signed count of points in (0, x]; negative of the count in (x, 0]
        # for x < 0.  O(log N) via period arithmetic.
        q = math.ceil(x / self.period) - 1
        s = x - q * self.period  # s in (0, period]
        return q * self.base.n + int(np.searchsorted(self.base.points, s, side=side))

    def count_in(self, a: float, b: float) -> int:
        if a > b:
            raise ValueError("interval endpoints must satisfy a <= b")
        return self._cumulative(b) - self._cumulative(a)

    def label_range(self, lo: float, hi: float) -> tuple[int, int]:
        """Labels j with lo <= point_j <= hi (closed interval), as (first, last)."""
        first = self._cumulative(lo, side="left") + 1
        last = self._cumulative(hi, side="right")
        return first, last

    def translate(self, s: float) -> "TessellatedConfiguration":
        # The shifted point set is again period-periodic; re-anchor its
        # representatives in (0, T] so the intrinsic labeling applies.
        shifted = np.mod(self.base.points - s, self.period)
        shifted[shifted == 0.0] = self.period
        shifted.sort()
        return TessellatedConfiguration(
            PointConfiguration(shifted, window_end=self.period), self.period
        )


@dataclass(frozen=True, eq=False)
class CenteredConfiguration:
    """Offsets of a configuration viewed from one of its own points."""

    offsets: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "offsets", _frozen_array(self.offsets))
        if not self.radius > 0:
            raise ValueError("radius must be positive")
        off = self.offsets
        if np.any(np.diff(off) < 0):
            raise ValueError("offsets must be non-decreasing")
        if not np.any(off == 0.0):
            raise ValueError("centered configuration must contain offset 0")
        if off.size and max(-off[0], off[-1]) > self.radius:
            raise ValueError("offsets exceed the declared radius")

    def gaps_to_next(self, k: int) -> np.ndarray:
        """The first k strictly positive offsets, ascending."""
        pos = self.offsets[self.offsets > 0.0]
        if pos.size < k:
            raise ValueError("radius too small to hold k forward gaps")
        return pos[:k]


def label_point(config: TessellatedConfiguration, n: int) -> float:
    """Two-sided label x_n: the n-th point right of 0 for n >= 1, and the
    (-n+1)-th point at or left of 0 for n <= 0, so x_0 <= 0 < x_1."""
    return config.label(n)


def count_in_interval(config, a: float, b: float) -> int:
    """Number of points (with multiplicity) in (a, b]."""
    return config.count_in(a, b)


def translate(config, s: float):
    """Shift every point by -s, so that a point previously at s sits at 0."""
    return config.translate(s)


def tessellate(config: PointConfiguration) -> TessellatedConfiguration:
    if config.n == 0:
        raise ValueError("no points")
    return TessellatedConfiguration(config, period=config.window_end)


def palm_samples(tess: TessellatedConfiguration, radius: float) -> list[CenteredConfiguration]:
    """All N configurations seen from each base point, truncated to |offset| <= radius.

    Weighting each returned configuration 1/N realizes the empirical Palm
    law of the tessellation exactly; there is no sampling error in the
    index average.
    """
    if not radius > 0:
        raise ValueError("radius must be positive")
    base = tess.base.points
    out = []
    for c in base:
        first, last = tess.label_range(c - radius, c + radius)
        offsets = tess.labels(np.arange(first, last + 1)) - c
        out.append(CenteredConfiguration(offsets, radius=radius))
    return out


def _points_of(config) -> np.ndarray:
    if isinstance(config, PointConfiguration):
        return config.points
    if isinstance(config, CenteredConfiguration):
        return config.offsets
    arr = np.asarray(config, dtype=float)
    if arr.ndim != 1:
        raise ValueError("expected a one-dimensional configuration")
    return arr


def correlation_sum(config, k: int, f) -> float:
    """Sum of f over ordered k-tuples of distinct indices.

    Only tuples whose points fall inside f's declared support box can
    contribute, so enumeration slides over the sorted points instead of
    ranging over all index tuples.  Duplicated points occupy distinct
    indices and are enumerated as such.
    """
    if not 1 <= k <= CORRELATION_ARITY_CAP:
        raise ValueError(f"correlation arity must be in 1..{CORRELATION_ARITY_CAP}")
    if getattr(f, "arity", k) != k:
        raise ValueError("test function arity does not match k")
    pts = _points_of(config)
    support = np.asarray(f.support, dtype=float).reshape(k, 2)

    index_sets = []
    for lo, hi in support:
        i0 = int(np.searchsorted(pts, lo, side="left"))
        i1 = int(np.searchsorted(pts, hi, side="right"))
        if i1 <= i0:
            return 0.0
        index_sets.append(np.arange(i0, i1))

    if k == 1:
        return float(np.sum(f(pts[index_sets[0]].reshape(-1, 1))))

    sizes = [len(ix) for ix in index_sets]
    if math.prod(sizes) > _TUPLE_BUDGET:
        raise ValueError("support box contains too many points for tuple enumeration")

    total = 0.0
    # Chunk over the first axis; the remaining grid is materialized at once.
    grids = np.meshgrid(*index_sets[1:], indexing="ij")
    rest = np.stack([g.ravel() for g in grids], axis=1)
    distinct_rest = np.ones(rest.shape[0], dtype=bool)
    for i in range(k - 1):
        for j in range(i + 1, k - 1):
            distinct_rest &= rest[:, i] != rest[:, j]
    for i0 in index_sets[0]:
        mask = distinct_rest.copy()
        for j in range(k - 1):
            mask &= rest[:, j] != i0
        if not mask.any():
            continue
        tuples = np.empty((int(mask.sum()), k), dtype=np.intp)
        tuples[:, 0] = i0
        tuples[:, 1:] = rest[mask]
        total += float(np.sum(f(pts[tuples])))
    return total


def _check_disjoint(intervals) -> list[tuple[float, float]]:
    ivs = [(float(a), float(b)) for a, b in intervals]
    for a, b in ivs:
        if a > b:
            raise ValueError("interval endpoints must satisfy a <= b")
    by_lo = sorted(ivs)
    for (a1, b1), (a2, b2) in zip(by_lo, by_lo[1:]):
        if a2 < b1:
            raise ValueError("intervals must be pairwise disjoint")
    return ivs


def falling_factorial_count(config, intervals, a) -> float:
    """Product over j of count(I_j) * (count(I_j)-1) * ... * (count(I_j)-a_j+1)."""
    ivs = _check_disjoint(intervals)
    orders = [int(x) for x in a]
    if len(orders) != len(ivs):
        raise ValueError("need one multiplicity per interval")
    if any(x < 0 for x in orders):
        raise ValueError("multiplicities must be non-negative")
    result = 1.0
    for (lo, hi), order in zip(ivs, orders):
        c = count_in_interval(config, lo, hi)
        for i in range(order):
            result *= c - i
    return result
