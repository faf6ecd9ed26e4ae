"""Riemann-Siegel theta evaluation, zero unfolding, and the counting-function
fluctuation, plus numeric diagnostics for the respacing hypotheses."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .pointproc import PointConfiguration

__all__ = [
    "THETA_CUTOFF",
    "riemann_siegel_theta",
    "density_L",
    "UnfoldedSpectrum",
    "unfold",
    "fluctuation_S",
    "RespacingReport",
    "verify_respacing_conditions",
]

# Below this height the Stirling tail of theta is no longer < 1e-12; all
# ingested zeros sit above 14, so nothing of interest lives down there.
THETA_CUTOFF = 10.0

# Stirling correction a/(b*t^(2n-1)); at t = 10 the first omitted term is
# below 1e-12.
_THETA_TAIL = ((1.0, 48.0), (7.0, 5760.0), (31.0, 80640.0), (127.0, 430080.0), (511.0, 1216512.0))

_TWO_PI = 2.0 * math.pi


def riemann_siegel_theta(t):
    """theta(t) for t >= 10, accurate to about 1e-10 absolute.

    Evaluates the Stirling expansion
    theta(t) = (t/2) log(t/2pi) - t/2 - pi/8 + 1/(48 t) + 7/(5760 t^3) + ...
    Accepts scalars or arrays.
    """
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < THETA_CUTOFF):
        raise ValueError("below supported range: theta requires t >= 10")
    val = 0.5 * t_arr * np.log(t_arr / _TWO_PI) - 0.5 * t_arr - math.pi / 8.0
    inv_sq = 1.0 / (t_arr * t_arr)
    power = 1.0 / t_arr
    for num, den in _THETA_TAIL:
        val = val + (num / den) * power
        power = power * inv_sq
    if np.isscalar(t) or t_arr.ndim == 0:
        return float(val)
    return val


def density_L(t):
    """Slowly varying height-to-density factor log(t)/(2 pi)."""
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr <= 1.0):
        raise ValueError("density requires t > 1")
    val = np.log(t_arr) / _TWO_PI
    if np.isscalar(t) or t_arr.ndim == 0:
        return float(val)
    return val


@dataclass(frozen=True, eq=False)
class UnfoldedSpectrum:
    """A raw spectrum paired with its unit-mean-spacing rescaling."""

    raw: PointConfiguration
    unfolded: PointConfiguration
    provenance: str = "synthetic"

    def __post_init__(self):
        if self.raw.n != self.unfolded.n:
            raise ValueError("raw and unfolded spectra must have equal length")
        if self.provenance not in ("zeta", "gue", "synthetic"):
            raise ValueError("provenance must be zeta, gue, or synthetic")


def unfold(raw: PointConfiguration, provenance: str = "zeta") -> UnfoldedSpectrum:
    """Apply theta/pi pointwise; order is preserved since theta increases."""
    pts = riemann_siegel_theta(raw.points) / math.pi
    end = riemann_siegel_theta(max(raw.window_end, THETA_CUTOFF)) / math.pi
    start = min(0.0, pts[0] if len(pts) else 0.0) - 1.0
    return UnfoldedSpectrum(
        raw=raw,
        unfolded=PointConfiguration(pts, window_end=end, window_start=start),
        provenance=provenance,
    )


def fluctuation_S(t: float, raw: PointConfiguration) -> float:
    """Empirical S(t) = N_emp(t) - theta(t)/pi - 1.

    The theta/pi term absorbs the smooth part including -1/8, and the +1
    accounts for 7/8 + 1/8 in the counting formula.
    """
    if t > raw.window_end:
        raise ValueError("insufficient data: t beyond table range")
    n_emp = int(np.searchsorted(raw.points, t, side="right"))
    return n_emp - riemann_siegel_theta(t) / math.pi - 1.0


def _phi(t):
    return riemann_siegel_theta(t) / math.pi


def _log_deriv_ratio(t: float, rel_step: float = 1e-4) -> float:
    """t * Phi'(t)/Phi(t) for Phi = phi(t)/t, central differences with
    one Richardson step."""

    def big_phi(x):
        return _phi(x) / x

    h = t * rel_step

    def central(step):
        return (big_phi(t + step) - big_phi(t - step)) / (2.0 * step)

    d = (4.0 * central(h / 2.0) - central(h)) / 3.0
    return t * d / big_phi(t)


@dataclass(frozen=True)
class RespacingReport:
    t_grid: tuple[float, ...]
    matching_dev: tuple[float, ...]       # |phi(t)/(t L(t)) - 1|
    log_deriv_dev: tuple[float, ...]      # |t Phi'(t)/Phi(t)|
    max_matching_dev: float
    max_log_deriv_dev: float
    matching_decreasing: bool
    log_deriv_decreasing: bool


def verify_respacing_conditions(t_grid) -> RespacingReport:
    """Evaluate both regularity diagnostics for phi = theta/pi on a grid.

    Both quantities decay like 1/log t, so on a geometric grid each column
    should decrease monotonically.
    """
    grid = [float(t) for t in t_grid]
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("grid must be increasing")
    if grid[0] < 100.0:
        raise ValueError("grid must start at 100 or above")
    matching = []
    log_deriv = []
    for t in grid:
        matching.append(abs(_phi(t) / (t * density_L(t)) - 1.0))
        log_deriv.append(abs(_log_deriv_ratio(t)))
    return RespacingReport(
        t_grid=tuple(grid),
        matching_dev=tuple(matching),
        log_deriv_dev=tuple(log_deriv),
        max_matching_dev=max(matching),
        max_log_deriv_dev=max(log_deriv),
        matching_decreasing=all(b < a for a, b in zip(matching, matching[1:])),
        log_deriv_decreasing=all(b < a for a, b in zip(log_deriv, log_deriv[1:])),
    )
