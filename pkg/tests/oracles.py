"""Independent reference computations used by the tests: brute-force
correlation sums, the product-rule expansion of mixed moments, Sturm-sequence
eigenvalues, and plain empirical distances."""

from __future__ import annotations

import itertools
import math

import numpy as np

from pointspec.estimators import TestFunction
from pointspec.pointproc import correlation_sum


def brute_force_correlation(points, k, f) -> float:
    """Sum f over all ordered distinct index tuples, no windowing at all."""
    pts = np.asarray(points, dtype=float)
    total = 0.0
    for tup in itertools.permutations(range(pts.size), k):
        total += float(f(pts[list(tup)].reshape(1, k))[0])
    return total


def mixed_moment_direct(points, tents) -> float:
    """Product over i of the linear statistic sum_n f_i(x_n)."""
    pts = np.asarray(points, dtype=float)
    value = 1.0
    for center, width in tents:
        value *= sum(max(0.0, 1.0 - abs(x - center) / width) for x in pts)
    return value


def expansion_terms(k: int) -> dict:
    """Expand prod_i sum_n f_i(x_n) into correlation sums with
    product-merged arguments, by iterating the product rule
    (sum_n f(x_n)) C_j(g_1..g_j) = C_{j+1}(g_1..g_j, f) + sum_i C_j(.., g_i f, ..).

    Keys are tuples of sorted factor-index groups, values integer
    coefficients (all 1: the expansion enumerates set partitions).
    """
    terms = {((0,),): 1}
    for new in range(1, k):
        grown: dict = {}
        for args, coeff in terms.items():
            appended = args + ((new,),)
            grown[appended] = grown.get(appended, 0) + coeff
            for i in range(len(args)):
                merged = args[:i] + (tuple(sorted(args[i] + (new,))),) + args[i + 1 :]
                grown[merged] = grown.get(merged, 0) + coeff
        terms = grown
    return terms


def mixed_moment_via_correlations(config, tents) -> float:
    """Evaluate the expansion of the mixed moment through the package's
    correlation sums; each argument group becomes a product of tents on one
    axis."""
    k = len(tents)
    total = 0.0
    for args, coeff in expansion_terms(k).items():
        factors = []
        degenerate = False
        for group in args:
            members = [tents[i] for i in group]
            lo = max(c - w for c, w in members)
            hi = min(c + w for c, w in members)
            if lo >= hi:
                degenerate = True
                break

            def axis_rule(x, members=members):
                vals = np.ones_like(x)
                for c, w in members:
                    vals = vals * np.maximum(0.0, 1.0 - np.abs(x - c) / w)
                return vals

            factors.append((axis_rule, (lo, hi)))
        if degenerate:
            continue
        f = TestFunction.product_of_1d(factors)
        total += coeff * correlation_sum(config, len(args), f)
    return total


def polarization_product(values) -> float:
    """Reconstruct S_1 ... S_k from k-th powers of {0,1}-combinations."""
    s = list(values)
    k = len(s)
    total = 0.0
    for eps in itertools.product((0, 1), repeat=k):
        combo = sum(e * v for e, v in zip(eps, s))
        total += (-1.0) ** (k - sum(eps)) * combo**k
    return total / math.factorial(k)


def sturm_count(diag, off, x) -> int:
    """Number of eigenvalues of the symmetric tridiagonal matrix below x,
    by the Sturm sequence of leading principal minors."""
    count = 0
    q = diag[0] - x
    if q < 0:
        count += 1
    for i in range(1, len(diag)):
        denom = q if q != 0.0 else 1e-300
        q = diag[i] - x - off[i - 1] ** 2 / denom
        if q < 0:
            count += 1
    return count


def tridiagonal_eigenvalues_bisection(diag, off, tol: float = 1e-12) -> np.ndarray:
    """All eigenvalues via bisection on the three-term-recurrence root
    counter; slow but independent of any QL/QR iteration."""
    d = np.asarray(diag, dtype=float)
    e = np.asarray(off, dtype=float)
    n = d.size
    radius = float(np.max(np.abs(d)) + 2.0 * (np.max(np.abs(e)) if e.size else 0.0)) + 1.0
    eigs = []
    for k in range(1, n + 1):
        lo, hi = -radius, radius
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if sturm_count(d, e, mid) >= k:
                hi = mid
            else:
                lo = mid
        eigs.append(0.5 * (lo + hi))
    return np.array(eigs)


def ks_distance(samples, cdf_values_at_sorted) -> float:
    """Kolmogorov-Smirnov distance of a sample against reference CDF values
    evaluated at the sorted sample points."""
    n = len(samples)
    ref = np.asarray(cdf_values_at_sorted)
    hi = (np.arange(n) + 1.0) / n
    lo = np.arange(n) / n
    return float(max(np.max(np.abs(hi - ref)), np.max(np.abs(lo - ref))))


def midpoint_box_integral(func, lo, hi, cells_per_axis, dim) -> float:
    """Midpoint rule on a tensor grid; the stated independent check for the
    Gauss-Legendre box integrals."""
    mids = lo + (hi - lo) * (np.arange(cells_per_axis) + 0.5) / cells_per_axis
    grids = np.meshgrid(*([mids] * dim), indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=1)
    vol = ((hi - lo) / cells_per_axis) ** dim
    return float(np.sum(func(pts)) * vol)
