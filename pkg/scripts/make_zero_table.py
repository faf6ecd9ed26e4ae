#!/usr/bin/env python3
"""Generate the bundled table of zeta-zero ordinates.

The first few hundred ordinates come from mpmath's zetazero.  Above that the
script locates sign changes of the Riemann-Siegel Z function (main sum plus
two remainder terms) on a fine grid, refines every bracket by bisection, and
rescans any suspiciously wide gap at higher resolution so that close pairs
are not lost.  The finished table is validated against the smooth counting
term and spot-checked against mpmath before it is written.

mpmath is needed here only; the package itself never computes zeros.

Usage:
    python scripts/make_zero_table.py --count 100000 --out data/zeros_100k.txt
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from pointspec.unfold import riemann_siegel_theta  # noqa: E402

TWO_PI = 2.0 * math.pi

# Zeros below this index are taken from mpmath; the asymptotic remainder
# terms are comfortably accurate above the corresponding height (~1000).
N_MPMATH = 700

_PSI_SINGULARITIES = (0.25, 0.75)


def _psi(p: np.ndarray) -> np.ndarray:
    return np.cos(TWO_PI * (p * p - p - 0.0625)) / np.cos(TWO_PI * p)


def _psi_safe(p: np.ndarray) -> np.ndarray:
    """Psi with its removable singularities (value 1/2) patched."""
    out = np.empty_like(p)
    near = np.zeros(p.shape, dtype=bool)
    for s in _PSI_SINGULARITIES:
        near |= np.abs(p - s) < 2e-4
    out[~near] = _psi(p[~near])
    out[near] = 0.5
    return out


def _psi_third_derivative(p: np.ndarray) -> np.ndarray:
    """Psi''' by a central stencil; zero near the removable singularities,
    where the first remainder correction is dropped (its weight there is
    O(1e-4) of Z)."""
    out = np.zeros_like(p)
    safe = np.ones(p.shape, dtype=bool)
    for s in _PSI_SINGULARITIES:
        safe &= np.abs(p - s) > 0.01
    h = 1e-3
    ps = p[safe]
    out[safe] = (
        _psi(ps + 2 * h) - 2.0 * _psi(ps + h) + 2.0 * _psi(ps - h) - _psi(ps - 2 * h)
    ) / (2.0 * h**3)
    return out


def riemann_siegel_z(t: np.ndarray, chunk: int = 200_000) -> np.ndarray:
    """Z(t) with the C0 and C1 remainder terms, vectorized."""
    t = np.asarray(t, dtype=float)
    out = np.empty_like(t)
    for start in range(0, t.size, chunk):
        tt = t[start : start + chunk]
        a = np.sqrt(tt / TWO_PI)
        nu = np.floor(a).astype(int)
        p = a - nu
        theta = riemann_siegel_theta(tt)
        n_max = int(nu.max())
        n = np.arange(1, n_max + 1)
        phases = theta[:, None] - tt[:, None] * np.log(n)[None, :]
        terms = np.cos(phases) / np.sqrt(n)[None, :]
        terms[n[None, :] > nu[:, None]] = 0.0
        main = 2.0 * terms.sum(axis=1)
        c0 = _psi_safe(p)
        c1 = -_psi_third_derivative(p) / (96.0 * math.pi**2)
        remainder = ((-1.0) ** (nu - 1)) * a**-0.5 * (c0 + c1 / a)
        out[start : start + chunk] = main + remainder
    return out


def _mean_gap(t: float) -> float:
    return TWO_PI / math.log(t / TWO_PI)


def _brackets_on_grid(grid: np.ndarray, z: np.ndarray) -> list[tuple[float, float]]:
    sign = np.sign(z)
    flip = np.nonzero(sign[:-1] * sign[1:] < 0)[0]
    return [(float(grid[i]), float(grid[i + 1])) for i in flip]


def _bisect_brackets(brackets: list[tuple[float, float]], iterations: int = 34) -> np.ndarray:
    lo = np.array([b[0] for b in brackets])
    hi = np.array([b[1] for b in brackets])
    z_lo = riemann_siegel_z(lo)
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        z_mid = riemann_siegel_z(mid)
        take_low = np.sign(z_mid) == np.sign(z_lo)
        lo = np.where(take_low, mid, lo)
        z_lo = np.where(take_low, z_mid, z_lo)
        hi = np.where(take_low, hi, mid)
    return 0.5 * (lo + hi)


def scan_zeros(t_start: float, t_stop: float, per_gap: int = 8) -> np.ndarray:
    """Bracket-and-bisect every sign change of Z on [t_start, t_stop]."""
    pieces = []
    seg_lo = t_start
    while seg_lo < t_stop:
        seg_hi = min(seg_lo * 1.5, t_stop)
        step = _mean_gap(seg_hi) / per_gap
        grid = np.arange(seg_lo, seg_hi + step, step)
        z = riemann_siegel_z(grid)
        brackets = _brackets_on_grid(grid, z)

        # A wide gap between found brackets may hide a close pair that sat
        # inside one grid cell; rescan such gaps 32x finer.
        centers = [0.5 * (a + b) for a, b in brackets]
        suspicious = []
        for left, right in zip(centers, centers[1:]):
            if right - left > 1.2 * _mean_gap(right):
                suspicious.append((left, right))
        for left, right in suspicious:
            fine = np.linspace(left, right, int((right - left) / (step / 32.0)) + 2)
            zf = riemann_siegel_z(fine)
            extra = [b for b in _brackets_on_grid(fine, zf) if b not in brackets]
            brackets.extend(extra)
        brackets.sort()
        if brackets:
            pieces.append(_bisect_brackets(brackets))
        seg_lo = seg_hi
    zeros = np.concatenate(pieces) if pieces else np.empty(0)
    zeros.sort()
    # Deduplicate brackets shared by segment overlaps.
    keep = np.concatenate(([True], np.diff(zeros) > 1e-6))
    return zeros[keep]


def counting_check(zeros: np.ndarray) -> tuple[float, float]:
    """Max |theta(g_n)/pi + 1 - n| and max 50-zero moving average.

    A missed (or spurious) zero shifts every later value by a full integer,
    so a bounded drift certifies that no zero was lost.
    """
    n = np.arange(1, zeros.size + 1)
    d = riemann_siegel_theta(zeros) / math.pi + 1.0 - n
    window = 50
    kernel = np.ones(window) / window
    smooth = np.convolve(d, kernel, mode="valid")
    return float(np.abs(d).max()), float(np.abs(smooth).max())


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--count", type=int, default=100_000)
    parser.add_argument("--out", type=Path, default=Path("data/zeros_100k.txt"))
    parser.add_argument("--spot-checks", type=int, default=5)
    args = parser.parse_args()

    import mpmath as mp

    mp.mp.dps = 25
    t0 = time.time()
    low = np.array([float(mp.zetazero(n).imag) for n in range(1, N_MPMATH + 1)])
    print(f"[{time.time()-t0:6.1f}s] {low.size} low zeros from mpmath (up to t={low[-1]:.3f})")

    # Upper scan limit from the smooth counting term, with margin.
    target = args.count
    t_hi = 10.0
    while riemann_siegel_theta(t_hi) / math.pi + 1.0 < target + 20:
        t_hi *= 1.1
    high = scan_zeros(low[-1] + 1e-6, t_hi)
    zeros = np.concatenate([low, high])[:target]
    print(f"[{time.time()-t0:6.1f}s] scan found {high.size} ordinates; total kept {zeros.size}")
    if zeros.size < target:
        print("error: scan produced too few zeros", file=sys.stderr)
        return 1

    max_dev, max_drift = counting_check(zeros)
    print(f"counting check: max |D_n| = {max_dev:.3f}, max 50-zero drift = {max_drift:.3f}")
    if max_dev > 1.8 or max_drift > 0.8:
        print("error: counting check failed, table is unreliable", file=sys.stderr)
        return 1

    checks = np.unique(
        np.linspace(N_MPMATH + 300, target, args.spot_checks, dtype=int)
    )
    worst = 0.0
    for n in checks:
        ref = float(mp.zetazero(int(n)).imag)
        err = abs(ref - zeros[n - 1])
        worst = max(worst, err)
        print(f"  spot check n={n}: table={zeros[n-1]:.9f} mpmath={ref:.9f} err={err:.2e}")
    if worst > 5e-4:
        print("error: spot check disagreement with mpmath", file=sys.stderr)
        return 1

    args.out.parent.mkdir(parents=True, exist_ok=True)
    with open(args.out, "w", newline="\n") as fh:
        fh.write(f"# ordinates of the first {target} nontrivial zeta zeros (positive imaginary parts)\n")
        fh.write("# generated by scripts/make_zero_table.py; verified against mpmath and the counting term\n")
        for gamma in zeros:
            fh.write(f"{gamma:.9f}\n")
    print(f"[{time.time()-t0:6.1f}s] wrote {args.out} ({zeros.size} ordinates, last {zeros[-1]:.6f})")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
