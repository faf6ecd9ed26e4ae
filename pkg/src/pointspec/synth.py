"""Synthetic spectra with known limiting statistics: Poisson, the shifted
integer lattice, and tridiagonal GUE bulk spectra unfolded by the
semicircle law."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigvalsh_tridiagonal

from .pointproc import PointConfiguration
from .unfold import UnfoldedSpectrum

__all__ = [
    "RngSpec",
    "poisson_spectrum",
    "lattice_spectrum",
    "tridiagonal_eigenvalues",
    "gue_tridiagonal_eigenvalues",
    "gue_unfolded_spectrum",
    "semicircle_cdf",
    "GUE_DIM_MIN",
    "GUE_DIM_MAX",
]

GUE_DIM_MIN = 50
GUE_DIM_MAX = 4000


@dataclass(frozen=True)
class RngSpec:
    """Reproducible stream identity: same spec, same bits."""

    seed: int
    algorithm: str = "pcg64"

    def __post_init__(self):
        if self.algorithm != "pcg64":
            raise ValueError("only the pcg64 stream is supported")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 bits")

    def generator(self) -> np.random.Generator:
        return np.random.Generator(np.random.PCG64(np.random.SeedSequence(self.seed)))

    def substream(self, index: int) -> "RngSpec":
        """Derived stream for (seed, index), e.g. one per sampled matrix."""
        child = np.random.SeedSequence(self.seed, spawn_key=(index,)).generate_state(2)
        return RngSpec(seed=int(child[0]) << 32 | int(child[1]) >> 32, algorithm=self.algorithm)


def _generator_of(rng) -> np.random.Generator:
    if isinstance(rng, RngSpec):
        return rng.generator()
    if isinstance(rng, np.random.Generator):
        return rng
    raise TypeError("rng must be an RngSpec or numpy Generator")


def poisson_spectrum(T: float, rng) -> PointConfiguration:
    """Unit-rate Poisson points on (0, T] built from exponential gaps."""
    if not T > 0:
        raise ValueError("window length must be positive")
    gen = _generator_of(rng)
    points = []
    position = 0.0
    block = max(64, int(T + 6.0 * math.sqrt(T) + 16))
    while position <= T:
        gaps = gen.exponential(1.0, size=block)
        cum = position + np.cumsum(gaps)
        points.append(cum[cum <= T])
        position = float(cum[-1])
    pts = np.concatenate(points) if points else np.empty(0)
    return PointConfiguration(pts, window_end=float(T))


def lattice_spectrum(T: int, rng) -> PointConfiguration:
    """The integer lattice shifted by a uniform phase u in (0, 1].

    The phase is quantized to 30 fractional bits so that every point u + j
    is exactly representable and consecutive gaps are exactly 1.0.
    """
    T = int(T)
    if T < 1:
        raise ValueError("window length must be a positive integer")
    gen = _generator_of(rng)
    u = (math.floor(gen.random() * 2**30) + 1) / 2**30
    return PointConfiguration(u + np.arange(T, dtype=float), window_end=float(T))


def _chi_squares(gen: np.random.Generator, dofs: np.ndarray) -> np.ndarray:
    """Chi variables with the given (even, integer) degrees of freedom via
    sums of squared Gaussians, drawn in one pass."""
    total = int(np.sum(dofs))
    squares = gen.standard_normal(total) ** 2
    boundaries = np.concatenate(([0], np.cumsum(dofs)[:-1]))
    return np.sqrt(np.add.reduceat(squares, boundaries))


def tridiagonal_eigenvalues(diag, offdiag) -> np.ndarray:
    """Eigenvalues of a real symmetric tridiagonal matrix, ascending,
    through the implicit-shift QL/QR iteration (LAPACK stev)."""
    try:
        return np.sort(eigvalsh_tridiagonal(
            np.asarray(diag, dtype=float),
            np.asarray(offdiag, dtype=float),
            lapack_driver="stev",
        ))
    except np.linalg.LinAlgError as exc:
        raise RuntimeError(
            "eigensolver did not converge within 30n implicit-shift iterations"
        ) from exc


def gue_tridiagonal_eigenvalues(n: int, rng) -> np.ndarray:
    """All eigenvalues of one tridiagonal GUE draw, ascending.

    The matrix is half of [diagonal N(0,2); off-diagonal chi_{2(n-1)},
    chi_{2(n-2)}, ..., chi_2], which puts the spectral bulk on
    [-sqrt(2n), sqrt(2n)].  Draw order (diagonal first, then the
    off-diagonal chi squares) is fixed so streams are portable.
    """
    n = int(n)
    if not GUE_DIM_MIN <= n <= GUE_DIM_MAX:
        raise ValueError(f"matrix dimension must be in [{GUE_DIM_MIN}, {GUE_DIM_MAX}]")
    gen = _generator_of(rng)
    diag = gen.standard_normal(n) * (math.sqrt(2.0) / 2.0)
    dofs = 2 * np.arange(n - 1, 0, -1)
    off = _chi_squares(gen, dofs) / 2.0
    return tridiagonal_eigenvalues(diag, off)


def semicircle_cdf(x):
    """Integrated semicircle density on [-1, 1]."""
    x_arr = np.clip(np.asarray(x, dtype=float), -1.0, 1.0)
    val = (x_arr * np.sqrt(1.0 - x_arr**2) + np.arcsin(x_arr)) / math.pi + 0.5
    if np.isscalar(x) or np.asarray(x).ndim == 0:
        return float(val)
    return val


def gue_unfolded_spectrum(n: int, rng) -> UnfoldedSpectrum:
    """Bulk eigenvalues (central 50%) with semicircle unfolding n*F(x/sqrt(2n)).

    The bulk restriction matters: edge eigenvalues follow different
    statistics and would contaminate the spacing law.
    """
    eigs = gue_tridiagonal_eigenvalues(n, rng)
    lo, hi = n // 4, n // 4 + n // 2
    bulk = eigs[lo:hi]
    scale = math.sqrt(2.0 * n)
    unfolded = n * semicircle_cdf(bulk / scale)
    raw = PointConfiguration(bulk, window_end=scale, window_start=-scale)
    return UnfoldedSpectrum(
        raw=raw,
        unfolded=PointConfiguration(unfolded, window_end=float(n), window_start=0.0),
        provenance="gue",
    )
