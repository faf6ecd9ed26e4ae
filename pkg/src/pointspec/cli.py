"""Command-line workflows: zero-table ingestion, estimator runs with
machine-readable CSV/JSON output, sine-kernel reference tables, and the
end-to-end `verify` suite.

Exit codes: 0 success, 1 usage, 2 data error, 3 verification failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import math
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .estimators import (
    AveragingPlan,
    TestFunction,
    corr_fixed_scaling,
    corr_unfolded,
    corr_varying_scaling,
    fujii_moment,
    occupancy_distribution,
    pair_correlation_histogram,
    palm_spacing_check,
    spacing_vectors,
)
from .pointproc import PointConfiguration
from .sinekernel import fredholm_det_gap, gap_density_p2, sinc, spacing_cdf
from .synth import RngSpec, gue_unfolded_spectrum, lattice_spectrum, poisson_spectrum
from .unfold import UnfoldedSpectrum, unfold

__all__ = [
    "ZeroTable",
    "RunConfig",
    "ingest_zeros",
    "load_unfolded",
    "write_unfolded_cache",
    "read_unfolded_cache",
    "main",
]

_CACHE_MAGIC = b"PSUNFLD1"  # 8-byte magic, then little-endian float64 values


class DataFormatError(ValueError):
    """Raised when an input table cannot be used; carries the line number."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message)
        self.line = line


@dataclass(frozen=True, eq=False)
class ZeroTable:
    """Validated ascending ordinates plus ingestion metadata."""

    ordinates: np.ndarray
    source: str
    precision: int
    checksum: str

    def __post_init__(self):
        pts = np.asarray(self.ordinates, dtype=float)
        if pts.size == 0:
            raise DataFormatError("empty table")
        if np.any(np.diff(pts) <= 0):
            raise DataFormatError("ordinates must be strictly increasing")
        if np.any(pts <= 0):
            raise DataFormatError("ordinates must be positive")
        object.__setattr__(self, "ordinates", pts)

    @property
    def n(self) -> int:
        return int(self.ordinates.size)

    @property
    def starts_at_first_zero(self) -> bool:
        return 14.1 < float(self.ordinates[0]) < 14.2

    def configuration(self) -> PointConfiguration:
        return PointConfiguration(self.ordinates, window_end=float(self.ordinates[-1]))


def ingest_zeros(path) -> ZeroTable:
    """Parse a plain-text table, one decimal ordinate per line; '#' comments
    and blank lines are ignored.  Non-monotone or malformed lines are
    rejected with their line number."""
    path = Path(path)
    if not path.exists():
        raise DataFormatError(f"no such file: {path}")
    raw = path.read_bytes()
    values = []
    precision = 0
    previous = None
    for lineno, line in enumerate(raw.decode("ascii", errors="strict").splitlines(), start=1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        try:
            value = float(text)
        except ValueError:
            raise DataFormatError(f"parse failure at line {lineno}: {text!r}", line=lineno)
        if not math.isfinite(value) or value <= 0:
            raise DataFormatError(f"non-positive ordinate at line {lineno}", line=lineno)
        if previous is not None and value <= previous:
            raise DataFormatError(f"non-monotone at line {lineno}", line=lineno)
        if "." in text:
            precision = max(precision, len(text.split(".", 1)[1]))
        values.append(value)
        previous = value
    if not values:
        raise DataFormatError("empty table")
    return ZeroTable(
        ordinates=np.array(values),
        source=str(path),
        precision=precision,
        checksum=hashlib.sha256(raw).hexdigest(),
    )


def write_unfolded_cache(path, values: np.ndarray) -> None:
    arr = np.ascontiguousarray(values, dtype="<f8")
    with open(path, "wb") as fh:
        fh.write(_CACHE_MAGIC)
        fh.write(arr.tobytes())


def read_unfolded_cache(path) -> np.ndarray:
    blob = Path(path).read_bytes()
    if blob[:8] != _CACHE_MAGIC:
        raise DataFormatError("not an unfolded-value cache (bad magic)")
    return np.frombuffer(blob[8:], dtype="<f8").copy()


def load_unfolded(table: ZeroTable, cache: bool = True) -> UnfoldedSpectrum:
    """Unfold a zero table, going through the binary sidecar cache when the
    entry count matches."""
    config = table.configuration()
    cache_path = Path(table.source).with_suffix(".unfolded.f64")
    if cache and cache_path.exists():
        try:
            values = read_unfolded_cache(cache_path)
            if values.size == table.n:
                end = float(max(values[-1], table.n))
                start = min(0.0, float(values[0])) - 1.0
                return UnfoldedSpectrum(
                    raw=config,
                    unfolded=PointConfiguration(values, window_end=end, window_start=start),
                    provenance="zeta",
                )
        except (DataFormatError, ValueError):
            pass
    spectrum = unfold(config, provenance="zeta")
    if cache:
        try:
            write_unfolded_cache(cache_path, spectrum.unfolded.points)
        except OSError:
            pass
    return spectrum


@dataclass
class RunConfig:
    """Everything needed to reproduce one command invocation."""

    command: str
    zeros: str | None = None
    T: float | None = None
    k: int = 2
    K: int = 1
    bins: float = 0.1
    max_sep: float = 3.0
    intervals: list = field(default_factory=list)
    samples: int = 10_000
    seed: int = 0
    sampler: str = "mc"
    out: str | None = None
    fmt: str = "csv"
    tolerances: dict = field(default_factory=dict)
    A: float = 1.0
    grid_start: float = 0.0
    grid_stop: float = 3.0
    grid_step: float = 0.05
    n_matrix: int = 500
    kind: str = "poisson"
    variant: str = "unfolded"
    verify_samples: int = 48

    def to_json(self) -> str:
        return json.dumps(dataclasses.asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        payload = json.loads(text)
        payload["intervals"] = [tuple(iv) for iv in payload.get("intervals", [])]
        return cls(**payload)


def _metadata(config: RunConfig, table: ZeroTable | None) -> dict:
    return {
        "tool": "pointspec",
        "version": __version__,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S"),
        "config": json.loads(config.to_json()),
        "data_checksum": table.checksum if table is not None else None,
    }


def _write_rows(config: RunConfig, table, header: list[str], rows: list[list], extra=None):
    meta = _metadata(config, table)
    if extra:
        meta.update(extra)
    out = Path(config.out) if config.out else None
    if config.fmt == "json":
        payload = {"meta": meta, "columns": header, "rows": rows}
        text = json.dumps(payload, indent=2) + "\n"
    else:
        lines = [f"# {key}: {json.dumps(val, sort_keys=True)}" for key, val in meta.items()]
        lines.append(",".join(header))
        for row in rows:
            lines.append(",".join(repr(v) if isinstance(v, float) else str(v) for v in row))
        text = "\n".join(lines) + "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def _plan(config: RunConfig, lo: float, hi: float) -> AveragingPlan:
    return AveragingPlan(lo, hi, sampler=config.sampler, m=config.samples, seed=config.seed)


def _require_table(config: RunConfig) -> ZeroTable:
    if not config.zeros:
        raise DataFormatError("this command requires --zeros PATH")
    return ingest_zeros(config.zeros)


def cmd_unfold(config: RunConfig) -> int:
    table = _require_table(config)
    spectrum = load_unfolded(table)
    rows = [[i + 1, float(g), float(u)] for i, (g, u) in enumerate(
        zip(table.ordinates, spectrum.unfolded.points)
    )]
    _write_rows(config, table, ["n", "gamma", "gamma_unfolded"], rows)
    return 0


def cmd_paircorr(config: RunConfig) -> int:
    table = _require_table(config)
    spectrum = load_unfolded(table)
    T = config.T or float(spectrum.unfolded.points[-1] - config.max_sep - 1.0)
    hist = pair_correlation_histogram(spectrum, T, config.bins, config.max_sep)
    rows = []
    for i in range(hist.masses.size):
        lo, hi = hist.bin_edges[i], hist.bin_edges[i + 1]
        u = 0.5 * (lo + hi)
        rows.append([float(lo), float(hi), float(hist.masses[i]), float((hi - lo) * (1.0 - sinc(u) ** 2))])
    _write_rows(config, table, ["sep_lo", "sep_hi", "mass", "sine_kernel_mass"], rows,
                extra={"pairs": hist.sample_count})
    return 0


def cmd_occupancy(config: RunConfig) -> int:
    table = _require_table(config)
    spectrum = load_unfolded(table)
    intervals = config.intervals or [(0.0, 1.0)]
    T = config.T or float(spectrum.unfolded.points[-1] - max(b for _, b in intervals) - 1.0)
    dist = occupancy_distribution(spectrum, intervals, T, _plan(config, 0.0, T))
    rows = [[",".join(str(c) for c in key), float(mass)] for key, mass in sorted(dist.pmf.items())]
    _write_rows(config, table, ["counts", "mass"], rows,
                extra={"marginal_means": [float(x) for x in dist.mean()]})
    return 0


def cmd_spacings(config: RunConfig) -> int:
    table = _require_table(config)
    spectrum = load_unfolded(table)
    n_max = spectrum.unfolded.n - config.K
    dist = spacing_vectors(spectrum, config.K, n_max)
    top = config.bins * math.ceil(float(np.max(dist.samples)) / config.bins + 1.0)
    edges = np.arange(0.0, top + 0.5 * config.bins, config.bins)
    rows = []
    for axis in range(config.K):
        masses, _ = np.histogram(dist.samples[:, axis], bins=edges)
        for i, m in enumerate(masses):
            rows.append([axis + 1, float(edges[i]), float(edges[i + 1]), float(m / dist.sample_count)])
    _write_rows(config, table, ["gap_index", "lo", "hi", "mass"], rows,
                extra={"n_vectors": dist.sample_count})
    return 0


def cmd_sineref(config: RunConfig) -> int:
    rows = []
    t = config.grid_start
    while t <= config.grid_stop + 1e-12:
        det = fredholm_det_gap(t)
        p2 = gap_density_p2(t) if t > 0 else 0.0
        rows.append([float(t), float(det), float(p2), float(spacing_cdf(t))])
        t = round(t + config.grid_step, 12)
    _write_rows(config, None, ["t", "gap_det", "p2", "spacing_cdf"], rows)
    return 0


def cmd_fujii(config: RunConfig) -> int:
    table = _require_table(config)
    spectrum = load_unfolded(table)
    if config.variant == "height":
        T = config.T or float(table.ordinates[-1]) / 2.0 - 1.0
        est = fujii_moment(spectrum, "height", config.k, T, A=config.A,
                           plan=_plan(config, T, 2.0 * T))
    else:
        interval = config.intervals[0] if config.intervals else (0.0, 1.0)
        T = config.T or float(spectrum.unfolded.points[-1] - interval[1] - 1.0)
        est = fujii_moment(spectrum, "unfolded", config.k, T, interval=interval,
                           plan=_plan(config, 0.0, T))
    _write_rows(config, table, ["k", "variant", "moment", "stderr"],
                [[config.k, config.variant, est.value, est.stderr]])
    return 0


def cmd_synth(config: RunConfig) -> int:
    rng = RngSpec(seed=config.seed)
    if config.kind == "poisson":
        points = poisson_spectrum(config.T or 10_000.0, rng).points
    elif config.kind == "lattice":
        points = lattice_spectrum(int(config.T or 10_000), rng).points
    elif config.kind == "gue":
        points = gue_unfolded_spectrum(config.n_matrix, rng).unfolded.points
    else:
        raise DataFormatError("synth kind must be poisson, lattice, or gue")
    _write_rows(config, None, ["point"], [[float(p)] for p in points])
    return 0


def _verify_rows(config: RunConfig, table: ZeroTable) -> list[tuple[str, float, float, bool]]:
    spectrum = load_unfolded(table)
    unf = spectrum.unfolded.points
    rows = []

    # (i)<->(ii)<->(iii): three correlation estimators, k = 1 and 2, on a
    # deterministic grid; agreement within 3 combined standard errors.
    T = float(table.ordinates[-1]) / 2.0 - 2.0
    m = config.verify_samples
    f1 = TestFunction.tent([0.0], [1.0])
    f2 = TestFunction.tent([0.0, 1.5], [0.4, 0.4])
    for k, f in ((1, f1), (2, f2)):
        e_i = corr_varying_scaling(spectrum, k, f, T, AveragingPlan(0.0, T, "grid", m))
        e_ii = corr_fixed_scaling(spectrum, k, f, T, AveragingPlan(T, 2 * T, "grid", m))
        t_unf = float(unf[-1] - np.max(f.support) - 1.0)
        e_iii = corr_unfolded(spectrum, k, f, t_unf, AveragingPlan(0.0, t_unf, "grid", m))
        for (name_a, a), (name_b, b) in (
            (("i", e_i), ("ii", e_ii)),
            (("ii", e_ii), ("iii", e_iii)),
            (("i", e_i), ("iii", e_iii)),
        ):
            tol = 3.0 * math.hypot(a.stderr, b.stderr)
            rows.append((f"({name_a})<->({name_b}) corr k={k}", abs(a.value - b.value), tol,
                         abs(a.value - b.value) <= tol))

    # (iii) against the exact law: gap probability and pair correlation.
    t_occ = float(unf[-1]) - 2.0
    occ = occupancy_distribution(spectrum, [(0.0, 1.0)], t_occ,
                                 AveragingPlan(0.0, t_occ, "grid", 10_000))
    p_empty = occ.pmf.get((0,), 0.0)
    gap = fredholm_det_gap(1.0)
    tol = config.tolerances.get("gap", 0.02)
    rows.append(("(iii) gap probability", abs(p_empty - gap), tol, abs(p_empty - gap) <= tol))

    t_pair = float(unf[-1]) - 4.0
    hist = pair_correlation_histogram(spectrum, t_pair, 0.1, 3.0)
    centers = 0.5 * (hist.bin_edges[:-1] + hist.bin_edges[1:])
    reference = 0.1 * (1.0 - sinc(centers) ** 2)
    dev = float(np.max(np.abs(hist.masses - reference)))
    tol = config.tolerances.get("paircorr", 0.05)
    rows.append(("(ii)-scale pair correlation (conjectural)", dev, tol, dev <= tol))

    # (iii)<->(iv): Palm/spacing consistency and unit mean spacing.
    K = max(config.K, 2)
    n_used = spectrum.unfolded.n - K
    palm = palm_spacing_check(spectrum, K, n_used)
    rows.append((f"(iii)<->(iv) palm spacing K={K}", palm.sup_distance, palm.bound, palm.passed))
    gaps = spacing_vectors(spectrum, 1, n_used)
    mean_gap = float(gaps.mean()[0])
    tol = config.tolerances.get("meanspacing", 0.01)
    rows.append(("(iv) mean spacing", abs(mean_gap - 1.0), tol, abs(mean_gap - 1.0) <= tol))
    return rows


def cmd_verify(config: RunConfig) -> int:
    table = _require_table(config)
    rows = _verify_rows(config, table)
    width = max(len(name) for name, *_ in rows)
    ok = True
    for name, value, tol, passed in rows:
        ok &= passed
        print(f"{name:<{width}}  value={value:.5f}  tol={tol:.5f}  {'PASS' if passed else 'FAIL'}")
    print("verification: " + ("PASS" if ok else "FAIL"))
    if config.out:
        _write_rows(config, table, ["check", "value", "tolerance", "passed"],
                    [[n, v, t, p] for n, v, t, p in rows])
    return 0 if ok else 3


def _parse_interval(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("interval must be A,B")
    return float(parts[0]), float(parts[1])


def _parse_tolerance(text: str) -> tuple[str, float]:
    if "=" not in text:
        raise argparse.ArgumentTypeError("tolerance must be NAME=VALUE")
    name, value = text.split("=", 1)
    return name, float(value)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _build_parser() -> _Parser:
    parser = _Parser(prog="pointspec", description="point-process statistics of unfolded spectra")
    sub = parser.add_subparsers(dest="command", required=True)
    commands = ("unfold", "paircorr", "occupancy", "spacings", "sineref", "fujii", "synth", "verify")
    for name in commands:
        p = sub.add_parser(name)
        p.add_argument("--zeros", type=str, default=None)
        p.add_argument("--T", type=float, default=None)
        p.add_argument("--k", type=int, default=2)
        p.add_argument("--K", type=int, default=1)
        p.add_argument("--bins", type=float, default=0.1)
        p.add_argument("--max-sep", type=float, default=3.0)
        p.add_argument("--interval", type=_parse_interval, action="append", default=[])
        p.add_argument("--samples", type=int, default=None)
        p.add_argument("--seed", type=int, default=0)
        group = p.add_mutually_exclusive_group()
        group.add_argument("--grid", dest="sampler", action="store_const", const="grid")
        group.add_argument("--mc", dest="sampler", action="store_const", const="mc")
        p.set_defaults(sampler="mc")
        p.add_argument("--out", type=str, default=None)
        p.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")
        p.add_argument("--tolerance", type=_parse_tolerance, action="append", default=[])
        p.add_argument("--A", type=float, default=1.0)
        p.add_argument("--grid-start", type=float, default=0.0)
        p.add_argument("--grid-stop", type=float, default=3.0)
        p.add_argument("--grid-step", type=float, default=0.05)
        p.add_argument("--n-matrix", type=int, default=500)
        p.add_argument("--kind", choices=("poisson", "lattice", "gue"), default="poisson")
        p.add_argument("--variant", choices=("unfolded", "height"), default="unfolded")
    return parser


_COMMANDS = {
    "unfold": cmd_unfold,
    "paircorr": cmd_paircorr,
    "occupancy": cmd_occupancy,
    "spacings": cmd_spacings,
    "sineref": cmd_sineref,
    "fujii": cmd_fujii,
    "synth": cmd_synth,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    parser = _build_parser()
    ns = parser.parse_args(argv)
    config = RunConfig(
        command=ns.command,
        zeros=ns.zeros,
        T=ns.T,
        k=ns.k,
        K=ns.K,
        bins=ns.bins,
        max_sep=ns.max_sep,
        intervals=[tuple(iv) for iv in ns.interval],
        samples=ns.samples if ns.samples is not None else 10_000,
        seed=ns.seed,
        sampler=ns.sampler,
        out=ns.out,
        fmt=ns.fmt,
        tolerances=dict(ns.tolerance),
        A=ns.A,
        grid_start=ns.grid_start,
        grid_stop=ns.grid_stop,
        grid_step=ns.grid_step,
        n_matrix=ns.n_matrix,
        kind=ns.kind,
        variant=ns.variant,
        verify_samples=ns.samples if ns.samples is not None else 48,
    )
    try:
        return _COMMANDS[ns.command](config)
    except DataFormatError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
