"""Point-process statistics of unfolded spectra and their sine-kernel
reference laws."""

__version__ = "0.1.0"

from .estimators import (
    AveragingPlan,
    EmpiricalDistribution,
    Estimate,
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
from .pointproc import (
    CenteredConfiguration,
    PointConfiguration,
    TessellatedConfiguration,
    correlation_sum,
    count_in_interval,
    falling_factorial_count,
    label_point,
    palm_samples,
    tessellate,
    translate,
)
from .sinekernel import (
    KernelMatrix,
    QuadratureRule,
    correlation_density,
    correlation_integral,
    fredholm_det_gap,
    gap_density_p2,
    occupation_probability,
    sinc,
    spacing_cdf,
    tail_bound_check,
)
from .synth import RngSpec, gue_unfolded_spectrum, lattice_spectrum, poisson_spectrum
from .unfold import (
    UnfoldedSpectrum,
    density_L,
    fluctuation_S,
    riemann_siegel_theta,
    unfold,
    verify_respacing_conditions,
)
