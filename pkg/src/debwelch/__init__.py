"""Welch and debiased-Welch power spectral density estimation.

The debiased estimator fits rectangular frequency bases, blurred through
the segment taper's spectral window, to the Welch estimate by weighted
(optionally non-negative) least squares, and reports the recovered
unblurred coefficients at the basis centres.
"""

from .core import (
    FrequencyGrid,
    SegmentPlan,
    Taper,
    TimeSeries,
    fejer_kernel,
    fourier_grid,
    make_taper,
    segment_plan,
    spectral_window,
    taper_autocorr,
)
from .debias import (
    BasisMatrix,
    BasisPartition,
    DebiasFit,
    IllConditionedError,
    basis_autocorr,
    basis_value,
    build_design,
    debiased_welch,
    default_k,
    even_partition,
    log_partition,
    max_k,
    wls_fit,
)
from .estimators import SpectralEstimate, periodogram, welch
from .harness import (
    ExperimentConfig,
    MetricRecord,
    emit_csv,
    imse,
    mean_log_aggregate,
    parse_config,
    read_metrics_csv,
    run_ensemble,
)
from .nnls import nnls
from .processes import (
    AR4_COEFFS,
    ProcessModel,
    ar4_process,
    ar_process,
    expected_welch,
    matern_process,
    simulate,
    true_acv,
    true_spectrum,
    white_noise,
)

__version__ = "0.1.0"

__all__ = [
    "AR4_COEFFS",
    "BasisMatrix",
    "BasisPartition",
    "DebiasFit",
    "ExperimentConfig",
    "FrequencyGrid",
    "IllConditionedError",
    "MetricRecord",
    "ProcessModel",
    "SegmentPlan",
    "SpectralEstimate",
    "Taper",
    "TimeSeries",
    "ar4_process",
    "ar_process",
    "basis_autocorr",
    "basis_value",
    "build_design",
    "debiased_welch",
    "default_k",
    "emit_csv",
    "even_partition",
    "expected_welch",
    "fejer_kernel",
    "fourier_grid",
    "imse",
    "log_partition",
    "make_taper",
    "max_k",
    "mean_log_aggregate",
    "nnls",
    "parse_config",
    "periodogram",
    "read_metrics_csv",
    "run_ensemble",
    "segment_plan",
    "simulate",
    "spectral_window",
    "taper_autocorr",
    "true_acv",
    "true_spectrum",
    "welch",
    "white_noise",
    "wls_fit",
]
