"""Debiased Welch estimation: rectangular basis partitions, bases blurred
through the segment spectral window, and the weighted / non-negative
least-squares fit that recovers unblurred density coefficients.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .core import FrequencyGrid, SegmentPlan, Taper, TimeSeries, fourier_grid, taper_autocorr
from .estimators import SpectralEstimate, _fourier_indices, welch
from .nnls import nnls

COND_WARN_THRESHOLD = 1e12

_EDGE_TOL = 1e-8  # relative tolerance for partition contiguity checks


class IllConditionedError(np.linalg.LinAlgError):
    """Raised when the weighted normal equations are numerically singular."""


@dataclass(frozen=True)
class BasisPartition:
    """Centres and widths of contiguous symmetric rectangular bases.

    The cells tile a sub-band of (0, nyquist]: edges are strictly
    increasing, adjacent cells share an edge, and the first cell does not
    cross zero (centre >= width/2).
    """

    centres: np.ndarray
    widths: np.ndarray

    def __post_init__(self):
        centres = np.atleast_1d(np.asarray(self.centres, dtype=float))
        widths = np.atleast_1d(np.asarray(self.widths, dtype=float))
        if centres.size == 0 or centres.shape != widths.shape:
            raise ValueError("centres and widths must be equal-length and non-empty")
        if np.any(widths <= 0):
            raise ValueError("all widths must be > 0")
        scale = float(np.max(widths))
        lo = centres - widths / 2
        hi = centres + widths / 2
        if np.any(np.abs(lo[1:] - hi[:-1]) > _EDGE_TOL * scale):
            raise ValueError("cells must be contiguous and non-overlapping")
        if lo[0] < -_EDGE_TOL * scale:
            raise ValueError("first centre must be >= half its width")
        object.__setattr__(self, "centres", centres)
        object.__setattr__(self, "widths", widths)

    @property
    def K(self) -> int:
        return self.centres.size

    @property
    def span(self) -> tuple[float, float]:
        """(lowest edge, highest edge) of the tiled band."""
        return (
            float(self.centres[0] - self.widths[0] / 2),
            float(self.centres[-1] + self.widths[-1] / 2),
        )


@dataclass(frozen=True)
class BasisMatrix:
    """Blurred basis columns evaluated on the fit frequencies."""

    omegas: np.ndarray
    values: np.ndarray  # (len(omegas), K)
    partition: BasisPartition
    taper_kind: str
    L: int
    delta: float

    def __post_init__(self):
        if self.values.shape != (self.omegas.size, self.partition.K):
            raise ValueError("design shape inconsistent with rows/partition")

    @property
    def K(self) -> int:
        return self.partition.K


@dataclass(frozen=True)
class DebiasFit:
    """Fitted basis coefficients and diagnostics."""

    coeffs: np.ndarray
    partition: BasisPartition
    nonneg: bool
    residual: float
    condition: float

    def __post_init__(self):
        if self.residual < 0:
            raise ValueError("residual must be >= 0")
        if self.nonneg and np.any(self.coeffs < 0):
            raise ValueError("non-negative fit produced negative coefficients")


def default_k(L: int) -> int:
    """Recommended basis count, a quarter of the Fourier rows."""
    return math.ceil((L - 1) / 4)


def max_k(L: int) -> int:
    """Largest admissible basis count for segment length L."""
    return math.ceil((L - 1) / 2)


def even_partition(K: int, L: int, delta: float) -> BasisPartition:
    """K equal cells of width pi/(delta*K) tiling (0, nyquist]."""
    if not 1 <= K <= max_k(L):
        raise ValueError(f"K={K} outside [1, {max_k(L)}] for L={L}")
    width = np.pi / (delta * K)
    k = np.arange(1, K + 1)
    return BasisPartition(k * width - width / 2, np.full(K, width))


def log_partition(K: int, omega_min: float, omega_max: float) -> BasisPartition:
    """K cells with geometrically spaced edges between omega_min and omega_max.

    The band below omega_min is excluded from any subsequent fit; centres
    are the arithmetic midpoints of the cell edges.
    """
    if K < 1:
        raise ValueError(f"K must be >= 1, got {K}")
    if not (0 < omega_min < omega_max):
        raise ValueError(f"need 0 < omega_min < omega_max, got ({omega_min}, {omega_max})")
    edges = omega_min * (omega_max / omega_min) ** (np.arange(K + 1) / K)
    return BasisPartition((edges[:-1] + edges[1:]) / 2, np.diff(edges))


def _rect(x) -> np.ndarray:
    """Unit rectangle: 1 inside (-1/2, 1/2), 1/2 on the edges, 0 outside."""
    x = np.asarray(x, dtype=float)
    out = np.where(np.abs(x) < 0.5, 1.0, 0.0)
    return np.where(np.abs(np.abs(x) - 0.5) <= 1e-12, 0.5, out)


def _symrect(omega: np.ndarray, centre: float, width: float) -> np.ndarray:
    """Height-1 rectangle at +-centre; edges take the value 1/2."""
    omega = np.asarray(omega, dtype=float)
    return _rect((omega - centre) / width) + _rect((omega + centre) / width)


def basis_value(part: BasisPartition, k: int, omega) -> np.ndarray | float:
    """Evaluate basis k (1-based) of the partition at omega."""
    if not 1 <= k <= part.K:
        raise ValueError(f"basis index {k} outside [1, {part.K}]")
    vals = _symrect(omega, part.centres[k - 1], part.widths[k - 1])
    return float(vals) if np.isscalar(omega) else vals


def basis_autocorr(part: BasisPartition, k: int, taus, delta: float) -> np.ndarray:
    """Autocorrelation of basis k: the inverse transform of the height-1
    symmetric rectangle,

        rho(tau) = (width/pi) * sinc(width*tau*delta/(2*pi)) * cos(centre*tau*delta)

    with sinc(x) = sin(pi x)/(pi x), so rho(0) = width/pi.
    """
    if not 1 <= k <= part.K:
        raise ValueError(f"basis index {k} outside [1, {part.K}]")
    taus = np.asarray(taus)
    c = part.centres[k - 1]
    w = part.widths[k - 1]
    return (w / np.pi) * np.sinc(w * taus * delta / (2 * np.pi)) * np.cos(c * taus * delta)


def _rho_matrix(part: BasisPartition, L: int, delta: float) -> np.ndarray:
    """(K, L) matrix of basis autocorrelations for tau = 0..L-1."""
    taus = np.arange(L) * delta
    c = part.centres[:, None]
    w = part.widths[:, None]
    # sin(w tau/2) / (pi tau/2), with the tau = 0 column set to its limit w/pi
    denom = (np.pi / 2) * taus
    denom[0] = 1.0
    out = np.sin(w * taus / 2) / denom * np.cos(c * taus)
    out[:, 0] = part.widths / np.pi
    return out


def _blur(coeff_rows: np.ndarray, kappa: np.ndarray, omegas: np.ndarray, delta: float, L: int) -> np.ndarray:
    """Expected-periodogram transform of autocovariance rows.

    Computes 2*delta*Re{sum_tau kappa(tau) g(tau) e^{-i omega tau delta}}
    - delta*g(0) for each row g, with an FFT when the frequencies are
    Fourier frequencies of L and a direct cosine sum otherwise. Only the
    real part is needed, so the rfft bins cover every index.
    """
    prod = coeff_rows * kappa
    idx = _fourier_indices(omegas, L, delta)
    if idx is not None:
        spec = np.fft.rfft(prod, axis=-1)
        vals = 2 * delta * spec.real[..., np.where(idx > L // 2, L - idx, idx)]
    else:
        cos_table = np.cos(np.outer(omegas, np.arange(L)) * delta)
        vals = 2 * delta * prod @ cos_table.T
    return vals - delta * prod[..., :1]


def expected_basis(rho: np.ndarray, kappa: np.ndarray, grid: FrequencyGrid, delta: float) -> np.ndarray:
    """Blur one basis autocorrelation through the taper's spectral window.

    rho and kappa must share the segment length L; small negative rounding
    noise in the result is clamped to zero.
    """
    rho = np.asarray(rho, dtype=float)
    kappa = np.asarray(kappa, dtype=float)
    if rho.shape != kappa.shape or rho.ndim != 1:
        raise ValueError("rho and kappa must be 1-d arrays of equal length")
    vals = _blur(rho[None, :], kappa, grid.omegas, delta, rho.size)[0]
    return np.maximum(vals, 0.0)


def design_rows(part: BasisPartition, L: int, delta: float) -> np.ndarray:
    """Fit frequencies: one-sided Fourier grid of L restricted to the
    partition band, with 0 and Nyquist excluded."""
    wn = np.pi / delta
    lo, hi = part.span
    if hi > wn * (1 + _EDGE_TOL):
        raise ValueError("partition extends beyond the Nyquist frequency")
    om = (2 * np.pi / (delta * L)) * np.arange(1, (L + 1) // 2)
    tol = _EDGE_TOL * wn
    rows = om[(om >= lo - tol) & (om <= hi + tol)]
    if rows.size == 0:
        raise ValueError("partition band contains no usable Fourier frequencies")
    return rows


def _equal_width_gather(part: BasisPartition, kappa: np.ndarray, rows: np.ndarray, L: int, delta: float):
    """Fast design build for equal-width partitions on commensurate lattices.

    With one shared width, every blurred column is a shift of a single
    kernel: B_k(omega) = (W(omega - c_k) + W(omega + c_k)) / 2. When rows
    and centres sit on a lattice of 2*pi/(q*L*delta) with q <= 4, W is one
    zero-padded FFT and the design a pure gather. Returns None when the
    structure does not apply.
    """
    if part.widths.size < 1 or np.ptp(part.widths) != 0.0:
        return None
    step = 2 * np.pi / (delta * L)
    for q in (1, 2, 4):
        c_lat = part.centres * q / step
        c_idx = np.round(c_lat)
        if np.max(np.abs(c_lat - c_idx)) <= 1e-9 * q * L:
            break
    else:
        return None
    r_lat = rows * q / step
    r_idx = np.round(r_lat)
    if np.max(np.abs(r_lat - r_idx)) > 1e-9 * q * L:
        return None

    n_lat = q * L
    taus = np.arange(L) * delta
    denom = (np.pi / 2) * taus
    denom[0] = 1.0
    envelope = np.sin(part.widths[0] * taus / 2) / denom
    envelope[0] = part.widths[0] / np.pi
    prod = kappa * envelope
    kernel = 2 * delta * np.fft.rfft(prod, n_lat).real

    ji = r_idx.astype(int)[:, None]
    ci = c_idx.astype(int)[None, :]
    diff = np.abs(ji - ci) % n_lat
    summ = (ji + ci) % n_lat
    cols = kernel[np.minimum(diff, n_lat - diff)]
    cols += kernel[np.minimum(summ, n_lat - summ)]
    return 0.5 * cols - delta * prod[0]


def build_design(part: BasisPartition, taper: Taper, L: int, delta: float) -> BasisMatrix:
    """Blur every basis of the partition onto the fit frequencies."""
    if len(taper) != L:
        raise ValueError(f"taper length {len(taper)} != segment length {L}")
    rows = design_rows(part, L, delta)
    kappa = taper_autocorr(taper)
    cols = _equal_width_gather(part, kappa, rows, L, delta)
    if cols is None:
        cols = _blur(_rho_matrix(part, L, delta), kappa, rows, delta, L).T
    return BasisMatrix(rows, np.maximum(cols, 0.0), part, taper.kind, L, delta)


def _align_rows(est: SpectralEstimate, row_omegas: np.ndarray) -> np.ndarray:
    """Indices of the design rows inside the estimate's grid."""
    grid = est.grid.omegas
    tol = 1e-9 * max(abs(float(row_omegas[-1])), 1.0)
    if grid.size >= 2:
        # uniform-grid shortcut, validated against the actual grid values
        step = grid[1] - grid[0]
        idx = np.round((row_omegas - grid[0]) / step).astype(int)
        if 0 <= idx.min() and idx.max() < grid.size and np.max(np.abs(grid[idx] - row_omegas)) <= tol:
            return idx
    idx = np.clip(np.searchsorted(grid, row_omegas), 0, grid.size - 1)
    left = np.clip(idx - 1, 0, grid.size - 1)
    better = np.abs(grid[left] - row_omegas) < np.abs(grid[idx] - row_omegas)
    idx = np.where(better, left, idx)
    if np.max(np.abs(grid[idx] - row_omegas)) > tol:
        raise ValueError("design rows do not align with the estimate's grid")
    return idx


def wls_fit(welch_est: SpectralEstimate, design: BasisMatrix, nonneg: bool = True) -> DebiasFit:
    """Fit basis coefficients to a Welch estimate by weighted least squares.

    The weights are the inverse squared Welch values, floored at 1e-12 of
    the largest value so that zero rows stay in the fit with large finite
    weight. The unconstrained path solves the weighted normal equations;
    the non-negative path runs an active-set solve on the same weighted
    system.
    """
    idx = _align_rows(welch_est, design.omegas)
    ibar = welch_est.values[idx]
    if not np.all(np.isfinite(ibar)):
        raise ValueError("Welch estimate contains non-finite values")
    floor = 1e-12 * float(np.max(ibar))
    if floor <= 0:
        raise ValueError("Welch estimate is identically zero; nothing to fit")
    root_w = 1.0 / np.maximum(ibar, floor)

    Aw = design.values * root_w[:, None]
    bw = ibar * root_w
    AtA = Aw.T @ Aw
    Atb = Aw.T @ bw

    # condition estimate of the weighted normal matrix from the extremes
    # of its Cholesky factor's diagonal (inf when the factorization fails)
    factor = None
    try:
        factor = np.linalg.cholesky(AtA)
        diag = np.diagonal(factor)
        condition = float(np.max(diag) / np.min(diag)) ** 2
    except np.linalg.LinAlgError:
        condition = math.inf
    if condition > COND_WARN_THRESHOLD:
        warnings.warn(
            f"weighted normal equations have condition estimate {condition:.3e}",
            RuntimeWarning,
            stacklevel=2,
        )

    if nonneg:
        coeffs, rss = nnls(Aw, bw, gram=(AtA, Atb), cho_factor=factor)
        coeffs = np.maximum(coeffs, 0.0)
    else:
        svals = np.linalg.svd(Aw, compute_uv=False)
        smin, smax = float(svals[-1]), float(svals[0])
        if smin <= smax * np.finfo(float).eps * max(Aw.shape):
            raise IllConditionedError(
                f"weighted normal equations are singular (smallest singular value {smin:.3e})"
            )
        coeffs, *_ = np.linalg.lstsq(Aw, bw, rcond=None)
        rss = float(np.sum((Aw @ coeffs - bw) ** 2))
    return DebiasFit(coeffs, design.partition, nonneg, rss, condition)


def debiased_welch(
    ts: TimeSeries,
    plan: SegmentPlan,
    taper: Taper,
    part: BasisPartition | None = None,
    nonneg: bool = True,
) -> SpectralEstimate:
    """The debiased Welch estimate at the partition centres.

    Pipeline: Welch estimate -> blurred design -> weighted (non-negative)
    least squares -> coefficient times basis height at each centre. With
    ``part=None`` an even partition with the recommended K is used.
    """
    if part is None:
        part = even_partition(default_k(plan.L), plan.L, ts.delta)
    bar = welch(ts, plan, taper, sided="one_sided")
    design = build_design(part, taper, plan.L, ts.delta)
    fit = wls_fit(bar, design, nonneg=nonneg)
    # basis height at its own centre, vectorized over k
    heights = _rect(0.0) + _rect(2 * part.centres / part.widths)
    grid = FrequencyGrid(part.centres, "one_sided")
    meta = dict(bar.meta)
    meta.update(estimator="debiased_welch", K=part.K, nonneg=nonneg)
    return SpectralEstimate(grid, fit.coeffs * heights, meta)
