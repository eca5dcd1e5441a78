"""Periodogram, tapered periodogram and Welch's averaged estimator."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import FrequencyGrid, SegmentPlan, Taper, TimeSeries, fourier_grid

_NEG_FLOOR = -1e-12  # numerical noise below this is a bug, above it is clamped


@dataclass(frozen=True)
class SpectralEstimate:
    """Frequency grid, density values (power per rad/s) and provenance."""

    grid: FrequencyGrid
    values: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (len(self.grid),) :
            raise ValueError("values and grid lengths differ")
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return self.values.size


def _clamp_nonneg(values: np.ndarray) -> np.ndarray:
    return np.where(values < 0, np.where(values > _NEG_FLOOR, 0.0, values), values)


def _fourier_indices(omegas: np.ndarray, L: int, delta: float):
    """Map frequencies to DFT bin indices, or None if off-grid."""
    k = omegas * delta * L / (2 * np.pi)
    ki = np.round(k)
    if np.max(np.abs(k - ki)) > 1e-8:
        return None
    return ki.astype(int) % L


def _fold_rfft_indices(idx: np.ndarray, L: int) -> np.ndarray:
    """Map DFT bin indices onto rfft bins (real input is conjugate-symmetric)."""
    return np.where(idx > L // 2, L - idx, idx)


def _tapered_dft_power(x: np.ndarray, h: np.ndarray, omegas: np.ndarray, delta: float) -> np.ndarray:
    """delta * |sum_t h_t x_t e^{-i omega t delta}|^2 at each omega."""
    L = x.size
    y = h * x
    idx = _fourier_indices(omegas, L, delta)
    if idx is not None:
        return delta * np.abs(np.fft.rfft(y)[_fold_rfft_indices(idx, L)]) ** 2
    # off-grid frequencies: direct summation, chunked over the grid
    t = np.arange(L)
    out = np.empty(omegas.size)
    step = max(1, 2 ** 22 // L)
    for i in range(0, omegas.size, step):
        phase = np.exp(-1j * np.outer(omegas[i : i + step], t) * delta)
        out[i : i + step] = delta * np.abs(phase @ y) ** 2
    return out


def periodogram(ts: TimeSeries, taper: Taper, grid: FrequencyGrid | None = None) -> SpectralEstimate:
    """Tapered periodogram of the full record.

    The taper must have the record's length. Defaults to the two-sided
    Fourier grid, where the values are computed with an FFT; other grids
    fall back to direct summation.
    """
    n = len(ts)
    if len(taper) != n:
        raise ValueError(f"taper length {len(taper)} != record length {n}")
    if grid is None:
        grid = fourier_grid(n, ts.delta, "two_sided")
    values = _tapered_dft_power(ts.samples, taper.coeffs, grid.omegas, ts.delta)
    meta = {"estimator": "periodogram", "L": n, "M": 1, "p": 0.0, "taper": taper.kind}
    return SpectralEstimate(grid, _clamp_nonneg(values), meta)


def _segment_matrix(x: np.ndarray, plan: SegmentPlan) -> np.ndarray:
    """(M, L) view of the planned segments (no copy for p = 0)."""
    windows = np.lib.stride_tricks.sliding_window_view(x, plan.L)
    return windows[:: plan.S][: plan.M]


def welch(ts: TimeSeries, plan: SegmentPlan, taper: Taper, sided: str = "one_sided") -> SpectralEstimate:
    """Welch's estimator: the mean of the M per-segment tapered periodograms.

    Values land on the Fourier grid of the segment length. Reduction over
    segments is a fixed-order mean, so results do not depend on how the
    segments were computed.
    """
    if len(taper) != plan.L:
        raise ValueError(f"taper length {len(taper)} != segment length {plan.L}")
    if plan.n != len(ts):
        raise ValueError(f"plan is for n={plan.n}, record has {len(ts)}")
    segs = _segment_matrix(ts.samples, plan) * taper.coeffs
    spec = np.fft.rfft(segs, axis=1)
    power = ts.delta * np.mean(spec.real ** 2 + spec.imag ** 2, axis=0)
    grid = fourier_grid(plan.L, ts.delta, sided)
    if sided == "one_sided":  # rfft bins 1..L//2, in order
        idx = np.arange(1, plan.L // 2 + 1)
    else:
        idx = _fold_rfft_indices(_fourier_indices(grid.omegas, plan.L, ts.delta), plan.L)
    meta = {
        "estimator": "welch",
        "L": plan.L,
        "M": plan.M,
        "p": plan.p,
        "taper": taper.kind,
    }
    return SpectralEstimate(grid, _clamp_nonneg(power[idx]), meta)
