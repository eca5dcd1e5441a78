"""Foundational signal objects: time series, tapers, frequency grids and
Welch segmentation plans.

Frequencies are angular (rad/s) throughout; the usable band for a sampling
interval ``delta`` is [-pi/delta, pi/delta].
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

TAPER_KINDS = ("boxcar", "hamming", "hann")

_BAND_TOL = 1e-9  # relative slack when checking |omega| <= pi/delta


@dataclass(frozen=True)
class TimeSeries:
    """Uniformly sampled real-valued record.

    Parameters
    ----------
    samples : array_like
        Signal values (e.g. metres), at least 2 of them.
    delta : float
        Sampling interval in seconds, strictly positive.
    """

    samples: np.ndarray
    delta: float = 1.0

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=float)
        if samples.ndim != 1 or samples.size < 2:
            raise ValueError("time series requires a 1-d record of length >= 2")
        if not np.all(np.isfinite(samples)):
            raise ValueError("time series contains non-finite samples")
        delta = float(self.delta)
        if not (math.isfinite(delta) and delta > 0):
            raise ValueError(f"delta must be finite and > 0, got {self.delta}")
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "delta", delta)

    def __len__(self) -> int:
        return self.samples.size

    @property
    def nyquist(self) -> float:
        """Highest resolvable angular frequency pi/delta."""
        return math.pi / self.delta


@dataclass(frozen=True)
class Taper:
    """Unit-energy data taper of length L >= 2."""

    coeffs: np.ndarray
    kind: str

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=float)
        if coeffs.ndim != 1 or coeffs.size < 2:
            raise ValueError("taper requires length >= 2")
        energy = float(np.sum(coeffs * coeffs))
        if abs(energy - 1.0) > 1e-12:
            raise ValueError(f"taper energy {energy!r} is not 1 within 1e-12")
        object.__setattr__(self, "coeffs", coeffs)

    def __len__(self) -> int:
        return self.coeffs.size


@dataclass(frozen=True)
class FrequencyGrid:
    """Strictly increasing angular frequencies with a sidedness tag."""

    omegas: np.ndarray
    sided: str = "one_sided"

    def __post_init__(self):
        omegas = np.atleast_1d(np.asarray(self.omegas, dtype=float))
        if omegas.size == 0:
            raise ValueError("frequency grid is empty")
        if omegas.size > 1 and np.any(np.diff(omegas) <= 0):
            raise ValueError("frequencies must be strictly increasing")
        if self.sided not in ("one_sided", "two_sided"):
            raise ValueError(f"unknown sidedness {self.sided!r}")
        object.__setattr__(self, "omegas", omegas)

    def __len__(self) -> int:
        return self.omegas.size


@dataclass(frozen=True)
class SegmentPlan:
    """Welch segmentation: M length-L segments shifted by S over n samples.

    The overlap fraction satisfies p = (L - S)/L and every segment lies
    inside the record; trailing samples that do not fill a whole segment
    are dropped.
    """

    n: int
    L: int
    M: int
    p: float
    S: int

    def __post_init__(self):
        if not (0 < self.S <= self.L):
            raise ValueError(f"shift S={self.S} must satisfy 0 < S <= L")
        if self.M < 1:
            raise ValueError("plan needs at least one segment")
        if (self.M - 1) * self.S + self.L > self.n:
            raise ValueError("segments extend beyond the record")
        if abs(self.p - (self.L - self.S) / self.L) > 1e-12:
            raise ValueError("overlap p inconsistent with (L - S)/L")

    def starts(self) -> np.ndarray:
        """Start index of each segment."""
        return self.S * np.arange(self.M)


def make_taper(kind: str, L: int) -> Taper:
    """Build a unit-energy taper of length L.

    boxcar is the constant L**-0.5; hamming and hann use the standard
    symmetric cosine forms, renormalized to unit energy.
    """
    if L < 2:
        raise ValueError(f"taper length must be >= 2, got {L}")
    if kind not in TAPER_KINDS:
        raise ValueError(f"unknown taper kind {kind!r}; expected one of {TAPER_KINDS}")
    t = np.arange(L, dtype=float)
    if kind == "boxcar":
        h = np.full(L, 1.0 / math.sqrt(L))
        return Taper(h, kind)
    if kind == "hamming":
        h = 0.54 - 0.46 * np.cos(2 * np.pi * t / (L - 1))
    else:  # hann; degenerate at L = 2 where both endpoints are zero
        if L == 2:
            raise ValueError("hann taper of length 2 is identically zero")
        h = 0.5 * (1.0 - np.cos(2 * np.pi * t / (L - 1)))
    return Taper(h / math.sqrt(np.sum(h * h)), kind)


def taper_autocorr(taper: Taper) -> np.ndarray:
    """Autocorrelation kappa(tau) = sum_t h_t h_{t+tau}, tau = 0..L-1.

    kappa(0) = 1 by unit energy. The boxcar has the closed form
    1 - tau/L; other tapers use a zero-padded FFT.
    """
    h = taper.coeffs
    L = h.size
    if taper.kind == "boxcar" and np.all(h == h[0]):
        return 1.0 - np.arange(L) / L
    spec = np.fft.rfft(h, 2 * L)
    kappa = np.fft.irfft(spec * np.conj(spec), 2 * L)[:L]
    kappa[0] = 1.0
    return kappa


def spectral_window(taper: Taper, grid: FrequencyGrid, delta: float) -> np.ndarray:
    """Spectral window H(omega) = delta * |sum_t h_t exp(-i omega t delta)|^2.

    Non-negative, with (1/2pi)-integral 1 over the full band. The grid must
    lie within [-pi/delta, pi/delta].
    """
    omegas = grid.omegas
    wn = math.pi / delta
    if np.any(np.abs(omegas) > wn * (1 + _BAND_TOL)):
        raise ValueError("grid frequency outside [-pi/delta, pi/delta]")
    return _window_values(taper.coeffs, omegas, delta)


def _window_values(h: np.ndarray, omegas: np.ndarray, delta: float) -> np.ndarray:
    # chunked so large grids do not allocate a full (grid x L) phase matrix
    t = np.arange(h.size)
    out = np.empty(omegas.size)
    step = max(1, 2 ** 22 // max(h.size, 1))
    for i in range(0, omegas.size, step):
        block = omegas[i : i + step]
        phase = np.exp(-1j * np.outer(block, t) * delta)
        out[i : i + step] = delta * np.abs(phase @ h) ** 2
    return out


def fejer_kernel(omegas: np.ndarray, L: int, delta: float) -> np.ndarray:
    """Boxcar spectral window (delta/L) * sin^2(L omega delta/2) / sin^2(omega delta/2).

    The 0/0 points (omega a multiple of 2pi/delta) take the analytic limit
    delta * L.
    """
    omegas = np.asarray(omegas, dtype=float)
    half = omegas * delta / 2.0
    den = np.sin(half)
    singular = np.abs(den) < 1e-12
    den = np.where(singular, 1.0, den)
    ratio = np.sin(L * half) ** 2 / den ** 2
    return np.where(singular, delta * L, (delta / L) * ratio)


def fourier_grid(L: int, delta: float, sided: str = "two_sided") -> FrequencyGrid:
    """Fourier frequencies 2*pi*k/(delta*L).

    two_sided covers k = -floor(L/2) .. ceil(L/2)-1; one_sided keeps the
    strictly positive subset (Nyquist included only for even L).
    """
    if L < 2:
        raise ValueError(f"grid length must be >= 2, got {L}")
    step = 2 * np.pi / (delta * L)
    if sided == "two_sided":
        k = np.arange(-(L // 2), (L + 1) // 2)
    elif sided == "one_sided":
        k = np.arange(1, L // 2 + 1)
    else:
        raise ValueError(f"unknown sidedness {sided!r}")
    return FrequencyGrid(step * k, sided)


def segment_plan(n: int, L: int, p: float) -> SegmentPlan:
    """Plan M overlapping segments of length L over an n-sample record.

    The shift is S = max(1, round(L*(1-p))) and M = floor((n-L)/S) + 1;
    the realized overlap (L-S)/L is stored, and trailing samples beyond
    the last segment are dropped.
    """
    if L < 2:
        raise ValueError(f"segment length must be >= 2, got {L}")
    if L > n:
        raise ValueError(f"segment length {L} exceeds record length {n}")
    if not (0 <= p < 1):
        raise ValueError(f"overlap must lie in [0, 1), got {p}")
    S = max(1, int(math.floor(L * (1.0 - p) + 0.5)))
    M = (n - L) // S + 1
    return SegmentPlan(n=n, L=L, M=M, p=(L - S) / L, S=S)
