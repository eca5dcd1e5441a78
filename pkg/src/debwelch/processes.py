"""Ground-truth stochastic process models: spectra, autocovariances,
Gaussian simulation and the exact expected Welch estimate.

All spectra follow the two-sided density convention
f(omega) = delta * sum_tau gamma(tau) exp(-i omega tau delta).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.signal import lfilter
from scipy.special import gamma as gamma_fn
from scipy.special import kv

from .core import FrequencyGrid, SegmentPlan, Taper, TimeSeries, fourier_grid, taper_autocorr
from .estimators import SpectralEstimate
from .debias import _blur

# Percival & Walden's canonical twin-peaked AR(4) benchmark coefficients.
AR4_COEFFS = (2.7607, -3.8106, 2.6535, -0.9238)

_ACV_GRID = 2 ** 18  # inverse-transform grid for AR autocovariances
_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class ProcessModel:
    """White, autoregressive or Matern process sampled at interval delta."""

    kind: str
    delta: float = 1.0
    sigma: float = 1.0
    phi: tuple[float, ...] = ()
    lam: float = 0.0
    nu: float = 0.0

    def __post_init__(self):
        if self.kind not in ("white", "ar", "matern"):
            raise ValueError(f"unknown process kind {self.kind!r}")
        if self.delta <= 0 or self.sigma <= 0:
            raise ValueError("delta and sigma must be > 0")
        if self.kind == "ar":
            if not self.phi:
                raise ValueError("AR model needs coefficients")
            # stationarity: roots of 1 - sum phi_j z^j outside the unit circle
            coeffs = np.concatenate(([1.0], -np.asarray(self.phi, dtype=float)))
            roots = np.roots(coeffs[::-1])
            if roots.size and np.any(np.abs(roots) <= 1.0 + 1e-12):
                raise ValueError("AR coefficients are not causal/stationary")
        if self.kind == "matern" and (self.lam <= 0 or self.nu <= 0):
            raise ValueError("Matern model needs lambda > 0 and nu > 0")

    @property
    def nyquist(self) -> float:
        return math.pi / self.delta


def white_noise(sigma: float = 1.0, delta: float = 1.0) -> ProcessModel:
    return ProcessModel("white", delta=delta, sigma=sigma)


def ar_process(phi, sigma: float = 1.0, delta: float = 1.0) -> ProcessModel:
    return ProcessModel("ar", delta=delta, sigma=sigma, phi=tuple(float(c) for c in phi))


def ar4_process(sigma: float = 1.0, delta: float = 1.0) -> ProcessModel:
    """The canonical sharp twin-peak AR(4) benchmark model."""
    return ar_process(AR4_COEFFS, sigma=sigma, delta=delta)


def matern_process(sigma: float = 1.0, lam: float = 0.1, nu: float = 4 / 3, delta: float = 1.0) -> ProcessModel:
    return ProcessModel("matern", delta=delta, sigma=sigma, lam=lam, nu=nu)


def true_spectrum(model: ProcessModel, grid) -> np.ndarray:
    """Two-sided spectral density of the model on a grid (rad/s)."""
    omegas = grid.omegas if isinstance(grid, FrequencyGrid) else np.asarray(grid, dtype=float)
    if model.kind == "white":
        return np.full(omegas.shape, model.sigma ** 2 * model.delta)
    if model.kind == "ar":
        j = np.arange(1, len(model.phi) + 1)
        transfer = 1.0 - np.exp(-1j * np.outer(omegas, j) * model.delta) @ np.asarray(model.phi)
        return model.sigma ** 2 * model.delta / np.abs(transfer) ** 2
    # Matern: sigma^2 / (omega^2 + lambda^2)^(nu + 1/2)
    return model.sigma ** 2 / (omegas ** 2 + model.lam ** 2) ** (model.nu + 0.5)


@lru_cache(maxsize=8)
def _ar_acv_table(model: ProcessModel) -> np.ndarray:
    """AR autocovariance via inverse transform of the spectrum on a fine grid."""
    omegas = 2 * np.pi / (model.delta * _ACV_GRID) * np.arange(_ACV_GRID)
    f = true_spectrum(model, omegas)
    return np.fft.ifft(f).real / model.delta


def _matern_acv(model: ProcessModel, taus: np.ndarray) -> np.ndarray:
    """Closed-form Matern autocovariance, the exact Fourier pair of the
    spectral density under the two-sided convention:

        gamma(t) = sigma^2 |t|^nu K_nu(lam |t|) / (sqrt(pi) Gamma(nu+1/2) (2 lam)^nu)

    with gamma(0) = sigma^2 Gamma(nu) / (2 sqrt(pi) Gamma(nu+1/2) lam^(2 nu)).
    """
    nu, lam, sig2 = model.nu, model.lam, model.sigma ** 2
    t = np.abs(taus * model.delta)
    norm = math.sqrt(math.pi) * gamma_fn(nu + 0.5)
    out = np.empty(t.shape, dtype=float)
    zero = t == 0
    out[zero] = sig2 * gamma_fn(nu) / (2 * norm * lam ** (2 * nu))
    tz = t[~zero]
    vals = sig2 * tz ** nu * kv(nu, lam * tz) / (norm * (2 * lam) ** nu)
    if not np.all(np.isfinite(vals)):
        raise FloatingPointError("Matern Bessel evaluation did not converge")
    out[~zero] = vals
    return out


def true_acv(model: ProcessModel, taus) -> np.ndarray:
    """Autocovariance gamma(tau) at integer lags."""
    taus = np.atleast_1d(np.asarray(taus, dtype=int))
    if model.kind == "white":
        return np.where(taus == 0, model.sigma ** 2, 0.0)
    if model.kind == "ar":
        table = _ar_acv_table(model)
        if np.max(np.abs(taus)) >= _ACV_GRID // 2:
            raise ValueError("lag beyond the AR autocovariance table")
        return table[np.abs(taus)]
    return _matern_acv(model, taus)


def _rng_for(seed: int, rep: int) -> np.random.Generator:
    """Counter-based stream keyed by (seed, replicate)."""
    key = np.array([seed & _MASK64, rep & _MASK64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _ar_burn_in(model: ProcessModel) -> int:
    """Burn-in long enough that transient energy is < 1e-8 of stationary."""
    coeffs = np.concatenate(([1.0], -np.asarray(model.phi, dtype=float)))
    radius = float(np.max(np.abs(np.roots(coeffs[::-1]) ** -1)))
    return max(256, int(math.ceil(math.log(1e-8) / (2 * math.log(radius)))))


def _simulate_circulant(model: ProcessModel, n: int, rng: np.random.Generator) -> np.ndarray:
    """Stationary Gaussian sample via circulant embedding of the autocovariance."""
    gam = true_acv(model, np.arange(n + 1))
    row = np.concatenate([gam, gam[-2:0:-1]])
    eig = np.fft.fft(row).real
    clip = max(0.0, -float(np.min(eig)))
    if clip > 1e-6 * float(np.max(eig)):
        warnings.warn(
            f"circulant embedding clipped eigenvalues by {clip:.3e} "
            f"({clip / float(np.max(eig)):.2e} of the spectral peak)",
            RuntimeWarning,
            stacklevel=3,
        )
    eig = np.maximum(eig, 0.0)
    m = row.size
    xi = (rng.standard_normal(m) + 1j * rng.standard_normal(m)) / math.sqrt(2)
    y = np.fft.ifft(np.sqrt(eig) * xi)
    return y.real[:n] * math.sqrt(2 * m)


def simulate(model: ProcessModel, n: int, seed: int, rep: int = 0) -> TimeSeries:
    """Draw a mean-zero Gaussian sample path of length n.

    AR models run the recursion with a burn-in from zero initial state;
    white and Matern models use circulant embedding of the autocovariance
    (eigenvalue-clipped with a warning if the embedding is not
    non-negative). Reproducible: the stream is keyed by (seed, rep).
    """
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    rng = _rng_for(seed, rep)
    if model.kind == "ar":
        burn = _ar_burn_in(model)
        eps = model.sigma * rng.standard_normal(burn + n)
        a = np.concatenate(([1.0], -np.asarray(model.phi, dtype=float)))
        x = lfilter([1.0], a, eps)[burn:]
    else:
        x = _simulate_circulant(model, n, rng)
    return TimeSeries(x, model.delta)


def expected_welch(model: ProcessModel, plan: SegmentPlan, taper: Taper, sided: str = "one_sided") -> SpectralEstimate:
    """Exact E[Welch] on the Fourier grid of the segment length:
    the true spectrum blurred through the taper's spectral window."""
    if len(taper) != plan.L:
        raise ValueError(f"taper length {len(taper)} != segment length {plan.L}")
    gam = true_acv(model, np.arange(plan.L))
    kappa = taper_autocorr(taper)
    grid = fourier_grid(plan.L, model.delta, sided)
    vals = _blur(gam[None, :], kappa, grid.omegas, model.delta, plan.L)[0]
    meta = {
        "estimator": "expected_welch",
        "L": plan.L,
        "M": plan.M,
        "p": plan.p,
        "taper": taper.kind,
    }
    return SpectralEstimate(grid, np.maximum(vals, 0.0), meta)
