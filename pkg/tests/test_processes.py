import numpy as np
import pytest
from scipy.integrate import simpson

from debwelch import (
    AR4_COEFFS,
    ar4_process,
    ar_process,
    expected_welch,
    fourier_grid,
    make_taper,
    matern_process,
    segment_plan,
    simulate,
    true_acv,
    true_spectrum,
    welch,
    white_noise,
)
from oracles import conv_smooth_quadrature


class TestModels:
    def test_ar_stationarity_enforced(self):
        with pytest.raises(ValueError):
            ar_process([1.0])  # unit root
        with pytest.raises(ValueError):
            ar_process([0.5, 0.6])  # explosive pair
        ar_process([0.9])  # fine

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            white_noise(sigma=0.0)
        with pytest.raises(ValueError):
            matern_process(lam=-1.0)
        with pytest.raises(ValueError):
            matern_process(nu=0.0)


class TestTrueSpectrum:
    def test_white_flat(self):
        model = white_noise(1.0, 1.0)
        vals = true_spectrum(model, np.linspace(-np.pi, np.pi, 64))
        assert np.allclose(vals, 1.0)

    def test_matern_at_zero(self):
        model = matern_process(1.0, 0.1, 4 / 3, 1.0)
        val = true_spectrum(model, np.array([0.0]))[0]
        assert val == pytest.approx(0.01 ** (-11 / 6), rel=1e-12)

    def test_ar4_twin_peaks_and_dynamic_range(self):
        model = ar4_process()
        om = np.linspace(1e-3, np.pi, 4096)
        f = true_spectrum(model, om)
        assert f.max() / f.min() > 1e5
        peak_region = om[(f > 0.5 * f.max())]
        assert 0.6 < peak_region.min() < peak_region.max() < 1.0
        # two local maxima in the peak region
        d = np.diff(f)
        turning = np.sum((d[:-1] > 0) & (d[1:] < 0))
        assert turning >= 2

    def test_strictly_positive(self):
        for model in (white_noise(), ar4_process(), matern_process()):
            vals = true_spectrum(model, np.linspace(-np.pi, np.pi, 257))
            assert np.all(vals > 0)


class TestTrueAcv:
    def test_white(self):
        model = white_noise(2.0, 1.0)
        acv = true_acv(model, np.arange(4))
        assert acv[0] == 4.0
        assert np.all(acv[1:] == 0.0)

    def test_matern_variance_matches_band_quadrature(self):
        model = matern_process(1.0, 0.1, 4 / 3, 1.0)
        om = np.linspace(-np.pi, np.pi, 2 ** 16 + 1)
        quad = simpson(true_spectrum(model, om), x=om) / (2 * np.pi)
        gamma0 = true_acv(model, [0])[0]
        assert gamma0 == pytest.approx(quad, rel=1e-4)

    def test_ar4_yule_walker_residual(self):
        model = ar4_process()
        gam = true_acv(model, np.arange(0, 32))
        phi = np.asarray(AR4_COEFFS)
        resid = [gam[tau] - sum(phi[j] * gam[abs(tau - j - 1)] for j in range(4)) for tau in range(5, 21)]
        assert np.linalg.norm(resid) < 1e-6

    def test_fourier_pair_consistency_all_models(self):
        # gamma -> f via the truncated series; f -> gamma via band quadrature.
        # Errors measured against the scale of each function (a banded
        # representation of a continuous-time process always aliases a bit).
        for model in (white_noise(1.5), ar4_process(), matern_process()):
            taus = np.arange(0, 4096)
            gam = true_acv(model, taus)
            om = np.linspace(0, np.pi, 65)
            f_true = true_spectrum(model, om)
            phase = np.cos(np.outer(om, taus[1:]))
            f_from_gamma = model.delta * (gam[0] + 2 * phase @ gam[1:])
            assert np.max(np.abs(f_from_gamma - f_true)) <= 1e-4 * np.max(f_true)

            dense = np.linspace(-np.pi, np.pi, 2 ** 15 + 1)
            fd = true_spectrum(model, dense)
            lags = np.arange(0, 8)
            g_from_f = np.array(
                [simpson(fd * np.cos(dense * t * model.delta), x=dense) / (2 * np.pi) for t in lags]
            )
            assert np.max(np.abs(g_from_f - true_acv(model, lags))) <= 1e-4 * abs(gam[0])


class TestSimulate:
    def test_deterministic(self):
        model = matern_process()
        a = simulate(model, 256, seed=5)
        b = simulate(model, 256, seed=5)
        assert np.array_equal(a.samples, b.samples)
        c = simulate(model, 256, seed=5, rep=1)
        assert not np.array_equal(a.samples, c.samples)

    def test_white_variance(self):
        ts = simulate(white_noise(1.0), 4096, seed=1)
        assert np.var(ts.samples) == pytest.approx(1.0, rel=0.05)

    def test_matern_variance(self):
        model = matern_process()
        reps = [np.var(simulate(model, 2048, seed=2, rep=r).samples) for r in range(12)]
        gamma0 = true_acv(model, [0])[0]
        assert np.mean(reps) == pytest.approx(gamma0, rel=0.2)

    def test_mean_zero(self):
        model = ar4_process()
        means = [np.mean(simulate(model, 8192, seed=3, rep=r).samples) for r in range(8)]
        sd = np.std([simulate(model, 8192, seed=3, rep=r).samples for r in range(8)])
        assert abs(np.mean(means)) < sd  # crude n^{-1/2}-scale check

    def test_ar_tracks_expected_welch(self):
        model = ar4_process()
        plan = segment_plan(2 ** 13, 128, 0.0)
        taper = make_taper("boxcar", 128)
        reps = 100
        vals = np.stack(
            [welch(simulate(model, 2 ** 13, seed=7, rep=r), plan, taper).values for r in range(reps)]
        )
        mean = vals.mean(axis=0)
        se = vals.std(axis=0, ddof=1) / np.sqrt(reps)
        target = expected_welch(model, plan, taper).values
        frac_ok = np.mean(np.abs(mean - target) <= 3 * se)
        assert frac_ok >= 0.95

    def test_too_short(self):
        with pytest.raises(ValueError):
            simulate(white_noise(), 1, seed=0)


class TestExpectedWelch:
    def test_white_exactly_flat(self):
        model = white_noise(1.3, 0.5)
        plan = segment_plan(1024, 64, 0.0)
        for kind in ("boxcar", "hamming", "hann"):
            est = expected_welch(model, plan, make_taper(kind, 64))
            assert np.allclose(est.values, 1.3 ** 2 * 0.5, atol=1e-12)

    def test_nonnegative(self):
        est = expected_welch(ar4_process(), segment_plan(4096, 256, 0.0), make_taper("hann", 256))
        assert np.all(est.values >= 0)

    def test_blurring_lifts_the_valleys(self):
        model = ar4_process()
        plan = segment_plan(2 ** 15, 512, 0.0)
        est = expected_welch(model, plan, make_taper("boxcar", 512))
        truth = true_spectrum(model, est.grid.omegas)
        valley = truth < 1e-2 * truth.max()
        assert valley.any()
        assert np.all(est.values[valley] > truth[valley])

    @pytest.mark.parametrize("kind", ["boxcar", "hamming"])
    def test_matches_convolution_quadrature(self, kind):
        model = ar4_process()
        L = 64
        plan = segment_plan(1024, L, 0.0)
        taper = make_taper(kind, L)
        est = expected_welch(model, plan, taper)
        ref = conv_smooth_quadrature(
            lambda om: true_spectrum(model, om), taper.coeffs, est.grid.omegas, model.delta
        )
        assert np.max(np.abs(est.values - ref) / np.abs(ref)) < 1e-6
