import numpy as np
import pytest

from debwelch import (
    ExperimentConfig,
    SpectralEstimate,
    FrequencyGrid,
    emit_csv,
    imse,
    mean_log_aggregate,
    parse_config,
    read_metrics_csv,
    run_ensemble,
    white_noise,
)
from debwelch.harness import run_point, sweep_points


class TestMeanLogAggregate:
    def test_constant(self):
        assert mean_log_aggregate([np.e, np.e, np.e]) == pytest.approx(1.0)

    def test_two_values(self):
        assert mean_log_aggregate([1.0, np.e ** 2]) == pytest.approx(1.0)

    def test_floor_guards_zeros(self):
        assert np.isfinite(mean_log_aggregate([0.0, 1.0]))

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            mean_log_aggregate([])


class TestImse:
    def test_zero_for_exact(self):
        grid = FrequencyGrid(np.linspace(0.1, 3.0, 30), "one_sided")
        vals = np.random.default_rng(0).uniform(1, 2, 30)
        est = SpectralEstimate(grid, vals, {})
        assert imse(est, vals) == 0.0

    def test_constant_offset(self):
        # truth + c on a uniform grid of band width W gives c^2 * W
        d = 0.1
        omegas = d * np.arange(1, 41)
        truth = np.random.default_rng(1).uniform(1, 2, 40)
        est = SpectralEstimate(FrequencyGrid(omegas, "one_sided"), truth + 0.5, {})
        assert imse(est, truth) == pytest.approx(0.25 * 40 * d, rel=1e-12)

    def test_misaligned_rejected(self):
        est = SpectralEstimate(FrequencyGrid(np.arange(1.0, 5.0), "one_sided"), np.ones(4), {})
        with pytest.raises(ValueError):
            imse(est, np.ones(5))


def small_config(**overrides):
    base = dict(
        model=white_noise(1.0, 1.0),
        sweep="over_M",
        replicates=3,
        seed=1234,
        estimators=("welch",),
        L=64,
        m_values=(2, 4),
        p_values=(0.0,),
    )
    base.update(overrides)
    return ExperimentConfig(**base)


class TestRunEnsemble:
    def test_records_for_every_point_and_metric(self):
        records = run_ensemble(small_config())
        metrics = {"mean_log_abs_bias", "mean_log_sd", "mean_log_rmse", "imse", "wall_time_s"}
        assert len(records) == 2 * len(metrics)
        assert {r.metric for r in records} == metrics
        assert {r.M for r in records} == {2, 4}

    def test_deterministic_records(self):
        r1 = [r for r in run_ensemble(small_config()) if r.metric != "wall_time_s"]
        r2 = [r for r in run_ensemble(small_config()) if r.metric != "wall_time_s"]
        assert r1 == r2

    def test_worker_count_does_not_change_results(self):
        cfg = small_config(estimators=("welch", "debiased"), replicates=4, timing=False)
        serial = run_ensemble(cfg, workers=1)
        parallel = run_ensemble(cfg, workers=3)
        assert serial == parallel

    def test_rmse_identity(self):
        cfg = small_config(estimators=("welch", "debiased"), replicates=6)
        for point in sweep_points(cfg):
            for ens in run_point(cfg, point):
                assert np.allclose(ens.rmse ** 2, ens.bias ** 2 + ens.sd ** 2, atol=1e-10)

    def test_welch_bias_shrinks_with_replicates(self):
        # white noise has no structural Welch bias, so |mean - truth| is
        # pure estimation noise and must shrink as replicates grow
        lo = small_config(replicates=8, m_values=(8,))
        hi = small_config(replicates=128, m_values=(8,))
        get = lambda recs: next(r.value for r in recs if r.metric == "mean_log_abs_bias")
        assert get(run_ensemble(hi)) < get(run_ensemble(lo)) - 0.5

    def test_alpha_sweep(self):
        cfg = small_config(sweep="over_alpha", n=256, alpha_values=(0.3, 0.5), L=None, m_values=())
        records = run_ensemble(cfg)
        assert {r.alpha for r in records} == {0.3, 0.5}
        assert all(r.metric in {"mean_log_abs_bias", "mean_log_sd", "mean_log_rmse", "imse", "wall_time_s"} for r in records)

    def test_unrealizable_m_rejected(self):
        with pytest.raises(ValueError):
            run_ensemble(small_config(m_values=(3,), p_values=(0.9,), L=3))


class TestEmitCsv:
    def test_header_only_for_empty(self, tmp_path):
        path = tmp_path / "empty.csv"
        emit_csv([], path)
        assert path.read_text() == "estimator,M,L,p,alpha,metric,value\n"

    def test_round_trip_exact(self, tmp_path):
        records = run_ensemble(small_config(estimators=("welch", "debiased")))
        path = tmp_path / "m.csv"
        emit_csv(records, path)
        assert read_metrics_csv(path) == records

    def test_fig2_style_row_count(self, tmp_path):
        cfg = small_config(
            estimators=("welch", "debiased"),
            m_values=(8, 16, 32, 64, 128, 256),
            p_values=(0.0, 0.5),
            replicates=2,
        )
        records = run_ensemble(cfg)
        assert len(records) == 5 * 6 * 2 * 2  # metrics x M x estimators x overlaps
        emit_csv(records, tmp_path / "fig2.csv")
        assert len((tmp_path / "fig2.csv").read_text().splitlines()) == 121

    def test_timing_toggle_drops_rows(self):
        records = run_ensemble(small_config(timing=False))
        assert all(r.metric != "wall_time_s" for r in records)
        assert len(records) == 2 * 4


class TestParseConfig:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "exp.conf"
        path.write_text(
            """
            # benchmark config
            model = ar4
            sweep = over_M
            L = 1024
            m_values = 8,16
            p_values = 0,0.5
            replicates = 4
            seed = 99
            taper = boxcar
            estimators = welch,debiased
            timing = off
            """
        )
        cfg = parse_config(path)
        assert cfg.model.kind == "ar"
        assert cfg.L == 1024
        assert cfg.m_values == (8, 16)
        assert cfg.p_values == (0.0, 0.5)
        assert cfg.seed == 99
        assert cfg.timing is False

    def test_unknown_key_named(self, tmp_path):
        path = tmp_path / "bad.conf"
        path.write_text("model = white\nsweep = over_M\nreplicates = 2\nseed = 1\nbogus = 3\n")
        with pytest.raises(ValueError, match="bogus"):
            parse_config(path)

    def test_missing_key_named(self, tmp_path):
        path = tmp_path / "missing.conf"
        path.write_text("model = white\nsweep = over_M\nreplicates = 2\n")
        with pytest.raises(ValueError, match="seed"):
            parse_config(path)

    def test_bad_value_names_key(self, tmp_path):
        path = tmp_path / "badval.conf"
        path.write_text("model = white\nsweep = over_M\nreplicates = two\nseed = 1\n")
        with pytest.raises(ValueError, match="replicates"):
            parse_config(path)

    def test_compression_keys(self, tmp_path):
        path = tmp_path / "comp.conf"
        path.write_text(
            "model = matern\nsweep = compression\nn = 1024\nL = 128\nk_log = 5\n"
            "band = 0.06,3.14\nreplicates = 2\nseed = 7\nestimators = welch,debiased_log\n"
        )
        cfg = parse_config(path)
        assert cfg.sweep == "compression"
        assert cfg.k_log == 5
        assert cfg.band == (0.06, 3.14)
