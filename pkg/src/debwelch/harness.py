"""Monte Carlo experiment harness: sweeps over segmentation parameters,
per-frequency error statistics against the true spectrum, and CSV output.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .core import SegmentPlan, fourier_grid, make_taper, segment_plan
from .debias import BasisPartition, debiased_welch, default_k, even_partition, log_partition
from .estimators import welch
from .processes import ProcessModel, ar4_process, ar_process, matern_process, simulate, true_spectrum, white_noise

SWEEP_KINDS = ("over_M", "over_alpha", "compression")
ESTIMATOR_NAMES = ("welch", "debiased", "debiased_log")
METRIC_ORDER = ("mean_log_abs_bias", "mean_log_sd", "mean_log_rmse", "imse", "wall_time_s")

CSV_HEADER = "estimator,M,L,p,alpha,metric,value"

_LOG_FLOOR = 1e-300


@dataclass(frozen=True)
class MetricRecord:
    estimator: str
    M: int
    L: int
    p: float
    alpha: float | None
    metric: str
    value: float

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise ValueError(f"non-finite metric value for {self.metric}")


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything a benchmark run needs; see parse_config for the file keys."""

    model: ProcessModel
    sweep: str
    replicates: int
    seed: int
    estimators: tuple[str, ...] = ("welch", "debiased")
    taper_kind: str = "boxcar"
    n: int | None = None
    L: int | None = None
    m_values: tuple[int, ...] = ()
    p_values: tuple[float, ...] = (0.0,)
    alpha_values: tuple[float, ...] = ()
    k: int | None = None
    k_log: int | None = None
    band: tuple[float, float] | None = None
    nonneg: bool = True
    timing: bool = True

    def __post_init__(self):
        if self.sweep not in SWEEP_KINDS:
            raise ValueError(f"unknown sweep {self.sweep!r}")
        if self.replicates < 2:
            raise ValueError("need at least 2 replicates")
        bad = [e for e in self.estimators if e not in ESTIMATOR_NAMES]
        if bad:
            raise ValueError(f"unknown estimators {bad}")


@dataclass(frozen=True)
class SweepPoint:
    plan: SegmentPlan
    alpha: float | None = None


@dataclass
class EstimatorEnsemble:
    """Raw per-replicate estimates for one estimator at one sweep point."""

    name: str
    point: SweepPoint
    omegas: np.ndarray
    widths: np.ndarray  # frequency cell widths, for integrated metrics
    truth: np.ndarray
    values: np.ndarray  # (replicates, frequencies)
    seconds: np.ndarray  # (replicates,)
    bias: np.ndarray = field(init=False)
    sd: np.ndarray = field(init=False)
    rmse: np.ndarray = field(init=False)

    def __post_init__(self):
        mean = self.values.mean(axis=0)
        self.bias = np.abs(mean - self.truth)
        self.sd = self.values.std(axis=0)  # ddof=0 so rmse^2 = bias^2 + sd^2
        self.rmse = np.sqrt(np.mean((self.values - self.truth) ** 2, axis=0))


def mean_log_aggregate(per_freq_values) -> float:
    """Arithmetic mean of natural logs, with values floored at 1e-300."""
    vals = np.asarray(per_freq_values, dtype=float)
    if vals.size == 0:
        raise ValueError("cannot aggregate an empty array")
    return float(np.mean(np.log(np.maximum(vals, _LOG_FLOOR))))


def _cell_widths(omegas: np.ndarray) -> np.ndarray:
    """Cell widths from midpoint edges, end cells extended by half a step."""
    if omegas.size == 1:
        raise ValueError("cannot infer cell widths from a single frequency")
    mids = (omegas[:-1] + omegas[1:]) / 2
    lo = np.concatenate(([omegas[0] - (omegas[1] - omegas[0]) / 2], mids))
    hi = np.concatenate((mids, [omegas[-1] + (omegas[-1] - omegas[-2]) / 2]))
    return hi - lo


def imse(estimate, truth, widths=None) -> float:
    """Integrated squared error sum((est - truth)^2 * cellwidth).

    ``estimate`` is a SpectralEstimate (or (omegas, values) pair); the
    truth must be evaluated on the same grid. Cell widths are inferred
    from the grid unless given.
    """
    if hasattr(estimate, "grid"):
        omegas, values = estimate.grid.omegas, estimate.values
    else:
        omegas, values = (np.asarray(a, dtype=float) for a in estimate)
    truth = np.asarray(truth, dtype=float)
    if truth.shape != values.shape:
        raise ValueError("estimate and truth grids are misaligned")
    w = _cell_widths(omegas) if widths is None else np.asarray(widths, dtype=float)
    return float(np.sum((values - truth) ** 2 * w))


def _point_partition(config: ExperimentConfig, estimator: str, plan: SegmentPlan) -> BasisPartition | None:
    if estimator == "debiased":
        k = config.k if config.k is not None else default_k(plan.L)
        return even_partition(k, plan.L, config.model.delta)
    if estimator == "debiased_log":
        if config.k_log is None or config.band is None:
            raise ValueError("debiased_log needs k_log and band")
        return log_partition(config.k_log, *config.band)
    return None


def _run_replicate(task):
    """One replicate of one sweep point; top-level so pools can pickle it."""
    model, plan, taper_kind, jobs, nonneg, seed, rep = task
    ts = simulate(model, plan.n, seed, rep=rep)
    taper = make_taper(taper_kind, plan.L)
    out = []
    for name, part in jobs:
        t0 = time.perf_counter()
        if name == "welch":
            est = welch(ts, plan, taper)
        else:
            est = debiased_welch(ts, plan, taper, part, nonneg=nonneg)
        out.append((est.values, time.perf_counter() - t0))
    return out


def run_point(config: ExperimentConfig, point: SweepPoint, workers: int = 1) -> list[EstimatorEnsemble]:
    """Run all replicates of one sweep point and assemble raw ensembles."""
    plan = point.plan
    jobs = [(name, _point_partition(config, name, plan)) for name in config.estimators]
    tasks = [
        (config.model, plan, config.taper_kind, jobs, config.nonneg, config.seed, rep)
        for rep in range(config.replicates)
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_replicate, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
    else:
        results = [_run_replicate(t) for t in tasks]

    ensembles = []
    for j, (name, part) in enumerate(jobs):
        if name == "welch":
            omegas = fourier_grid(plan.L, config.model.delta, "one_sided").omegas
            widths = np.full(omegas.size, 2 * np.pi / (config.model.delta * plan.L))
        else:
            omegas = part.centres
            widths = part.widths
        values = np.stack([results[r][j][0] for r in range(config.replicates)])
        seconds = np.array([results[r][j][1] for r in range(config.replicates)])
        truth = true_spectrum(config.model, omegas)
        ensembles.append(EstimatorEnsemble(name, point, omegas, widths, truth, values, seconds))
    return ensembles


def sweep_points(config: ExperimentConfig) -> list[SweepPoint]:
    """Expand the configured sweep into concrete segmentation plans."""
    pts = []
    if config.sweep == "over_M":
        if config.L is None or not config.m_values:
            raise ValueError("over_M sweep needs L and m_values")
        for p in config.p_values:
            for m in config.m_values:
                n = int(round(config.L * (m * (1 - p) + p)))
                plan = segment_plan(n, config.L, p)
                if plan.M != m:
                    raise ValueError(f"M={m} with L={config.L}, p={p} is not realizable")
                pts.append(SweepPoint(plan))
    elif config.sweep == "over_alpha":
        if config.n is None or not config.alpha_values:
            raise ValueError("over_alpha sweep needs n and alpha_values")
        for alpha in config.alpha_values:
            L = max(2, int(round(config.n ** alpha)))
            pts.append(SweepPoint(segment_plan(config.n, L, 0.0), alpha=alpha))
    else:  # compression
        if config.n is None or config.L is None:
            raise ValueError("compression sweep needs n and L")
        pts.append(SweepPoint(segment_plan(config.n, config.L, 0.0)))
    return pts


def point_records(ens: EstimatorEnsemble, timing: bool = True) -> list[MetricRecord]:
    """The five per-point metrics (timing last, omitted when disabled)."""
    plan = ens.point.plan
    common = dict(estimator=ens.name, M=plan.M, L=plan.L, p=plan.p, alpha=ens.point.alpha)
    values = {
        "mean_log_abs_bias": mean_log_aggregate(ens.bias),
        "mean_log_sd": mean_log_aggregate(ens.sd),
        "mean_log_rmse": mean_log_aggregate(ens.rmse),
        "imse": float(np.sum(ens.rmse ** 2 * ens.widths)),
    }
    if timing:
        values["wall_time_s"] = float(np.mean(ens.seconds))
    return [MetricRecord(metric=m, value=v, **common) for m, v in values.items()]


def run_ensemble(config: ExperimentConfig, workers: int = 1) -> list[MetricRecord]:
    """Run the configured sweep and return metric records in a fixed order."""
    records = []
    for point in sweep_points(config):
        for ens in run_point(config, point, workers=workers):
            records.extend(point_records(ens, timing=config.timing))
    return records


def emit_csv(records, path) -> None:
    """Write records as CSV: 17-significant-digit floats, '.' decimals."""
    try:
        with open(path, "w") as fh:
            fh.write(CSV_HEADER + "\n")
            for r in records:
                alpha = "" if r.alpha is None else f"{r.alpha:.17g}"
                fh.write(
                    f"{r.estimator},{r.M},{r.L},{r.p:.17g},{alpha},{r.metric},{r.value:.17g}\n"
                )
    except OSError as exc:
        raise OSError(f"could not write metrics CSV {path}: {exc}") from exc


def read_metrics_csv(path) -> list[MetricRecord]:
    records = []
    with open(path) as fh:
        header = fh.readline().strip()
        if header != CSV_HEADER:
            raise ValueError(f"{path}: unexpected header {header!r}")
        for lineno, raw in enumerate(fh, start=2):
            line = raw.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 7:
                raise ValueError(f"{path}: line {lineno}: expected 7 fields")
            est, m, L, p, alpha, metric, value = parts
            records.append(
                MetricRecord(
                    estimator=est,
                    M=int(m),
                    L=int(L),
                    p=float(p),
                    alpha=None if alpha == "" else float(alpha),
                    metric=metric,
                    value=float(value),
                )
            )
    return records


# --- experiment config files (flat key = value text) -------------------------

_CONFIG_KEYS = {
    "model", "sigma", "lambda", "nu", "phi", "delta", "n", "L", "sweep",
    "m_values", "p_values", "alpha_values", "k", "k_log", "band",
    "replicates", "seed", "taper", "estimators", "nonneg", "timing",
}


def _parse_value(key: str, raw: str, cast):
    try:
        return cast(raw)
    except ValueError:
        raise ValueError(f"config key {key!r}: could not parse {raw!r}") from None


def parse_config(path) -> ExperimentConfig:
    """Parse a flat key=value experiment file ('#' comments allowed)."""
    kv: dict[str, str] = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}: line {lineno}: expected key = value")
            key, _, value = line.partition("=")
            key = key.strip()
            if key not in _CONFIG_KEYS:
                raise ValueError(f"{path}: unknown config key {key!r}")
            kv[key] = value.strip()

    def want(key, default=None):
        return kv.get(key, default)

    for required in ("model", "sweep", "replicates", "seed"):
        if required not in kv:
            raise ValueError(f"{path}: missing config key {required!r}")

    delta = _parse_value("delta", want("delta", "1.0"), float)
    sigma = _parse_value("sigma", want("sigma", "1.0"), float)
    name = kv["model"]
    if name == "white":
        model = white_noise(sigma, delta)
    elif name == "ar4":
        if "phi" in kv:
            phi = [_parse_value("phi", v, float) for v in kv["phi"].split(",")]
            model = ar_process(phi, sigma, delta)
        else:
            model = ar4_process(sigma, delta)
    elif name == "matern":
        lam = _parse_value("lambda", want("lambda", "0.1"), float)
        nu = _parse_value("nu", want("nu", str(4 / 3)), float)
        model = matern_process(sigma, lam, nu, delta)
    else:
        raise ValueError(f"config key 'model': unknown model {name!r}")

    def int_list(key):
        return tuple(_parse_value(key, v, int) for v in kv[key].split(",")) if key in kv else ()

    def float_list(key):
        return tuple(_parse_value(key, v, float) for v in kv[key].split(",")) if key in kv else ()

    band = None
    if "band" in kv:
        vals = float_list("band")
        if len(vals) != 2:
            raise ValueError("config key 'band': expected 'omega_min,omega_max'")
        band = (vals[0], vals[1])

    flags = {"on": True, "off": False, "true": True, "false": False}

    def flag(key, default):
        raw = want(key)
        if raw is None:
            return default
        if raw.lower() not in flags:
            raise ValueError(f"config key {key!r}: expected on/off, got {raw!r}")
        return flags[raw.lower()]

    return ExperimentConfig(
        model=model,
        sweep=kv["sweep"],
        replicates=_parse_value("replicates", kv["replicates"], int),
        seed=_parse_value("seed", kv["seed"], int),
        estimators=tuple(kv.get("estimators", "welch,debiased").split(",")),
        taper_kind=want("taper", "boxcar"),
        n=_parse_value("n", kv["n"], int) if "n" in kv else None,
        L=_parse_value("L", kv["L"], int) if "L" in kv else None,
        m_values=int_list("m_values"),
        p_values=float_list("p_values") or (0.0,),
        alpha_values=float_list("alpha_values"),
        k=_parse_value("k", kv["k"], int) if "k" in kv else None,
        k_log=_parse_value("k_log", kv["k_log"], int) if "k_log" in kv else None,
        band=band,
        nonneg=flag("nonneg", True),
        timing=flag("timing", True),
    )
