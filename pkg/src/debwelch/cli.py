"""Command-line interface: welch / debias / simulate / bench.

Exit codes: 0 success, 2 usage or input error, 1 internal numeric failure.
The environment variable SPECTRAL_SEED overrides --seed when set.
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys

import numpy as np

from . import io
from .core import TimeSeries, make_taper, segment_plan
from .debias import debiased_welch, default_k, even_partition, max_k
from .estimators import welch
from .harness import emit_csv, parse_config, run_ensemble
from .processes import AR4_COEFFS, ar_process, matern_process, simulate, white_noise


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="debwelch", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_series_args(p):
        p.add_argument("input", help="series file: one float per line")
        p.add_argument("--segment-length", type=int, required=True, metavar="L")
        p.add_argument("--overlap", type=float, default=0.0, metavar="P")
        p.add_argument("--taper", choices=("boxcar", "hamming", "hann"), default="boxcar")
        p.add_argument("--delta", type=float, default=1.0, help="sampling interval (s)")
        p.add_argument("--demean", action="store_true", help="remove the sample mean first")
        p.add_argument("--hz", action="store_true", help="emit frequencies in Hz")
        p.add_argument("--out", required=True)

    w = sub.add_parser("welch", help="Welch spectral estimate")
    add_series_args(w)

    d = sub.add_parser("debias", help="debiased Welch spectral estimate")
    add_series_args(d)
    basis = d.add_mutually_exclusive_group()
    basis.add_argument("--k", type=int, help="number of even bases (default ceil((L-1)/4))")
    basis.add_argument("--partition-file", help="uneven partition: 'centre width' per line")
    d.add_argument("--allow-negative", action="store_true", help="skip the non-negativity constraint")

    s = sub.add_parser("simulate", help="draw a Gaussian sample path")
    s.add_argument("--model", choices=("white", "ar4", "matern"), required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--sigma", type=float, default=1.0)
    s.add_argument("--lambda", dest="lam", type=float, default=0.1)
    s.add_argument("--nu", type=float, default=4 / 3)
    s.add_argument("--phi", help="comma-separated AR coefficients (overrides the ar4 preset)")
    s.add_argument("--delta", type=float, default=1.0)
    s.add_argument("--out", required=True)

    b = sub.add_parser("bench", help="run a Monte Carlo benchmark config")
    b.add_argument("--config", required=True)
    b.add_argument("--out", required=True)
    b.add_argument("--workers", type=int, default=1)
    return parser


def _load_series(args) -> TimeSeries:
    samples = io.read_series(args.input)
    if args.demean:
        samples = samples - np.mean(samples)
    return TimeSeries(samples, args.delta)


def _cmd_welch(args) -> int:
    ts = _load_series(args)
    plan = segment_plan(len(ts), args.segment_length, args.overlap)
    est = welch(ts, plan, make_taper(args.taper, plan.L))
    io.write_spectral_csv(args.out, est, hz=args.hz)
    print(f"wrote {args.out}: {len(est)} rows (L={plan.L}, M={plan.M}, p={plan.p:g})")
    return 0


def _cmd_debias(args) -> int:
    ts = _load_series(args)
    plan = segment_plan(len(ts), args.segment_length, args.overlap)
    if args.partition_file is not None:
        part = io.read_partition_file(args.partition_file)
    else:
        k = args.k if args.k is not None else default_k(plan.L)
        bound = max_k(plan.L)
        if not 1 <= k <= bound:
            raise ValueError(f"--k {k} outside [1, {bound}] (K must not exceed ceil((L-1)/2) = {bound})")
        part = even_partition(k, plan.L, ts.delta)
    est = debiased_welch(ts, plan, make_taper(args.taper, plan.L), part, nonneg=not args.allow_negative)
    io.write_spectral_csv(args.out, est, hz=args.hz)
    print(f"wrote {args.out}: {len(est)} rows (L={plan.L}, M={plan.M}, p={plan.p:g}, K={part.K})")
    return 0


def _seed_override(seed: int) -> int:
    env = os.environ.get("SPECTRAL_SEED")
    if env is None:
        return seed
    try:
        return int(env)
    except ValueError:
        raise ValueError(f"SPECTRAL_SEED must be an integer, got {env!r}") from None


def _cmd_simulate(args) -> int:
    if args.model == "white":
        model = white_noise(args.sigma, args.delta)
    elif args.model == "matern":
        model = matern_process(args.sigma, args.lam, args.nu, args.delta)
    else:
        phi = AR4_COEFFS
        if args.phi is not None:
            phi = [float(v) for v in args.phi.split(",")]
        model = ar_process(phi, args.sigma, args.delta)
    ts = simulate(model, args.n, _seed_override(args.seed))
    io.write_series(args.out, ts.samples)
    print(f"wrote {args.out}: {len(ts)} samples ({args.model}, seed={_seed_override(args.seed)})")
    return 0


def _summary_table(records) -> str:
    width = max(len(r.estimator) for r in records)
    lines = [f"{'estimator':<{width}}  {'M':>5} {'L':>5} {'p':>4} {'alpha':>6}  {'metric':<18} {'value':>13}"]
    for r in records:
        alpha = "" if r.alpha is None else f"{r.alpha:g}"
        lines.append(
            f"{r.estimator:<{width}}  {r.M:>5} {r.L:>5} {r.p:>4g} {alpha:>6}  {r.metric:<18} {r.value:>13.6g}"
        )
    return "\n".join(lines)


def _cmd_bench(args) -> int:
    config = parse_config(args.config)
    config = dataclasses.replace(config, seed=_seed_override(config.seed))
    records = run_ensemble(config, workers=args.workers)
    emit_csv(records, args.out)
    print(_summary_table(records))
    print(f"wrote {args.out}: {len(records)} records")
    return 0


_COMMANDS = {
    "welch": _cmd_welch,
    "debias": _cmd_debias,
    "simulate": _cmd_simulate,
    "bench": _cmd_bench,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (np.linalg.LinAlgError, FloatingPointError, RuntimeError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
