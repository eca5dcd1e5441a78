"""File formats: series files, partition files and spectral CSV output."""

from __future__ import annotations

import numpy as np

from .debias import BasisPartition
from .estimators import SpectralEstimate

TWO_PI = 2.0 * np.pi


def read_series(path) -> np.ndarray:
    """Read a series file: one float per line, '#' comments, optional
    leading header line "x"."""
    values = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if not values and line.lower() == "x":
                continue
            try:
                values.append(float(line))
            except ValueError:
                raise ValueError(f"{path}: line {lineno}: could not parse {line!r}") from None
    if len(values) < 2:
        raise ValueError(f"{path}: series needs at least 2 samples, found {len(values)}")
    return np.array(values)


def write_series(path, samples) -> None:
    with open(path, "w") as fh:
        for v in np.asarray(samples, dtype=float):
            fh.write(f"{v:.17g}\n")


def read_partition_file(path) -> BasisPartition:
    """Read an uneven-partition file: one "centre width" pair per line
    (rad/s), '#' comments allowed. Invariant violations are rejected."""
    centres, widths = [], []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"{path}: line {lineno}: expected 'centre width', got {line!r}")
            try:
                centres.append(float(parts[0]))
                widths.append(float(parts[1]))
            except ValueError:
                raise ValueError(f"{path}: line {lineno}: could not parse {line!r}") from None
    if not centres:
        raise ValueError(f"{path}: partition file has no bases")
    try:
        return BasisPartition(np.array(centres), np.array(widths))
    except ValueError as exc:
        raise ValueError(f"{path}: invalid partition: {exc}") from None


def write_partition_file(path, part: BasisPartition) -> None:
    with open(path, "w") as fh:
        fh.write("# centre width (rad/s)\n")
        for c, w in zip(part.centres, part.widths):
            fh.write(f"{c:.17g} {w:.17g}\n")


def write_spectral_csv(path, est: SpectralEstimate, hz: bool = False) -> None:
    """Write "omega,psd" rows with provenance comments.

    Values follow the two-sided density convention evaluated at positive
    frequencies (no doubling); --hz only rescales the frequency column.
    """
    meta = " ".join(f"{k}={v}" for k, v in est.meta.items())
    unit = "hz" if hz else "rad/s"
    scale = 1.0 / TWO_PI if hz else 1.0
    with open(path, "w") as fh:
        fh.write(f"# {meta}\n")
        fh.write(f"# frequency unit: {unit}; psd: two-sided density at positive frequencies\n")
        fh.write("omega,psd\n")
        for w, v in zip(est.grid.omegas, est.values):
            fh.write(f"{w * scale:.17g},{v:.17g}\n")


def read_spectral_csv(path):
    """Read back a spectral CSV; returns (omegas, values, comment lines)."""
    omegas, values, comments = [], [], []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                comments.append(line)
                continue
            if line == "omega,psd":
                continue
            try:
                w, v = line.split(",")
                omegas.append(float(w))
                values.append(float(v))
            except ValueError:
                raise ValueError(f"{path}: line {lineno}: bad row {line!r}") from None
    return np.array(omegas), np.array(values), comments
