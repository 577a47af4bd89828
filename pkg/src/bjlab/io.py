"""
CSV/JSON readers and writers.

Floats are written with 17 significant digits so values survive a round trip
bit for bit. Every file is written to a temporary sibling and renamed into
place, so a failed run never leaves a partial file behind.
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .analysis import probability_series
from .model import BRIGHT, StateIndex
from .ode import Trajectory
from .spectral import ArrowheadSpectrum

__all__ = [
    "fmt",
    "atomic_write",
    "trajectory_columns",
    "write_trajectory_csv",
    "read_trajectory_csv",
    "write_spectrum_csv",
    "read_spectrum_csv",
    "write_table_csv",
    "write_json",
]


def fmt(x) -> str:
    if x is None:
        return ""
    return format(float(x), ".17g")


def atomic_write(path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def _comment_block(meta: dict | None) -> str:
    if not meta:
        return ""
    return "".join(f"# {key} = {value}\n" for key, value in meta.items())


def _parse_comments(lines):
    meta = {}
    for line in lines:
        body = line[1:].strip()
        if "=" in body:
            key, value = body.split("=", 1)
            meta[key.strip()] = value.strip()
    return meta


def trajectory_columns(traj: Trajectory, tracked_k=(0, 1, 2)) -> dict[str, np.ndarray]:
    """Columns t, p_s, p_k{K} for each tracked K, p_tot, in that order."""
    cols = {"t": traj.times, "p_s": probability_series(traj, BRIGHT).values}
    for k in tracked_k:
        cols[f"p_k{k}"] = probability_series(traj, StateIndex.dark(k)).values
    cols["p_tot"] = traj.total_probability
    return cols


def _csv_text(header, rows, meta=None) -> str:
    buf = io.StringIO()
    buf.write(_comment_block(meta))
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def write_trajectory_csv(path, traj: Trajectory, tracked_k=(0, 1, 2), meta: dict | None = None) -> Path:
    cols = trajectory_columns(traj, tracked_k)
    data = np.column_stack(list(cols.values()))
    rows = ([fmt(v) for v in row] for row in data)
    return atomic_write(path, _csv_text(list(cols), rows, meta))


def _read_csv(path):
    with open(path, newline="") as fh:
        lines = fh.read().splitlines()
    comments = [ln for ln in lines if ln.startswith("#")]
    body = [ln for ln in lines if ln and not ln.startswith("#")]
    reader = csv.reader(body)
    header = next(reader)
    rows = list(reader)
    return _parse_comments(comments), header, rows


def read_trajectory_csv(path) -> tuple[dict, dict[str, np.ndarray]]:
    """Return (comment metadata, {column name: float array})."""
    meta, header, rows = _read_csv(path)
    data = np.array(rows, dtype=float).reshape(len(rows), len(header))
    return meta, {name: data[:, i] for i, name in enumerate(header)}


def write_spectrum_csv(path, spectrum: ArrowheadSpectrum, meta: dict | None = None) -> Path:
    meta = dict(meta or {})
    meta["sum_bright_weights"] = fmt(np.sum(spectrum.bright_weights))
    rows = (
        [str(j), fmt(lam), fmt(w)]
        for j, (lam, w) in enumerate(zip(spectrum.eigenvalues, spectrum.bright_weights))
    )
    return atomic_write(path, _csv_text(["j", "eigenvalue", "bright_weight"], rows, meta))


def read_spectrum_csv(path) -> tuple[dict, ArrowheadSpectrum]:
    meta, header, rows = _read_csv(path)
    eig = np.array([float(r[header.index("eigenvalue")]) for r in rows])
    w = np.array([float(r[header.index("bright_weight")]) for r in rows])
    return meta, ArrowheadSpectrum(eig, w)


def write_table_csv(path, header, rows, meta: dict | None = None) -> Path:
    def cell(v):
        if isinstance(v, str):
            return v
        if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
            return str(v)
        return fmt(v)

    return atomic_write(path, _csv_text(header, ([cell(v) for v in row] for row in rows), meta))


def write_json(path, obj) -> Path:
    return atomic_write(path, json.dumps(obj, indent=2) + "\n")
