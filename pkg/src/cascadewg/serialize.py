"""Deterministic CSV / JSON writers and readers for scenario outputs.

All floats are written in full double precision (17 significant digits) and
JSON objects with sorted keys, so identical inputs always serialize to
identical bytes.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .cascade import Trace
from .errors import ConfigError

TRACE_COLUMNS = ("t_ns", "p_in_per_ns", "p_f_per_ns", "p_b_per_ns", "sum_rho_ee")
SWEEP_COLUMNS = (
    "N",
    "A1_over_pi",
    "P1_watts",
    "n_abs",
    "n_em_f",
    "n_em_b",
    "eta_f",
    "eta_b",
    "p_exc",
    "tau_ns",
)


def fmt(x: float) -> str:
    return f"{x:.17e}"


def write_trace_csv(path: Path, trace: Trace) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(TRACE_COLUMNS) + "\n")
        for i in range(trace.times.size):
            fh.write(
                ",".join(
                    fmt(v)
                    for v in (
                        trace.times[i],
                        trace.p_in[i],
                        trace.p_f[i],
                        trace.p_b[i],
                        trace.sum_rho_ee[i],
                    )
                )
                + "\n"
            )


def trace_to_dict(trace: Trace) -> dict:
    return {
        "t_ns": trace.times.tolist(),
        "p_in_per_ns": trace.p_in.tolist(),
        "p_f_per_ns": trace.p_f.tolist(),
        "p_b_per_ns": trace.p_b.tolist(),
        "sum_rho_ee": trace.sum_rho_ee.tolist(),
    }


def write_sweep_csv(path: Path, rows: Iterable[Sequence]) -> None:
    """Rows are (N, A1_over_pi, P1_watts, n_abs, ..., tau_ns); N is integral."""
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(SWEEP_COLUMNS) + "\n")
        for row in rows:
            n, *rest = row
            fh.write(str(int(n)) + "," + ",".join(fmt(v) for v in rest) + "\n")


def write_json(path: Path, obj: Mapping) -> None:
    with open(path, "w", newline="\n") as fh:
        json.dump(_jsonable(obj), fh, sort_keys=True, indent=2, allow_nan=True)
        fh.write("\n")


def _jsonable(obj):
    if isinstance(obj, Mapping):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, float) and math.isnan(obj):
        return "nan"
    return obj


def read_columns(path: Path, required: Sequence[str]) -> dict[str, np.ndarray]:
    """Read named columns from a headed CSV file.

    Raises ConfigError naming the file and the first offending line when the
    header misses a required column or a cell fails to parse.
    """
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"{path}: file not found")
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ConfigError(f"{path}: empty file, expected a header row") from None
        header = [h.strip() for h in header]
        missing = [c for c in required if c not in header]
        if missing:
            raise ConfigError(f"{path}: header misses column(s) {missing}, got {header}")
        idx = {c: header.index(c) for c in required}
        data: dict[str, list[float]] = {c: [] for c in required}
        for line_no, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) < len(header):
                raise ConfigError(
                    f"{path}:{line_no}: expected {len(header)} cells, got {len(row)}"
                )
            for c in required:
                cell = row[idx[c]].strip()
                try:
                    data[c].append(float(cell))
                except ValueError:
                    raise ConfigError(
                        f"{path}:{line_no}: cell {cell!r} in column {c} is not a number"
                    ) from None
    return {c: np.asarray(v) for c, v in data.items()}
