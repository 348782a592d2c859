"""Strict readers for the simulator's documented CSV schemas.

Only the two published layouts are accepted: time traces
(t_ns, p_in_per_ns, p_f_per_ns, p_b_per_ns, sum_rho_ee) and sweep tables
(N, A1_over_pi, P1_watts, n_abs, n_em_f, n_em_b, eta_f, eta_b, p_exc,
tau_ns). Parse problems always name the file and line.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

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


class CsvFormatError(Exception):
    """Input file does not follow the documented schema."""

    def __init__(self, path, line: int | None, message: str):
        self.path = Path(path)
        self.line = line
        where = f"{self.path}:{line}" if line is not None else str(self.path)
        super().__init__(f"{where}: {message}")


def _read(path: Path, columns: tuple[str, ...]) -> dict[str, np.ndarray]:
    path = Path(path)
    if not path.exists():
        raise CsvFormatError(path, None, "file not found")
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise CsvFormatError(path, 1, "empty file, expected a header row") from None
        if header != list(columns):
            raise CsvFormatError(
                path, 1, f"expected columns {','.join(columns)}, got {','.join(header)}"
            )
        data: list[list[float]] = []
        for line_no, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(columns):
                raise CsvFormatError(
                    path, line_no, f"expected {len(columns)} cells, got {len(row)}"
                )
            try:
                data.append([float(c) for c in row])
            except ValueError as exc:
                raise CsvFormatError(path, line_no, f"not a number: {exc}") from None
    if not data:
        raise CsvFormatError(path, None, "no data rows")
    arr = np.asarray(data)
    return {name: arr[:, i] for i, name in enumerate(columns)}


def read_trace(path) -> dict[str, np.ndarray]:
    return _read(Path(path), TRACE_COLUMNS)


def read_sweep(path) -> dict[str, np.ndarray]:
    return _read(Path(path), SWEEP_COLUMNS)
