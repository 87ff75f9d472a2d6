"""CSV and JSON writers for trajectories, sweeps, summaries and manifests."""
from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from swapcm.models import TrajectoryRecord


def fmt(x: float) -> str:
    """17 significant digits: enough to reload any double exactly."""
    return format(float(x), ".17g")


def _write_rows(path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([v if isinstance(v, (int, str)) else fmt(v) for v in row])
    return path


def trajectory_columns(record: TrajectoryRecord) -> list[str]:
    if isinstance(record.bloch[0], tuple):
        cols = ["collision",
                "s1_bloch_x", "s1_bloch_y", "s1_bloch_z", "s2_bloch_x", "s2_bloch_y", "s2_bloch_z",
                "fidelity", "entropy", "coherence"]
    else:
        cols = ["collision", "bloch_x", "bloch_y", "bloch_z", "fidelity", "entropy", "coherence"]
    if record.trace_distance is not None:
        cols.append("trace_distance")
    if record.sigma_x is not None:
        cols += ["sigma_x_s1", "sigma_x_s2"]
    if record.marginal_fidelities is not None:
        cols += ["fidelity_s1", "fidelity_s2"]
    return cols


def _record_row(r: TrajectoryRecord) -> list:
    bloch = [c for v in r.bloch for c in v] if isinstance(r.bloch[0], tuple) else list(r.bloch)
    row = [r.collision, *bloch, r.fidelity_to_env, r.entropy, r.coherence]
    if r.trace_distance is not None:
        row.append(r.trace_distance)
    if r.sigma_x is not None:
        row += list(r.sigma_x)
    if r.marginal_fidelities is not None:
        row += list(r.marginal_fidelities)
    return row


def emit_trajectory_csv(records: Sequence[TrajectoryRecord], path) -> Path:
    """One row per collision; the column set follows the first record's populated fields."""
    if not records:
        raise ValueError("no trajectory records to write")
    return _write_rows(path, trajectory_columns(records[0]), (_record_row(r) for r in records))


def emit_bloch_path_csv(records: Sequence[TrajectoryRecord], path) -> Path:
    if not records:
        raise ValueError("no trajectory records to write")
    if isinstance(records[0].bloch[0], tuple):
        header = ["collision", "s1_x", "s1_y", "s1_z", "s2_x", "s2_y", "s2_z"]
        rows = ([r.collision, *r.bloch[0], *r.bloch[1]] for r in records)
    else:
        header = ["collision", "x", "y", "z"]
        rows = ([r.collision, *r.bloch] for r in records)
    return _write_rows(path, header, rows)


def emit_series_csv(path, header: Sequence[str], columns: Sequence[Sequence[Any]]) -> Path:
    return _write_rows(path, header, zip(*columns))


def emit_matrix_csv(path, row_axis: Sequence[float], col_axis: Sequence[float], values: np.ndarray,
                    corner: str) -> Path:
    rows = ([fmt(a), *map(fmt, vals)] for a, vals in zip(row_axis, np.asarray(values)))
    return _write_rows(path, [corner, *map(fmt, col_axis)], rows)


def read_csv(path) -> tuple[list[str], np.ndarray]:
    """Header and float array of a file written by this module ('nan' cells allowed)."""
    with Path(path).open(encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        data = [[float(v) for v in row] for row in reader]
    return header, np.array(data, dtype=float)


def read_matrix_csv(path) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    header, data = read_csv(path)
    return data[:, 0], np.array([float(v) for v in header[1:]]), data[:, 1:]


def jsonable(value):
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [jsonable(v) for v in value.tolist()]
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.integer, int)):
        return int(value)
    if isinstance(value, (np.floating, float)):
        v = float(value)
        return v if math.isfinite(v) else None
    return value


def write_json(path, payload: dict) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(jsonable(payload), indent=2, sort_keys=False) + "\n", encoding="utf-8")
    return path


@dataclass
class RunManifest:
    run: str
    parameters: dict
    engine_version: str
    backend: str
    wall_clock_seconds: float
    outputs: list[str] = field(default_factory=list)

    def write(self, path) -> Path:
        return write_json(path, asdict(self))
