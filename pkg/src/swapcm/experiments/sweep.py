"""BLP non-Markovianity over a (gamma_se, gamma_ee) grid."""
from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

import swapcm
from swapcm import kernels
from swapcm.experiments.config import SweepRequest
from swapcm.experiments.export import RunManifest, emit_matrix_csv, write_json
from swapcm.models import run_distance_pair
from swapcm.qcore import named_density

CORNER = "gamma_se/gamma_ee (units of pi/2)"


@dataclass(frozen=True)
class SweepGrid:
    gamma_se_axis: tuple[float, ...]
    gamma_ee_axis: tuple[float, ...]
    n_collisions: int
    values: np.ndarray


def _cell(args) -> float:
    request, gse, gee, backend = args
    with kernels.use(backend):
        spec = request.cell_spec(gse, gee)
        return run_distance_pair(spec, named_density("plus"), named_density("minus")).nd


def compute_sweep(request: SweepRequest, workers: int = 1) -> SweepGrid:
    """N_D of the |+>, |-> pair on every grid cell.

    Cells are pure functions of their parameters and are stored by index, so
    the grid does not depend on ``workers`` or on scheduling.
    """
    cells = [(request, gse, gee, kernels.active())
             for gse in request.gamma_se_axis for gee in request.gamma_ee_axis]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            flat = list(pool.map(_cell, cells, chunksize=max(1, len(cells) // (4 * workers))))
    else:
        flat = [_cell(c) for c in cells]
    values = np.array(flat, dtype=float).reshape(len(request.gamma_se_axis), len(request.gamma_ee_axis))
    return SweepGrid(tuple(request.gamma_se_axis), tuple(request.gamma_ee_axis), request.n_collisions, values)


def sweep_summary(request: SweepRequest, grid: SweepGrid) -> dict:
    v = grid.values
    i, j = np.unravel_index(int(np.argmax(v)), v.shape)
    return {
        "se_kind": request.se_kind.value,
        "ee_kind": request.ee_kind.value,
        "n_collisions": grid.n_collisions,
        "joint_carryover": request.joint_carryover,
        "gamma_se_axis_over_halfpi": list(grid.gamma_se_axis),
        "gamma_ee_axis_over_halfpi": list(grid.gamma_ee_axis),
        "gamma_se_axis_radians": [g * np.pi / 2 for g in grid.gamma_se_axis],
        "gamma_ee_axis_radians": [g * np.pi / 2 for g in grid.gamma_ee_axis],
        "nd_max": float(v[i, j]),
        "nd_argmax_over_halfpi": [grid.gamma_se_axis[i], grid.gamma_ee_axis[j]],
        "markovian_cells": int(np.sum(v <= 1e-12)),
        "cells": int(v.size),
    }


def run_sweep(request: SweepRequest, out_dir, workers: int = 1, params: dict | None = None,
              run_name: str = "sweep") -> tuple[SweepGrid, RunManifest]:
    """Compute the grid and write ``sweep.csv``, ``summary.json`` and ``manifest.json``."""
    out_dir = Path(out_dir)
    start = time.perf_counter()
    grid = compute_sweep(request, workers)
    matrix = emit_matrix_csv(out_dir / "sweep.csv", grid.gamma_se_axis, grid.gamma_ee_axis, grid.values, CORNER)
    summary = write_json(out_dir / "summary.json", sweep_summary(request, grid))
    manifest = RunManifest(
        run=run_name,
        parameters=params or sweep_summary(request, grid),
        engine_version=swapcm.__version__,
        backend=kernels.active(),
        wall_clock_seconds=time.perf_counter() - start,
        outputs=[matrix.name, summary.name],
    )
    manifest.write(out_dir / "manifest.json")
    return grid, manifest
