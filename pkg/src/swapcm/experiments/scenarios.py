"""Named scenarios and the runner that turns a resolved configuration into files.

Each scenario is a configuration mapping (see :mod:`swapcm.experiments.config`)
with coupling strengths in units of pi/2. ``CAPTION_TABLE`` repeats the
published figure parameters literally; :func:`registry_self_test` holds the
registry to it.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Mapping

import numpy as np

import swapcm
from swapcm import kernels
from swapcm.errors import ConfigError
from swapcm.experiments.config import LoadedConfig, resolve_config
from swapcm.experiments.export import (
    RunManifest,
    emit_bloch_path_csv,
    emit_matrix_csv,
    emit_series_csv,
    emit_trajectory_csv,
    write_json,
)
from swapcm.experiments.sweep import run_sweep
from swapcm.metrics import BLP_INCREMENT_FLOOR, pearson_stabilized
from swapcm.models import (
    HALF_PI,
    CollisionModelSpec,
    TrajectoryRecord,
    optimize_blp,
    run_distance_pair,
    run_single_qubit,
    run_sync,
    sync_records,
)
from swapcm.qcore import named_density

FIDELITY_TARGET = 0.99
PEARSON_TAIL = 10


@dataclass(frozen=True)
class Scenario:
    id: str
    title: str
    config: Mapping[str, Any]


_NM = {"model": "nonmarkovian", "gamma_se_over_halfpi": 0.05, "gamma_ee_over_halfpi": 0.93, "n": 1200,
       "initial_system": "plus", "env_state": "zero"}
_SYNC = {"model": "sync", "gamma_se_over_halfpi": 0.03, "omega1": 1.0, "omega2": 1.0, "dt": 0.04, "n": 2500,
         "window_width": 100, "window_stride": 50, "initial_system": ["plus", "L"], "env_state": "zero"}

SCENARIOS: dict[str, Scenario] = {s.id: s for s in (
    Scenario("fig1-pswap", "Markovian partial-SWAP homogenizer",
             {"model": "markovian", "se_kind": "pswap", "gamma_se_over_halfpi": 0.05, "n": 1100,
              "initial_system": "plus", "env_state": "zero"}),
    Scenario("fig1-cswap", "Markovian controlled-SWAP homogenizer",
             {"model": "markovian", "se_kind": "cswap", "gamma_se_over_halfpi": 0.05, "n": 1100,
              "initial_system": "plus", "env_state": "zero"}),
    Scenario("fig2-pp", "PSWAP-PSWAP trace distance and N_D", {**_NM, "se_kind": "pswap", "ee_kind": "pswap"}),
    Scenario("fig2-pc", "PSWAP-CSWAP trace distance and N_D", {**_NM, "se_kind": "pswap", "ee_kind": "cswap"}),
    Scenario("fig3-pp-sweep", "PSWAP-PSWAP N_D over (gamma_se, gamma_ee)",
             {"model": "sweep", "se_kind": "pswap", "ee_kind": "pswap", "n": 12000, "env_state": "zero"}),
    Scenario("fig3-pc-sweep", "PSWAP-CSWAP N_D over (gamma_se, gamma_ee)",
             {"model": "sweep", "se_kind": "pswap", "ee_kind": "cswap", "n": 12000, "env_state": "zero"}),
    Scenario("fig4-cc", "CSWAP-CSWAP trace distance", {**_NM, "se_kind": "cswap", "ee_kind": "cswap"}),
    Scenario("fig4-cp", "CSWAP-PSWAP trace distance", {**_NM, "se_kind": "cswap", "ee_kind": "pswap"}),
    Scenario("fig5-pp", "Two-qubit synchronization, PSWAP on both", {**_SYNC, "s1_kind": "pswap", "s2_kind": "pswap"}),
    Scenario("fig6-cc", "Two-qubit synchronization, CSWAP on both", {**_SYNC, "s1_kind": "cswap", "s2_kind": "cswap"}),
    Scenario("fig7-cp", "Two-qubit synchronization, CSWAP on s1, PSWAP on s2",
             {**_SYNC, "s1_kind": "cswap", "s2_kind": "pswap"}),
)}

# Figure parameters as printed: (model, kinds, gamma_se, gamma_ee, N, initial, env)
# with couplings in units of pi/2. Sync rows also carry (omega1, omega2, window, overlap).
CAPTION_TABLE: dict[str, dict[str, Any]] = {
    "fig1-pswap": dict(kinds=("pswap",), gamma_se=0.05, gamma_ee=0.0, n=1100, initial="plus", env="zero"),
    "fig1-cswap": dict(kinds=("cswap",), gamma_se=0.05, gamma_ee=0.0, n=1100, initial="plus", env="zero"),
    "fig2-pp": dict(kinds=("pswap", "pswap"), gamma_se=0.05, gamma_ee=0.93, n=1200, initial="plus", env="zero"),
    "fig2-pc": dict(kinds=("pswap", "cswap"), gamma_se=0.05, gamma_ee=0.93, n=1200, initial="plus", env="zero"),
    "fig3-pp-sweep": dict(kinds=("pswap", "pswap"), gamma_se=(0.00, 0.10), gamma_ee=(0.90, 0.98), n=12000,
                          env="zero"),
    "fig3-pc-sweep": dict(kinds=("pswap", "cswap"), gamma_se=(0.00, 0.10), gamma_ee=(0.90, 0.98), n=12000,
                          env="zero"),
    "fig4-cc": dict(kinds=("cswap", "cswap"), gamma_se=0.05, gamma_ee=0.93, n=1200, initial="plus", env="zero"),
    "fig4-cp": dict(kinds=("cswap", "pswap"), gamma_se=0.05, gamma_ee=0.93, n=1200, initial="plus", env="zero"),
    "fig5-pp": dict(kinds=("pswap", "pswap"), gamma_se=0.03, n=2500, initial=("plus", "L"), env="zero",
                    omega=(1.0, 1.0), window=(100, 50)),
    "fig6-cc": dict(kinds=("cswap", "cswap"), gamma_se=0.03, n=2500, initial=("plus", "L"), env="zero",
                    omega=(1.0, 1.0), window=(100, 50)),
    "fig7-cp": dict(kinds=("cswap", "pswap"), gamma_se=0.03, n=2500, initial=("plus", "L"), env="zero",
                    omega=(1.0, 1.0), window=(100, 50)),
}


def scenario_config(scenario_id: str, joint_carryover: bool = False) -> LoadedConfig:
    try:
        scenario = SCENARIOS[scenario_id]
    except KeyError:
        raise ConfigError(f"unknown scenario {scenario_id!r}; available: {', '.join(SCENARIOS)}") from None
    raw = dict(scenario.config)
    if joint_carryover:
        if raw["model"] not in ("nonmarkovian", "sweep"):
            raise ConfigError(f"--joint-carryover applies only to non-Markovian scenarios, not {scenario_id}")
        raw["joint_carryover"] = True
    return resolve_config(raw)


def _observed_caption_row(params: Mapping[str, Any]) -> dict[str, Any]:
    model = params["model"]
    if model == "sync":
        return dict(kinds=(params["s1_kind"], params["s2_kind"]), gamma_se=params["gamma_se_over_halfpi"],
                    n=params["n"], initial=tuple(params["initial_system"]), env=params["env_state"],
                    omega=(params["omega1"], params["omega2"]),
                    window=(params["window_width"], params["window_stride"]))
    if model == "sweep":
        return dict(kinds=(params["se_kind"], params["ee_kind"]),
                    gamma_se=(params["gamma_se_axis"][0], params["gamma_se_axis"][-1]),
                    gamma_ee=(params["gamma_ee_axis"][0], params["gamma_ee_axis"][-1]),
                    n=params["n"], env=params["env_state"])
    kinds = (params["se_kind"],) if model == "markovian" else (params["se_kind"], params["ee_kind"])
    return dict(kinds=kinds, gamma_se=params["gamma_se_over_halfpi"],
                gamma_ee=params.get("gamma_ee_over_halfpi", 0.0), n=params["n"],
                initial=params["initial_system"], env=params["env_state"])


def registry_self_test() -> list[str]:
    """Mismatches between the registry and ``CAPTION_TABLE``; empty when consistent."""
    problems = []
    if set(SCENARIOS) != set(CAPTION_TABLE):
        problems.append(f"id sets differ: {sorted(set(SCENARIOS) ^ set(CAPTION_TABLE))}")
    for sid in sorted(set(SCENARIOS) & set(CAPTION_TABLE)):
        observed = _observed_caption_row(scenario_config(sid).params)
        if observed != CAPTION_TABLE[sid]:
            problems.append(f"{sid}: registry {observed} != caption {CAPTION_TABLE[sid]}")
    return problems


# ---------------------------------------------------------------------------
# runners


def _with_radians(params: Mapping[str, Any]) -> dict[str, Any]:
    out = dict(params)
    for key in ("gamma_se", "gamma_ee"):
        if f"{key}_over_halfpi" in params:
            out[f"{key}_radians"] = params[f"{key}_over_halfpi"] * HALF_PI
    return out


def _first_at_least(values: np.ndarray, target: float) -> int | None:
    hits = np.flatnonzero(values >= target)
    return int(hits[0]) if hits.size else None


def _path_summary(records: list[TrajectoryRecord]) -> dict[str, Any]:
    b = np.array([r.bloch for r in records])
    fid = np.array([r.fidelity_to_env for r in records])
    dz = np.diff(b[:, 2])
    return {
        "final_fidelity": float(fid[-1]),
        "first_collision_fidelity_0.99": _first_at_least(fid, FIDELITY_TARGET),
        "max_abs_bloch_y": float(np.max(np.abs(b[:, 1]))),
        "bloch_arc_length": float(np.sum(np.linalg.norm(np.diff(b, axis=0), axis=1))),
        "bloch_z_monotone": bool(np.all(dz >= -BLP_INCREMENT_FLOOR)),
        "max_bloch_z_decrease": float(max(0.0, -float(dz.min()))),
        "max_entropy": float(max(r.entropy for r in records)),
        "final_coherence": float(records[-1].coherence),
    }


def _run_markovian(spec: CollisionModelSpec, out: Path) -> tuple[dict, list[Path]]:
    records = run_single_qubit(spec)
    files = [emit_trajectory_csv(records, out / "trajectory.csv"), emit_bloch_path_csv(records, out / "bloch_path.csv")]
    return _path_summary(records), files


def _run_nonmarkovian(spec: CollisionModelSpec, out: Path, grid_theta, grid_phi) -> tuple[dict, list[Path]]:
    pair = run_distance_pair(spec, named_density("plus"), named_density("minus"))
    records = [replace(r, trace_distance=float(d))
               for r, d in zip(run_single_qubit(spec), pair.distances)]
    files = [
        emit_trajectory_csv(records, out / "trajectory.csv"),
        emit_bloch_path_csv(records, out / "bloch_path.csv"),
        emit_series_csv(out / "distance.csv", ["collision", "trace_distance", "nd_running"],
                        [range(len(pair.distances)), pair.distances, pair.running_nd]),
    ]
    summary = _path_summary(records)
    summary.update({"pair": ["plus", "minus"], "nd": pair.nd, "distance_monotone": pair.monotone,
                    "final_trace_distance": float(pair.distances[-1])})
    if grid_theta is not None or grid_phi is not None:
        opt = optimize_blp(spec, grid_theta or 32, grid_phi or 64)
        files.append(emit_matrix_csv(out / "blp_grid.csv", opt.thetas, opt.phis, opt.values, "theta/phi (radians)"))
        summary["blp_optimum"] = {"nd_max": opt.nd_max, "theta": opt.theta, "phi": opt.phi,
                                  "grid": [len(opt.thetas), len(opt.phis)],
                                  "all_zero": bool(np.all(opt.values <= BLP_INCREMENT_FLOOR))}
    return summary, files


def _run_sync(spec, out: Path) -> tuple[dict, list[Path]]:
    result = run_sync(spec)
    records = sync_records(result)
    ps = result.pearson
    files = [
        emit_trajectory_csv(records, out / "trajectory.csv"),
        emit_bloch_path_csv(records, out / "bloch_path.csv"),
        emit_series_csv(out / "pearson.csv", ["window_start", "pearson"], [ps.starts, ps.values]),
    ]
    _, defined = ps.defined()
    fids = {"s1": result.fidelity_s1, "s2": result.fidelity_s2, "joint": result.fidelity_joint}
    summary = {
        "final_pearson": ps.final(),
        "pearson_tail": defined[-PEARSON_TAIL:].tolist(),
        "pearson_windows": int(ps.values.size),
        "pearson_undefined_windows": int(np.isnan(ps.values).sum()),
        "pearson_stabilized": pearson_stabilized(ps, PEARSON_TAIL),
        "final_fidelity": {k: float(v[-1]) for k, v in fids.items()},
        "first_collision_fidelity_0.99": {k: _first_at_least(v, FIDELITY_TARGET) for k, v in fids.items()},
    }
    return summary, files


def run_config(loaded: LoadedConfig, out_dir, run_name: str = "custom", grid_theta: int | None = None,
               grid_phi: int | None = None, workers: int = 1) -> RunManifest:
    """Execute a resolved configuration and write its files under ``out_dir``."""
    out = Path(out_dir)
    params = {"run": run_name, **_with_radians(loaded.params)}
    if loaded.model == "sweep":
        _, manifest = run_sweep(loaded.spec, out, workers=workers, params=params, run_name=run_name)
        return manifest
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {out}: {exc.strerror or exc}") from exc
    start = time.perf_counter()
    if loaded.model == "markovian":
        summary, files = _run_markovian(loaded.spec, out)
    elif loaded.model == "nonmarkovian":
        summary, files = _run_nonmarkovian(loaded.spec, out, grid_theta, grid_phi)
    else:
        summary, files = _run_sync(loaded.spec, out)
    files.append(write_json(out / "summary.json", {"parameters": params, **summary}))
    manifest = RunManifest(
        run=run_name,
        parameters=params,
        engine_version=swapcm.__version__,
        backend=kernels.active(),
        wall_clock_seconds=time.perf_counter() - start,
        outputs=[f.name for f in files],
    )
    manifest.write(out / "manifest.json")
    return manifest


def run_scenario(scenario_id: str, out_dir, grid_theta: int | None = None, grid_phi: int | None = None,
                 joint_carryover: bool = False, workers: int = 1) -> RunManifest:
    loaded = scenario_config(scenario_id, joint_carryover)
    return run_config(loaded, out_dir, scenario_id, grid_theta, grid_phi, workers)


def describe(scenario_id: str) -> str:
    """One line: id, title and the caption parameters."""
    s = SCENARIOS[scenario_id]
    c = CAPTION_TABLE[scenario_id]
    parts = [f"kinds={'-'.join(c['kinds'])}"]
    if isinstance(c["gamma_se"], tuple):
        parts.append(f"gamma_se={c['gamma_se'][0]:.2f}..{c['gamma_se'][1]:.2f}(pi/2)")
        parts.append(f"gamma_ee={c['gamma_ee'][0]:.2f}..{c['gamma_ee'][1]:.2f}(pi/2)")
    else:
        parts.append(f"gamma_se={c['gamma_se']:.2f}(pi/2)")
        if "gamma_ee" in c:
            parts.append(f"gamma_ee={c['gamma_ee']:.2f}(pi/2)")
    parts.append(f"N={c['n']}")
    if "initial" in c:
        init = c["initial"]
        parts.append("initial=" + ("x".join(init) if isinstance(init, tuple) else init))
    if "omega" in c:
        parts.append(f"omega={c['omega'][0]:g},{c['omega'][1]:g} windows={c['window'][0]}/{c['window'][1]}")
    return f"{scenario_id:<15} {s.title}  [{' '.join(parts)}]"


__all__ = ["CAPTION_TABLE", "SCENARIOS", "Scenario", "describe", "registry_self_test", "run_config",
           "run_scenario", "scenario_config"]
