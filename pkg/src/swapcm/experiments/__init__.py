"""Scenario registry, configuration files, sweeps and data export."""
from swapcm.experiments.config import (
    FIG3_GAMMA_EE_AXIS,
    FIG3_GAMMA_SE_AXIS,
    LoadedConfig,
    SweepRequest,
    dump_config,
    load_config,
    parse_config,
    resolve_config,
)
from swapcm.experiments.export import RunManifest, emit_trajectory_csv, read_csv, read_matrix_csv
from swapcm.experiments.scenarios import (
    CAPTION_TABLE,
    SCENARIOS,
    registry_self_test,
    run_config,
    run_scenario,
    scenario_config,
)
from swapcm.experiments.sweep import SweepGrid, compute_sweep, run_sweep

__all__ = [
    "CAPTION_TABLE", "FIG3_GAMMA_EE_AXIS", "FIG3_GAMMA_SE_AXIS", "LoadedConfig", "RunManifest", "SCENARIOS",
    "SweepGrid", "SweepRequest", "compute_sweep", "dump_config", "emit_trajectory_csv", "load_config",
    "parse_config", "read_csv", "read_matrix_csv", "registry_self_test", "resolve_config", "run_config",
    "run_scenario", "run_sweep", "scenario_config",
]
