import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from swapcm.errors import ConfigError
from swapcm.experiments.config import (
    FIG3_GAMMA_EE_AXIS,
    FIG3_GAMMA_SE_AXIS,
    SweepRequest,
    dump_config,
    load_config,
    parse_config,
    resolve_config,
)
from swapcm.models import HALF_PI, CollisionModelSpec, CouplingKind, SyncModelSpec
from swapcm.qcore import named_density, tensor


def test_minimal_markovian_config(tmp_path):
    path = tmp_path / "m.yaml"
    path.write_text("# partial SWAP homogenizer\nmodel: markovian\nse_kind: pswap\n"
                    "gamma_se_over_halfpi: 0.05\nn: 1100\n")
    cfg = load_config(path)
    spec = cfg.spec
    assert isinstance(spec, CollisionModelSpec)
    assert spec.se_kind is CouplingKind.COHERENT
    assert spec.gamma_se == 0.05 * HALF_PI and spec.gamma_ee == 0.0 and spec.n_collisions == 1100
    assert spec.env_state == named_density("zero")
    assert spec.initial_system == named_density("plus")


def test_sync_and_sweep_defaults():
    sync = parse_config("model: sync\ns1_kind: cswap\n").spec
    assert isinstance(sync, SyncModelSpec)
    assert sync.s1_kind is CouplingKind.INCOHERENT and sync.s2_kind is CouplingKind.COHERENT
    assert sync.initial_pair == tensor(named_density("plus"), named_density("L"))
    assert (sync.window_width, sync.window_stride, sync.dt, sync.n_collisions) == (100, 50, 0.04, 2500)
    sweep = parse_config("model: sweep\nee_kind: cswap\n").spec
    assert isinstance(sweep, SweepRequest)
    assert sweep.gamma_se_axis == FIG3_GAMMA_SE_AXIS and sweep.gamma_ee_axis == FIG3_GAMMA_EE_AXIS
    assert len(FIG3_GAMMA_SE_AXIS) == 11 and len(FIG3_GAMMA_EE_AXIS) == 9
    assert FIG3_GAMMA_SE_AXIS[0] == 0.0 and FIG3_GAMMA_EE_AXIS[-1] == 0.98
    cell = sweep.cell_spec(0.05, 0.93)
    assert cell.gamma_ee == 0.93 * HALF_PI and cell.n_collisions == 12000


def test_bloch_triple_states():
    cfg = parse_config("model: nonmarkovian\ninitial_system: [0.0, 0.6, 0.8]\nenv_state: one\n")
    assert np.allclose(cfg.spec.initial_system.matrix, [[0.9, -0.3j], [0.3j, 0.1]])
    assert cfg.spec.env_state == named_density("one")


@pytest.mark.parametrize("text,key", [
    ("model: markovian\ngamma_se_over_halfpi: abc\n", "gamma_se_over_halfpi"),
    ("model: markovian\ngamma_se_over_halfpi: 1.5\n", "gamma_se_over_halfpi"),
    ("model: markovian\nn: 0\n", "n"),
    ("model: markovian\nn: 10.5\n", "n"),
    ("model: markovian\ncolor: blue\n", "color"),
    ("model: markovian\ngamma_ee_over_halfpi: 0.9\n", "gamma_ee_over_halfpi"),
    ("model: markovian\nse_kind: iswap\n", "se_kind"),
    ("model: markovian\ninitial_system: psi\n", "initial_system"),
    ("model: markovian\ninitial_system: [1, 1, 0]\n", "initial_system"),
    ("model: nonmarkovian\njoint_carryover: maybe\n", "joint_carryover"),
    ("model: sync\ninitial_system: plus\n", "initial_system"),
    ("model: sync\nn: 50\n", "window_width"),
    ("model: sweep\ngamma_se_axis: [0.1, 0.05]\n", "gamma_se_axis"),
    ("model: sweep\ngamma_ee_axis: []\n", "gamma_ee_axis"),
    ("model: heat\n", "model"),
    ("se_kind: pswap\n", "model"),
    ("- 1\n- 2\n", "mapping"),
])
def test_invalid_configs_name_the_key(text, key):
    with pytest.raises(ConfigError, match=key):
        parse_config(text)


def test_out_of_range_message_gives_range():
    with pytest.raises(ConfigError, match=r"\[0.0, 1.0\]"):
        parse_config("model: markovian\ngamma_se_over_halfpi: -0.1\n")


def test_parse_and_io_errors(tmp_path):
    with pytest.raises(ConfigError, match="parse"):
        parse_config("model: [unclosed\n")
    with pytest.raises(ConfigError, match="cannot read"):
        load_config(tmp_path / "missing.yaml")


def test_empty_document_reports_missing_model():
    with pytest.raises(ConfigError, match="model"):
        parse_config("# nothing here\n")


@pytest.mark.parametrize("model", ["markovian", "nonmarkovian", "sync", "sweep"])
def test_round_trip_defaults(model):
    cfg = resolve_config({"model": model})
    again = parse_config(dump_config(cfg.params))
    assert again.params == cfg.params
    assert again.spec == cfg.spec


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(["pswap", "cswap"]), st.sampled_from(["pswap", "cswap"]),
       st.floats(0, 1), st.floats(0, 1), st.integers(1, 10**6), st.booleans(),
       st.sampled_from(["plus", "minus", "zero", "one", "L"]))
def test_round_trip_nonmarkovian(se, ee, gse, gee, n, joint, init):
    cfg = resolve_config({"model": "nonmarkovian", "se_kind": se, "ee_kind": ee, "gamma_se_over_halfpi": gse,
                          "gamma_ee_over_halfpi": gee, "n": n, "joint_carryover": joint, "initial_system": init})
    again = parse_config(dump_config(cfg.params))
    assert again.params == cfg.params and again.spec == cfg.spec


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(-1, 1, allow_nan=False), min_size=3, max_size=3), st.floats(0.001, 1.0),
       st.floats(-10, 10), st.integers(2, 5000))
def test_round_trip_sync(v, dt, omega, n):
    norm = math.sqrt(sum(c * c for c in v))
    if norm > 1:
        v = [c / norm * 0.999 for c in v]
    cfg = resolve_config({"model": "sync", "initial_system": [v, "minus"], "dt": dt, "omega1": omega, "n": n,
                          "window_width": 2, "window_stride": 1})
    again = parse_config(dump_config(cfg.params))
    assert again.params == cfg.params and again.spec == cfg.spec
