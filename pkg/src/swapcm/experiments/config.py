"""Run configuration files.

A configuration is a small YAML mapping; comments are allowed. Coupling
strengths are written in units of pi/2 (``gamma_se_over_halfpi: 0.05``) and
converted to radians when the model spec is built. Example::

    # Markovian partial-SWAP homogenizer
    model: markovian
    se_kind: pswap
    gamma_se_over_halfpi: 0.05
    n: 1100

States are given by name (``plus``, ``minus``, ``zero``, ``one``, ``L``) or
as an explicit Bloch triple ``[x, y, z]``. Sync models take a list of two
such entries for ``initial_system``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping

import yaml

from swapcm.errors import ConfigError
from swapcm.models import HALF_PI, CollisionModelSpec, CouplingKind, SyncModelSpec
from swapcm.qcore import NAMED_STATES, DensityMatrix, density_from_bloch, named_density, tensor

MODELS = ("markovian", "nonmarkovian", "sync", "sweep")

FIG3_GAMMA_SE_AXIS = tuple(round(0.01 * k, 2) for k in range(11))
FIG3_GAMMA_EE_AXIS = tuple(round(0.90 + 0.01 * k, 2) for k in range(9))

DEFAULTS: dict[str, dict[str, Any]] = {
    "markovian": {
        "se_kind": "pswap",
        "gamma_se_over_halfpi": 0.05,
        "n": 1100,
        "initial_system": "plus",
        "env_state": "zero",
    },
    "nonmarkovian": {
        "se_kind": "pswap",
        "ee_kind": "pswap",
        "gamma_se_over_halfpi": 0.05,
        "gamma_ee_over_halfpi": 0.93,
        "n": 1200,
        "initial_system": "plus",
        "env_state": "zero",
        "joint_carryover": False,
    },
    "sync": {
        "s1_kind": "pswap",
        "s2_kind": "pswap",
        "gamma_se_over_halfpi": 0.03,
        "omega1": 1.0,
        "omega2": 1.0,
        "dt": 0.04,
        "n": 2500,
        "window_width": 100,
        "window_stride": 50,
        "initial_system": ["plus", "L"],
        "env_state": "zero",
    },
    "sweep": {
        "se_kind": "pswap",
        "ee_kind": "pswap",
        "gamma_se_axis": list(FIG3_GAMMA_SE_AXIS),
        "gamma_ee_axis": list(FIG3_GAMMA_EE_AXIS),
        "n": 12000,
        "env_state": "zero",
        "joint_carryover": False,
    },
}

KEY_ORDER = (
    "model", "se_kind", "ee_kind", "s1_kind", "s2_kind", "gamma_se_over_halfpi", "gamma_ee_over_halfpi",
    "gamma_se_axis", "gamma_ee_axis", "omega1", "omega2", "dt", "n", "window_width", "window_stride",
    "initial_system", "env_state", "joint_carryover",
)


@dataclass(frozen=True)
class SweepRequest:
    """Grid of BLP measures over (gamma_se, gamma_ee), axes in units of pi/2."""

    se_kind: CouplingKind
    ee_kind: CouplingKind
    gamma_se_axis: tuple[float, ...]
    gamma_ee_axis: tuple[float, ...]
    n_collisions: int
    env_state: DensityMatrix
    joint_carryover: bool = False

    def cell_spec(self, gse: float, gee: float) -> CollisionModelSpec:
        return CollisionModelSpec(
            se_kind=self.se_kind,
            ee_kind=self.ee_kind,
            gamma_se=gse * HALF_PI,
            gamma_ee=gee * HALF_PI,
            n_collisions=self.n_collisions,
            env_state=self.env_state,
            joint_carryover=self.joint_carryover,
        )


@dataclass(frozen=True)
class LoadedConfig:
    model: str
    params: dict[str, Any]
    spec: CollisionModelSpec | SyncModelSpec | SweepRequest


def _fail(key: str, message: str) -> ConfigError:
    return ConfigError(f"{key}: {message}")


def _kind(key, value) -> str:
    try:
        return CouplingKind.parse(value).value
    except ValueError:
        raise _fail(key, f"got {value!r}; accepted values: pswap, cswap") from None


def _real(key, value, lo=-math.inf, hi=math.inf) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise _fail(key, f"expected a real number, got {value!r}")
    v = float(value)
    if not math.isfinite(v) or not lo <= v <= hi:
        raise _fail(key, f"value {value!r} outside accepted range [{lo}, {hi}]")
    return v


def _integer(key, value, lo=1, hi=10**7) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise _fail(key, f"expected an integer, got {value!r}")
    if not lo <= value <= hi:
        raise _fail(key, f"value {value} outside accepted range [{lo}, {hi}]")
    return int(value)


def _flag(key, value) -> bool:
    if not isinstance(value, bool):
        raise _fail(key, f"expected true or false, got {value!r}")
    return value


def _state(key, value):
    if isinstance(value, str):
        if value not in NAMED_STATES:
            raise _fail(key, f"unknown state {value!r}; accepted: {', '.join(NAMED_STATES)} or [x, y, z]")
        return value
    if isinstance(value, (list, tuple)) and len(value) == 3:
        v = [_real(key, c, -1.0, 1.0) for c in value]
        if math.sqrt(sum(c * c for c in v)) > 1.0 + 1e-10:
            raise _fail(key, f"Bloch vector {v} lies outside the unit ball")
        return v
    raise _fail(key, f"expected a state name or a Bloch triple [x, y, z], got {value!r}")


def _axis(key, value) -> list[float]:
    if not isinstance(value, (list, tuple)) or not value:
        raise _fail(key, "expected a non-empty list of coupling strengths in units of pi/2")
    axis = [_real(key, v, 0.0, 1.0) for v in value]
    if any(b <= a for a, b in zip(axis, axis[1:])):
        raise _fail(key, "axis values must be strictly increasing")
    return axis


def state_density(entry) -> DensityMatrix:
    if isinstance(entry, str):
        return named_density(entry)
    return density_from_bloch(entry)


def _validate(model: str, raw: Mapping[str, Any]) -> dict[str, Any]:
    allowed = DEFAULTS[model]
    unknown = sorted(set(raw) - set(allowed))
    if unknown:
        raise ConfigError(f"{unknown[0]}: unknown key for model {model!r}; accepted keys: {', '.join(allowed)}")
    p = {**allowed, **raw}
    out: dict[str, Any] = {"model": model}
    for key in ("se_kind", "ee_kind", "s1_kind", "s2_kind"):
        if key in p:
            out[key] = _kind(key, p[key])
    for key in ("gamma_se_over_halfpi", "gamma_ee_over_halfpi"):
        if key in p:
            out[key] = _real(key, p[key], 0.0, 1.0)
    for key in ("gamma_se_axis", "gamma_ee_axis"):
        if key in p:
            out[key] = _axis(key, p[key])
    for key in ("omega1", "omega2"):
        if key in p:
            out[key] = _real(key, p[key])
    if "dt" in p:
        out["dt"] = _real("dt", p["dt"], 0.0)
    out["n"] = _integer("n", p["n"])
    if model == "sync":
        out["window_width"] = _integer("window_width", p["window_width"], 2, out["n"])
        out["window_stride"] = _integer("window_stride", p["window_stride"], 1)
        init = p["initial_system"]
        if not isinstance(init, (list, tuple)) or len(init) != 2 or all(isinstance(c, (int, float)) for c in init):
            raise _fail("initial_system", "sync models need a list of two states, e.g. [plus, L]")
        out["initial_system"] = [_state("initial_system", c) for c in init]
    elif "initial_system" in p:
        out["initial_system"] = _state("initial_system", p["initial_system"])
    out["env_state"] = _state("env_state", p["env_state"])
    if "joint_carryover" in p:
        out["joint_carryover"] = _flag("joint_carryover", p["joint_carryover"])
    return {k: out[k] for k in KEY_ORDER if k in out}


def build_spec(params: Mapping[str, Any]):
    model = params["model"]
    env = state_density(params["env_state"])
    if model == "markovian":
        return CollisionModelSpec(
            se_kind=params["se_kind"],
            gamma_se=params["gamma_se_over_halfpi"] * HALF_PI,
            gamma_ee=0.0,
            n_collisions=params["n"],
            initial_system=state_density(params["initial_system"]),
            env_state=env,
        )
    if model == "nonmarkovian":
        return CollisionModelSpec(
            se_kind=params["se_kind"],
            ee_kind=params["ee_kind"],
            gamma_se=params["gamma_se_over_halfpi"] * HALF_PI,
            gamma_ee=params["gamma_ee_over_halfpi"] * HALF_PI,
            n_collisions=params["n"],
            initial_system=state_density(params["initial_system"]),
            env_state=env,
            joint_carryover=params["joint_carryover"],
        )
    if model == "sync":
        a, b = (state_density(s) for s in params["initial_system"])
        return SyncModelSpec(
            s1_kind=params["s1_kind"],
            s2_kind=params["s2_kind"],
            gamma_se=params["gamma_se_over_halfpi"] * HALF_PI,
            omega1=params["omega1"],
            omega2=params["omega2"],
            dt=params["dt"],
            n_collisions=params["n"],
            initial_pair=tensor(a, b),
            env_state=env,
            window_width=params["window_width"],
            window_stride=params["window_stride"],
        )
    return SweepRequest(
        se_kind=CouplingKind.parse(params["se_kind"]),
        ee_kind=CouplingKind.parse(params["ee_kind"]),
        gamma_se_axis=tuple(params["gamma_se_axis"]),
        gamma_ee_axis=tuple(params["gamma_ee_axis"]),
        n_collisions=params["n"],
        env_state=env,
        joint_carryover=params["joint_carryover"],
    )


def resolve_config(raw: Mapping[str, Any]) -> LoadedConfig:
    """Validate a parsed mapping, fill defaults and build the model spec."""
    if not isinstance(raw, Mapping):
        raise ConfigError(f"configuration must be a key-value mapping, got {type(raw).__name__}")
    raw = dict(raw)
    model = raw.pop("model", None)
    if model not in MODELS:
        raise _fail("model", f"got {model!r}; accepted values: {', '.join(MODELS)}")
    params = _validate(model, raw)
    try:
        spec = build_spec(params)
    except (ValueError, TypeError) as exc:
        raise ConfigError(str(exc)) from exc
    return LoadedConfig(model, params, spec)


def parse_config(text: str) -> LoadedConfig:
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"could not parse configuration: {exc}") from exc
    return resolve_config(raw if raw is not None else {})


def load_config(path) -> LoadedConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror or exc}") from exc
    return parse_config(text)


def dump_config(params: Mapping[str, Any]) -> str:
    """Serialize resolved parameters; :func:`parse_config` reads them back unchanged."""
    ordered = {k: params[k] for k in KEY_ORDER if k in params}
    return yaml.safe_dump(ordered, sort_keys=False, default_flow_style=None)
