"""Scenario description: node geometry, deployment area, and all physical
parameters of the simulated environment, plus JSON config load/save."""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field, fields
from pathlib import Path

SCHEMA_VERSION = 1

PHASE_MODES = ("coherent", "random")


class ParseError(ValueError):
    """Raised when a config file is not well-formed JSON or not a mapping."""


class ValidationError(ValueError):
    """Raised when a config value violates a documented invariant.

    The message names the offending field as ``TypeName.field``.
    """


@dataclass(frozen=True)
class Point2D:
    """A position in the 2D scene, in meters."""

    x: float
    y: float


@dataclass(frozen=True)
class DeploymentArea:
    """Axis-aligned rectangle of admissible RIS positions, in meters."""

    x_min: float = 0.0
    x_max: float = 100.0
    y_min: float = 0.0
    y_max: float = 100.0


@dataclass(frozen=True)
class LinkBudget:
    """Transmit and noise power, both in dBm."""

    transmit_power_dbm: float = 20.0
    noise_power_dbm: float = -94.0


@dataclass(frozen=True)
class PathLossParams:
    """Log-distance path loss: loss at 1 m, exponent, shadowing std (dB)."""

    pl_1m_db: float = 30.0
    exponent: float = 2.5
    shadow_sigma_db: float = 3.0


@dataclass(frozen=True)
class SmallScaleParams:
    """Clustered multi-tap fading: tap count, per-tap power decay ratio,
    and the LoS-to-scatter power ratio (Rician K) in dB."""

    num_taps: int = 6
    decay_factor: float = 0.5
    rician_k_db: float = 10.0


@dataclass(frozen=True)
class TemporalParams:
    """Frame-to-frame AR(1) correlation and number of evaluated frames."""

    rho: float = 0.92
    num_frames: int = 40


@dataclass(frozen=True)
class BlockageSpec:
    """Which direct links are obstructed, and the extra attenuation (dB)
    applied to each flagged link."""

    bs_bob: bool = True
    bs_eve: bool = False
    bs_target: bool = False
    blockage_loss_db: float = 30.0


@dataclass(frozen=True)
class RisGainParams:
    """Reflection efficiency per element and the orientation loss exponent
    controlling the angular selectivity of the surface."""

    element_efficiency: float = 0.8
    orientation_exponent: float = 2.0


@dataclass(frozen=True)
class ScenarioConfig:
    """Immutable description of one simulated world.

    Instances are safe to share read-only across concurrent workers; all
    randomness is derived from ``master_seed`` by the channel module.
    """

    bs: Point2D = Point2D(10.0, 10.0)
    bob: Point2D = Point2D(60.0, 80.0)
    eve: Point2D = Point2D(80.0, 20.0)
    target: Point2D = Point2D(20.0, 85.0)
    area: DeploymentArea = field(default_factory=DeploymentArea)
    link_budget: LinkBudget = field(default_factory=LinkBudget)
    path_loss: PathLossParams = field(default_factory=PathLossParams)
    small_scale: SmallScaleParams = field(default_factory=SmallScaleParams)
    temporal: TemporalParams = field(default_factory=TemporalParams)
    blockage: BlockageSpec = field(default_factory=BlockageSpec)
    ris_gain: RisGainParams = field(default_factory=RisGainParams)
    phase_mode: str = "coherent"
    master_seed: int = 12345


def default_config() -> ScenarioConfig:
    """Return the documented default scenario."""
    return ScenarioConfig()


def distance(a: Point2D, b: Point2D) -> float:
    """Euclidean distance between two points, in meters."""
    return math.hypot(b.x - a.x, b.y - a.y)


def bearing(frm: Point2D, to: Point2D) -> float:
    """Angle of the vector ``frm -> to``, counter-clockwise from +x, in (-pi, pi].

    Raises ValueError for coincident points.
    """
    dx, dy = to.x - frm.x, to.y - frm.y
    if dx == 0.0 and dy == 0.0:
        raise ValueError("bearing undefined for coincident points")
    return math.atan2(dy, dx)


def _require(cond: bool, name: str, detail: str) -> None:
    if not cond:
        raise ValidationError(f"{name}: {detail}")


def _finite(value: float) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool) and math.isfinite(value)


def validate_config(cfg: ScenarioConfig) -> ScenarioConfig:
    """Check every documented invariant; return ``cfg`` unchanged if valid."""
    for node_name in ("bs", "bob", "eve", "target"):
        p = getattr(cfg, node_name)
        _require(_finite(p.x) and _finite(p.y), "Point2D.x/y",
                 f"node '{node_name}' coordinates must be finite numbers")
    a = cfg.area
    _require(all(_finite(v) for v in (a.x_min, a.x_max, a.y_min, a.y_max)),
             "DeploymentArea", "bounds must be finite")
    _require(a.x_min < a.x_max, "DeploymentArea.x_min", "x_min must be < x_max")
    _require(a.y_min < a.y_max, "DeploymentArea.y_min", "y_min must be < y_max")
    lb = cfg.link_budget
    _require(_finite(lb.transmit_power_dbm), "LinkBudget.transmit_power_dbm", "must be finite")
    _require(_finite(lb.noise_power_dbm), "LinkBudget.noise_power_dbm", "must be finite")
    pl = cfg.path_loss
    _require(_finite(pl.pl_1m_db), "PathLossParams.pl_1m_db", "must be finite")
    _require(_finite(pl.exponent) and pl.exponent > 0, "PathLossParams.exponent", "must be > 0")
    _require(_finite(pl.shadow_sigma_db) and pl.shadow_sigma_db >= 0,
             "PathLossParams.shadow_sigma_db", "must be >= 0")
    ss = cfg.small_scale
    _require(isinstance(ss.num_taps, int) and ss.num_taps >= 1,
             "SmallScaleParams.num_taps", "must be an integer >= 1")
    _require(_finite(ss.decay_factor) and 0 < ss.decay_factor <= 1,
             "SmallScaleParams.decay_factor", "must be in (0, 1]")
    _require(_finite(ss.rician_k_db), "SmallScaleParams.rician_k_db", "must be finite")
    tp = cfg.temporal
    _require(_finite(tp.rho) and 0 <= tp.rho <= 1, "TemporalParams.rho", "must be in [0, 1]")
    _require(isinstance(tp.num_frames, int) and tp.num_frames >= 1,
             "TemporalParams.num_frames", "must be an integer >= 1")
    bl = cfg.blockage
    _require(_finite(bl.blockage_loss_db) and bl.blockage_loss_db >= 0,
             "BlockageSpec.blockage_loss_db", "must be >= 0")
    rg = cfg.ris_gain
    _require(_finite(rg.element_efficiency) and 0 < rg.element_efficiency <= 1,
             "RisGainParams.element_efficiency", "must be in (0, 1]")
    _require(_finite(rg.orientation_exponent) and rg.orientation_exponent >= 0,
             "RisGainParams.orientation_exponent", "must be >= 0")
    _require(cfg.phase_mode in PHASE_MODES, "ScenarioConfig.phase_mode",
             f"must be one of {PHASE_MODES}")
    _require(isinstance(cfg.master_seed, int) and not isinstance(cfg.master_seed, bool),
             "ScenarioConfig.master_seed", "must be an integer")
    names = ("bs", "bob", "eve", "target")
    for i, na in enumerate(names):
        for nb in names[i + 1:]:
            _require(distance(getattr(cfg, na), getattr(cfg, nb)) > 0,
                     "ScenarioConfig", f"nodes '{na}' and '{nb}' must not coincide")
    return cfg


def _point_from_json(value, where: str) -> Point2D:
    if (not isinstance(value, (list, tuple)) or len(value) != 2
            or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)):
        raise ValidationError(f"{where}: expected a [x, y] pair of numbers")
    return Point2D(float(value[0]), float(value[1]))


def _section(data: dict, key: str, cls, where: str):
    """Build a parameter dataclass from an optional JSON sub-dict, filling
    omitted fields with the documented defaults."""
    raw = data.get(key)
    if raw is None:
        return cls()
    if not isinstance(raw, dict):
        raise ValidationError(f"{where}.{key}: expected an object")
    allowed = {f.name for f in fields(cls)}
    unknown = set(raw) - allowed
    if unknown:
        raise ValidationError(f"{where}.{key}: unknown keys {sorted(unknown)}")
    kwargs = {}
    for f in fields(cls):
        if f.name in raw:
            v = raw[f.name]
            if f.type == "int":
                if not isinstance(v, int) or isinstance(v, bool):
                    raise ValidationError(f"{cls.__name__}.{f.name}: must be an integer")
                kwargs[f.name] = v
            elif f.type == "bool":
                if not isinstance(v, bool):
                    raise ValidationError(f"{cls.__name__}.{f.name}: must be a boolean")
                kwargs[f.name] = v
            else:
                if not isinstance(v, (int, float)) or isinstance(v, bool):
                    raise ValidationError(f"{cls.__name__}.{f.name}: must be a number")
                kwargs[f.name] = float(v)
    return cls(**kwargs)


_TOP_LEVEL_KEYS = {
    "schema_version", "nodes", "area", "link_budget", "path_loss",
    "small_scale", "temporal", "blockage", "ris_gain", "phase_mode", "seed",
}


def config_from_dict(data: dict) -> ScenarioConfig:
    """Build and validate a ScenarioConfig from a schema-v1 dict."""
    if not isinstance(data, dict):
        raise ParseError("config root must be a JSON object")
    unknown = set(data) - _TOP_LEVEL_KEYS
    if unknown:
        raise ValidationError(f"unknown top-level keys {sorted(unknown)}")
    version = data.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ValidationError(f"schema_version: expected {SCHEMA_VERSION}, got {version!r}")

    defaults = ScenarioConfig()
    nodes = data.get("nodes", {})
    if not isinstance(nodes, dict):
        raise ValidationError("nodes: expected an object")
    unknown = set(nodes) - {"bs", "bob", "eve", "target"}
    if unknown:
        raise ValidationError(f"nodes: unknown keys {sorted(unknown)}")
    positions = {
        name: (_point_from_json(nodes[name], f"nodes.{name}") if name in nodes
               else getattr(defaults, name))
        for name in ("bs", "bob", "eve", "target")
    }

    phase_mode = data.get("phase_mode", defaults.phase_mode)
    seed = data.get("seed", defaults.master_seed)

    cfg = ScenarioConfig(
        bs=positions["bs"],
        bob=positions["bob"],
        eve=positions["eve"],
        target=positions["target"],
        area=_section(data, "area", DeploymentArea, "config"),
        link_budget=_section(data, "link_budget", LinkBudget, "config"),
        path_loss=_section(data, "path_loss", PathLossParams, "config"),
        small_scale=_section(data, "small_scale", SmallScaleParams, "config"),
        temporal=_section(data, "temporal", TemporalParams, "config"),
        blockage=_section(data, "blockage", BlockageSpec, "config"),
        ris_gain=_section(data, "ris_gain", RisGainParams, "config"),
        phase_mode=phase_mode,
        master_seed=seed,
    )
    return validate_config(cfg)


def config_to_dict(cfg: ScenarioConfig) -> dict:
    """Serialize a ScenarioConfig to its schema-v1 dict form."""
    return {
        "schema_version": SCHEMA_VERSION,
        "nodes": {name: [getattr(cfg, name).x, getattr(cfg, name).y]
                  for name in ("bs", "bob", "eve", "target")},
        "area": {"x_min": cfg.area.x_min, "x_max": cfg.area.x_max,
                 "y_min": cfg.area.y_min, "y_max": cfg.area.y_max},
        "link_budget": {"transmit_power_dbm": cfg.link_budget.transmit_power_dbm,
                        "noise_power_dbm": cfg.link_budget.noise_power_dbm},
        "path_loss": {"pl_1m_db": cfg.path_loss.pl_1m_db,
                      "exponent": cfg.path_loss.exponent,
                      "shadow_sigma_db": cfg.path_loss.shadow_sigma_db},
        "small_scale": {"num_taps": cfg.small_scale.num_taps,
                        "decay_factor": cfg.small_scale.decay_factor,
                        "rician_k_db": cfg.small_scale.rician_k_db},
        "temporal": {"rho": cfg.temporal.rho, "num_frames": cfg.temporal.num_frames},
        "blockage": {"bs_bob": cfg.blockage.bs_bob, "bs_eve": cfg.blockage.bs_eve,
                     "bs_target": cfg.blockage.bs_target,
                     "blockage_loss_db": cfg.blockage.blockage_loss_db},
        "ris_gain": {"element_efficiency": cfg.ris_gain.element_efficiency,
                     "orientation_exponent": cfg.ris_gain.orientation_exponent},
        "phase_mode": cfg.phase_mode,
        "seed": cfg.master_seed,
    }


def load_config(path) -> ScenarioConfig:
    """Load, default-fill, and validate a scenario config file.

    Raises ParseError for malformed JSON and ValidationError (naming the
    failing field) for invariant violations.
    """
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: not valid JSON ({exc})") from exc
    return config_from_dict(data)


def save_config(cfg: ScenarioConfig, path) -> None:
    """Write ``cfg`` as a schema-v1 JSON file; load_config round-trips it."""
    Path(path).write_text(json.dumps(config_to_dict(cfg), indent=2, sort_keys=True) + "\n")


def config_hash(cfg: ScenarioConfig) -> str:
    """Stable hex digest of the full configuration, for provenance records."""
    canonical = json.dumps(config_to_dict(cfg), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("ascii")).hexdigest()
