"""Metric sweeps over a regular grid of candidate positions.

Each cell is evaluated at its center with the remaining configuration
dimensions fixed. Cell substreams are keyed by the millimeter-quantized
center coordinates, so sweeps at different resolutions reuse identical
randomness wherever their cell centers coincide.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ._version import __version__
from .metrics import evaluate_candidate
from .objective import scalarize
from .ris import RisConfig
from .scenario import Point2D, ScenarioConfig, config_hash

GRID_METRICS = ("delta_snr_b", "sensing_gain", "security_gap", "scalar_objective")

_BUNDLE_FIELDS = {
    "delta_snr_b": "delta_snr_b_db",
    "sensing_gain": "sensing_gain_db",
    "security_gap": "security_gap_db",
}


@dataclass(frozen=True, eq=False)
class MetricGrid:
    """Row-major matrix of one metric over the deployment area.

    ``values[row, col]`` is the cell centered at
    ``(origin_x + (col + 0.5) * cell_size, origin_y + (row + 0.5) * cell_size)``.
    """

    metric_name: str
    origin: tuple[float, float]
    cell_size: float
    values: np.ndarray
    fixed_params: dict
    config_hash: str = ""
    master_seed: int = 0


def cell_key(x: float, y: float) -> str:
    """Substream key for a cell center, quantized to millimeters."""
    return f"cell:{round(x * 1000)}:{round(y * 1000)}"


def _grid_shape(cfg: ScenarioConfig, cell_size: float) -> tuple[int, int]:
    if not (math.isfinite(cell_size) and cell_size > 0):
        raise ValueError("cell_size must be a positive number")
    area = cfg.area
    shape = []
    for extent in (area.y_max - area.y_min, area.x_max - area.x_min):
        n = extent / cell_size
        if abs(n - round(n)) > 1e-9 or round(n) < 1:
            raise ValueError(
                f"cell_size {cell_size} must evenly divide the area extent {extent}")
        shape.append(int(round(n)))
    return shape[0], shape[1]


def sweep_grid(cfg: ScenarioConfig, fixed: tuple[float, int, float],
               cell_size: float, metrics=GRID_METRICS) -> list[MetricGrid]:
    """Evaluate every cell center and return one grid per requested metric.

    ``fixed`` is the (orientation, element count, alpha) triple shared by
    all cells. The scalar objective is normalized over the whole sweep.
    Cell centers must not coincide exactly with a scene node (zero-length
    links are undefined); pick a resolution whose centers avoid the nodes.
    """
    theta, num_elements, alpha = float(fixed[0]), int(fixed[1]), float(fixed[2])
    for name in metrics:
        if name not in GRID_METRICS:
            raise ValueError(f"unknown metric {name!r}; available: {GRID_METRICS}")
    rows, cols = _grid_shape(cfg, cell_size)
    origin = (cfg.area.x_min, cfg.area.y_min)

    bundles = []
    for row in range(rows):
        cy = origin[1] + (row + 0.5) * cell_size
        for col in range(cols):
            cx = origin[0] + (col + 0.5) * cell_size
            ris = RisConfig(Point2D(cx, cy), theta, num_elements, alpha)
            bundles.append(evaluate_candidate(cfg, ris, cell_key(cx, cy)))

    columns = {name: np.array([getattr(b, attr) for b in bundles]).reshape(rows, cols)
               for name, attr in _BUNDLE_FIELDS.items()}
    if "scalar_objective" in metrics:
        scalars = np.array([o.scalar for o in scalarize(bundles)])
        columns["scalar_objective"] = scalars.reshape(rows, cols)

    fixed_params = {"theta": theta, "num_elements": num_elements, "alpha": alpha}
    digest = config_hash(cfg)
    return [
        MetricGrid(metric_name=name, origin=origin, cell_size=float(cell_size),
                   values=columns[name], fixed_params=fixed_params,
                   config_hash=digest, master_seed=cfg.master_seed)
        for name in metrics
    ]


def _sidecar_path(path: Path) -> Path:
    if path.suffix == ".csv":
        return path.with_suffix(".meta.json")
    return path.with_name(path.name + ".meta.json")


def export_grid(grid: MetricGrid, path) -> None:
    """Write the grid as commented CSV plus a JSON provenance sidecar.

    Values are written with full ``repr`` precision, so an import
    round-trips them exactly.
    """
    path = Path(path)
    fp = grid.fixed_params
    lines = [
        f"# metric = {grid.metric_name}",
        f"# origin = {grid.origin[0]!r} {grid.origin[1]!r}",
        f"# cell_size = {grid.cell_size!r}",
        f"# fixed_params = theta={fp['theta']!r} n={fp['num_elements']} alpha={fp['alpha']!r}",
    ]
    for row in grid.values:
        lines.append(",".join(repr(float(v)) for v in row))
    path.write_text("\n".join(lines) + "\n")

    meta = {
        "grid_schema": 1,
        "metric": grid.metric_name,
        "origin": list(grid.origin),
        "cell_size": grid.cell_size,
        "rows": int(grid.values.shape[0]),
        "cols": int(grid.values.shape[1]),
        "fixed_params": dict(grid.fixed_params),
        "config_hash": grid.config_hash,
        "master_seed": grid.master_seed,
        "tool_version": __version__,
        "csv_file": path.name,
    }
    _sidecar_path(path).write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")


def import_grid(path) -> MetricGrid:
    """Read a grid written by :func:`export_grid` (exact round-trip)."""
    path = Path(path)
    header: dict[str, str] = {}
    rows = []
    for line in path.read_text().splitlines():
        if line.startswith("#"):
            key, _, value = line.lstrip("# ").partition(" = ")
            header[key] = value
        elif line.strip():
            rows.append([float(tok) for tok in line.split(",")])
    fp_tokens = dict(tok.split("=", 1) for tok in header["fixed_params"].split())
    fixed_params = {
        "theta": float(fp_tokens["theta"]),
        "num_elements": int(fp_tokens["n"]),
        "alpha": float(fp_tokens["alpha"]),
    }
    ox, oy = header["origin"].split()
    meta_path = _sidecar_path(path)
    digest, seed = "", 0
    if meta_path.exists():
        meta = json.loads(meta_path.read_text())
        digest, seed = meta.get("config_hash", ""), meta.get("master_seed", 0)
    return MetricGrid(
        metric_name=header["metric"],
        origin=(float(ox), float(oy)),
        cell_size=float(header["cell_size"]),
        values=np.array(rows, dtype=float),
        fixed_params=fixed_params,
        config_hash=digest,
        master_seed=seed,
    )
