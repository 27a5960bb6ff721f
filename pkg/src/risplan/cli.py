"""Command-line entry point.

Subcommands: ``heatmap`` (metric grids over the deployment area),
``optimize`` (iterative search, JSON result + representatives table), and
``report`` (re-render and integrity-check a saved result). All outputs are
reproducible byte-for-byte from (config, flags, seed) except the manifest
timestamp. Exit codes: 0 success, 1 runtime/validation failure, 2 usage.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from datetime import datetime, timezone
from pathlib import Path

from ._version import __version__
from .heatmap import GRID_METRICS, export_grid, sweep_grid
from .optimizer import (REPRESENTATIVE_KEYS, OptimizationResult, SearchParams,
                        iterative_search, search_params_from_dict)
from .scenario import (ParseError, ScenarioConfig, ValidationError, config_hash,
                       load_config)

RESULT_SCHEMA = 1
MANIFEST_SCHEMA = 1


class IntegrityError(ValueError):
    """A saved result violates one of its structural invariants."""


def _load_scenario(config_path: str, seed_override) -> ScenarioConfig:
    cfg = load_config(config_path)
    if seed_override is not None:
        cfg = replace(cfg, master_seed=seed_override)
    return cfg


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _write_manifest(path: Path, command: list[str], cfg: ScenarioConfig,
                    outputs: list[str]) -> None:
    _write_json(path, {
        "manifest_schema": MANIFEST_SCHEMA,
        "tool_version": __version__,
        "command": command,
        "config_hash": config_hash(cfg),
        "master_seed": cfg.master_seed,
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "outputs": sorted(outputs),
    })


def result_to_dict(result: OptimizationResult, cfg: ScenarioConfig) -> dict:
    """Serialize an optimization result to its versioned JSON form."""
    return {
        "result_schema": RESULT_SCHEMA,
        "tool_version": __version__,
        "config_hash": config_hash(cfg),
        "master_seed": cfg.master_seed,
        "rounds_executed": result.rounds_executed,
        "converged": result.converged,
        "best_scalar_history": list(result.best_scalar_history),
        "representatives": dict(result.representatives),
        "candidates": [
            {
                "index": c.index,
                "x": c.ris.position.x,
                "y": c.ris.position.y,
                "theta": c.ris.orientation,
                "num_elements": c.ris.num_elements,
                "alpha": c.ris.alpha,
                "metrics": {
                    "snr_b_db": c.metrics.snr_b_db,
                    "snr_e_db": c.metrics.snr_e_db,
                    "snr_t_total_db": c.metrics.snr_t_total_db,
                    "snr_t_direct_db": c.metrics.snr_t_direct_db,
                    "delta_snr_b_db": c.metrics.delta_snr_b_db,
                    "security_gap_db": c.metrics.security_gap_db,
                    "sensing_gain_db": c.metrics.sensing_gain_db,
                },
                "objective": {
                    "raw": list(o.raw),
                    "normalized": list(o.normalized),
                    "scalar": o.scalar,
                },
            }
            for c, o in zip(result.candidates, result.objectives)
        ],
    }


def validate_result_dict(doc: dict) -> dict:
    """Check the structural invariants of a saved result; raise IntegrityError."""
    if doc.get("result_schema") != RESULT_SCHEMA:
        raise IntegrityError(f"result_schema must be {RESULT_SCHEMA}")
    candidates = doc.get("candidates")
    if not isinstance(candidates, list) or len(candidates) == 0:
        raise IntegrityError("candidate list is empty")
    for pos, cand in enumerate(candidates):
        if cand.get("index") != pos:
            raise IntegrityError(f"candidate at position {pos} has index {cand.get('index')}")
        m = cand["metrics"]
        if m["security_gap_db"] != m["snr_b_db"] - m["snr_e_db"]:
            raise IntegrityError(f"candidate {pos}: security gap identity violated")
        if m["sensing_gain_db"] != m["snr_t_total_db"] - m["snr_t_direct_db"]:
            raise IntegrityError(f"candidate {pos}: sensing gain identity violated")
    reps = doc.get("representatives", {})
    missing = set(REPRESENTATIVE_KEYS) - set(reps)
    if missing:
        raise IntegrityError(f"missing representatives {sorted(missing)}")
    for key, idx in reps.items():
        if not isinstance(idx, int) or not 0 <= idx < len(candidates):
            raise IntegrityError(f"representative {key!r} index {idx!r} not in evaluated set")
    scalars = [c["objective"]["scalar"] for c in candidates]
    balanced_scalar = candidates[reps["balanced"]]["objective"]["scalar"]
    if any(balanced_scalar > s for s in scalars):
        raise IntegrityError("balanced representative does not have the minimum scalar")
    return doc


def render_representatives_table(doc: dict) -> str:
    """Fixed-width table of the four representative solutions."""
    header = f"{'solution':<18} {'position':<16} {'theta':>7} {'N':>4} {'alpha':>6} " \
             f"{'SNR_B':>8} {'SNR_T':>8} {'security_gap':>13}"
    lines = [header, "-" * len(header)]
    for key in REPRESENTATIVE_KEYS:
        cand = doc["candidates"][doc["representatives"][key]]
        m = cand["metrics"]
        position = f"({cand['x']:.1f}, {cand['y']:.1f})"
        lines.append(
            f"{key:<18} {position:<16} {cand['theta']:>7.3f} {cand['num_elements']:>4d} "
            f"{cand['alpha']:>6.2f} {m['snr_b_db']:>8.2f} {m['snr_t_total_db']:>8.2f} "
            f"{m['security_gap_db']:>13.2f}")
    return "\n".join(lines)


def cmd_heatmap(args, command: list[str]) -> int:
    cfg = _load_scenario(args.config, args.seed)
    if args.metrics == "all":
        metrics = GRID_METRICS
    else:
        metrics = tuple(m.strip() for m in args.metrics.split(",") if m.strip())
    grids = sweep_grid(cfg, (args.fixed_theta, args.fixed_n, args.fixed_alpha),
                       args.cell_size, metrics)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    outputs = []
    for grid in grids:
        csv_path = out_dir / f"{grid.metric_name}.csv"
        export_grid(grid, csv_path)
        outputs += [csv_path.name, csv_path.with_suffix(".meta.json").name]
        print(f"wrote {csv_path}")
    _write_manifest(out_dir / "manifest.json", command, cfg, outputs)
    print(f"wrote {out_dir / 'manifest.json'}")
    return 0


def cmd_optimize(args, command: list[str]) -> int:
    cfg = _load_scenario(args.config, args.seed)
    if args.search_params:
        params = search_params_from_dict(json.loads(Path(args.search_params).read_text()))
    else:
        params = SearchParams()
    result = iterative_search(cfg, params)
    doc = result_to_dict(result, cfg)

    out_path = Path(args.out)
    if out_path.parent != Path(""):
        out_path.parent.mkdir(parents=True, exist_ok=True)
    _write_json(out_path, doc)
    manifest_path = Path(str(out_path) + ".manifest.json")
    _write_manifest(manifest_path, command, cfg, [out_path.name])

    print(f"evaluated {len(result.candidates)} candidates "
          f"in {result.rounds_executed} rounds (converged={result.converged})")
    print(render_representatives_table(doc))
    print(f"wrote {out_path}")
    return 0


def cmd_report(args, command: list[str]) -> int:
    try:
        doc = json.loads(Path(args.result).read_text())
    except json.JSONDecodeError as exc:
        raise IntegrityError(f"{args.result}: not valid JSON ({exc})") from exc
    validate_result_dict(doc)
    print(render_representatives_table(doc))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="risplan",
        description="Deterministic RIS deployment simulation and multi-objective search.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("heatmap", help="sweep metric grids over the deployment area")
    p.add_argument("config", help="scenario config JSON file")
    p.add_argument("--fixed-theta", type=float, required=True,
                   help="surface orientation (rad) used at every cell")
    p.add_argument("--fixed-n", type=int, required=True,
                   help="element count used at every cell")
    p.add_argument("--fixed-alpha", type=float, required=True,
                   help="communication/sensing split used at every cell")
    p.add_argument("--cell-size", type=float, default=2.0,
                   help="grid resolution in meters (default: 2)")
    p.add_argument("--metrics", default="all",
                   help=f"comma-separated subset of {','.join(GRID_METRICS)}, or 'all'")
    p.add_argument("--out-dir", default="heatmaps", help="output directory")
    p.add_argument("--seed", type=int, default=None, help="override the config seed")
    p.set_defaults(handler=cmd_heatmap)

    p = sub.add_parser("optimize", help="run the iterative deployment search")
    p.add_argument("config", help="scenario config JSON file")
    p.add_argument("--search-params", default=None,
                   help="JSON file overriding search parameters")
    p.add_argument("--out", default="optimization_result.json",
                   help="result JSON path (default: optimization_result.json)")
    p.add_argument("--seed", type=int, default=None, help="override the config seed")
    p.set_defaults(handler=cmd_optimize)

    p = sub.add_parser("report", help="re-render and integrity-check a saved result")
    p.add_argument("result", help="result JSON written by 'optimize'")
    p.set_defaults(handler=cmd_report)
    return parser


def main(argv=None) -> int:
    command = list(sys.argv[1:]) if argv is None else list(argv)
    args = build_parser().parse_args(command)
    try:
        return args.handler(args, command)
    except (ParseError, ValidationError, IntegrityError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
