"""Shared helpers: reduced-size scenarios so simulation-heavy tests stay fast."""

from dataclasses import replace

import pytest

from risplan.scenario import TemporalParams, default_config, save_config


def fast_config(num_frames=6, seed=20240901, **overrides):
    """Default scenario with a short frame count (and optional field overrides)."""
    cfg = default_config()
    cfg = replace(cfg, temporal=TemporalParams(rho=cfg.temporal.rho,
                                               num_frames=num_frames),
                  master_seed=seed)
    return replace(cfg, **overrides) if overrides else cfg


@pytest.fixture
def write_config(tmp_path):
    """Write a ScenarioConfig to a temp file and return the path."""
    def _write(cfg, name="scenario.json"):
        path = tmp_path / name
        save_config(cfg, path)
        return path
    return _write
