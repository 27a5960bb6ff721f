import json

import pytest

from risplan.cli import main, render_representatives_table, validate_result_dict

from conftest import fast_config

SEARCH = {"grid_x": 3, "grid_y": 3, "grid_theta": 4,
          "element_counts": [64, 512], "alpha_values": [0.0, 0.5, 1.0],
          "elites_per_round": 3, "max_rounds": 2,
          "refine_x": 2, "refine_y": 2, "refine_theta": 2, "refine_alpha": 2}


def heatmap_args(cfg_path, out_dir, **extra):
    args = ["heatmap", str(cfg_path), "--fixed-theta", "3.06", "--fixed-n", "256",
            "--fixed-alpha", "0.5", "--cell-size", "25", "--out-dir", str(out_dir)]
    for key, value in extra.items():
        args += [f"--{key.replace('_', '-')}", str(value)]
    return args


def optimize_args(cfg_path, params_path, out, **extra):
    args = ["optimize", str(cfg_path), "--search-params", str(params_path),
            "--out", str(out)]
    for key, value in extra.items():
        args += [f"--{key.replace('_', '-')}", str(value)]
    return args


@pytest.fixture
def cfg_path(write_config):
    return write_config(fast_config(num_frames=4))


@pytest.fixture
def params_path(tmp_path):
    path = tmp_path / "search.json"
    path.write_text(json.dumps(SEARCH))
    return path


def test_heatmap_writes_grids_and_manifest(cfg_path, tmp_path):
    out = tmp_path / "maps"
    assert main(heatmap_args(cfg_path, out)) == 0
    names = {p.name for p in out.iterdir()}
    for metric in ("delta_snr_b", "sensing_gain", "security_gap", "scalar_objective"):
        assert f"{metric}.csv" in names
        assert f"{metric}.meta.json" in names
    manifest = json.loads((out / "manifest.json").read_text())
    assert set(manifest["outputs"]) == names - {"manifest.json"}
    assert manifest["master_seed"] == fast_config(num_frames=4).master_seed


def test_heatmap_missing_required_flag_is_usage_error(cfg_path, tmp_path):
    with pytest.raises(SystemExit) as err:
        main(["heatmap", str(cfg_path), "--fixed-theta", "0.0", "--fixed-n", "256",
              "--out-dir", str(tmp_path / "x")])
    assert err.value.code == 2


def test_heatmap_reruns_are_byte_identical(cfg_path, tmp_path):
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert main(heatmap_args(cfg_path, out1)) == 0
    assert main(heatmap_args(cfg_path, out2)) == 0
    for csv in sorted(out1.glob("*.csv")):
        assert (out2 / csv.name).read_bytes() == csv.read_bytes()


def test_heatmap_bad_metric_fails_with_diagnostic(cfg_path, tmp_path, capsys):
    code = main(heatmap_args(cfg_path, tmp_path / "x", metrics="snr_bob"))
    assert code == 1
    assert "unknown metric" in capsys.readouterr().err


def test_heatmap_invalid_config_fails(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"temporal": {"rho": 1.5}}))
    code = main(heatmap_args(bad, tmp_path / "x"))
    assert code == 1
    assert "TemporalParams.rho" in capsys.readouterr().err


def test_optimize_writes_result_and_table(cfg_path, params_path, tmp_path, capsys):
    out = tmp_path / "result.json"
    assert main(optimize_args(cfg_path, params_path, out)) == 0
    doc = json.loads(out.read_text())
    assert doc["result_schema"] == 1
    assert set(doc["representatives"]) == {"best_snr_b", "best_security_gap",
                                           "best_sensing_gain", "balanced"}
    assert len(doc["candidates"]) >= 3 * 3 * 4 * 2 * 3
    table = capsys.readouterr().out
    for column in ("solution", "position", "theta", "N", "alpha",
                   "SNR_B", "SNR_T", "security_gap"):
        assert column in table
    manifest = json.loads((tmp_path / "result.json.manifest.json").read_text())
    assert manifest["outputs"] == ["result.json"]


def test_optimize_seed_override_changes_and_reproduces_output(cfg_path, params_path, tmp_path):
    outs = [tmp_path / name for name in ("r1.json", "r2.json", "r3.json")]
    assert main(optimize_args(cfg_path, params_path, outs[0], seed=1)) == 0
    assert main(optimize_args(cfg_path, params_path, outs[1], seed=1)) == 0
    assert main(optimize_args(cfg_path, params_path, outs[2], seed=2)) == 0
    assert outs[0].read_bytes() == outs[1].read_bytes()
    assert outs[0].read_bytes() != outs[2].read_bytes()


def test_report_round_trip(cfg_path, params_path, tmp_path, capsys):
    out = tmp_path / "result.json"
    main(optimize_args(cfg_path, params_path, out))
    capsys.readouterr()
    assert main(["report", str(out)]) == 0
    assert "balanced" in capsys.readouterr().out


def test_report_detects_scalar_integrity_violation(cfg_path, params_path, tmp_path, capsys):
    out = tmp_path / "result.json"
    main(optimize_args(cfg_path, params_path, out))
    doc = json.loads(out.read_text())
    doc["candidates"][doc["representatives"]["balanced"]]["objective"]["scalar"] += 1.0
    out.write_text(json.dumps(doc))
    assert main(["report", str(out)]) == 1
    assert "minimum scalar" in capsys.readouterr().err


def test_report_rejects_empty_candidates(tmp_path, capsys):
    path = tmp_path / "empty.json"
    path.write_text(json.dumps({"result_schema": 1, "candidates": [],
                                "representatives": {}}))
    assert main(["report", str(path)]) == 1
    assert "empty" in capsys.readouterr().err


def test_report_rejects_broken_metric_identity(cfg_path, params_path, tmp_path, capsys):
    out = tmp_path / "result.json"
    main(optimize_args(cfg_path, params_path, out))
    doc = json.loads(out.read_text())
    doc["candidates"][0]["metrics"]["security_gap_db"] += 0.5
    out.write_text(json.dumps(doc))
    assert main(["report", str(out)]) == 1
    assert "identity" in capsys.readouterr().err


def test_missing_config_file_fails_cleanly(tmp_path, capsys):
    code = main(heatmap_args(tmp_path / "nope.json", tmp_path / "x"))
    assert code == 1
    assert capsys.readouterr().err.startswith("error:")


def test_validate_result_dict_representative_bounds():
    doc = {"result_schema": 1,
           "candidates": [{"index": 0,
                           "metrics": {"snr_b_db": 1.0, "snr_e_db": 0.5,
                                       "snr_t_total_db": 2.0, "snr_t_direct_db": 1.0,
                                       "security_gap_db": 0.5, "sensing_gain_db": 1.0,
                                       "delta_snr_b_db": 0.0},
                           "objective": {"scalar": 0.0}}],
           "representatives": {"best_snr_b": 0, "best_security_gap": 0,
                               "best_sensing_gain": 0, "balanced": 5}}
    with pytest.raises(ValueError, match="not in evaluated set"):
        validate_result_dict(doc)
