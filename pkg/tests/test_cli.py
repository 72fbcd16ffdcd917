import json

from study_harness.cli import main


def _run(capsys, argv):
    code = main(argv)
    return code, json.loads(capsys.readouterr().out)


def test_compensate(capsys):
    code, result = _run(capsys, ["compensate", "--speed", "99"])
    assert code == 0
    assert result["success"] is True
    assert result["command"] == "compensate"
    assert result["compensated_speed"] == 150.0
    assert result["estimated_speed"] == 30.4 + 0.6 * 99

    code, result = _run(capsys, ["compensate", "--speed", "50", "--model", "gms"])
    assert abs(result["compensated_speed"] - 68.5) < 1e-9


def test_out_of_range_speed_fails(capsys):
    code, result = _run(capsys, ["compensate", "--speed", "120"])
    assert code == 1
    assert result["success"] is False
    assert "120" in result["error"]


def test_generate_dry_run(capsys, tmp_path, small_config_path):
    code, result = _run(capsys, ["generate", "--config", str(small_config_path), "--seed", "9",
                                 "--out", str(tmp_path), "--dry-run", "--quiet"])
    assert code == 0
    assert len(result["stimuli"]) == 10
    assert result["frames_per_stimulus"] == 0
    assert (tmp_path / "index.json").exists()


def test_generate_single_condition_and_regenerate(capsys, tmp_path, small_config_path):
    code, result = _run(capsys, ["generate", "--config", str(small_config_path), "--seed", "9",
                                 "--out", str(tmp_path / "run"), "--condition", "off,0,1", "--quiet"])
    assert code == 0
    assert result["stimuli"] == ["cond00_gms-off_trail0_speed1"]
    assert result["frames_per_stimulus"] == 12

    manifest = tmp_path / "run" / "cond00_gms-off_trail0_speed1" / "manifest.json"
    code, result = _run(capsys, ["regenerate", "--manifest", str(manifest), "--out", str(tmp_path / "again"),
                                 "--quiet"])
    assert code == 0
    assert result["matches"] is True
    assert result["frames"] == 12


def test_bad_condition_reports_error(capsys, tmp_path, small_config_path):
    code, result = _run(capsys, ["generate", "--config", str(small_config_path), "--out", str(tmp_path),
                                 "--condition", "on,two,1", "--quiet"])
    assert code == 1
    assert "--condition" in result["error"]


def test_calibrate(capsys, small_config_path):
    code, result = _run(capsys, ["calibrate", "--config", str(small_config_path), "--speed-level", "2",
                                 "--tau", "0"])
    assert code == 0
    assert sorted(result["n_window"]) == ["0", "1", "2", "3", "4"]
    assert result["n_window"]["0"] == 1
    assert result["d_bar"] > 0

    code, result = _run(capsys, ["calibrate", "--config", str(small_config_path), "--speed-level", "2",
                                 "--tau", "0", "--trail", "2"])
    assert isinstance(result["n_window"], int) and result["n_window"] % 2 == 1


def test_missing_manifest(capsys, tmp_path):
    code, result = _run(capsys, ["regenerate", "--manifest", str(tmp_path / "none.json"), "--out", str(tmp_path)])
    assert code == 1
    assert result["command"] == "regenerate"
