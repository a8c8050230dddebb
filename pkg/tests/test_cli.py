import numpy as np
import yaml

from memsmag.cli import CONFIG_DIR_ENV, main


def _empty_config(tmp_path):
    path = tmp_path / "scenario.yaml"
    path.write_text("")
    return str(path)


def test_simulate_csv(tmp_path):
    out = tmp_path / "report.csv"
    code = main(["simulate", "--config", _empty_config(tmp_path), "--out", str(out)])
    assert code == 0
    text = out.read_text()
    assert text.startswith("#")
    assert "sensitivity_V_per_T" in text


def test_simulate_structured_text(tmp_path):
    out = tmp_path / "report.yaml"
    code = main(
        [
            "simulate",
            "--config",
            _empty_config(tmp_path),
            "--out",
            str(out),
            "--format",
            "structured-text",
        ]
    )
    assert code == 0
    loaded = yaml.safe_load(out.read_text())
    assert loaded["sensitivity_V_per_T"] > 0


def test_simulate_byte_identical_runs(tmp_path):
    cfg = _empty_config(tmp_path)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["simulate", "--config", cfg, "--out", str(a)]) == 0
    assert main(["simulate", "--config", cfg, "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_missing_config(tmp_path):
    out = tmp_path / "report.csv"
    code = main(["simulate", "--config", "/nonexistent/x.yaml", "--out", str(out)])
    assert code == 1


def test_invalid_config(tmp_path):
    cfg = tmp_path / "bad.yaml"
    cfg.write_text("drive:\n  amplitude: -1\n")
    code = main(["simulate", "--config", str(cfg), "--out", str(tmp_path / "r.csv")])
    assert code == 1


def test_unparseable_config(tmp_path):
    cfg = tmp_path / "broken.yaml"
    cfg.write_text("drive: [oops\n")
    code = main(["simulate", "--config", str(cfg), "--out", str(tmp_path / "r.csv")])
    assert code == 1


def test_usage_errors(tmp_path):
    assert main([]) == 1
    assert main(["frobnicate"]) == 1
    assert main(["simulate", "--config", _empty_config(tmp_path)]) == 1
    assert main(["simulate", "--bogus-flag"]) == 1


def test_verify_passes(tmp_path, capsys):
    code = main(["verify", "--config", _empty_config(tmp_path)])
    captured = capsys.readouterr()
    assert code == 0
    assert "verify: PASS" in captured.out
    assert "convergence_order = " in captured.out


def test_config_dir_env(tmp_path, monkeypatch, capsys):
    (tmp_path / "default.yaml").write_text("")
    monkeypatch.setenv(CONFIG_DIR_ENV, str(tmp_path))
    code = main(["noise"])
    captured = capsys.readouterr()
    assert code == 0
    assert "rms_V = " in captured.out
    assert "corner_frequency_Hz = " in captured.out


def test_noise_out_file(tmp_path, capsys):
    out = tmp_path / "noise.txt"
    code = main(["noise", "--config", _empty_config(tmp_path), "--out", str(out)])
    captured = capsys.readouterr()
    assert code == 0
    assert out.read_text() == captured.out


def test_sweep_cli(tmp_path):
    out = tmp_path / "sweep.csv"
    code = main(
        [
            "sweep",
            "--config",
            _empty_config(tmp_path),
            "--path",
            "drive.amplitude",
            "--start",
            "0.001",
            "--stop",
            "0.01",
            "--steps",
            "3",
            "--out",
            str(out),
        ]
    )
    assert code == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 4
    assert lines[0].startswith("drive.amplitude,")


def test_freq_response_cli(tmp_path):
    out = tmp_path / "response.csv"
    code = main(
        ["freq-response", "--config", _empty_config(tmp_path), "--out", str(out)]
    )
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "frequency_Hz,amplitude_m_per_N,phase_rad"
    assert len(lines) == 201
    first = [float(cell) for cell in lines[1].split(",")]
    assert first[1] > 0


def test_transient_cli(tmp_path):
    out = tmp_path / "transient.csv"
    code = main(["transient", "--config", _empty_config(tmp_path), "--out", str(out)])
    assert code == 0
    data = np.loadtxt(out, delimiter=",", skiprows=1)
    assert data.shape[1] == 4
    assert data.shape[0] > 1000


def test_transient_step_too_large(tmp_path):
    out = tmp_path / "transient.csv"
    code = main(
        [
            "transient",
            "--config",
            _empty_config(tmp_path),
            "--dt",
            "1.0",
            "--out",
            str(out),
        ]
    )
    assert code == 2


def test_optimize_cli(tmp_path, capsys):
    code = main(
        [
            "optimize",
            "--config",
            _empty_config(tmp_path),
            "--param",
            "drive.amplitude:0.001:0.012",
            "--objective",
            "sensitivity",
        ]
    )
    captured = capsys.readouterr()
    assert code == 0
    assert "drive.amplitude = 0.01" in captured.out
    assert "objective = " in captured.out
    assert "evaluations = " in captured.out


def test_optimize_bad_param_spec(tmp_path):
    code = main(
        [
            "optimize",
            "--config",
            _empty_config(tmp_path),
            "--param",
            "drive.amplitude",
        ]
    )
    assert code == 1
