import json
import math

import numpy as np
import pytest

from cavring.cli import main
from cavring.config import parse_config
from cavring.errors import ConfigError


def test_defaults_are_paper_parameters():
    cfg = parse_config(None)
    p = cfg.params
    two_pi = 2 * math.pi
    assert p.hop_j == pytest.approx(2 * two_pi)
    assert p.kappa == pytest.approx(5 * two_pi)
    assert p.omega == pytest.approx(10 * two_pi)
    assert p.omega_rec == pytest.approx(3.5 * two_pi)
    assert p.n_atoms == 60000
    assert p.n_sites == 4
    assert cfg.seed == 1234


def test_config_file_parsing(tmp_path):
    path = tmp_path / "run.ini"
    path.write_text(
        "[model]\nomega = 10\nkappa = 5\nJ = 2\nN_atoms = 60000\nM = 4\n"
        "omega_rec = 3.5\n\n[run]\nseed = 1\n"
    )
    cfg = parse_config(str(path))
    assert cfg.seed == 1
    # flag overrides beat file values
    cfg = parse_config(str(path), {("run", "seed"): "7"})
    assert cfg.seed == 7


def test_config_rejects_bad_geometry(tmp_path):
    path = tmp_path / "run.ini"
    path.write_text("[model]\nM = 6\n")
    with pytest.raises(ConfigError, match="multiple of 4"):
        parse_config(str(path))


def test_config_rejects_unknown_key(tmp_path):
    path = tmp_path / "run.ini"
    path.write_text("[model]\nomego = 10\n")
    with pytest.raises(ConfigError, match="omego"):
        parse_config(str(path))
    path.write_text("[modle]\nomega = 10\n")
    with pytest.raises(ConfigError, match="modle"):
        parse_config(str(path))


def test_config_rejects_unit_mistakes(tmp_path):
    path = tmp_path / "run.ini"
    # 2pi x 62832 kHz is clearly rad/ms pasted into a 2pi-kHz field
    path.write_text("[model]\nomega = 62832\n")
    with pytest.raises(ConfigError, match="2pi"):
        parse_config(str(path))


def test_config_threads_auto_and_env(monkeypatch):
    cfg = parse_config(None, {("run", "threads"): "auto"})
    assert cfg.threads >= 1
    monkeypatch.setenv("CAVRING_THREADS", "3")
    assert parse_config(None).threads == 3
    # explicit flag beats the environment
    assert parse_config(None, {("run", "threads"): "2"}).threads == 2


def _read_csv(path):
    meta = []
    with open(path) as fh:
        lines = fh.read().splitlines()
    rows = [line for line in lines if not line.startswith("#")]
    meta = [line for line in lines if line.startswith("#")]
    header = rows[0].split(",")
    data = np.array([[float(v) for v in line.split(",")]
                     for line in rows[1:]])
    return meta, header, data


def test_meanfield_command(tmp_path, capsys):
    code = main(["meanfield", "--outdir", str(tmp_path),
                 "--theta", "0,0.125", "--g-rel", "0.5,1.2"])
    assert code == 0
    meta, header, data = _read_csv(tmp_path / "meanfield.csv")
    assert meta[0].startswith("# cavring")
    assert header == ["theta_rad", "g_rel", "delta_opt", "alpha_re",
                      "alpha_im", "photon"]
    assert data.shape == (4, 6)
    below = data[data[:, 1] == 0.5]
    assert np.all(below[:, 5] == 0.0)
    assert "meanfield" in capsys.readouterr().out


def test_ensemble_command_and_byte_identity(tmp_path, capsys):
    args = ["ensemble", "--g-rel", "0.4", "--t-end", "1.0",
            "--n-traj", "8", "--seed", "11"]
    out1 = tmp_path / "a"
    out2 = tmp_path / "b"
    out3 = tmp_path / "c"
    assert main(args + ["--outdir", str(out1)]) == 0
    assert main(args + ["--outdir", str(out2)]) == 0
    assert main(args + ["--outdir", str(out3), "--threads", "4"]) == 0
    bytes1 = (out1 / "ensemble.csv").read_bytes()
    assert bytes1 == (out2 / "ensemble.csv").read_bytes()
    assert bytes1 == (out3 / "ensemble.csv").read_bytes()
    meta, header, data = _read_csv(out1 / "ensemble.csv")
    assert header[:3] == ["t_ms", "theta_rad", "g_rel"]
    assert any("model.omega_2pikhz = 10" in line for line in meta)
    assert capsys.readouterr().out.count("ensemble:") >= 1


def test_ensemble_json_output(tmp_path):
    code = main(["ensemble", "--g-rel", "0.4", "--t-end", "0.5",
                 "--n-traj", "4", "--outdir", str(tmp_path),
                 "--format", "json"])
    assert code == 0
    payload = json.loads((tmp_path / "ensemble.json").read_text())
    assert payload["n_traj"] == 4
    assert "model.N_atoms" in payload["metadata"]
    assert "run.seed" in payload["metadata"]
    assert len(payload["columns"]["t_ms"]) == \
        len(payload["columns"]["mean_photon"])


def test_trajectory_command(tmp_path):
    code = main(["trajectory", "--g-rel", "0.5", "--t-end", "1.0",
                 "--outdir", str(tmp_path)])
    assert code == 0
    meta, header, data = _read_csv(tmp_path / "trajectory.csv")
    assert header[3] == "mean_photon"
    assert np.all(data[:, 4] == 0.0)  # single trajectory: zero std


def test_sense_command(tmp_path):
    # short run with a fast drive so the spectrum window holds 8 periods
    code = main(["sense", "--outdir", str(tmp_path), "--n-traj", "4",
                 "--t-ramp", "0.5", "--t0", "1.0", "--t-end", "4.0",
                 "--omega-drive", "4", "--delta-theta", "0.02"])
    assert code == 0
    assert (tmp_path / "sense_series.csv").exists()
    meta, header, data = _read_csv(tmp_path / "spectrum.csv")
    assert header == ["freq_2pikHz", "magnitude"]
    assert data.shape[1] == 2


def test_sense_command_skips_unresolvable_spectrum(tmp_path, capsys):
    code = main(["sense", "--outdir", str(tmp_path), "--n-traj", "4",
                 "--t-ramp", "0.5", "--t0", "1.0", "--t-end", "4.0",
                 "--omega-drive", "0.5", "--delta-theta", "0.02"])
    assert code == 0
    assert (tmp_path / "sense_series.csv").exists()
    assert not (tmp_path / "spectrum.csv").exists()
    assert "spectrum skipped" in capsys.readouterr().err


def test_sweep_command(tmp_path):
    code = main(["sweep", "--outdir", str(tmp_path),
                 "--theta-min", "0", "--theta-max", "0.25",
                 "--theta-steps", "2", "--g-rel-min", "0.6",
                 "--g-rel-max", "0.7", "--g-rel-steps", "2",
                 "--n-traj", "6", "--t-end", "6.0"])
    assert code == 0
    meta, header, data = _read_csv(tmp_path / "phase_diagram.csv")
    assert header == ["theta_rad", "g_rel", "photon_steady", "is_sr",
                      "converged"]
    assert data.shape == (4, 5)
    meta, header, data = _read_csv(tmp_path / "boundary.csv")
    assert header == ["theta_rad", "g_rel_crit"]
    assert data[0, 1] == pytest.approx(1.0)


def test_config_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.ini"
    bad.write_text("[model]\nM = 6\n")
    code = main(["ensemble", "--config", str(bad), "--outdir", str(tmp_path)])
    assert code == 2
    err = capsys.readouterr().err
    record = json.loads(err.strip().splitlines()[-1])
    assert record["error_class"] == "config"
    assert "multiple of 4" in record["message"]


def test_sweep_tail_follows_t_end(tmp_path):
    # shrinking t_end keeps the tail window inside the run
    cfg = parse_config(None, {("sweep", "t_end"): "6", ("sweep", "tail_ms"): "2"})
    grid = cfg.sweep_grid()
    assert grid.tail == (4.0, 6.0)
