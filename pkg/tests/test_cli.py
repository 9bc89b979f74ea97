import csv
import json

import numpy as np
import pytest

from diracweyl.cli import Config, ConfigError, main
from diracweyl.fields import read_field


def run(tmp_path, *args):
    return main(list(args) + ["--out", str(tmp_path)])


def load(path):
    return json.loads(path.read_text())


def test_evolve_dirac_spectral(tmp_path):
    rc = run(tmp_path, "evolve", "--eq", "dirac", "--n", "1", "--N", "1024", "--L", "40",
             "--bump", "a=0.5", "--t", "3", "--engine", "spectral")
    assert rc == 0
    summary = load(tmp_path / "run_summary.json")
    assert summary["times"][0]["norm_drift"] < 1e-11
    field = read_field(tmp_path / "run_t0.hdw")
    assert field.grid.N == 1024
    assert (tmp_path / "run_config.ini").exists() and (tmp_path / "run.log").exists()


def test_evolve_time_zero_reproduces_input(tmp_path):
    assert run(tmp_path, "evolve", "--n", "2", "--N", "64", "--L", "8", "--t", "0") == 0
    init = read_field(tmp_path / "run_init.hdw")
    out = read_field(tmp_path / "run_t0.hdw")
    assert np.abs(out.values - init.values).max() <= 1e-12


def test_evolve_kg_closedform_1d(tmp_path):
    assert run(tmp_path, "evolve", "--eq", "kg", "--n", "1", "--t", "1,2",
               "--engine", "closedform") == 0
    assert (tmp_path / "run_t1.csv").exists()
    assert (tmp_path / "run_init_g.hdw").exists()


def test_evolve_closedform_2d_probes(tmp_path):
    rc = run(tmp_path, "evolve", "--n", "2", "--N", "512", "--L", "10", "--t", "2",
             "--engine", "closedform", "--probes", "200")
    assert rc == 0
    row = load(tmp_path / "run_summary.json")["times"][0]
    assert row["max_error_of_peak"] < 1e-2
    with open(tmp_path / row["probes"]) as fh:
        assert len(list(csv.reader(fh))) == 201


def test_evolve_wrap_bound_is_a_config_error(tmp_path):
    assert run(tmp_path, "evolve", "--n", "3", "--N", "32", "--L", "4", "--bump", "a=1",
               "--t", "1.5", "--engine", "closedform", "--probes", "3") == 2


def test_huygens_2d_non_huygens(tmp_path):
    assert run(tmp_path, "huygens", "--eq", "dirac", "--n", "2") == 0
    rep = load(tmp_path / "run_report.json")
    assert rep["classification"] == "non_huygens"
    assert rep["causality_ok"] is True
    with open(tmp_path / "run_profile.csv") as fh:
        assert next(csv.reader(fh)) == ["r", "mass"]


def test_huygens_3d_dirac_defaults(tmp_path):
    assert run(tmp_path, "huygens", "--eq", "dirac", "--n", "3") == 0
    assert load(tmp_path / "run_report.json")["classification"] == "huygens"


def test_huygens_1d_kg_velocity_bump(tmp_path):
    assert run(tmp_path, "huygens", "--eq", "kg", "--n", "1", "--kg-g", "bump") == 0
    assert load(tmp_path / "run_report.json")["classification"] == "non_huygens"


def test_huygens_causality_failure_exit_code(tmp_path):
    # too coarse for the a = 0.5 bump: aliasing leaks mass outside the cone
    assert run(tmp_path, "huygens", "--eq", "dirac", "--n", "3", "--N", "64", "--L", "8") == 4


def test_zeta_scan(tmp_path):
    assert run(tmp_path, "zeta", "--n", "2", "--t", "2", "--r", "1,3") == 0
    with open(tmp_path / "run_zeta.csv") as fh:
        rows = list(csv.DictReader(fh))
    limits = {float(r["r"]): r for r in rows if r["row"] == "limit"}
    exact = -1 / (2 * np.pi * np.sqrt(3))
    assert abs(float(limits[1.0]["im"]) - exact) < 1e-4 * abs(exact)
    assert abs(float(limits[3.0]["im"])) < 1e-4
    assert float(limits[1.0]["green_im"]) == pytest.approx(exact)
    assert sum(r["row"] == "scan" for r in rows) == 10


def test_zeta_n3_off_shell(tmp_path):
    assert run(tmp_path, "zeta", "--n", "3", "--t", "2", "--r", "0.5") == 0
    with open(tmp_path / "run_zeta.csv") as fh:
        limit = [r for r in csv.DictReader(fh) if r["row"] == "limit"][0]
    assert abs(complex(float(limit["re"]), float(limit["im"]))) < 1e-4


def test_zeta_convergence_failure_keeps_going(tmp_path):
    rc = run(tmp_path, "zeta", "--n", "5", "--t", "2", "--r", "0.5,1")
    assert rc == 3
    with open(tmp_path / "run_zeta.csv") as fh:
        rows = list(csv.DictReader(fh))
    assert sum(r["row"] == "limit" for r in rows) == 2
    assert all(r["status"].startswith("failed") for r in rows if r["row"] == "limit")


def test_unknown_config_key(tmp_path):
    cfg = tmp_path / "bad.ini"
    cfg.write_text("[run]\nequation = dirac\nspeed = 2\n")
    assert main(["evolve", "--config", str(cfg), "--out", str(tmp_path)]) == 2
    cfg.write_text("[nonsense]\nx = 1\n")
    assert main(["evolve", "--config", str(cfg), "--out", str(tmp_path)]) == 2


def test_bad_values_are_config_errors(tmp_path):
    assert run(tmp_path, "evolve", "--n", "4") == 2
    assert run(tmp_path, "evolve", "--N", "100") == 2
    assert run(tmp_path, "evolve", "--eq", "maxwell") == 2
    assert run(tmp_path, "evolve", "--bump", "radius=1") == 2
    assert run(tmp_path, "evolve", "--t", "-1") == 2


def test_resolved_config_round_trip_is_deterministic(tmp_path):
    first = tmp_path / "a"
    second = tmp_path / "b"
    assert main(["huygens", "--n", "2", "--eq", "kg", "--out", str(first)]) == 0
    assert main(["huygens", "--config", str(first / "run_config.ini"),
                 "--out", str(second)]) == 0
    for name in ("run_report.json", "run_profile.csv"):
        assert (first / name).read_bytes() == (second / name).read_bytes()


def test_config_defaults_and_overrides():
    cfg = Config()
    assert cfg.get("run", "t") == [3.0]
    assert cfg.get("run", "L") is None
    cfg.set("closedform", "sphere", "16x32")
    assert cfg.get("closedform", "sphere") == (16, 32)
    with pytest.raises(ConfigError):
        cfg.set("closedform", "sphere", "16")


def test_bump_flag_with_vector_center(tmp_path):
    assert run(tmp_path, "evolve", "--n", "2", "--N", "64", "--L", "8",
               "--bump", "a=1,center=0.5,-0.5", "--t", "0") == 0
    text = (tmp_path / "run_config.ini").read_text()
    assert "center = 0.5,-0.5" in text


def test_selftest(capsys, tmp_path):
    assert main(["selftest"]) == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out and out.count("PASS") >= 5


def test_thread_env_variable(tmp_path, monkeypatch):
    monkeypatch.setenv("DIRACWEYL_THREADS", "1")
    assert run(tmp_path / "one", "evolve", "--n", "3", "--N", "32", "--L", "8", "--t", "1") == 0
    monkeypatch.setenv("DIRACWEYL_THREADS", "3")
    assert run(tmp_path / "three", "evolve", "--n", "3", "--N", "32", "--L", "8", "--t", "1") == 0
    assert ((tmp_path / "one" / "run_t0.hdw").read_bytes()
            == (tmp_path / "three" / "run_t0.hdw").read_bytes())
