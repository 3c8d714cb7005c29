import json
import os
import subprocess
import sys

import numpy as np
import pytest

from multifrac import HurstFunction, ProcessSpec, TimeGrid, __version__, io, simulate
from multifrac.cli import RunConfig, main, parse_grid
from multifrac.estimate import local_hurst_estimate

SINE = "sine:mu=0.3,nu=0.7,period=1,phase=0"


def test_parse_grid_counts_points():
    assert parse_grid("0:1:256") == {"start": 0.0, "end": 1.0, "n": 256}
    from multifrac.cli import ConfigError
    for bad in ("0:1", "1:0:4", "0:1:0", "a:b:c"):
        with pytest.raises(ConfigError):
            parse_grid(bad)


def test_csv_format(tmp_path):
    e = simulate(ProcessSpec.bfbm(0.5, 1.0), TimeGrid.uniform(0, 1, 4), 3, 1)
    path = tmp_path / "p.csv"
    io.write_paths_csv(path, e)
    raw = path.read_bytes()
    assert b"\r" not in raw and raw.endswith(b"\n")
    lines = raw.decode().splitlines()
    assert lines[0] == "t,path_0,path_1,path_2"
    assert len(lines) == 6
    assert lines[1] == "0,0,0,0"
    t, p = io.read_paths_csv(path)
    assert np.array_equal(p, e.paths) and np.array_equal(t, e.grid.points)
    assert not [f for f in os.listdir(tmp_path) if f.startswith(".tmp-")]


def test_simulate_command(tmp_path, capsys):
    out = tmp_path / "paths.csv"
    args = ["simulate", "--process", "ext", "--K", "0.7", "--hurst", SINE, "--grid", "0:1:256",
            "--paths", "100", "--seed", "42", "--out", str(out)]
    assert main(args) == 0
    line = capsys.readouterr().out
    assert "n_paths=100" in line and "n_times=257" in line and "jitter=" in line and "wall=" in line
    header = out.read_text().splitlines()[0].split(",")
    assert header[0] == "t" and header[1] == "path_0" and header[-1] == "path_99"
    assert len(out.read_text().splitlines()) == 258  # header + 257 grid times
    first = out.read_bytes()
    assert main(args) == 0
    assert out.read_bytes() == first


def test_simulate_brownian_variance(tmp_path):
    out = tmp_path / "bm.csv"
    assert main(["simulate", "--process", "bfbm", "--H", "0.5", "--K", "1", "--grid", "0:1:8",
                 "--paths", "4000", "--seed", "7", "--out", str(out)]) == 0
    _, p = io.read_paths_csv(out)
    assert abs(p[:, -1].var(ddof=1) - 1) <= 4 * np.sqrt(2 / 4000)


def test_workers_do_not_change_bytes(tmp_path):
    base = ["simulate", "--process", "ext", "--K", "0.6", "--hurst", SINE, "--grid", "0:2:128",
            "--paths", "700", "--seed", "5"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(base + ["--workers", "1", "--out", str(a)]) == 0
    assert main(base + ["--workers", "8", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def _report(path):
    return json.loads(path.read_text())


def test_verify_decomposition(tmp_path):
    out = tmp_path / "d.json"
    assert main(["verify", "decomposition", "--H", "0.6", "--K", "0.4", "--out", str(out)]) == 0
    doc = _report(out)
    assert set(doc) == {"config", "reports", "version"} and doc["version"] == __version__
    rep = doc["reports"][0]
    assert rep["pass"] and rep["measured"][0][1] <= 1e-12
    assert {"check_name", "inputs", "measured", "target", "tolerance", "pass", "notes"} <= set(rep)


def test_verify_lass(tmp_path):
    out = tmp_path / "l.json"
    assert main(["verify", "lass", "--process", "ext", "--K", "0.6", "--hurst", SINE, "--t", "1",
                 "--out", str(out)]) == 0
    assert _report(out)["reports"][0]["pass"]


def test_verify_psd_sweep(tmp_path):
    out = tmp_path / "p.json"
    assert main(["verify", "psd", "--configs", "50", "--seed", "11", "--out", str(out)]) == 0
    assert len(_report(out)["reports"]) == 50


@pytest.mark.parametrize("args", [
    ["verify", "quasi-helix", "--H", "0.7", "--K", "0.4", "--grid", "0:10:63"],
    ["verify", "holder", "--hurst", SINE, "--K", "0.5", "--pairs", "2000"],
    ["verify", "prop2", "--K", "0.5", "--samples", "20"],
    ["verify", "tk-identity", "--K", "0.3"],
    ["check-psd", "--process", "ext", "--hurst", SINE, "--K", "0.3", "--grid", "0:10:100"],
])
def test_other_checks_pass(tmp_path, args):
    assert main(args + ["--out", str(tmp_path / "r.json")]) == 0


def test_lrd_command(tmp_path, capsys):
    out = tmp_path / "lrd.json"
    assert main(["lrd", "--process", "bfbm", "--H", "0.9", "--K", "0.7", "--out", str(out)]) == 0
    reps = {r["check_name"]: r for r in _report(out)["reports"]}
    assert dict(reps["memory"]["measured"])["label"] == "LONG"


def test_lrd_boundary_warns_exit_zero(tmp_path, capsys):
    out = tmp_path / "b.json"
    assert main(["lrd", "--process", "bfbm", "--H", "0.625", "--K", "0.8", "--out", str(out)]) == 0
    assert "BOUNDARY" in capsys.readouterr().err
    reps = {r["check_name"]: r for r in _report(out)["reports"]}
    assert dict(reps["memory"]["measured"])["label"] == "BOUNDARY"


def test_lrd_rejects_short_grid(tmp_path):
    assert main(["lrd", "--H", "0.7", "--K", "0.5", "--t-lo", "1e6", "--t-hi", "1e8",
                 "--out", str(tmp_path / "x.json")]) == 2


def test_exit_codes(tmp_path):
    out = str(tmp_path / "x.json")
    assert main(["verify", "holder", "--K", "0.5", "--out", out]) == 2
    assert main(["simulate", "--process", "bfbm", "--H", "1.5", "--K", "1", "--grid", "0:1:4", "--out", out]) == 2
    assert main(["verify", "prop2", "--K", "0.5", "--a", "2", "--b", "1", "--out", out]) == 2
    # an impossible tolerance makes the audit itself fail
    assert main(["verify", "decomposition", "--H", "0.6", "--K", "0.4", "--tol", "-1", "--out", out]) == 1
    with pytest.raises(SystemExit) as info:
        main(["verify", "nonsense"])
    assert info.value.code == 2


def test_config_replay_is_bit_identical(tmp_path):
    first = tmp_path / "h.json"
    assert main(["verify", "holder", "--hurst", SINE, "--K", "0.9", "--pairs", "3000", "--seed", "4",
                 "--out", str(first)]) == 0
    second = tmp_path / "h2.json"
    assert main(["--config", str(first), "--replay-out", str(second)]) == 0
    a, b = _report(first), _report(second)
    assert a["reports"] == b["reports"]
    a["config"].pop("out"), b["config"].pop("out")
    assert a["config"] == b["config"]
    cfg = RunConfig.from_dict(json.loads(first.read_text())["config"])
    assert cfg.command == "verify" and cfg.check == "holder"


def test_out_dir_env(tmp_path, monkeypatch):
    monkeypatch.setenv("MULTIFRAC_OUT_DIR", str(tmp_path / "env"))
    assert main(["check-psd", "--process", "bfbm", "--H", "0.5", "--K", "1", "--grid", "0:1:10"]) == 0
    assert (tmp_path / "env" / "check-psd.json").exists()


def test_csv_round_trip_feeds_estimate(tmp_path):
    csv = tmp_path / "p.csv"
    assert main(["simulate", "--process", "bfbm", "--H", "0.8", "--K", "0.5", "--grid", "0:1:1024",
                 "--paths", "50", "--seed", "3", "--out", str(csv)]) == 0
    out = tmp_path / "e.json"
    assert main(["estimate", "--in", str(csv), "--process", "bfbm", "--H", "0.8", "--K", "0.5",
                 "--window", "129", "--t", "0.5", "--out", str(out)]) == 0
    rep = _report(out)["reports"][0]
    e = simulate(ProcessSpec.bfbm(0.8, 0.5), TimeGrid.uniform(0, 1, 1024), 50, 3)
    direct = local_hurst_estimate(e.paths, e.grid.points, 0.5, window=129)
    assert dict(rep["measured"])["estimate"] == pytest.approx(direct.estimate, abs=1e-12)


def test_console_entry_point(tmp_path):
    r = subprocess.run([sys.executable, "-m", "multifrac.cli", "--version"], capture_output=True, text=True)
    assert r.returncode == 0 and __version__ in r.stdout
