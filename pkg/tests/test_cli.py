import csv
import io
import json
import math
import subprocess
import sys

import pytest

from bicost.cli import ConfigError, main, parse_config_text


def rows(text):
    return list(csv.reader(io.StringIO(text)))


def test_zeta(capsys):
    assert main(["zeta"]) == 0
    out = dict(r for r in rows(capsys.readouterr().out)[1:])
    assert float(out["lambda1_sq"]) == pytest.approx(math.sqrt(3) / 432)
    assert abs(float(out["zeta_m1_at_root_plus"])) < 1e-12


def test_cost_example1_writes_files(tmp_path):
    out = tmp_path / "c.csv"
    code = main(["cost", "--profile", "example1case1", "--b1", "1", "--b2", "1", "--t-max", "1",
                 "--steps", "11", "--out", str(out), "--format", "both"])
    assert code == 0
    data = rows(out.read_text())
    assert data[0] == ["t", "F2", "C_cum", "bound"]
    assert float(data[-1][2]) < float(data[-1][3])
    assert (tmp_path / "c_trajectory.csv").exists()
    assert (tmp_path / "c.svg").read_text().startswith("<svg")
    man = json.loads((tmp_path / "c.csv.manifest.json").read_text())
    assert man["subcommand"] == "cost" and str(out) in man["files"]


def test_cost_is_deterministic(tmp_path):
    args = ["cost", "--profile", "quench", "--delta", "1", "--eta", "1", "--t-max", "2", "--steps", "9"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_config_file_and_flag_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("profile = timeindep\nprofile.A0 = 4  # omega^2\nprofile.B0 = 1\n")
    assert main(["timeindep", "--config", str(cfg)]) == 0
    f2 = float(dict(r for r in rows(capsys.readouterr().out)[1:])["F2"])
    assert main(["timeindep", "--config", str(cfg), "--A0", "1"]) == 0
    f2b = float(dict(r for r in rows(capsys.readouterr().out)[1:])["F2"])
    assert f2 == pytest.approx(4 * f2b)


def test_parse_config_errors():
    assert parse_config_text("tol = 1e-9\n\n# c\nquench.beta = 2") == {"tol": "1e-9", "quench.beta": "2"}
    for bad in ("nonsense = 1", "tol = 1\ntol = 2", "justtext", "profile.zz = 3"):
        with pytest.raises(ConfigError):
            parse_config_text(bad)


@pytest.mark.parametrize("argv", [
    ["cost", "--profile", "example1", "--b1", "1", "--b2", "3"],
    ["cost"],
    ["cost", "--profile", "constant", "--omega", "1", "--tol", "-1"],
    ["quench", "--format", "svg"],
])
def test_config_errors_exit_2(argv, capsys):
    assert main(argv) == 2
    assert "configuration error" in capsys.readouterr().err


def test_io_error_exit_4(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    assert main(["zeta", "--out", str(blocker / "sub" / "x.csv")]) == 4


def test_timeindep_isotonic(capsys):
    assert main(["timeindep", "--profile", "timeindep", "--A0", "1", "--B0", "1", "--D0", "0.05"]) == 0
    out = dict(r for r in rows(capsys.readouterr().out)[1:])
    assert float(out["mean_sign"]) == -1.0


def test_quench_series_and_figure(tmp_path, capsys):
    assert main(["quench", "--beta", "0.5", "--s-max", "4", "--steps", "5"]) == 0
    data = rows(capsys.readouterr().out)
    assert data[0] == ["s", "delta_S", "f", "F_N2"] and float(data[1][1]) == 0.0
    out = tmp_path / "fig3.csv"
    assert main(["quench", "--figure", "3", "--out", str(out), "--format", "both"]) == 0
    assert rows(out.read_text())[0][0] == "beta"
    assert (tmp_path / "fig3.svg").exists()


def test_equiv(capsys):
    assert main(["equiv", "--profile", "ck", "--M", "1", "--omega", "1", "--Delta", "0.5",
                 "--t-max", "1", "--steps", "5"]) == 0
    cap = capsys.readouterr()
    gap = float(cap.err.split("gap=")[1].split()[0])
    assert gap < 1e-6
    assert rows(cap.out)[0] == ["t", "F2_otmf", "B1_times_f_otf"]


def test_su11_check(capsys):
    assert main(["su11-check", "--samples", "12"]) == 0
    vals = [float(r[2]) for r in rows(capsys.readouterr().out)[1:]]
    assert max(vals) < 1e-6


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "bicost.cli", "--version"], capture_output=True, text=True)
    assert res.returncode == 0 and "bicost" in res.stdout
