import csv
import json
import math
import os
import subprocess
import sys
from pathlib import Path

import pytest

from diraczero.cli import main
from diraczero.config import load_config
from diraczero.export import PROFILE_COLUMNS

BASE = "[params]\nM = 1.5\nk_v = 2.5\nk_y = 0.0\nL = 6.283185307179586\n[grid]\nx_min = -5\nx_max = 5\nn_points = 101\n"


def write(tmp_path, name, omega, params=BASE):
    path = tmp_path / name
    path.write_text(f"[omega]\n{omega}\n{params}")
    return path


def p_at_zero(csv_path):
    with open(csv_path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    return float(next(r for r in rows if float(r["x"]) == 0.0)["P"])


@pytest.mark.parametrize(
    "family, expected",
    [
        ("polynomial_even", [1 / math.pi, math.sqrt(2) / math.pi, 3 / (2 * math.pi)]),
        ("cosh_power", [1 / math.pi, 0.5, 2 / math.pi]),
    ],
)
def test_zeromode_peak_heights(tmp_path, family, expected):
    peaks = []
    for n in (1, 2, 3):
        cfg = write(tmp_path, f"{family}{n}.ini", f"family = {family}\nn = {n}")
        out = tmp_path / f"{family}{n}"
        assert main(["zeromode", "--config", str(cfg), "--out", str(out)]) == 0
        peaks.append(p_at_zero(out / "zeromode.csv"))
    assert peaks == pytest.approx(expected, rel=1e-12)
    if family == "polynomial_even":
        assert peaks[0] < peaks[1] < peaks[2]


def test_zeromode_outputs(tmp_path):
    assert main(["zeromode", "--out", str(tmp_path)]) == 0
    raw = (tmp_path / "zeromode.csv").read_bytes()
    header, first = raw.split(b"\r\n")[:2]
    assert header.decode() == ",".join(PROFILE_COLUMNS)
    assert first.startswith(b"-5,")
    assert raw.count(b"\r\n") == 1002
    summary = json.loads((tmp_path / "zeromode.json").read_text())
    assert summary["lambda"] == [0.0, 2.0]
    assert summary["degeneracy"] == 5
    assert summary["ky_range"] == [-2.0, 2.0]
    assert summary["N"] == pytest.approx(math.sqrt(1 / (2 * math.pi * 2 * math.pi * 2.5)), rel=1e-12)


def test_zeromode_grid_override(tmp_path):
    assert main(["zeromode", "--out", str(tmp_path), "--grid-n", "11"]) == 0
    assert (tmp_path / "zeromode.csv").read_text().count("\n") == 12


def test_zeromode_inadmissible(tmp_path, capsys):
    cfg = write(tmp_path, "bad.ini", "family = polynomial_even", BASE.replace("k_y = 0.0", "k_y = 2.5"))
    assert main(["zeromode", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 2
    assert "InadmissibleError" in capsys.readouterr().err
    assert not (tmp_path / "o" / "zeromode.csv").exists()


def test_outputs_are_byte_identical(tmp_path):
    cfg = write(tmp_path, "c.ini", "family = cosh_power\nn = 3")
    for run in ("a", "b"):
        for cmd in ("zeromode", "geometry"):
            assert main([cmd, "--config", str(cfg), "--out", str(tmp_path / run)]) == 0
    for name in ("zeromode.csv", "zeromode.json", "geometry_report.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_geometry_cosh_passes(tmp_path):
    cfg = write(tmp_path, "c.ini", "family = cosh_power\nn = 1")
    assert main(["geometry", "--config", str(cfg), "--out", str(tmp_path)]) == 0
    report = json.loads((tmp_path / "geometry_report.json").read_text())
    assert {c["status"] for c in report["checks"]} == {"pass"}


def test_geometry_node_rejected(tmp_path, capsys):
    cfg = write(tmp_path, "node.ini", "family = polynomial_even\nc = 0\nn = 1")
    assert main(["geometry", "--config", str(cfg), "--out", str(tmp_path)]) == 2
    assert "nodeless" in capsys.readouterr().err


def test_empty_config(tmp_path, capsys):
    cfg = tmp_path / "empty.ini"
    cfg.write_text("")
    assert main(["verify", "--config", str(cfg), "--out", str(tmp_path)]) == 2
    assert "omega.family" in capsys.readouterr().err


def test_negative_tolerance(tmp_path):
    assert main(["verify", "--tol", "-1", "--out", str(tmp_path)]) == 2


@pytest.mark.slow
def test_verify_default_passes(tmp_path):
    assert main(["verify", "--out", str(tmp_path)]) == 0
    report = json.loads((tmp_path / "verify_report.json").read_text())
    assert [c["status"] for c in report["checks"]] == ["pass"] * 8
    meta = json.loads((tmp_path / "verify_metadata.json").read_text())
    assert meta["total_seconds"] < 60


@pytest.mark.slow
def test_verify_zero_tolerance_names_quadrature_checks(tmp_path, capsys):
    assert main(["verify", "--tol", "0", "--out", str(tmp_path)]) == 1
    report = json.loads((tmp_path / "verify_report.json").read_text())
    failed = {c["name"] for c in report["checks"] if c["status"] == "fail"}
    assert {"AC1", "AC2"} <= failed
    out = capsys.readouterr().out
    assert "FAIL] AC1" in out and "FAIL] AC2" in out


@pytest.mark.slow
def test_verify_degenerate(tmp_path, capsys):
    cfg = write(tmp_path, "deg.ini", "family = polynomial_even", "[params]\nM = 2\nk_v = 2\n")
    assert main(["verify", "--config", str(cfg), "--out", str(tmp_path)]) == 2
    report = json.loads((tmp_path / "verify_report.json").read_text())
    skipped = {c["name"] for c in report["checks"] if c["status"] == "skipped-degenerate"}
    assert skipped == {"AC1", "AC2", "AC6", "AC8"}
    assert "degenerate" in capsys.readouterr().err


def test_pure_python_backend_selected_by_env():
    env = dict(os.environ, DIRACZERO_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "from diraczero.discrete import BACKEND; print(BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"


def test_module_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "diraczero.cli", "--help"], capture_output=True, text=True)
    assert res.returncode == 0 and "verify" in res.stdout


SHIPPED = sorted((Path(__file__).resolve().parents[1] / "configs").glob("*.ini"))


@pytest.mark.parametrize("path", SHIPPED, ids=lambda p: p.stem)
def test_shipped_configs_parse(path):
    cfg = load_config(path)
    assert cfg.params.M >= 0


def test_benchmark_script_runs():
    script = Path(__file__).resolve().parents[1] / "benchmarks" / "bench_kernels.py"
    res = subprocess.run([sys.executable, str(script), "--sizes", "101", "--repeat", "1"],
                         capture_output=True, text=True)
    assert res.returncode in (0, 1), res.stderr
    assert "apply_dirac" in res.stdout or "not built" in res.stdout
