import os
import subprocess
import sys

import pytest

from xraypent import paper_system as ps
from xraypent.cli import run
from xraypent.polycore import parse_poly
from xraypent.tomo_geom import parse_polygon_text

SUBCOMMANDS = ["verify-system", "eliminate", "resultant", "trace", "solve", "symmetral",
               "compare", "triangle-demo"]


@pytest.fixture
def triangle(tmp_path):
    path = tmp_path / "tri.txt"
    path.write_text("0 0\n1 0\n0 1\n")
    return str(path)


@pytest.mark.parametrize("cmd", SUBCOMMANDS)
def test_every_subcommand_has_help(cmd, capsys):
    assert run([cmd, "--help"]) == 0
    assert "usage: xraypent " + cmd in capsys.readouterr().out


@pytest.mark.parametrize("argv", [
    ["solve", "--x", "2/5", "--y", "not-a-number"],
    [],
    ["frobnicate"],
    ["trace", "--grid", "0"],
    ["trace", "--domain", "0,1,0"],
    ["symmetral", "--polygon", "x.txt", "--dir", "0,0"],
    ["compare", "--a", "a.txt", "--b", "b.txt", "--dirs", ";"],
    ["eliminate", "--stage", "q"],
])
def test_usage_errors_exit_2(argv, capsys):
    assert run(argv) == 2
    assert capsys.readouterr().err


def test_bad_polygon_file_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("0 0\n1 0\n2 0\n")
    assert run(["symmetral", "--polygon", str(bad), "--dir", "1,0"]) == 2
    assert "zero area" in capsys.readouterr().err
    assert run(["symmetral", "--polygon", str(tmp_path / "missing.txt"), "--dir", "1,0"]) == 2


def test_symmetral(triangle, tmp_path, capsys):
    assert run(["symmetral", "--polygon", triangle, "--dir", "1,0"]) == 0
    assert capsys.readouterr().out == "1/2 0\n0 1\n-1/2 0\n"
    out = tmp_path / "sym.txt"
    assert run(["symmetral", "--polygon", triangle, "--dir", "1,0", "--out", str(out)]) == 0
    assert out.read_text() == "1/2 0\n0 1\n-1/2 0\n"
    assert parse_polygon_text(out.read_text()).vertices


def test_compare(triangle, tmp_path, capsys):
    moved = tmp_path / "moved.txt"
    moved.write_text("3 0\n4 0\n3 1\n")
    assert run(["compare", "--a", triangle, "--b", str(moved), "--dirs", "1,0;0,1"]) == 0
    out = capsys.readouterr().out
    assert "1,0: equal" in out and "0,1: different" in out
    assert "X-ray equivalent: no" in out


def test_triangle_demo(capsys):
    assert run(["triangle-demo", "--seed", "1"]) == 0
    out = capsys.readouterr().out
    assert "congruent: no" in out and "result: PASS" in out
    assert out.count("chord functions equal") == 2


def test_eliminate_outputs_parseable_polynomials(tmp_path):
    out = tmp_path / "v.txt"
    assert run(["eliminate", "--stage", "v", "--out", str(out)]) == 0
    lines = [ln for ln in out.read_text().splitlines() if not ln.startswith("#")]
    assert [parse_poly(ln) for ln in lines] == list(ps.eliminate_v().values())


def test_resultant_check_leading_reports_mismatch(capsys, tmp_path):
    out = tmp_path / "res.poly"
    assert run(["resultant", "--check-leading", "--out", str(out)]) == 1
    text = capsys.readouterr().out
    assert "coefficient of x^42*y^34: 9188676188160" in text
    assert "268435456: FAIL" in text
    assert parse_poly(out.read_text()) == ps.final_resultant()


def test_resultant_without_check_succeeds(capsys):
    assert run(["resultant"]) == 0
    assert "821 terms" in capsys.readouterr().out


def test_trace_outputs(tmp_path):
    csv1, csv2, svg = tmp_path / "a.csv", tmp_path / "b.csv", tmp_path / "c.svg"
    assert run(["trace", "--grid", "32", "--out", str(csv1), "--svg", str(svg)]) == 0
    assert run(["trace", "--grid", "32", "--out", str(csv2)]) == 0
    text = csv1.read_text()
    assert text == csv2.read_text()
    lines = text.splitlines()
    assert lines[0] == "x,y,residual" and len(lines) > 1
    x, y, r = (float(v) for v in lines[1].split(","))
    assert 0 <= x <= 1 and 0 <= y <= 1 and r >= 0
    body = svg.read_text()
    assert body.startswith("<svg") and 'viewBox="0 -1 1 1"' in body
    assert body.count("<circle") == len(lines) - 1


def test_solve_reports_residuals(capsys):
    assert run(["solve", "--x", "1/2", "--y", "9/10"]) == 0
    assert "tuples: 0" in capsys.readouterr().out


def test_verify_system_fails_honestly(capsys):
    assert run(["verify-system", "--samples", "3", "--seed", "1"]) == 1
    out = capsys.readouterr().out
    assert "SAMPLING FAILED" in out
    assert "R2 vs v-eliminant of Q3: DIVIDES_COMPUTED" in out
    assert "R1 vs v-eliminant of Q2: INCONSISTENT" in out
    assert "14*u^5*x*y^2" in out
    assert out.rstrip().endswith("result: FAIL")


def test_cache_flag_and_environment(tmp_path):
    flag_dir, env_dir = tmp_path / "flag", tmp_path / "env"
    env = {**os.environ, "XRAYPENT_CACHE": str(env_dir)}
    cmd = [sys.executable, "-m", "xraypent", "resultant"]
    subprocess.run(cmd, env=env, check=True, capture_output=True)
    assert (env_dir / ps.FINAL_RESULTANT_FILE).exists()
    subprocess.run(cmd + ["--cache", str(flag_dir)], env=env, check=True, capture_output=True)
    assert (flag_dir / ps.FINAL_RESULTANT_FILE).exists()


def test_console_script_usage_error():
    proc = subprocess.run(["xraypent", "solve", "--x", "2/5", "--y", "nan?"],
                          capture_output=True, text=True)
    assert proc.returncode == 2
    assert "not a rational number" in proc.stderr
