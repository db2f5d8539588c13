import csv
import io
import json
import math
import subprocess
import sys
from pathlib import Path

import pytest

from retarded_sl import ConfigError, load_config, parse_config
from retarded_sl.cli import main, to_json

ROOT = Path(__file__).resolve().parents[1]
SHIPPED = ROOT / "configs" / "shipped.ini"

MINIMAL = """\
[problem]
a1 = 1
a1p = 1
a2 = 1
a2p = 1
b = pi/2
delta = 1
q_left = "cos(x)"
q_right = "cos(x)"
delay_left = "x/2"
delay_right = "(x-pi/2)/2"
"""


def write(tmp_path, text, name="p.ini"):
    path = tmp_path / name
    path.write_text(text)
    return path


def test_minimal_file_gets_default_numerics(tmp_path):
    cfg = load_config(write(tmp_path, MINIMAL))
    n = cfg.numerics
    assert (n.grid_points, n.quad_points, n.scan_step, n.root_tol, n.n_max) == (4096, 2048, 0.05, 1e-12, 40)
    assert cfg.problem["b"] == math.pi / 2
    assert cfg.problem["q_left"] == "cos(x)"


def test_unknown_key():
    with pytest.raises(ConfigError, match="unknown key a3"):
        parse_config(MINIMAL + "a3 = 1\n")


def test_quoted_real():
    cfg = parse_config(MINIMAL.replace("delta = 1", 'delta = "2.0"'))
    assert cfg.problem["delta"] == 2.0


@pytest.mark.parametrize(
    "text, match",
    [
        (MINIMAL + "[extra]\n", "unknown section"),
        (MINIMAL + "a1 = 2\n", "line 12: duplicate key a1"),
        (MINIMAL.replace("delta = 1", "delta = inf"), "delta"),
        (MINIMAL.replace("delta = 1", "delta = x"), "real constant"),
        (MINIMAL.replace("delta = 1\n", ""), "missing key delta"),
        (MINIMAL + "[numerics]\nn_max = 4.5\n", "integer"),
        (MINIMAL + "[numerics]\nsteps = 4\n", "unknown key steps"),
        ("a1 = 1\n" + MINIMAL, "outside of any section"),
        (MINIMAL + "just words\n", "key = value"),
    ],
)
def test_config_errors(text, match):
    with pytest.raises(ConfigError, match=match):
        parse_config(text, "p.ini")


def test_comments_and_hash_inside_quotes():
    cfg = parse_config("# header\n" + MINIMAL.replace('q_left = "cos(x)"', 'q_left = "cos(x)"  # potential'))
    assert cfg.problem["q_left"] == "cos(x)"


def test_numerics_section_and_override():
    cfg = parse_config(MINIMAL + "[numerics]\nn_max = 12\nscan_step = 0.025\n")
    assert cfg.numerics.n_max == 12 and cfg.numerics.scan_step == 0.025
    assert cfg.with_numerics(n_max=None, grid_points=2048).numerics.grid_points == 2048


def test_missing_file_is_an_os_error(tmp_path):
    with pytest.raises(OSError):
        load_config(tmp_path / "nope.ini")


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_validate_shipped(capsys):
    code, out, _ = run(["validate", SHIPPED], capsys)
    assert code == 0
    assert "a2p = 1" in out and "min x - delay(x) (left piece, bound 0)" in out
    assert out.rstrip().endswith("valid")


def test_eigen_row_count(capsys):
    code, out, err = run(["eigen", SHIPPED, "--nmax", 10], capsys)
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["label", "mu", "mu0", "eps", "f_residual"]
    assert len(rows) == 23
    assert [r[0] for r in rows[1:]] == [f"-{k}" for k in range(10, -1, -1)] + [f"+{k}" for k in range(11)]
    assert "not well separated" in err


def test_charfn_and_pqrs_sweeps(tmp_path, capsys):
    out_path = tmp_path / "f.csv"
    code, _, _ = run(["charfn", SHIPPED, "--from", -1, "--to", 1, "--step", 0.5, "--out", out_path], capsys)
    assert code == 0
    lines = out_path.read_text().splitlines()
    assert lines[0] == "mu,f,f0" and len(lines) == 6
    assert lines[1].startswith("-1,")
    code, out, _ = run(["pqrs", SHIPPED, "--from", 0, "--to", 2, "--step", 1], capsys)
    lines = out.splitlines()
    assert lines[0] == "mu,P,Q,R,S" and len(lines) == 4
    assert lines[1].split(",")[3:] == ["0", "0"]


def test_asym_table(capsys):
    code, out, _ = run(["asym", SHIPPED, "--nmax", 12, "--pqrs-at", "n"], capsys)
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["n", "mu", "mu_pred", "residual", "scaled_residual"]
    assert len(rows) == 1 + 22


def test_trace_json_schema(tmp_path, capsys):
    out_path = tmp_path / "t.json"
    code, _, _ = run(["trace", SHIPPED, "--nmax", 12, "--out", out_path], capsys)
    assert code == 0
    doc = json.loads(out_path.read_text())
    assert list(doc) == ["n_max", "rhs", "c_const", "d_const", "partial_sums", "residuals",
                         "decay_ratios", "pqrs_at", "warnings"]
    assert doc["n_max"] == 12 and len(doc["partial_sums"]) == 11 and doc["pqrs_at"] == "mu0"
    assert all(isinstance(w, str) for w in doc["warnings"])
    assert b"\r" not in out_path.read_bytes()


def test_validation_error_exit_code(tmp_path, capsys):
    bad = write(tmp_path, MINIMAL.replace('delay_right = "(x-pi/2)/2"', 'delay_right = "x"'))
    code, out, err = run(["validate", bad], capsys)
    assert code == 1 and out == ""
    assert err.startswith("error:") and "pi/2" in err


def test_indexing_error_exit_code(tmp_path, capsys):
    text = MINIMAL.replace("a2 = 1", "a2 = 0").replace("a1p = 1", "a1p = 0")
    text = text.replace('"cos(x)"', '"0"').replace('"x/2"', '"0"').replace('"(x-pi/2)/2"', '"0"')
    code, _, err = run(["eigen", write(tmp_path, text), "--nmax", 10], capsys)
    assert code == 1
    assert "label" in err and "expected exactly one" in err


def test_config_error_exit_code(tmp_path, capsys):
    code, _, err = run(["validate", write(tmp_path, MINIMAL + "a3 = 1\n")], capsys)
    assert code == 1 and "unknown key a3" in err
    code, _, err = run(["validate", tmp_path / "missing.ini"], capsys)
    assert code == 1


def test_help_mentions_threads():
    out = subprocess.run([sys.executable, "-m", "retarded_sl", "trace", "--help"],
                         capture_output=True, text=True, check=True).stdout
    assert "THREADS" in out and "--pqrs-at" in out


def test_json_writer_formats():
    text = to_json({"a": [0.1, float("nan")], "b": "x", "c": 3, "d": []})
    assert json.loads(text) == {"a": [0.1, None], "b": "x", "c": 3, "d": []}
    assert to_json(1 / 3) == "0.33333333333333331"
