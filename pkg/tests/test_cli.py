import json
import subprocess
import sys

import pytest

from qop.cli import main
from qop.generators import ginibre
from qop.linalg import QMatrix
from qop.matio import json_to_matrix, save_matrix
from qop.quaternion import I, Quaternion


def _write(tmp_path, name, matrix):
    path = tmp_path / name
    save_matrix(str(path), matrix)
    return str(path)


def _shift_file(tmp_path):
    return _write(tmp_path, "shift.json",
                  QMatrix.from_quaternions([[0.0, 1.0], [0.0, 0.0]]))


def test_classify_identity(tmp_path, capsys):
    path = _write(tmp_path, "eye.json", QMatrix.identity(2))
    assert main(["classify", path]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["selfadjoint"] and out["positive"] and out["normal"] and out["unitary"]
    assert out["positive_margin"] == pytest.approx(1.0)


def test_classify_with_hyponormal_flag(tmp_path, capsys):
    path = _shift_file(tmp_path)
    assert main(["classify", path, "--p", "1.0"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert not out["normal"]
    assert out["p_hyponormal"]["violated"] is True
    assert out["p_hyponormal"]["margin"] == pytest.approx(-1.0)


def test_polar_output(tmp_path, capsys):
    path = _shift_file(tmp_path)
    assert main(["polar", path]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["rank"] == 1
    assert json_to_matrix(out["absT"]).entry(1, 1) == Quaternion(1.0, 0.0, 0.0, 0.0)
    assert json_to_matrix(out["U"]).entry(0, 1) == Quaternion(1.0, 0.0, 0.0, 0.0)


def test_transform_aluthge_annihilates_shift(tmp_path, capsys):
    path = _shift_file(tmp_path)
    assert main(["transform", "--kind", "aluthge", path]) == 0
    out = json_to_matrix(json.loads(capsys.readouterr().out))
    assert out.frobenius() <= 1e-12


def test_transform_lambda_and_sr_kinds(tmp_path, capsys):
    path = _write(tmp_path, "pos.json", QMatrix.diag([1.0, 4.0]))
    assert main(["transform", "--kind", "lambda:0.5", path]) == 0
    assert main(["transform", "--kind", "sr:1.0", path]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    for line in lines:
        m = json_to_matrix(json.loads(line))
        assert (m - QMatrix.diag([1.0, 4.0])).frobenius() <= 1e-9


def test_transform_unknown_kind(tmp_path, capsys):
    path = _shift_file(tmp_path)
    assert main(["transform", "--kind", "cayley", path]) == 2
    assert "unknown transform kind" in capsys.readouterr().err


def test_spectrum_classes(tmp_path, capsys):
    t = QMatrix.diag([I, Quaternion(0.0, 0.0, 2.0, 0.0)])
    path = _write(tmp_path, "norm.json", t)
    assert main(["spectrum", path]) == 0
    out = json.loads(capsys.readouterr().out)
    got = sorted(map(tuple, out["classes"]))
    assert len(got) == 2
    assert got[0] == pytest.approx((0.0, 1.0), abs=1e-10)
    assert got[1] == pytest.approx((0.0, 2.0), abs=1e-10)
    assert out["radius"] == pytest.approx(2.0)


def test_verify_pass_and_determinism(capsys):
    argv = ["verify", "tu-star", "--trials", "3", "--seed", "2", "--dim", "3"]
    assert main(argv) == 0
    first = capsys.readouterr().out
    assert main(argv) == 0
    second = capsys.readouterr().out
    assert first == second
    report = json.loads(first)
    assert report["min_margin"] >= -report["tol"]
    assert "witness" not in report


def test_verify_probe_violation_exits_one(capsys):
    assert main(["verify", "lowner-heinz", "--trials", "1", "--probe"]) == 1
    report = json.loads(capsys.readouterr().out)
    assert report["witness"]["r"] == 2.0
    assert report["min_margin"] < 0


def test_verify_rejects_unknown_property(capsys):
    with pytest.raises(SystemExit):
        main(["verify", "fermat"])
    capsys.readouterr()


def test_fuzz_clean_run(capsys):
    assert main(["fuzz", "tu-star", "--budget", "3", "--dim", "3"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["trials"] == 3


def test_tol_env_and_flag_precedence(tmp_path, capsys, monkeypatch):
    path = _shift_file(tmp_path)
    monkeypatch.setenv("QOP_TOL", "1e6")
    assert main(["classify", path]) == 0
    loose = json.loads(capsys.readouterr().out)
    assert loose["normal"]
    assert main(["classify", path, "--tol", "1e-8"]) == 0
    tight = json.loads(capsys.readouterr().out)
    assert not tight["normal"]


def test_tol_env_invalid(tmp_path, capsys, monkeypatch):
    path = _shift_file(tmp_path)
    monkeypatch.setenv("QOP_TOL", "abc")
    assert main(["classify", path]) == 2
    assert "QOP_TOL" in capsys.readouterr().err


def test_missing_file_exits_two(capsys):
    assert main(["polar", "/nonexistent/thing.json"]) == 2
    capsys.readouterr()


def test_nan_payload_exits_two(tmp_path, capsys):
    path = tmp_path / "nan.json"
    path.write_text('{"rows": 1, "cols": 1, "entries": [[[NaN, 0, 0, 0]]]}')
    assert main(["classify", str(path)]) == 2
    capsys.readouterr()


def test_garbage_json_exits_two(tmp_path, capsys):
    path = tmp_path / "garbage.json"
    path.write_text("{not json")
    assert main(["classify", str(path)]) == 2
    capsys.readouterr()


def test_gen_all_kinds_parse(capsys):
    for kind in ("ginibre", "hermitian", "positive", "partial-isometry",
                 "near-normal"):
        assert main(["gen", kind, "--dim", "3", "--seed", "5"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["rows"] == 3 and payload["cols"] == 3


def test_gen_ordered_pair_shape(capsys):
    assert main(["gen", "ordered-pair", "--dim", "2", "--seed", "7"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert set(payload) == {"A", "B"}


def test_gen_spectrum_argument(capsys):
    argv = ["gen", "normal-with-spectrum", "--dim", "2",
            "--spectrum", "1,0,0,0;0,1,0,0"]
    assert main(argv) == 0
    t = json_to_matrix(json.loads(capsys.readouterr().out))
    gram = t.H @ t
    comm = (t @ t.H - gram).frobenius()
    assert comm <= 1e-10
    assert main(["gen", "normal-with-spectrum", "--dim", "3",
                 "--spectrum", "1,0,0,0"]) == 2
    capsys.readouterr()


def test_gen_determinism_and_output_file(tmp_path, capsys):
    assert main(["gen", "ginibre", "--dim", "2", "--seed", "9"]) == 0
    first = capsys.readouterr().out
    assert main(["gen", "ginibre", "--dim", "2", "--seed", "9"]) == 0
    assert capsys.readouterr().out == first
    dest = tmp_path / "out.json"
    assert main(["gen", "ginibre", "--dim", "2", "--seed", "9",
                 "-o", str(dest)]) == 0
    assert capsys.readouterr().out == ""
    assert dest.read_text() == first
    t = json_to_matrix(json.loads(first))
    assert t.equals_exact(ginibre(2, seed=9))


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "qop", "gen", "ginibre", "--dim", "2"],
        capture_output=True, text=True)
    assert proc.returncode == 0
    payload = json.loads(proc.stdout)
    assert payload["rows"] == 2
