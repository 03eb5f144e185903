import json
import random
import shutil
import subprocess
import sys
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from nctorsion.cli import RunConfig, main, run
from nctorsion.fileio import (
    InputError,
    dump,
    load,
    matrix_to_json,
    model_from_json,
    model_to_json,
    orbits_from_json,
    orbits_to_json,
)
from nctorsion.groups import GroupDescriptor
from nctorsion.linalg import SeriesField, SkewMatrix
from nctorsion.morse import random_model
from nctorsion.zeta import torus_suspension_orbits

CORPUS = Path(__file__).resolve().parent.parent / "corpus"
FA1 = GroupDescriptor.free_abelian(1)
ME = GroupDescriptor.monomial_extension([[-1]])


def run_json(capsys, *argv):
    code = main([*map(str, argv), "--format", "json"])
    return code, json.loads(capsys.readouterr().out)


@pytest.mark.parametrize("desc", [FA1, ME], ids=["free", "flip"])
@given(seed=st.integers(0, 10_000))
def test_model_round_trip(desc, seed):
    m = random_model(desc, random.Random(seed))
    data = model_to_json(m)
    again = model_to_json(model_from_json(json.loads(json.dumps(data))))
    assert again == data


def test_orbit_round_trip():
    o = torus_suspension_orbits([[2, 1], [1, 1]], 6)
    data = orbits_to_json(o)
    assert orbits_to_json(orbits_from_json(data)) == data


def test_matrix_round_trip(tmp_path):
    from nctorsion.algebra import MonomialAutomorphism
    f = SeriesField(MonomialAutomorphism([[-1]]), 1, 8)
    m = SkewMatrix(f, [[f.parse("x + t"), f.parse("1/(1-x*t)")], [f.parse("0"), f.parse("x^-2")]], 2)
    dump(matrix_to_json(m), tmp_path / "a.matrix")
    _, back = load(tmp_path / "a.matrix")
    assert back.render() == m.render()


def test_corpus_passes(capsys):
    code, rep = run_json(capsys, "corpus", CORPUS)
    assert code == 0
    assert rep["summary"]["mismatch"] == 0 and rep["summary"]["error"] == 0
    assert rep["summary"]["ok"] >= 20


def test_empty_corpus(tmp_path, capsys):
    code, rep = run_json(capsys, "corpus", tmp_path)
    assert code == 0 and rep["entries"] == []


def test_corrupted_model(tmp_path, capsys):
    (tmp_path / "bad.model").write_text('{"format": "nctorsion/model", "d": [1, 1], "e": [0], '
                                        '"group": {"kind": "free_abelian", "m": 0}, "N": {"1": [["1 + * s"]]}}')
    (tmp_path / "bad.model.expected.json").write_text('{"command": "verify", "expected": {"verdict": "EQUAL"}}')
    code, rep = run_json(capsys, "corpus", tmp_path)
    assert code != 0
    (row,) = rep["entries"]
    assert row["status"] == "error" and "N.1[1][1]" in row["detail"] and "column" in row["detail"]
    code, rep = run_json(capsys, "verify", tmp_path / "bad.model")
    assert code == 2 and "InputError" in rep["error"]


def test_truncated_json(tmp_path, capsys):
    (tmp_path / "x.model").write_text('{"format": "nctorsion/mo')
    code, rep = run_json(capsys, "verify", tmp_path / "x.model")
    assert code == 2 and ":1:" in rep["error"]


def test_missing_sidecar_is_skipped(tmp_path, capsys, caplog):
    shutil.copy(CORPUS / "circle.model", tmp_path / "circle.model")
    code, rep = run_json(capsys, "corpus", tmp_path)
    assert code == 0 and rep["summary"]["skipped"] == 1
    assert "no sidecar" in caplog.text


def test_wrong_kind(tmp_path):
    with pytest.raises(InputError, match="expected a model file"):
        load(CORPUS / "circle.cw", "model")


def test_mismatch_detected(tmp_path, capsys):
    shutil.copy(CORPUS / "catmap_tr3.model", tmp_path / "a.model")
    side = json.loads((CORPUS / "catmap_tr3.model.expected.json").read_text())
    side["expected"]["lhs.coefficients"][3] = "-4"
    (tmp_path / "a.model.expected.json").write_text(json.dumps(side))
    code, rep = run_json(capsys, "corpus", tmp_path)
    assert code == 1 and rep["entries"][0]["status"] == "mismatch"


def test_verify_report(capsys):
    code, rep = run_json(capsys, "verify", CORPUS / "catmap_tr3.model", "-k", "12")
    assert code == 0
    assert rep["verdict"] == "EQUAL"
    assert rep["lhs"]["coefficients"] == ["1"] + [str(-n) for n in range(1, 13)]
    assert rep["orbits"] and rep["pivots"] is not None


def test_reports_are_deterministic(capsys):
    outs = []
    for _ in range(2):
        main(["novikov", str(CORPUS / "random_monomial_extension_3.model"), "-k", "5", "--format", "json"])
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1]


@pytest.mark.parametrize("command,name", [("det", "tridiagonal.matrix"), ("torsion", "circle.cw"),
                                          ("torsion", "random_acyclic.complex"), ("zeta", "empty.orbits"),
                                          ("novikov", "random_free_abelian_1.model")])
def test_commands_text_output(command, name, capsys):
    assert main([command, str(CORPUS / name), "-k", "6"]) == 0
    assert capsys.readouterr().out.strip()


def test_empty_orbits_zeta_is_one(capsys):
    code, rep = run_json(capsys, "zeta", CORPUS / "empty.orbits", "-k", "4")
    assert code == 0 and rep["slices"]["0"] == "1" and all(rep["slices"][str(d)] == "0" for d in range(1, 5))


def test_bad_arguments():
    with pytest.raises(SystemExit):
        main(["verify", "x", "--pivot", "sideways"])
    with pytest.raises(ValueError):
        RunConfig("verify", "x", max_degree=0)
    assert run(RunConfig("corpus", "/nonexistent/dir"))[0] == 2


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "nctorsion", "verify", str(CORPUS / "circle.model"), "-k", "5"],
                         capture_output=True, text=True, check=True)
    assert out.stdout.startswith("EQUAL")
