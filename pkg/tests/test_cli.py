import json

import pytest

from solvrank import classify
from solvrank.cli import main
from solvrank.engine import MatGroup, rank_of_action
from solvrank.matlin import read_matgroup


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def row1_dir(tmp_path, capsys):
    out = tmp_path / "row1"
    code, _, _ = run(capsys, "classify", "--q", "2", "--m", "1", "--p", "3", "--k", "1",
                     "--kind", "minus", "--out", str(out))
    assert code == 0
    return out


def test_classify_row1(row1_dir):
    doc = json.loads((row1_dir / "row.json").read_text())
    assert (doc["rank"], doc["max_order"], doc["num_groups"]) == (2, 48, 4)
    for g in doc["groups"]:
        field, n, gens = read_matgroup((row1_dir / g["gens"]).read_text())
        G = MatGroup(gens, field=field, dim=n)
        assert (G.order, rank_of_action(G)) == (g["order"], g["rank"])


def test_classify_rejects_q5(capsys):
    code, _, err = run(capsys, "classify", "--q", "5", "--m", "1", "--p", "3", "--k", "1", "--kind", "minus")
    assert code == 1 and "q must be 2 or 3" in err


def test_classify_row19(capsys, tmp_path):
    code, out, _ = run(capsys, "classify", "--q", "2", "--m", "2", "--p", "7", "--k", "1", "--kind", "minus")
    assert code == 0 and "max_order=1920 num_groups=1" in out


def test_classify_budget_exit(capsys, monkeypatch):
    monkeypatch.setattr(classify, "_RAW_CACHE", {})
    code, _, err = run(capsys, "classify", "--q", "2", "--m", "1", "--p", "3", "--k", "1", "--kind", "minus",
                       "--enumeration-cap", "5")
    assert code == 2 and "budget" in err


def test_classify_unwritable_out(capsys, tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    code, _, _ = run(capsys, "classify", "--q", "2", "--m", "1", "--p", "3", "--k", "1", "--kind", "minus",
                     "--out", str(blocker / "sub"))
    assert code == 1


def test_verify_expectations(capsys, row1_dir):
    f = str(row1_dir / "group_01.matgroup")
    code, out, _ = run(capsys, "verify", f, "--expect-rank", "2", "--expect-order", "48")
    assert code == 0
    assert "order: 48" in out and "solvable: True" in out and "quasi-primitive: True" in out
    assert "structure: q=2 m=1" in out and "FAIL" not in out
    code, _, err = run(capsys, "verify", f, "--expect-rank", "3")
    assert code == 3 and "expectation failed" in err


def test_verify_malformed(capsys, tmp_path):
    bad = tmp_path / "bad.matgroup"
    bad.write_text("matgroup v0\n")
    assert run(capsys, "verify", str(bad))[0] == 1


def test_rank_identity_and_gl23(capsys, tmp_path):
    ident = tmp_path / "id.matgroup"
    ident.write_text("matgroup v1\np=2 k=1 d=2\ngen\n1 0\n0 1\n")
    code, out, _ = run(capsys, "rank", str(ident))
    assert code == 0 and out.strip() == "4"
    gl = tmp_path / "gl.matgroup"
    gl.write_text("matgroup v1\np=3 k=1 d=2\ngen\n2 0\n0 1\ngen\n1 1\n0 1\ngen\n0 1\n1 0\n")
    assert run(capsys, "rank", str(gl))[1].strip() == "2"


def test_rank_missing_file_and_budget(capsys, tmp_path):
    assert run(capsys, "rank", str(tmp_path / "none"))[0] == 1
    f = tmp_path / "g.matgroup"
    assert run(capsys, "gammal1", "--p", "3", "--d", "4", "--out", str(f))[0] == 0
    assert run(capsys, "rank", str(f), "--orbit-cap", "10")[0] == 2


def test_row30_fixture_rank(capsys, tmp_path):
    f = tmp_path / "row30.matgroup"
    code, out, _ = run(capsys, "row30", "--out", str(f))
    assert code == 0 and "order=29040 rank=4" in out
    assert run(capsys, "rank", str(f))[1].strip() == "4"


def test_gammal1_to_stdout(capsys):
    code, out, _ = run(capsys, "gammal1", "--p", "5", "--d", "2")
    assert code == 0 and out.startswith("matgroup v1\np=5 k=1 d=2\n")


def test_tables_unwritable(capsys, tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    assert run(capsys, "tables", "--budget", "quick", "--out", str(blocker / "sub"))[0] == 1


def test_bad_flags(capsys):
    assert run(capsys, "classify", "--q", "2")[0] == 1
    assert run(capsys, "tables", "--budget", "medium")[0] == 1
    assert run(capsys, "nosuch")[0] == 1
