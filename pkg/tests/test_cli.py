import json

import pytest

from shuffle_lab import verify
from shuffle_lab.cli import main, parse_expression
from shuffle_lab.free_algebra import FormalSum


@pytest.fixture
def l_path(tmp_path):
    p = tmp_path / "l.csv"
    p.write_text("x,y\n0,0\n1,0\n1,1\n")
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_main_d3(capsys):
    code, out, _ = run(capsys, "verify", "main", "--d", "3")
    assert code == 0
    assert "VERIFIED" in out
    assert out.count("[ok]") >= 3


def test_verify_json_schema(capsys):
    code, out, _ = run(capsys, "verify", "main", "--d", "2", "--format", "json")
    rep = json.loads(out)
    assert code == 0
    assert set(rep) == {"identity", "d", "passed", "checks", "counterexample"}
    assert rep["passed"] is True and rep["counterexample"] is None


def test_parity_violation_is_usage_error(capsys):
    code, _, err = run(capsys, "verify", "debruijn-even", "--d", "3")
    assert code == 2
    assert "error" in err
    assert run(capsys, "verify", "debruijn-odd", "--d", "2")[0] == 2


def test_d5_needs_slow_flag(capsys):
    code, _, err = run(capsys, "verify", "main", "--d", "5")
    assert code == 2
    assert "--slow" in err
    assert run(capsys, "verify", "main", "--d", "6", "--slow")[0] == 2


def test_identity_failure_exits_one_with_counterexample(capsys, monkeypatch):
    def broken(d):
        return FormalSum.parse("1122 + 2211 - 1221 - 2*2112", d)

    monkeypatch.setattr(verify, "block_concat_form", broken)
    code, out, _ = run(capsys, "verify", "main", "--d", "2")
    assert code == 1
    assert "counterexample" in out
    assert "word 2112: lhs -1 != rhs -2" in out
    code, out, _ = run(capsys, "verify", "main", "--d", "2", "--format", "json")
    assert json.loads(out)["counterexample"] == {
        "check": json.loads(out)["checks"][0]["name"],
        "word": "2112",
        "lhs": "-1",
        "rhs": "-2",
    }


def test_verify_cgm(capsys):
    args = ("verify", "cgm", "--d", "2", "--paths", "100", "--seed", "7", "--tol", "1e-9")
    code, out, _ = run(capsys, *args)
    assert code == 0
    code2, out2, _ = run(capsys, *args)
    assert out == out2


def test_same_seed_same_json_bytes(capsys):
    args = ("verify", "det-skew-rank1", "--d", "4", "--seed", "3", "--format", "json")
    _, a, _ = run(capsys, *args)
    _, b, _ = run(capsys, *args)
    assert a == b
    args = ("verify", "cgm", "--d", "3", "--seed", "3", "--paths", "20", "--format", "json")
    _, a, _ = run(capsys, *args)
    _, b, _ = run(capsys, *args)
    assert a == b


@pytest.mark.parametrize(
    "identity,d",
    [
        ("andreief", 2),
        ("halfshuffle-expansion", 2),
        ("h-action", 3),
        ("debruijn-even", 4),
        ("debruijn-odd", 3),
        ("det-pf", 2),
        ("sym-w", 3),
    ],
)
def test_other_identities_pass(capsys, identity, d):
    assert run(capsys, "verify", identity, "--d", str(d))[0] == 0


def test_expand_examples(capsys):
    assert run(capsys, "expand", "shuffle", "12", "34")[1].strip() == "1234 + 1324 + 1342 + 3124 + 3142 + 3412"
    assert run(capsys, "expand", "inv", "--tableau", "1,2;3,4")[1].strip() == "1122 - 1221 - 2112 + 2211"
    assert run(capsys, "expand", "detW", "--d", "2")[1].strip() == "1122 - 1221 - 2112 + 2211"
    assert run(capsys, "expand", "halfshuffle", "12", "3")[1].strip() == "123"
    assert run(capsys, "expand", "inv", "--d", "2")[1].strip() == "12 - 21"
    assert run(capsys, "expand", "pf-anti-W", "--d", "2")[1].strip() == "1/2*12 - 1/2*21"
    assert run(capsys, "expand", "Z", "--d", "3")[1].strip() == "123 - 132 - 213 + 231 + 312 - 321"


def test_expand_json(capsys):
    code, out, _ = run(capsys, "expand", "shuffle", "1", "1", "--format", "json")
    assert code == 0
    assert json.loads(out) == {"d": 1, "terms": [{"word": [1, 1], "num": "2", "den": "1"}]}


def test_expand_matrix(capsys):
    code, out, _ = run(capsys, "expand", "detW", "--d", "2", "--matrix")
    assert out.splitlines() == ["11 | 12", "21 | 22"]


@pytest.mark.parametrize(
    "argv",
    [
        ["expand", "inv", "--tableau", "2,1;3,4"],
        ["expand", "shuffle", "12", "3x"],
        ["expand", "shuffle", "12"],
        ["expand", "Z", "--d", "2"],
        ["expand", "pf-anti-W", "--d", "3"],
        ["expand", "detW"],
    ],
)
def test_expand_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_signature(capsys, l_path):
    code, out, _ = run(capsys, "signature", l_path, "--level", "2")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "(): 1.0"
    assert "12: 1.0" in lines and "21: 0.0" in lines
    assert run(capsys, "signature", l_path, "--level", "0")[1].splitlines() == ["(): 1.0"]
    rep = json.loads(run(capsys, "signature", l_path, "--level", "1", "--format", "json")[1])
    assert rep["terms"] == [
        {"word": [], "value": 1.0},
        {"word": [1], "value": 1.0},
        {"word": [2], "value": 1.0},
    ]


def test_signature_bad_csv(capsys, tmp_path):
    ragged = tmp_path / "r.csv"
    ragged.write_text("0,0\n1\n")
    assert run(capsys, "signature", str(ragged), "--level", "2")[0] == 2
    text = tmp_path / "t.csv"
    text.write_text("0,0\n1,q\n")
    assert run(capsys, "signature", str(text), "--level", "2")[0] == 2
    assert run(capsys, "signature", str(tmp_path / "missing.csv"), "--level", "2")[0] == 2
    assert run(capsys, "signature", str(text), "--level", "-1")[0] == 2


def test_pair(capsys, l_path):
    assert run(capsys, "pair", "inv(t1,2)", l_path)[1].strip() == "1.0"
    assert run(capsys, "pair", "12", l_path)[1].strip() == "1.0"
    assert run(capsys, "pair", "detW(2)", l_path)[1].strip() == "0.25"
    assert run(capsys, "pair", "12", l_path, "--level", "1")[0] == 2
    assert run(capsys, "pair", "inv(t1,3)", l_path)[0] == 2


def test_parse_expression():
    assert parse_expression("inv(t2, 2)", 3) == FormalSum.parse("1122 - 1221 - 2112 + 2211", 3)
    assert parse_expression(" 1 - 2 ", 2) == FormalSum.parse("1 - 2", 2)


def test_module_entry_point():
    import subprocess
    import sys

    res = subprocess.run(
        [sys.executable, "-m", "shuffle_lab", "expand", "shuffle", "1", "2"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert res.returncode == 0
    assert res.stdout.strip() == "12 + 21"
