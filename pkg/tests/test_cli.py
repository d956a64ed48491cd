import json

import pytest

from udfq import __version__
from udfq.cli import jsonable, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def report(capsys, *argv):
    code, out, err = run(capsys, *argv)
    rep = json.loads(out)
    assert json.loads(json.dumps(rep)) == rep
    return code, rep, err


def test_star_both_engines(capsys):
    code, rep, err = report(capsys, "star", "--lambda", "1/2", "--engine", "both", "q1", "p1")
    assert code == 0
    assert rep["values"]["result"] == "q1*p1 + 1/2*t"
    assert rep["values"]["equality"] is True
    assert rep["schema"] == "udfq.report/1" and rep["version"] == __version__ and rep["pass"]
    assert err.startswith("PASS")


def test_report_fields_and_hash_stability(capsys):
    _, a, _ = report(capsys, "star", "q1^2", "p1")
    _, b, _ = report(capsys, "star", "q1^2", "p1")
    _, c, _ = report(capsys, "star", "q1^2", "p1^2")
    assert set(a) == {"schema", "tool", "version", "command", "config_hash", "instances", "checks", "values", "pass"}
    assert a["config_hash"] == b["config_hash"] != c["config_hash"]


@pytest.mark.parametrize("argv", [
    ("star", "--bogus", "q1", "p1"),
    ("star", "--lambda", "abc", "q1", "p1"),
    ("star", "q1 +", "p1"),
    ("star", "x1", "p1"),
    ("star", "--engine", "moyal", "--lambda", "1/3", "q1", "p1"),
    ("udf", "--group", "heisenberg"),
    ("udf", "--group", "no_such_group"),
    ("triple", "validate", "missing.tri"),
    ("verify-all", "--only", "13"),
    ("wkb", "star", "--x0", "1,2,3"),
])
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert "error" in err


def test_corrupted_hopf_exits_1(capsys):
    code, rep, err = report(capsys, "smash", "hopf", "--corrupt", "--maxdeg", "2")
    assert code == 1 and not rep["pass"]
    assert err.startswith("FAIL")
    failed = [c for c in rep["checks"] if not c["pass"]]
    assert failed and all(c["witness"] for c in failed)


def test_smash_mul(capsys):
    code, rep, _ = report(capsys, "smash", "mul", "q1", "1", "1", "p1")
    assert code == 0
    assert rep["values"]["product"] == {"q1 ⊗ p1": "1", "t ⊗ 1": "1/2"}


def test_udf_commands(capsys):
    code, rep, _ = report(capsys, "udf", "--check", "--lhs", "q1", "--rhs", "p1")
    assert code == 0 and rep["values"]["transported"] == "q1*p1 + 1/2*t"
    code, rep, _ = report(capsys, "udf", "--group", "r2_x_r2", "--product", "induced:1/2", "--check")
    assert code == 0


def test_triple_commands(capsys):
    assert report(capsys, "triple", "validate", "rank1")[0] == 0
    code, rep, _ = report(capsys, "triple", "validate", "nilpotent")
    assert code == 1
    code, rep, _ = report(capsys, "triple", "extend", "flat")
    assert code == 0 and rep["values"]["center_dim"] == 1
    code, rep, _ = report(capsys, "triple", "build-s", "diag")
    assert code == 0 and rep["values"]["signature"] == {"dim": 4, "derived_series": [4, 2, 0], "omega_rank": 4}
    code, rep, _ = report(capsys, "triple", "twist", "rank1")
    assert code == 0 and rep["values"]["phi"] == ["sinh(a1)"]


def test_triple_from_path(capsys, tmp_path):
    from udfq import structure as S

    f = tmp_path / "mine.tri"
    f.write_text(S.triple_to_text(S.sl2_triple()))
    code, rep, _ = report(capsys, "triple", "diagnose", str(f))
    assert code == 0 and rep["instances"] == ["mine"] and rep["values"]["derived_abelian"] is False


def test_wkb_star_flat(capsys):
    code, rep, _ = report(capsys, "wkb", "star", "--space", "flat", "--u", "gauss", "--v", "gauss", "--hbar", "0.3",
                          "--nodes", "48")
    re, im = rep["values"]["value"]
    assert code == 0 and abs(re - 1 / 1.09) < 1e-9 and abs(im) < 1e-12


def test_text_format(capsys):
    code, out, _ = run(capsys, "star", "--format", "text", "q1", "p1")
    assert code == 0 and out.startswith("PASS") and "q1*p1 + 1/2*t" in out


def test_verify_all_subset(capsys):
    code, rep, err = report(capsys, "verify-all", "--only", "2,4")
    assert code == 0 and len(rep["checks"]) == 2
    assert "criterion 2" in rep["checks"][0]["name"]


def test_jsonable():
    import numpy as np
    from fractions import Fraction

    assert jsonable({"a": 1j, "b": np.float64(0.5), "c": Fraction(1, 3), "d": (1, 2), "e": float("nan")}) == {
        "a": [0.0, 1.0], "b": 0.5, "c": "1/3", "d": [1, 2], "e": "nan"}


def test_verify_all_quick_is_deterministic(capsys):
    code, first, err = report(capsys, "verify-all", "--quick")
    assert code == 0 and len(first["checks"]) == 9
    assert err.count("PASS criterion") == 9
    _, again, _ = report(capsys, "verify-all", "--only", "5,8")
    assert again["values"]["criterion_5"] == first["values"]["criterion_5"]
    assert again["values"]["criterion_8"] == first["values"]["criterion_8"]
