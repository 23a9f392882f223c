import json
from pathlib import Path

import pytest

from leibniz_gsb.cli import FAILED, INPUT_ERROR, main

DATA = Path(__file__).resolve().parents[1] / "data" / "presentations"


def run_ok(capsys, *argv):
    main([str(a) for a in argv])
    return json.loads(capsys.readouterr().out)


def run_exit(capsys, *argv):
    with pytest.raises(SystemExit) as err:
        main([str(a) for a in argv])
    return err.value.code, capsys.readouterr().out


def test_check_valid_file(capsys):
    report = run_ok(capsys, "check", DATA / "dim2.pres")
    assert report["command"] == "check"
    assert report["letter_order"] == "x1 > x2"
    assert report["results"] == {"ok": True, "issues": []}


def test_check_reports_law_failures(capsys):
    code, out = run_exit(capsys, "check", DATA / "heisenberg_bad_d.pres")
    assert code == FAILED
    assert "VALIDATION: derivation d[0,1]:" in out


def test_hnn_rejects_invalid_input(capsys):
    code, out = run_exit(capsys, "hnn", DATA / "heisenberg_bad_d.pres")
    assert code == INPUT_ERROR
    assert out.startswith("VALIDATION: ")


def test_hnn_report_and_emitted_presentation(capsys, tmp_path):
    report_path, emitted = tmp_path / "hnn.json", tmp_path / "hnn.pres"
    main(["hnn", str(DATA / "dim2.pres"), "--max-degree", "3", "--out", str(report_path),
          "--emit-presentation", str(emitted)])
    assert capsys.readouterr().out.strip() == f"hnn: exit=0 report={report_path}"
    report = json.loads(report_path.read_text())
    results = report["results"]
    assert report["letter_order"] == "t' > x1' > x2' > t > x1 > x2"
    assert results["adapted_basis"]["identity"]
    assert results["adapted_basis"]["x0"] == ["x2"]
    assert {r["label"] for r in results["rules"]} == {"x0(x2)", "f3(x1,x1)", "f2(x2,x1)", "g(x2,t)"}
    assert {r["lead"] for r in results["rules"]} == {"x2", "x1'.x1", "x2'.x1", "x2'.t"}
    assert results["gsb"] == {"ok": True, "compositions": 0, "failures": []}
    assert results["normal_basis"]["matches_forbidden_words"]
    assert results["embedding"]["ok"]

    again = run_ok(capsys, "gsb", emitted)
    assert again["letter_order"] == report["letter_order"]
    assert again["results"]["gsb"]["ok"]
    assert len(again["results"]["rules"]) == 4


def test_gsb_failure_and_completion(capsys):
    code, out = run_exit(capsys, "gsb", DATA / "not_jacobi.pres")
    assert code == FAILED
    failures = json.loads(out)["results"]["gsb"]["failures"]
    assert [c["w"] for c in failures] == ["x.y.z"]

    report = run_ok(capsys, "gsb", DATA / "not_jacobi.pres", "--complete", "--max-degree", "3")
    assert report["results"]["completion"]["added"] == ["c1"]
    assert sorted(r["lead"] for r in report["results"]["rules"]) == ["x", "y.z"]
    assert report["results"]["completion"]["same_ideal"] is True
    assert report["results"]["completion"]["unreduced"] == []


def test_gsb_cross_check(capsys):
    report = run_ok(capsys, "gsb", DATA / "free_abb.pres", "--cross-check", "5", "--seed", "1")
    assert report["results"]["cross_check"]["disagreements"] == []
    assert report["results"]["cross_check"]["agreed"] > 0


def test_basis(capsys):
    report = run_ok(capsys, "basis", DATA / "free_abb.pres", "--max-degree", "3")
    basis = report["results"]["basis"]
    assert basis["elements"] == ["b", "a", "[a,b]", "[a,[a,b]]"]
    assert basis["by_degree"] == {"1": 2, "2": 1, "3": 1}


def test_basis_of_a_non_gsb_warns(capsys):
    code, out = run_exit(capsys, "basis", DATA / "not_jacobi.pres", "--max-degree", "3")
    assert code == FAILED
    assert json.loads(out)["warnings"]


def test_normalize_and_member(capsys):
    report = run_ok(capsys, "normalize", DATA / "heisenberg.pres", "[x,y]")
    assert report["results"]["input"] == "xy - yx"
    assert report["results"]["normal_form"] == "z"
    assert run_ok(capsys, "member", DATA / "heisenberg.pres", "[x,y] - z")["results"]["member"] is True
    assert run_ok(capsys, "member", DATA / "heisenberg.pres", "[x,y]")["results"]["member"] is False


def test_member_in_a_leibniz_presentation(capsys):
    report = run_ok(capsys, "member", DATA / "dim2.pres", "[x1 -| x1] - x2", "--verbose")
    assert report["results"]["member"] is True
    assert report["results"]["trace"][0]["rule"] == "r1"
    assert report["results"]["certificate_ok"] is True
    assert report["letter_order"] == "x1' > x2' > x1 > x2"


def test_di_expression_needs_a_di_presentation(capsys):
    code, out = run_exit(capsys, "normalize", DATA / "heisenberg.pres", "[x -| y]")
    assert code == INPUT_ERROR
    assert out.startswith("VALIDATION: expression: ")


def test_syntax_error_in_file(capsys, tmp_path):
    bad = tmp_path / "bad.pres"
    bad.write_text("alphabet: x > y\ntable: [x,z] = y\n")
    code, out = run_exit(capsys, "check", bad)
    assert code == INPUT_ERROR
    assert out.startswith(f"VALIDATION: {bad}: line 2, col ")


def test_missing_file(capsys, tmp_path):
    code, out = run_exit(capsys, "gsb", tmp_path / "missing.pres")
    assert code == INPUT_ERROR
    assert "cannot read" in out


def test_dilie_basis(capsys):
    report = run_ok(capsys, "dilie-basis", "--letters", "x,y", "--max-degree", "3")
    assert report["letter_order"] == "x > y"
    by_degree = report["results"]["by_degree"]
    assert [by_degree[k]["count"] for k in ("1", "2", "3")] == [2, 4, 8]
    assert all(v["independent"] for v in by_degree.values())


def test_operad_check(capsys):
    report = run_ok(capsys, "operad-check")
    results = report["results"]
    assert results["dimensions"] == {"lie": [1, 1, 2, 6], "perm": [1, 2, 3, 4], "dilie": [1, 2, 6, 24]}
    assert results["jacobiator"] is True
    assert results["leibniz_product"]["e1"]["rhs"] == "x -| y - y |- x"
    assert any("m1+...+m_(n-1)+j_i" in w for w in report["warnings"])


def test_reports_are_deterministic(capsys, tmp_path):
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    for path in (first, second):
        main(["gsb", str(DATA / "heisenberg.pres"), "--out", str(path)])
    assert first.read_text() == second.read_text()
    assert json.loads(first.read_text())["inputs_digest"]


def test_operad_check_warns_about_the_swap_sign_only_with_index_disagreements(capsys, monkeypatch):
    import leibniz_gsb.cli as cli
    from leibniz_gsb.operads import PermCompositionCheck

    report = run_ok(capsys, "operad-check")
    assert any("swap step" in w for w in report["warnings"])

    monkeypatch.setattr(cli, "check_perm_compositions", lambda: PermCompositionCheck(checked=1))
    quiet = run_ok(capsys, "operad-check")
    assert quiet["warnings"] == []
    assert quiet["results"]["leibniz_product"]["e2"]["ok"] is True
