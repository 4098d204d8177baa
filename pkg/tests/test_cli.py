import json

import pytest

from verogeo.cli import main


def run(argv):
    return main(argv)


def test_build_pg(tmp_path):
    out = tmp_path / "pg33.json"
    assert run(["build", "pg", "3", "3", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["point_count"] == 40
    assert len(data["lines"]) == 130


def test_build_quadric(tmp_path):
    out = tmp_path / "q.json"
    assert run(["build", "quadric", "3", "3", "--quadric-type", "hyperbolic",
                "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["point_count"] == 16
    assert len(data["lines"]) == 8


def test_quadric_without_lines_rejected(tmp_path, capsys):
    rc = run(["build", "quadric", "3", "3", "--quadric-type", "elliptic",
              "--out", str(tmp_path / "q.json")])
    assert rc == 2
    assert "error" in capsys.readouterr().err


def test_full_pipeline(tmp_path):
    v = tmp_path / "v.json"
    h = tmp_path / "h.json"
    r = tmp_path / "r.json"
    form = tmp_path / "form.json"
    form.write_text(json.dumps({"p": 3, "matrix": [[0, 1], [2, 0]]}))

    assert run(["veronese", "--base", "pg:1:3", "--level", "2",
                "--out", str(v)]) == 0
    assert run(["hyperplane", "--space", str(v), "--form", str(form),
                "--out", str(h)]) == 0
    hyp = json.loads(h.read_text())
    assert len(hyp["points"]) == 4

    assert run(["reduct", "--space", str(v), "--hyperplane", str(h),
                "--out", str(r)]) == 0
    red = json.loads(r.read_text())
    assert len(red["proper_points"]) == 6
    assert len(red["lines"]) == 4


def test_recover_on_pg33(tmp_path):
    v = tmp_path / "v.json"
    h = tmp_path / "h.json"
    r = tmp_path / "r.json"
    out = tmp_path / "rec.json"
    form = tmp_path / "form.json"
    form.write_text(json.dumps(
        {"p": 3, "matrix": [[0, 1, 0, 0], [2, 0, 0, 0],
                            [0, 0, 0, 1], [0, 0, 2, 0]]}))
    assert run(["veronese", "--base", "pg:3:3", "--level", "2",
                "--out", str(v)]) == 0
    assert run(["hyperplane", "--space", str(v), "--form", str(form),
                "--out", str(h)]) == 0
    assert run(["reduct", "--space", str(v), "--hyperplane", str(h),
                "--out", str(r)]) == 0
    assert run(["recover", "--reduct", str(r), "--check-against", str(v),
                "--out", str(out)]) == 0
    rec = json.loads(out.read_text())
    assert rec["points"] == 820 and rec["lines"] == 5330
    assert rec["lines_match"] and rec["ambient_agrees"]


def test_parallelism_search_cli(tmp_path):
    v = tmp_path / "v.json"
    out = tmp_path / "s.json"
    assert run(["veronese", "--base", "ag:1:3", "--level", "2",
                "--out", str(v)]) == 0
    assert run(["parallelism-search", "--space", str(v),
                "--mode", "leaf-closed", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["found"] is False
    assert data["exhaustive"] is True


def test_verify_single_suite(tmp_path, capsys):
    rc = run(["verify", "--suite", "construction-counts"])
    captured = capsys.readouterr()
    assert rc == 0
    rows = [json.loads(line) for line in captured.out.splitlines() if line]
    assert all(r["ok"] for r in rows)
    assert {r["claim"] for r in rows} == {
        "construction-counts-fano", "construction-counts-pg23"}


def test_verify_net_axiom_on_reduct_space(tmp_path, capsys):
    # the reduct carries no Net violation over GF(3): exit 0 with the
    # exhaustion certificate in the details
    v = tmp_path / "v.json"
    h = tmp_path / "h.json"
    r = tmp_path / "r.json"
    form = tmp_path / "form.json"
    form.write_text(json.dumps(
        {"p": 3, "matrix": [[0, 1, 0, 0], [2, 0, 0, 0],
                            [0, 0, 0, 1], [0, 0, 2, 0]]}))
    run(["veronese", "--base", "pg:3:3", "--level", "2", "--out", str(v)])
    run(["hyperplane", "--space", str(v), "--form", str(form), "--out", str(h)])
    run(["reduct", "--space", str(v), "--hyperplane", str(h), "--out", str(r)])
    rc = run(["verify", "--suite", "net-axiom", "--space", str(r)])
    captured = capsys.readouterr()
    verdict = json.loads(captured.out.splitlines()[-1])
    assert rc == 0
    assert verdict["ok"]
    assert verdict["details"]["reason"] == "complete shape enumeration exhausted"


def test_unknown_flag_exit_2(capsys):
    assert run(["verify", "--no-such-flag"]) == 2


def test_unknown_suite_exit_2(capsys):
    assert run(["verify", "--suite", "nonsense"]) == 2
    assert "unknown suite" in capsys.readouterr().err


def test_report_roundtrip(tmp_path, capsys):
    out = tmp_path / "report.jsonl"
    rc = run(["verify", "--suite", "negative-control", "--out", str(out)])
    assert rc == 0
    capsys.readouterr()
    rc = run(["report", str(out)])
    captured = capsys.readouterr()
    assert rc == 0
    assert "pass" in captured.out


def test_reports_are_deterministic(tmp_path):
    a = tmp_path / "a.jsonl"
    b = tmp_path / "b.jsonl"
    run(["verify", "--suite", "construction-counts", "--out", str(a)])
    run(["verify", "--suite", "construction-counts", "--out", str(b)])
    strip = lambda text: [
        {k: v for k, v in json.loads(line).items() if k != "runtime_s"}
        for line in text.splitlines() if line]
    assert strip(a.read_text()) == strip(b.read_text())


def test_hyperplane_from_arity2_alternating_form(tmp_path):
    v = tmp_path / "v.json"
    h = tmp_path / "h.json"
    form = tmp_path / "form.json"
    form.write_text(json.dumps(
        {"p": 3, "arity": 2, "dim": 2, "coeffs": {"0,1": 1}}))
    assert run(["veronese", "--base", "pg:1:3", "--level", "2",
                "--out", str(v)]) == 0
    assert run(["hyperplane", "--space", str(v), "--form", str(form),
                "--out", str(h)]) == 0
    assert len(json.loads(h.read_text())["points"]) == 4


def test_verify_net_axiom_on_veronese_space(tmp_path, capsys):
    v = tmp_path / "va.json"
    run(["veronese", "--base", "ag:2:3", "--level", "2", "--out", str(v)])
    rc = run(["verify", "--suite", "net-axiom", "--space", str(v)])
    captured = capsys.readouterr()
    verdict = json.loads(captured.out.splitlines()[-1])
    assert rc == 0
    assert verdict["ok"]
    assert verdict["checked"] > 0


def test_recover_refuses_degenerate_hyperplane(tmp_path, capsys):
    # every alternating form on a 3-dimensional space is degenerate, so
    # the recovery must refuse with a diagnostic
    v = tmp_path / "v.json"
    h = tmp_path / "h.json"
    r = tmp_path / "r.json"
    form = tmp_path / "form.json"
    form.write_text(json.dumps(
        {"p": 3, "matrix": [[0, 1, 0], [2, 0, 0], [0, 0, 0]]}))
    assert run(["veronese", "--base", "pg:2:3", "--level", "2",
                "--out", str(v)]) == 0
    assert run(["hyperplane", "--space", str(v), "--form", str(form),
                "--out", str(h)]) == 0
    assert json.loads(h.read_text())["degenerate"]
    assert run(["reduct", "--space", str(v), "--hyperplane", str(h),
                "--out", str(r)]) == 0
    rc = run(["recover", "--reduct", str(r)])
    assert rc == 2
    assert "nondegenerate" in capsys.readouterr().err


def test_hyperplane_rejects_quadratic_form(tmp_path, capsys):
    v = tmp_path / "v.json"
    form = tmp_path / "form.json"
    form.write_text(json.dumps(
        {"p": 3, "kind": "quadratic", "matrix": [[1, 0], [0, 1]]}))
    run(["veronese", "--base", "pg:1:3", "--level", "2", "--out", str(v)])
    rc = run(["hyperplane", "--space", str(v), "--form", str(form),
              "--out", str(tmp_path / "h.json")])
    assert rc == 2
