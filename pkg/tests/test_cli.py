import json

import pytest

from abssep import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_compute_json(capsys):
    code, out, _ = run(capsys, "compute", "--poly", "10X^3-3X^2-2X+3",
                       "--measure", "abssep")
    assert code == 0
    row = json.loads(out)[0]
    assert row["value"].startswith("0.0005393559")
    assert row["quality"] == "3.27"


def test_compute_no_qualifying_pair_exits_1(capsys):
    code, out, err = run(capsys, "compute", "--poly", "1,0,-1",
                         "--measure", "abssep")
    assert code == 1
    assert "no pair" in err


def test_usage_error_exits_2(capsys):
    code, _, _ = run(capsys, "compute", "--poly", "X^2-1",
                     "--measure", "bogus")
    assert code == 2
    code, _, _ = run(capsys, "nonsense")
    assert code == 2


def test_family_table_row(capsys):
    code, out, _ = run(capsys, "--format", "md", "family", "--name",
                       "deg4", "--param", "10")
    assert code == 0
    assert "| 10 | 10 | 3.716e-5 | 4.43 |" in out


def test_family_rejects_other_measures(capsys):
    code, _, err = run(capsys, "family", "--name", "deg4", "--param",
                       "10", "--measure", "sep")
    assert code == 1


def test_aux_threshold_output(capsys):
    code, out, _ = run(capsys, "aux", "--poly", "10X^3-3X^2-2X+3",
                       "--measure", "abssep", "--pair-class",
                       "real-complex")
    assert code == 0
    rows = json.loads(out)
    quantities = {r["quantity"]: r["value"] for r in rows}
    assert "/" in quantities["tau_exact"]
    assert quantities["exponent_bound"] == "4"


def test_perturb_verdict(capsys):
    code, out, _ = run(capsys, "perturb", "--setup", "deg4")
    assert code == 0
    rows = json.loads(out)
    verdicts = [r["value"] for r in rows if r["kind"] == "cancellation"]
    assert verdicts == ["first mismatch at order 5"]
    series = [r for r in rows if r["kind"] == "series"]
    assert any("-71/4" in r["value"] for r in series)


def test_search_subcommand_with_out(tmp_path, capsys):
    path = str(tmp_path / "recs.jsonl")
    code, out, err = run(capsys, "--jobs", "1", "search", "--degree", "3",
                         "--max-height", "3", "--top-k", "1",
                         "--out", path)
    assert code == 0
    payload = json.loads(out)
    assert payload and all("value" in r for r in payload)
    assert sum(1 for _ in open(path)) == len(payload)


def test_emit_table_layouts():
    rows = [{"n": 2, "height": 12, "abssep": "5.093e-3", "quality": 2.12},
            {"n": 5, "height": 123, "abssep": "2.447e-6", "quality": 2.68}]
    text = cli.emit_table(rows, "table3", "md")
    lines = text.splitlines()
    assert lines[0] == "| n | height | abssep | quality |"
    assert "| 2 | 12 | 5.093e-3 | 2.12 |" in lines
    # empty result set: header only
    empty = cli.emit_table([], "table3", "md").splitlines()
    assert len(empty) == 2
    # schema mismatch
    with pytest.raises(ValueError):
        cli.emit_table([{"bogus": 1}], "table3", "md")
    with pytest.raises(ValueError):
        cli.emit_table([], "table9", "md")


def test_emit_table4_sorted():
    rows = [{"degree": 6, "height": 100, "abssep": "3.336e-7",
             "quality": 3.41},
            {"degree": 4, "height": 10, "abssep": "3.716e-5",
             "quality": 4.43}]
    text = cli.emit_table(rows, "table4", "md")
    lines = text.splitlines()
    assert lines[2].startswith("| 4 |")
    assert lines[3].startswith("| 6 |")


def test_emit_table_json_roundtrip():
    rows = [{"height": 10 ** 10, "abssep": "7.165e-39", "quality": 3.81}]
    text = cli.emit_table(rows, "table5", "json")
    back = json.loads(text)
    assert back[0]["abssep"] == "7.165e-39"


def test_env_ceiling(monkeypatch):
    monkeypatch.setenv("ABSSEP_PRECISION_CEILING", "512")
    assert cli._env_ceiling() == 512
    monkeypatch.delenv("ABSSEP_PRECISION_CEILING")
    assert cli._env_ceiling() is None
