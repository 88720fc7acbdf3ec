import csv
import io
import json
import shutil
import subprocess
import sys

import pytest

from lsb2adic.cli import main
from lsb2adic.seq import BinarySequence


def run(capsys, *argv):
    code = main(list(argv))
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def strip_time(d):
    return {k: v for k, v in d.items() if k != "timestamp"}


# -- table1 ----------------------------------------------------------------------


def test_table1_small_passes(capsys):
    code, out, _ = run(capsys, "table1", "--p-max", "13")
    assert code == 0
    lines = out.splitlines()
    assert "7 | 3,5 | (2)" in lines
    assert any(l.startswith("11 | 2,6,7,8 | (-2,2)") for l in lines)


def test_table1_full_reports_row_61(capsys):
    code, out, _ = run(capsys, "table1", "--p-max", "100", "--format", "json")
    assert code == 1
    d = json.loads(out)
    assert [r["p"] for r in d["rows"]][-1] == 97 and len(d["rows"]) == 24
    bad = [r for r in d["rows"] if not r["ok"]]
    assert [r["p"] for r in bad] == [61]


def test_table1_too_small_is_usage_error(capsys):
    code, _, err = run(capsys, "table1", "--p-max", "5")
    assert code == 2 and "p-max" in err


# -- ac --------------------------------------------------------------------------


def test_ac_small_field(capsys):
    code, out, _ = run(capsys, "ac", "--p", "3", "--n", "2")
    assert code == 0
    assert sum("ok" in l for l in out.splitlines()) == 7


def test_ac_single_shift(capsys):
    code, out, _ = run(capsys, "ac", "--p", "11", "--n", "2", "--tau", "60", "--format", "json")
    assert code == 0
    d = json.loads(out)
    assert d["brute"] == -100 and d["predicted"] == -100


def test_ac_csv(capsys):
    code, out, _ = run(capsys, "ac", "--p", "7", "--n", "2", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0 and len(rows) == 48
    assert rows[0][:3] == ["tau", "brute", "predicted"]


def test_ac_large_field_needs_sampling(capsys):
    code, _, err = run(capsys, "ac", "--p", "7", "--n", "6")
    assert code == 2 and "--sampled" in err
    code, out, _ = run(capsys, "ac", "--p", "7", "--n", "6", "--sampled", "--format", "json")
    assert code == 0 and json.loads(out)["report"]["mode"] == "sampled"


def test_ac_defaults_beta_for_17(capsys):
    code, out, _ = run(capsys, "ac", "--p", "17", "--n", "2", "--format", "json")
    d = json.loads(out)
    assert code == 0 and d["field"]["beta"] == 3
    assert any("beta defaulted" in n for n in d["report"]["notes"])
    assert d["report"]["acb_I"] == [4, 0, -4]


@pytest.mark.parametrize("argv", [["ac"], ["ac", "--p", "9", "--n", "2"], ["ac", "--p", "7", "--n", "0"],
                                  ["twoadic", "--p", "3"], ["export-seq", "--n", "2"]])
def test_usage_errors(capsys, argv):
    assert main(argv) == 2


def test_argparse_errors_exit_two():
    with pytest.raises(SystemExit) as e:
        main(["ac", "--format", "xml"])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        main(["nope"])
    assert e.value.code == 2


# -- twoadic / verify / conjecture ------------------------------------------------------


def test_twoadic_examples(capsys):
    code, out, _ = run(capsys, "twoadic", "--p", "7", "--n", "2", "--format", "json")
    d = json.loads(out)["report"]
    assert code == 0
    assert d["conjecture"]["slack"] == -1
    assert (d["phi2_exact"], d["bound_value"], d["verdict"]) == (31, 28, "pass")


def test_twoadic_over_budget(capsys):
    code, _, err = run(capsys, "twoadic", "--p", "7", "--n", "3", "--max-bits", "100")
    assert code == 2 and "resource limit" in err


def test_twoadic_exploratory_prime(capsys):
    code, out, _ = run(capsys, "twoadic", "--p", "13", "--n", "2", "--format", "json")
    assert code == 0 and json.loads(out)["report"]["verdict"] == "exploratory"


def test_verify_writes_grid_files(capsys, tmp_path):
    target = tmp_path / "grid.json"
    code, _, _ = run(capsys, "verify", "--p-max", "7", "--n-max", "3", "--format", "json",
                     "--out", str(target))
    assert code == 0
    cells = [json.loads(l) for l in (tmp_path / "grid.jsonl").read_text().splitlines()]
    assert [(c["p"], c["n"]) for c in cells] == [(3, 2), (3, 3), (5, 2), (5, 3), (7, 2), (7, 3)]
    assert {c["verdict"] for c in cells} == {"pass"}
    rows = list(csv.DictReader(io.StringIO((tmp_path / "grid.csv").read_text())))
    assert set(rows[0]) >= {"p", "n", "N", "phi2_exact", "bound", "slack", "verdict", "beta",
                            "conjecture_slack"}
    assert json.loads(target.read_text())["counts"] == {"pass": 6}


def test_verify_marks_over_budget_cells(capsys):
    code, out, _ = run(capsys, "verify", "--p-max", "5", "--n-max", "4", "--max-bits", "200",
                       "--format", "json")
    d = json.loads(out)
    assert code == 0
    verdicts = {(c["p"], c["n"]): c["verdict"] for c in d["cells"]}
    assert verdicts[(5, 4)] == "skipped" and verdicts[(3, 4)] == "pass"


def test_verify_is_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        assert main(["verify", "--p-max", "5", "--n-max", "3", "--format", "json",
                     "--out", str(path)]) == 0
    capsys.readouterr()
    da, db = json.loads(a.read_text()), json.loads(b.read_text())
    da["config"].pop("out", None)
    db["config"].pop("out", None)
    assert strip_time(da) == strip_time(db)
    assert (tmp_path / "a.jsonl").read_text() == (tmp_path / "b.jsonl").read_text()


def test_conjecture(capsys):
    code, out, _ = run(capsys, "conjecture", "--p", "7", "--n", "2", "--format", "json")
    c = json.loads(out)["cells"][0]
    assert code == 0 and (c["phi2"], c["main"], c["slack"]) == (31, 32, -1)
    code, _, _ = run(capsys, "conjecture", "--p", "3", "--n", "2", "--c-cap", "0")
    assert code == 1


# -- export-seq -----------------------------------------------------------------------


def test_export_seq_formats(capsys, tmp_path):
    code, out, _ = run(capsys, "export-seq", "--p", "3", "--n", "2")
    assert code == 0 and len(out.strip()) == 8
    code, out, _ = run(capsys, "export-seq", "--p", "7", "--n", "2", "--format", "json")
    s = BinarySequence.from_json(out)
    assert s.N == 48 and s.weight == 27
    raw = tmp_path / "s.bin"
    assert main(["export-seq", "--p", "7", "--n", "2", "--format", "raw", "--out", str(raw)]) == 0
    assert BinarySequence.from_raw(raw.read_bytes(), 48) == s


def test_export_seq_bit_and_zero_options(capsys):
    _, lsb_bits, _ = run(capsys, "export-seq", "--p", "7", "--n", "2")
    _, alt, _ = run(capsys, "export-seq", "--p", "7", "--n", "2", "--zero-as-zero")
    _, bit2, _ = run(capsys, "export-seq", "--p", "7", "--n", "2", "--bit", "2")
    assert lsb_bits != alt and lsb_bits != bit2
    assert main(["export-seq", "--p", "7", "--n", "2", "--bit", "4"]) == 2
    assert main(["export-seq", "--p", "7", "--n", "2", "--format", "raw"]) == 2


def test_console_script_or_module_runs():
    exe = shutil.which("lsb2adic")
    cmd = [exe] if exe else [sys.executable, "-m", "lsb2adic.cli"]
    res = subprocess.run(cmd + ["twoadic", "--p", "3", "--n", "2"], capture_output=True, text=True)
    assert res.returncode == 0 and "pass" in res.stdout
