import csv
import io
import json
import subprocess
import sys

import pytest

from negarith import cli
from negarith.runtime.verify import Verifier
from negarith.terms import numeral


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def json_lines(text):
    return [json.loads(line) for line in text.splitlines() if line.strip()]


@pytest.fixture
def files(tmp_path):
    good = tmp_path / "id.naw"
    good.write_text("(proof (imp-intro u (atom ff) (assume u (atom ff))))")
    bad = tmp_path / "bad.naw"
    bad.write_text("(proof (imp-intro u (atom tt) (assume u (atom ff))))")
    broken = tmp_path / "broken.naw"
    broken.write_text("(proof (imp-elim (truth)))")
    term = tmp_path / "two.naw"
    term.write_text("(term (rec 2 0 (lam (k nat) (lam (p nat) (succ p)))))")
    model = tmp_path / "m.model.json"
    model.write_text(json.dumps({"nat_bound": 3, "f": [0, 0, 1, 0]}))
    return {"good": str(good), "bad": str(bad), "broken": str(broken), "term": str(term),
            "model": str(model)}


def test_check_ok(capsys, files):
    code, out, _ = run(capsys, "check", files["good"], "--out", "json")
    rec = json_lines(out)[0]
    assert code == 0 and rec["schema"] == 1 and rec["status"] == "ok"


def test_check_failure_exit_one(capsys, files):
    code, out, _ = run(capsys, "check", files["bad"], "--out", "json")
    assert code == 1 and json_lines(out)[0]["status"] == "error"


def test_parse_error_exit_two(capsys, files):
    code, _, err = run(capsys, "check", files["broken"])
    assert code == 2 and "error" in err


def test_missing_file_exit_two(capsys):
    code, _, _ = run(capsys, "check", "no/such/file.naw")
    assert code == 2


def test_usage_error_exit_two(capsys):
    with pytest.raises(SystemExit) as e:
        cli.main(["extract"])
    assert e.value.code == 2


def test_check_term(capsys, files):
    code, out, _ = run(capsys, "check", files["term"], "--out", "json")
    assert code == 0 and json_lines(out)[0]["type"] == "nat"


def test_show_types(capsys):
    code, out, _ = run(capsys, "show-types", "linear_search")
    assert code == 0
    assert "tau+ = nat" in out and "tau- = eps" in out


def test_extract_json(capsys):
    code, out, _ = run(capsys, "extract", "contraction", "--variant", "marked", "--out", "json")
    rec = json_lines(out)[0]
    assert code == 0
    assert {"tau+", "tau-", "full", "plus"} <= set(rec)
    assert rec["ratio"] > 0


def test_extract_special_modes(capsys):
    for mode in ("naive", "flagged"):
        code, _, _ = run(capsys, "extract", "linear_search", "--induction", mode)
        assert code == 0


def test_eval_term(capsys, files):
    code, out, _ = run(capsys, "eval", files["term"], "--out", "json")
    rec = json_lines(out)[0]
    assert code == 0 and rec["value"] == 2 and rec["rec_unfolds"] == 2


def test_eval_proof_with_model(capsys, files):
    code, out, _ = run(capsys, "eval", "contraction", "--model", files["model"], "--out", "json")
    assert code == 0 and json_lines(out)


def test_eval_bad_model(capsys, tmp_path):
    m = tmp_path / "bad.model.json"
    m.write_text(json.dumps({"f": [-3]}))
    code, _, _ = run(capsys, "eval", "contraction", "--model", str(m))
    assert code == 2


def test_verify_pass(capsys):
    code, out, _ = run(capsys, "verify", "contraction", "--variant", "both", "--out", "json",
                       "--budget", "50")
    recs = json_lines(out)
    assert code == 0 and [r["verdict"] for r in recs] == ["PASS", "PASS"]


def test_verify_fail_writes_replay(capsys, tmp_path, monkeypatch):
    class Broken(Verifier):
        def __init__(self, *a, **k):
            super().__init__(*a, **k)
            self.plus = numeral(5)

    monkeypatch.setattr(cli, "Verifier", Broken)
    replay = tmp_path / "fails.jsonl"
    code, out, _ = run(capsys, "verify", "contraction", "--out", "json", "--replay", str(replay))
    assert code == 1 and json_lines(out)[0]["verdict"] == "FAIL"
    rows = json_lines(replay.read_text())
    assert rows and rows[0]["schema"] == 1 and "instance" in rows[0]


def test_bench_csv_header(capsys):
    code, out, _ = run(capsys, "bench", "linear_search", "--n", "16", "--k", "none,3",
                       "--modes", "naive,flagged", "--out", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0
    assert rows[0] == ["entry", "variant", "mode", "n", "K", "tc_checks", "rec_unfolds",
                       "beta_steps", "verdict"]
    assert len(rows) == 5


def test_bench_average(capsys):
    code, out, _ = run(capsys, "bench", "linear_search", "--n", "16", "--trials", "5",
                       "--modes", "flagged", "--seed", "2", "--out", "json")
    rec = json_lines(out)[0]
    assert code == 0 and rec["trials"] == 5 and rec["seed"] == 2


def test_bench_unknown_mode(capsys):
    code, _, _ = run(capsys, "bench", "linear_search", "--modes", "bogus")
    assert code == 2


def test_module_entry_point():
    p = subprocess.run([sys.executable, "-m", "negarith", "check", "identity", "--out", "json"],
                       capture_output=True, text=True)
    assert p.returncode == 0 and json.loads(p.stdout)["status"] == "ok"
