import json
import threading
from fractions import Fraction as Q

import pytest

from congruence_lab import cli
from congruence_lab.curves import WeierstrassCurve
from congruence_lab.errors import CacheMiss
from congruence_lab.ratmath import format_rational, parse_rational

E1 = "[1,0,0,-21666120,-57035036608]"
E2 = "[1,0,0,398520965,166506419482597]"


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_parse_curve():
    assert cli.parse_curve("[0,0,0,1,0]") == WeierstrassCurve.short(1, 0)
    assert cli.parse_curve("1, 0") == WeierstrassCurve.short(1, 0)
    assert cli.parse_curve("[0,0,0,-1/3,7]").a4 == Q(-1, 3)


def test_invariants(capsys):
    code, out = run(capsys, "invariants", "[0,0,0,1,0]")
    assert code == 0
    assert (out["c4"], out["c6"], out["disc"], out["j"]) == ("-48", "0", "-64", "1728")


def test_test_exit_codes(capsys):
    assert run(capsys, "test", "--n", "12", "--r", "11", E1, E2)[0] == 0
    code, out = run(capsys, "test", "--n", "12", "--r", "1", E1, E2)
    assert code == 1 and not out["congruent"]
    code, out = run(capsys, "test", "--n", "2", "[0,0,0,1,0]", E1)
    assert code == 2 and out["error"] == "Unsupported"


def test_apscan(capsys):
    code, out = run(capsys, "apscan", "--n", "12", "--bound", "300", E1, E2)
    assert code == 0 and out["passed"]


def test_family(capsys):
    code, out = run(capsys, "family", "--name", "ex127", "--t", "2")
    assert code == 0
    assert [k for k, v in sorted(out["verdicts"].items()) if v["congruent"]] == ["12,7"]
    assert out["ap_scan"]["passed"]
    assert out["nonisogeny_prime"] <= 100


def test_family_bad_parameter(capsys):
    code, out = run(capsys, "family", "--name", "ex121", "--t", "0")
    assert code == 2 and out["error"] == "BadParameter"


def test_verify_klein(capsys):
    code, out = run(capsys, "verify", "--suite", "klein")
    assert code == 0
    assert [r["status"] for r in out["reports"]] == ["pass"] * 3


def test_verify_failure_sets_exit_code(capsys):
    code, out = run(capsys, "verify", "--suite", "biinvariance")
    statuses = {r["check"]: r["status"] for r in out["reports"]}
    assert statuses["biinvariance(2,1)"] == "fail" and statuses["biinvariance(4,3)"] == "fail"
    assert code == 1
    assert all(r["status"] == "pass" for r in out["supplementary"])


def test_search_jsonl_round_trip(capsys, tmp_path):
    path = tmp_path / "hits.jsonl"
    code, out = run(capsys, "search", "--r", "11", "--height", "7", "--workers", "2", "--out", str(path))
    assert code == 0
    lines = path.read_text().splitlines()
    assert len(lines) == out["count"] > 0
    for line in lines:
        rec = json.loads(line)
        for key in ("u", "v", "z"):
            assert format_rational(parse_rational(rec[key])) == rec[key]
        assert json.dumps(rec, sort_keys=True, separators=(",", ":")) == line


def test_resolve_offline_miss(capsys):
    code, out = run(capsys, "resolve", "--label", "240.a3", "--offline")
    assert code == 2 and out["error"] == "CacheMiss"
    with pytest.raises(CacheMiss):
        cli.resolve_label("240.a3", offline=True)


def test_resolve_cache(capsys):
    calls = []

    def fake(label):
        calls.append(label)
        return ["0", "-1", "0", "-16", "16"]

    assert cli.resolve_label("240.a3", fetch=fake) == ["0", "-1", "0", "-16", "16"]
    assert cli.resolve_label("240.a3", fetch=fake, offline=True) == ["0", "-1", "0", "-16", "16"]
    assert calls == ["240.a3"]
    code, out = run(capsys, "resolve", "--label", "240.a3", "--offline")
    assert code == 0 and out["ainvs"] == ["0", "-1", "0", "-16", "16"]


def test_run_records_and_replay(capsys, tmp_path):
    log = tmp_path / "runs.jsonl"
    run(capsys, "verify", "--suite", "squareclass", "--trials", "5", "--seed", "3", "--record", str(log))
    run(capsys, "invariants", "1,1", "--record", str(log))
    recs = cli.read_records(log)
    assert [r["command"] for r in recs] == ["verify", "invariants"]
    assert recs[0]["seed"] == 3 and recs[0]["version"]
    assert "--record" not in recs[0]["arguments"]["argv"]
    code, out = run(capsys, "replay", "--log", str(log), "--index", "0")
    assert code == 0 and out["identical"]
    assert len(cli.read_records(log)) == 2  # replay is not itself recorded


def test_default_record_location(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("CONGRUENCE_LAB_CACHE", str(tmp_path / "c"))
    run(capsys, "invariants", "1,1")
    assert len(cli.read_records(tmp_path / "c" / "runs.jsonl")) == 1
    run(capsys, "invariants", "1,1", "--no-record")
    assert len(cli.read_records(tmp_path / "c" / "runs.jsonl")) == 1


def test_concurrent_appends(tmp_path):
    log = tmp_path / "runs.jsonl"

    def writer(k):
        for i in range(40):
            rec = cli.RunRecord("x", {"argv": [str(k), str(i)] * 50}, None, 0.0, {"k": k, "i": i})
            cli.append_record(rec, log)

    threads = [threading.Thread(target=writer, args=(k,)) for k in range(6)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    recs = cli.read_records(log)
    assert len(recs) == 240
    assert sorted((r["payload"]["k"], r["payload"]["i"]) for r in recs) == [(k, i) for k in range(6) for i in range(40)]
