import csv
import json
import subprocess
import sys

import pytest

from symplab import checks, cli

REQUIRED = ["lemma-2.2-pullback", "prop-4.1-set-equal", "prop-6.2-maslov", "cor-8.6-critical", "prop-6.3-radius",
            "lemma-3.5-area", "prop-8.4-enumerate"]
FAST = ["eq-4-helper", "prop-8.4-enumerate", "cor-8.6-example", "prop-6.3-radius?k=0&m=1"]


def test_registry_size_and_order():
    ids = [d.id for d in checks.descriptors()]
    assert len(ids) >= 40 and ids == sorted(ids) and len(set(ids)) == len(ids)
    assert set(REQUIRED) <= set(ids)


def test_every_operation_is_reachable():
    assert set(checks.OPERATIONS) <= checks.reachable_operations()


def test_parse_check_id():
    desc, params = checks.parse_check_id("prop-6.3-radius?k=0&m=1")
    assert desc.id == "prop-6.3-radius" and params == {"k": 0, "m": 1}
    for bad in ("nope", "prop-6.3-radius?z=1", "prop-6.3-radius?k=x"):
        with pytest.raises(checks.UsageError):
            checks.parse_check_id(bad)


def test_run_is_deterministic():
    a = cli.run(FAST, seed=3, parallel=False)
    b = cli.run(FAST, seed=3, parallel=False)
    strip = lambda rs: [{k: v for k, v in r.to_dict().items() if k != "elapsed_ms"} for r in rs]
    assert strip(a) == strip(b)
    assert all(r.status == "pass" for r in a)
    assert [r.id for r in a] == sorted(r.id for r in a)


def test_parameter_changes_the_answer():
    (r,) = cli.run(["prop-6.3-radius?k=1&m=2"], parallel=False)
    assert r.status == "pass" and r.notes == "r = 3/4"


def test_json_roundtrip():
    reports = cli.run(FAST, parallel=False)
    seed, back = cli.parse_json(cli.emit_json(reports, 7))
    assert seed == 7 and back == reports


def test_infinite_metric_serializes():
    r = cli.CheckReport("x", "fail", float("inf"), 0.0, 1, 7, 1.0)
    text = cli.emit_json([r], 7)
    assert json.loads(text)["checks"][0]["metric"] == "inf"
    assert cli.parse_json(text)[1][0].metric == float("inf")


def test_main_exit_codes(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert cli.main(["run", *FAST, "--json", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["run_seed"] == 7 and len(doc["checks"]) == len(FAST)
    capsys.readouterr()
    assert cli.main(["run", "no-such-check"]) == 2
    captured = capsys.readouterr()
    assert captured.out == "" and "unknown check id" in captured.err
    assert cli.main(["run", "eq-4-helper", "--tol", "-1"]) == 1


def test_list(capsys):
    assert cli.main(["list"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[-1] == f"{len(checks.REGISTRY)} checks"


def test_sweep_values():
    assert cli.sweep_values("0.1:0.5:0.1", None) == [0.1, 0.2, 0.3, 0.4, 0.5]
    assert cli.sweep_values("1:0:0.1", None) == []
    assert cli.sweep_values(None, "1,2.5") == [1.0, 2.5]
    for bad in ("1:2", "0:1:0"):
        with pytest.raises(checks.UsageError):
            cli.sweep_values(bad, None)


def test_sweep_csv(tmp_path):
    path = tmp_path / "s.csv"
    assert cli.main(["sweep", "lemma-3.5-area", "--param", "alpha", "--range", "0.1:0.9:0.1",
                     "--csv", str(path)]) == 0
    rows = list(csv.DictReader(path.open()))
    assert len(rows) == 9 and list(rows[0]) == ["parameter", "value", "expected", "abs_error"]
    assert all(float(r["abs_error"]) <= 1e-6 for r in rows)


def test_sweep_empty_and_errors(tmp_path):
    path = tmp_path / "e.csv"
    assert cli.main(["sweep", "prop-6.5-area", "--param", "a", "--range", "1:0:0.1", "--csv", str(path)]) == 0
    assert path.read_text().strip() == "parameter,value,expected,abs_error"
    assert cli.main(["sweep", "lemma-3.5-area", "--param", "alpha", "--values", "0.5",
                     "--csv", str(tmp_path / "missing" / "x.csv")]) == 2
    assert cli.main(["sweep", "eq-4-helper", "--param", "alpha", "--values", "0.5", "--csv", str(path)]) == 2


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "symplab", "run", "eq-4-helper"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("PASS")
