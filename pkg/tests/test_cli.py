import json
import subprocess
import sys

import pytest

from k3kit.cli import EXIT_MISMATCH, EXIT_OK, EXIT_USAGE, main


def run(capsys, *args):
    code = main(list(args))
    out, err = capsys.readouterr()
    return code, out, err


def jsonl(out):
    return [json.loads(line) for line in out.splitlines()]


def test_rank_small(capsys):
    code, out, _ = run(capsys, "rank", "--from", "1", "--to", "4", "--format", "json", "--no-timestamp")
    assert code == EXIT_OK
    assert [r["rank"] for r in jsonl(out)] == [2, 3, 4, 4]


def test_rank_single_object(capsys):
    code, out, _ = run(capsys, "rank", "--from", "1", "--to", "1", "--format", "json", "--no-timestamp")
    rows = jsonl(out)
    assert code == EXIT_OK and len(rows) == 1
    assert set(rows[0]) == {"l", "rank", "gauss_value", "jacobi_value", "alpha", "beta",
                            "frac_sum", "d_eis", "agree"}


def test_rank_parallel_is_deterministic(capsys):
    a = run(capsys, "rank", "--from", "1", "--to", "40", "--jobs", "1", "--no-timestamp", "--format", "csv")
    b = run(capsys, "rank", "--from", "1", "--to", "40", "--jobs", "3", "--no-timestamp", "--format", "csv")
    assert a == b
    assert len(a[1].splitlines()) == 41


def test_timestamp_header(capsys):
    _, out, _ = run(capsys, "rank", "--from", "2", "--format", "json")
    assert "generated" in jsonl(out)[0]


@pytest.mark.parametrize("args", [
    ["rank", "--from", "3", "--to", "2"],
    ["rank"],
    ["rank", "--from", "0"],
    ["rank", "--from", "1", "--precision-bits", "32"],
    ["rank", "--from", "1", "--format", "xml"],
    ["bogus"],
    ["heegner", "2", "2", "1"],
    ["normal-form", "1", "2"],
    ["net-stability", "missing.json"],
])
def test_usage_errors(capsys, args):
    code, _, err = run(capsys, *args)
    assert code == EXIT_USAGE
    assert "error" in err


def test_heegner(capsys):
    code, out, _ = run(capsys, "heegner", "1", "1", "3", "--format", "json", "--no-timestamp")
    (row,) = jsonl(out)
    assert code == EXIT_OK
    assert (row["n"], row["gamma"], row["level"], row["representative"]) == ("-1/12", 1, 6, "w + 6u1")
    _, out, _ = run(capsys, "heegner", "0", "0", "1", "--format", "json", "--no-timestamp")
    (row,) = jsonl(out)
    assert (row["n"], row["gamma"], row["level"]) == ("-1/1", 0, 1)


def test_heegner_zero_delta_explains(capsys):
    code, _, err = run(capsys, "heegner", "2", "2", "1")
    assert code == EXIT_USAGE and "Delta" in err


def test_normal_form(capsys, tmp_path):
    code, out, _ = run(capsys, "normal-form", "--format", "json", "--no-timestamp", "--", "-6", "6", "1", "3")
    assert code == EXIT_OK
    assert jsonl(out)[0]["representative"] == "w + 6u1"
    p = tmp_path / "v.json"
    p.write_text(json.dumps({"schema": "k3kit.vector/1", "l": 3, "coordinates": [1, 6, 6] + [0] * 18}))
    code, out, _ = run(capsys, "normal-form", "--vector", str(p), "--format", "json", "--no-timestamp")
    row = jsonl(out)[0]
    assert code == EXIT_OK and row["roundtrip"]
    assert (row["norm"], row["level"], row["type"]) == (66, 6, 1)


def test_tables(capsys, caplog):
    code, out, _ = run(capsys, "tables", "1", "--no-timestamp")
    assert code == EXIT_OK and "| N3 | [2,1] |" in out
    code, out, err = run(capsys, "tables", "2", "--no-timestamp")
    assert code == EXIT_MISMATCH
    assert "search representative (3, 1)" in caplog.text
    code, out, _ = run(capsys, "tables", "3", "--no-timestamp", "--format", "json")
    assert code == EXIT_OK
    assert [r["pass"] for r in jsonl(out)] == [True] * 4


def _write(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


def test_cubic_stability(capsys, tmp_path):
    p = _write(tmp_path, "c.json", {"schema": "k3kit.cubic/1", "support": ["x1^2x4"]})
    code, out, _ = run(capsys, "cubic-stability", p, "--format", "json", "--no-timestamp")
    rows = jsonl(out)
    assert code == EXIT_OK
    assert rows[1]["result"] == "unstable w.r.t. torus, certificate (1, 0)"
    p = _write(tmp_path, "d.json", {"schema": "k3kit.cubic/1", "support": ["x0x1^2", "x2^3"]})
    _, out, _ = run(capsys, "cubic-stability", p, "--format", "json", "--no-timestamp")
    assert all(r["result"] == "no torus destabilizer" for r in jsonl(out))


def test_cubic_schema_error_location(capsys, tmp_path):
    p = _write(tmp_path, "c.json", {"schema": "k3kit.cubic/1", "support": [[0, 0, 3, 0, 0], [1, 2, 0]]})
    code, _, err = run(capsys, "cubic-stability", p)
    assert code == EXIT_USAGE and "$.support[1]" in err
    p = _write(tmp_path, "e.json", {"schema": "k3kit.cubic/1", "support": [[1, 0, 0, 0, 2]]})
    code, _, err = run(capsys, "cubic-stability", p)
    assert code == EXIT_USAGE


NET = {"schema": "k3kit.net/1", "quadrics": [
    [{"i": 0, "j": 2, "numerator": 1}, {"i": 4, "j": 4, "numerator": 1}],
    [{"i": 0, "j": 5, "numerator": 1}],
    [{"i": 2, "j": 5, "numerator": 1}]]}


def test_net_stability(capsys, tmp_path):
    p = _write(tmp_path, "n.json", NET)
    code, out, _ = run(capsys, "net-stability", p, "--lambda", "2,1,0,0,-1,-2", "--format", "json",
                       "--no-timestamp")
    (row,) = jsonl(out)
    assert code == EXIT_OK
    assert row["result"] == "not properly stable w.r.t. lambda (weight 0)"
    code, out, _ = run(capsys, "net-stability", p, "--search-bound", "2", "--format", "json",
                       "--no-timestamp")
    rows = jsonl(out)
    assert code == EXIT_OK and rows
    assert all(r["plucker_weight"] <= 0 for r in rows)


def test_net_bad_lambda(capsys, tmp_path):
    p = _write(tmp_path, "n.json", NET)
    code, _, _ = run(capsys, "net-stability", p, "--lambda", "1,2,0,0,0,-3")
    assert code == EXIT_USAGE


def test_config_precedence(capsys, tmp_path, monkeypatch):
    cfg = _write(tmp_path, "cfg.json", {"format": "csv", "no_timestamp": True, "from": 2, "to": 3})
    code, out, _ = run(capsys, "rank", "--config", cfg)
    assert code == EXIT_OK and out.splitlines()[0].startswith("l,rank")
    assert len(out.splitlines()) == 3
    # flags beat the config file
    _, out, _ = run(capsys, "rank", "--config", cfg, "--format", "json", "--to", "2")
    assert len(jsonl(out)) == 1
    # environment fallback
    monkeypatch.setenv("K3KIT_CONFIG", cfg)
    _, out, _ = run(capsys, "rank")
    assert out.startswith("l,rank")


def test_config_unknown_key(capsys, tmp_path):
    cfg = _write(tmp_path, "cfg.json", {"format": "csv", "colour": "red"})
    code, _, err = run(capsys, "rank", "--from", "1", "--config", cfg)
    assert code == EXIT_USAGE and "colour" in err


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "k3kit", "rank", "--from", "1", "--to", "2", "--no-timestamp",
                        "--format", "csv"], capture_output=True, text=True)
    assert r.returncode == 0
    assert r.stdout.splitlines()[1].startswith("1,2,")
