import io
import json
import sys

import pytest

from seedmut.cli import main


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def test_dosp_graph_counts(capsys):
    code, out = run(["dosp-graph", "--k", "4", "--counts"], capsys)
    assert code == 0 and "vertices=84" in out


def test_dosp_quotient_counts(capsys):
    code, out = run(["dosp-graph", "--k", "4", "--quotient", "--counts"], capsys)
    assert code == 0 and "vertices=11" in out


def test_dosp_power_counts(capsys):
    code, out = run(["dosp-graph", "--k", "2", "--power", "2", "--counts"], capsys)
    assert code == 0 and "vertices=9" in out and "edges=12" in out


def test_dosp_mutations(capsys):
    code, out = run(["dosp", "12|345^+|6"], capsys)
    assert code == 0
    assert len(out.strip().splitlines()) == 9


def test_tables_sl3_d21(capsys):
    code, out = run(["tables", "--case", "sl3-d21"], capsys)
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "pcluster,dosp"
    assert len(lines) == 8


def test_explore_summary(capsys):
    code, out = run(["explore", "--preset", "sl3-d21", "--mode", "cluster", "--good"],
                    capsys)
    assert code == 0
    assert "nodes=50" in out and "edges=100" in out and "variables=16" in out


def test_verify_pass(capsys):
    code, out = run(["verify", "killeq", "--k", "3", "--trials", "2"], capsys)
    assert code == 0 and out.startswith("PASS")


def test_build_mutate_weyl_roundtrip(tmp_path, capsys):
    seed_file = tmp_path / "seed.json"
    code, _ = run(["build", "--preset", "digon", "--k", "3", "--decoration", "gr",
                   "--out", str(seed_file)], capsys)
    assert code == 0
    data = json.loads(seed_file.read_text())
    assert data["n"] == 6 and data["k"] == 3 and "rows" in data

    script_file = tmp_path / "script.json"
    script_file.write_text(json.dumps([{"mutate": data["n"] - 1}]))
    code, out = run(["mutate", "--seed", str(seed_file), "--script", str(script_file)],
                    capsys)
    assert code == 0
    assert json.loads(out)["n"] == 6

    code, out = run(["weyl", "--seed", str(seed_file), "--row", "1"], capsys)
    assert code == 0 and "verified" in out


def test_outputs_deterministic(capsys):
    _, a = run(["tables", "--case", "sl3-d21"], capsys)
    _, b = run(["tables", "--case", "sl3-d21"], capsys)
    assert a == b
    _, a = run(["verify", "spiral", "--k", "3", "--trials", "1", "--rng-seed", "5"], capsys)
    _, b = run(["verify", "spiral", "--k", "3", "--trials", "1", "--rng-seed", "5"], capsys)
    assert a == b


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["explore", "--preset", "bogus"])
    assert exc.value.code == 2
