import json

import pytest

from rainbowham.cli import main
from rainbowham.graph import dumps, load
from rainbowham.instances import InstanceSpec, generate_instance


@pytest.fixture
def host_file(tmp_path):
    path = tmp_path / "g.json"
    g = generate_instance(InstanceSpec(n=40, epsilon=0.15, seed=1))
    path.write_text(dumps(g))
    return str(path)


def test_gen_writes_valid_graph(tmp_path, capsys):
    out = tmp_path / "out.json"
    assert main(["gen", "-n", "30", "--epsilon", "0.2", "--seed", "3",
                 "-o", str(out)]) == 0
    g = load(out)
    assert g.n == 30
    assert g.min_degree >= 0.7 * 30


def test_gen_stdout(capsys):
    assert main(["gen", "-n", "12", "--epsilon", "0.2", "--seed", "4"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["n"] == 12


def test_validate_text_and_json(host_file, capsys):
    assert main(["validate", host_file]) == 0
    assert "proper=True" in capsys.readouterr().out
    assert main(["validate", host_file, "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["proper"] is True and doc["n"] == 40


def test_validate_missing_file_is_exit_2(capsys):
    assert main(["validate", "/nonexistent/g.json"]) == 2


def test_validate_malformed_is_exit_2(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"n": 3, "edges": [[0, 0, 1]]}')
    assert main(["validate", str(bad)]) == 2


def test_regularize(host_file, tmp_path, capsys):
    out = tmp_path / "reg.json"
    assert main(["regularize", host_file, "-o", str(out), "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    sub = load(out)
    assert all(d == doc["r"] for d in sub.degrees)


def test_forest(host_file, capsys):
    assert main(["forest", host_file, "--seed", "2", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["rainbow"] is True
    assert doc["num_paths"] >= 1


def test_solve(host_file, capsys):
    assert main(["solve", host_file, "--epsilon", "0.15", "--seed", "2",
                 "--cycle", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert len(doc["cycle"]) == 40
    assert doc["distinct_colours"] >= 25


def test_solve_low_degree_is_stage_failure_exit_1(tmp_path, capsys):
    sparse = tmp_path / "sparse.json"
    sparse.write_text('{"n":4,"edges":[[0,1,0],[1,2,1],[2,3,2],[0,3,3]]}\n')
    assert main(["solve", str(sparse)]) == 1


def test_adversary_round_trip(tmp_path, capsys):
    g_path = tmp_path / "adv.json"
    c_path = tmp_path / "cert.json"
    assert main([
        "adversary", "gen", "-n", "32", "-q", "2", "-t", "1", "-m", "0",
        "--ell", "8", "--seed", "5", "-o", str(g_path),
        "--certificate", str(c_path), "--quiet",
    ]) == 0
    assert main(["adversary", "verify", str(g_path), str(c_path),
                 "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["all_ok"] is True


def test_adversary_verify_detects_mismatch(tmp_path, capsys):
    g_path = tmp_path / "adv.json"
    c_path = tmp_path / "cert.json"
    main(["adversary", "gen", "-n", "32", "-q", "2", "-t", "1", "-m", "0",
          "--ell", "8", "--seed", "5", "-o", str(g_path),
          "--certificate", str(c_path), "--quiet"])
    cert = json.loads(c_path.read_text())
    cert["min_degree_required"] = 999
    c_path.write_text(json.dumps(cert))
    assert main(["adversary", "verify", str(g_path), str(c_path), "--quiet"]) == 1


def test_oracle_hamilton(tmp_path, capsys):
    path = tmp_path / "c5.json"
    path.write_text('{"n":5,"edges":[[0,1,0],[0,4,4],[1,2,1],[2,3,2],[3,4,3]]}\n')
    assert main(["oracle", "hamilton", str(path), "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["max_distinct_colours"] == 5


def test_oracle_hamilton_none_is_exit_1(tmp_path):
    path = tmp_path / "p3.json"
    path.write_text('{"n":3,"edges":[[0,1,0],[1,2,1]]}\n')
    assert main(["oracle", "hamilton", str(path), "--quiet"]) == 1


def test_oracle_budget_exceeded_is_exit_2(host_file):
    assert main(["oracle", "hamilton", host_file]) == 2


def test_oracle_matching(tmp_path, capsys):
    path = tmp_path / "b.json"
    path.write_text('{"n":6,"edges":[[0,3,7],[1,4,7],[2,5,7]]}\n')
    assert main(["oracle", "matching", str(path), "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["size"] == 1


def test_suite_report(tmp_path, capsys):
    out = tmp_path / "report.json"
    assert main(["suite", "oracle-equivalence", "--trials", "3", "--seed", "1",
                 "-o", str(out), "--quiet"]) == 0
    doc = json.loads(out.read_text())
    assert doc["trials"] == 3 and doc["successes"] == 3
    assert len(doc["records"]) == 3


def test_suite_reproducible(capsys):
    assert main(["suite", "adversary", "--trials", "4", "--seed", "2",
                 "--format", "json"]) == 0
    first = json.loads(capsys.readouterr().out)
    assert main(["suite", "adversary", "--trials", "4", "--seed", "2",
                 "--format", "json"]) == 0
    second = json.loads(capsys.readouterr().out)
    first.pop("elapsed_seconds")
    second.pop("elapsed_seconds")
    assert first == second
