"""Command-line interface: exit codes, log files, determinism."""

import json
from pathlib import Path

from cegis_lab.cli import main


GOLDEN_DIR = Path(__file__).parent / "golden"


def run_cli(*argv):
    return main(list(argv))


def chain5_args(out):
    return ("run", "--family", "chain", "--target", "5", "--engine", "cegis",
            "--out", str(out))


def test_run_chain_cegis_exit_and_log(tmp_path):
    assert run_cli(*chain5_args(tmp_path)) == 0
    log = (tmp_path / "chain-cegis-5.jsonl").read_text()
    lines = [json.loads(line) for line in log.splitlines()]
    assert len(lines) == 8  # conjectures chain[0]..chain[6] plus the freeze line
    assert sum(1 for l in lines if l["event"] == "conjecture") == 7
    assert sum(1 for l in lines if l["event"] == "freeze") == 1
    summary = json.loads((tmp_path / "chain-cegis-5.summary.json").read_text())
    assert summary["verdict"] == "converged"
    assert summary["semantic_match"] is True
    assert summary["final"] == "chain[5]"
    assert summary["queries"] == 7


def test_run_chain_hcegis_exit_2(tmp_path):
    code = run_cli("run", "--family", "chain", "--target", "5", "--engine", "hcegis",
                   "--budget", "100", "--out", str(tmp_path))
    assert code == 2
    summary = json.loads((tmp_path / "chain-hcegis-5.summary.json").read_text())
    assert summary["verdict"] == "stalled"


def test_run_unknown_family_exit_1(tmp_path):
    code = run_cli("run", "--family", "nosuch", "--target", "5", "--out", str(tmp_path))
    assert code == 1


def test_run_unknown_engine_exit_1(tmp_path):
    code = run_cli("run", "--family", "chain", "--target", "5",
                   "--engine", "nosuch", "--out", str(tmp_path))
    assert code == 1


def test_run_missing_target_exit_1(tmp_path):
    assert run_cli("run", "--family", "chain", "--out", str(tmp_path)) == 1


def test_run_budget_exhausted_exit_3(tmp_path):
    code = run_cli("run", "--family", "rectangle", "--target=-1,1,-1,1",
                   "--engine", "mincegis", "--budget", "3", "--out", str(tmp_path))
    assert code == 3


def test_run_rectangle_target_spec(tmp_path):
    code = run_cli("run", "--family", "rectangle", "--target=-1,1,-1,1",
                   "--engine", "mincegis", "--budget", "400", "--out", str(tmp_path))
    assert code == 0
    log = (tmp_path / "rectangle-mincegis--1_1_-1_1.jsonl").read_text()
    first = json.loads(log.splitlines()[0])
    assert "trace_entry_pair" in first or first["trace_entry"] is None


def test_run_diagonal_and_gold_target_specs(tmp_path):
    assert run_cli("run", "--family", "diagonal", "--target", "diag:3",
                   "--engine", "hcegis", "--budget", "120", "--out", str(tmp_path)) == 0
    assert run_cli("run", "--family", "gold", "--target", "minus:17",
                   "--engine", "cegis", "--out", str(tmp_path)) == 0


def test_run_config_file(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("family = chain\ntarget = 5\nengine = cegis\n")
    assert run_cli("run", "--config", str(cfg), "--out", str(tmp_path)) == 0


def test_env_var_out_dir(tmp_path, monkeypatch):
    monkeypatch.setenv("CEGIS_LAB_LOG_DIR", str(tmp_path / "logs"))
    assert run_cli("run", "--family", "chain", "--target", "5",
                   "--engine", "cegis") == 0
    assert (tmp_path / "logs" / "chain-cegis-5.jsonl").exists()


def test_replay_determinism_byte_identical(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        run_cli("run", "--family", "rectangle", "--target=-1,1,-1,1",
                "--engine", "simulated-mincegis", "--schedule", "padded-seeded",
                "--seed", "11", "--budget", "20000", "--out", str(out))
    name = "rectangle-simulated-mincegis--1_1_-1_1.jsonl"
    assert (a / name).read_bytes() == (b / name).read_bytes()


def test_golden_log_regression(tmp_path):
    assert run_cli(*chain5_args(tmp_path)) == 0
    golden = (GOLDEN_DIR / "chain-cegis-5.jsonl").read_bytes()
    assert (tmp_path / "chain-cegis-5.jsonl").read_bytes() == golden


def test_demo_subcommand_writes_reports(tmp_path):
    assert run_cli("demo", "lemma1", "--imax", "5", "--out", str(tmp_path)) == 0
    md = (tmp_path / "demo-lemma1.md").read_text()
    doc = json.loads((tmp_path / "demo-lemma1.json").read_text())
    assert doc["passed"] is True
    assert "| family |" in md


def test_demo_unknown_name_exit_1(tmp_path):
    assert run_cli("demo", "nosuch", "--out", str(tmp_path)) == 1


def test_table_subcommand(tmp_path, capsys):
    run_cli("demo", "lemma1", "--imax", "2", "--out", str(tmp_path))
    capsys.readouterr()
    assert run_cli("table", str(tmp_path / "demo-lemma1.json")) == 0
    out = capsys.readouterr().out
    assert out.startswith("| family |")
    assert "Conclusion" in out


def test_summary_queries_recomputable_from_log(tmp_path):
    run_cli("run", "--family", "rectangle", "--target=-1,1,-1,1",
            "--engine", "mincegis", "--budget", "400", "--out", str(tmp_path))
    stem = tmp_path / "rectangle-mincegis--1_1_-1_1"
    lines = [json.loads(l) for l in (stem.parent / (stem.name + ".jsonl")).read_text().splitlines()]
    summary = json.loads((stem.parent / (stem.name + ".summary.json")).read_text())
    queried = [l for l in lines if l["event"] in ("conjecture", "probe")]
    assert summary["queries"] == len(queried)
    assert summary["queries"] == sum(1 for l in queried if l["cex"] is not None) + \
        sum(1 for l in queried if l["cex"] is None)
