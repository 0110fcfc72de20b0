"""CLI surface: generate, tool, query, agent, eval, verify-snapshot."""

import json

import pytest
from click.testing import CliRunner

from kycgraph.cli import main


@pytest.fixture(scope="module")
def snapshot_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("cli") / "snap"
    runner = CliRunner()
    result = runner.invoke(main, ["generate", "--seed", "7", "--customers",
                                  "60", "--out", str(out), "--config",
                                  _config_file(tmp_path_factory)])
    assert result.exit_code == 0, result.output
    return out


def _config_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("cfg") / "config.json"
    path.write_text(json.dumps({"n_planted_rings": 2, "ring_size": [3, 4]}))
    return str(path)


def test_generate_emits_expected_files(snapshot_dir):
    for name in ("nodes.jsonl", "edges.jsonl", "manifest.json",
                 "genreport.json"):
        assert (snapshot_dir / name).exists(), name
    report = json.loads((snapshot_dir / "genreport.json").read_text())
    assert report["within_bounds"] is True
    assert report["achieved"]["customers"] == 60


def test_tool_subcommand(snapshot_dir):
    runner = CliRunner()
    result = runner.invoke(main, [
        "tool", "get_customer_accounts",
        "--args", '{"customer_id": "CUST000001"}',
        "--snapshot", str(snapshot_dir)])
    assert result.exit_code == 0, result.output
    body = json.loads(result.output)
    assert body["result"]["payload"]["customer_id"] == "CUST000001"


def test_tool_error_exit_code(snapshot_dir):
    runner = CliRunner()
    result = runner.invoke(main, [
        "tool", "get_customer_accounts",
        "--args", '{"customer_id": "CUST999999"}',
        "--snapshot", str(snapshot_dir)])
    assert result.exit_code == 1
    assert '"code": 1001' in result.output


def test_query_subcommand_and_explain(snapshot_dir):
    runner = CliRunner()
    result = runner.invoke(main, [
        "query", "MATCH (c:Customer) RETURN count(c)",
        "--snapshot", str(snapshot_dir)])
    assert result.exit_code == 0, result.output
    body = json.loads(result.output)
    assert body["result"]["payload"]["rows"] == [[60]]
    result = runner.invoke(main, [
        "query", "MATCH (c:Customer {customer_id: $id}) RETURN c",
        "--explain"])
    assert result.exit_code == 0
    assert "NodeIndexSeek" in result.output


def test_agent_subcommand(snapshot_dir, tmp_path):
    runner = CliRunner()
    out_file = tmp_path / "transcript.json"
    result = runner.invoke(main, [
        "agent", "--question",
        "What is the risk level of customer CUST000003?",
        "--snapshot", str(snapshot_dir), "--out", str(out_file)])
    assert result.exit_code == 0, result.output
    assert "Direct Answer:" in result.output
    transcript = json.loads(out_file.read_text())
    assert transcript["steps"]
    assert transcript["answer"]["direct_answer"]


def test_verify_snapshot(snapshot_dir):
    runner = CliRunner()
    result = runner.invoke(main, ["verify-snapshot", "--snapshot",
                                  str(snapshot_dir)])
    assert result.exit_code == 0, result.output
    body = json.loads(result.output)
    assert body["referential_integrity_problems"] == 0


def test_eval_subcommand_end_to_end(snapshot_dir, tmp_path):
    runner = CliRunner()
    out = tmp_path / "evalrun"
    result = runner.invoke(main, [
        "eval", "--snapshot", str(snapshot_dir), "--generate", "20",
        "--system", "both", "--out", str(out), "--no-plots"])
    assert result.exit_code == 0, result.output
    assert (out / "report.json").exists()
    assert (out / "questions.jsonl").exists()
    assert (out / "transcripts.jsonl").exists()
    assert (out / "table.md").exists()
    assert "graph-rag" in result.output and "vector-rag" in result.output
    # reuse the saved questions file
    rerun = tmp_path / "rerun"
    result = runner.invoke(main, [
        "eval", "--snapshot", str(snapshot_dir),
        "--questions", str(out / "questions.jsonl"),
        "--system", "vector", "--out", str(rerun), "--no-plots"])
    assert result.exit_code == 0, result.output


def test_eval_usage_error(snapshot_dir, tmp_path):
    runner = CliRunner()
    result = runner.invoke(main, ["eval", "--snapshot", str(snapshot_dir),
                                  "--out", str(tmp_path / "x")])
    assert result.exit_code != 0
    assert "exactly one" in result.output
