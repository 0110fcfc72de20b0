"""Command-line interface: generation, serving, tools, agent, evaluation.

The CLI is a thin client of the tool server wherever a server URL is
given; --snapshot falls back to an in-process server for scripting and
hermetic runs.
"""

from __future__ import annotations

import json
import os
import sys
import time

import click

from . import __version__
from .errors import KycGraphError
from .store import PropertyGraph, snapshot_digest
from .synth import GenConfig, generate
from .synth.manifest import GroundTruthManifest
from .tools import ToolKit
from .server.dispatcher import Dispatcher
from .server.client import HttpToolClient, LocalToolClient


def _load_graph(snapshot: str) -> PropertyGraph:
    return PropertyGraph.load_snapshot(snapshot)


def _local_client(snapshot: str, log_path: str | None = None
                  ) -> LocalToolClient:
    kit = ToolKit(_load_graph(snapshot))
    return LocalToolClient(Dispatcher(kit, log_path=log_path))


def _client(server: str | None, snapshot: str | None):
    if server:
        return HttpToolClient(server)
    if snapshot:
        return _local_client(snapshot)
    raise click.UsageError("provide --server URL or --snapshot DIR")


def _remote_transport(endpoint: str | None, model: str | None):
    from .agent import RemoteChatTransport
    endpoint = endpoint or os.environ.get("KYCGRAPH_LLM_ENDPOINT")
    model = model or os.environ.get("KYCGRAPH_LLM_MODEL")
    if not endpoint or not model:
        raise click.UsageError(
            "remote backend needs --endpoint and --model (or the "
            "KYCGRAPH_LLM_ENDPOINT / KYCGRAPH_LLM_MODEL environment "
            "variables; API key via KYCGRAPH_LLM_API_KEY)")
    return RemoteChatTransport(endpoint, model)


@click.group()
@click.version_option(__version__)
def main():
    """KYC investigation graph: generator, query engine, tool server,
    agent, and evaluation harness."""


@main.command("generate")
@click.option("--seed", type=int, default=None, help="RNG seed.")
@click.option("--customers", type=int, default=None, help="Customer count.")
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.option("--config", "config_file", type=click.Path(exists=True),
              help="JSON file of GenConfig overrides.")
def generate_cmd(seed, customers, out_dir, config_file):
    """Generate a synthetic KYC graph snapshot with ground-truth manifest."""
    overrides = {}
    if config_file:
        with open(config_file, "r", encoding="utf-8") as fh:
            overrides = json.load(fh)
    if seed is not None:
        overrides["seed"] = seed
    if customers is not None:
        overrides["n_customers"] = customers
    config = GenConfig.from_dict({**GenConfig().to_dict(), **overrides})
    started = time.time()
    graph, manifest = generate(config)
    elapsed = time.time() - started
    os.makedirs(out_dir, exist_ok=True)
    graph.save_snapshot(out_dir)
    manifest.save(os.path.join(out_dir, "manifest.json"))
    report = _gen_report(config, manifest, elapsed)
    with open(os.path.join(out_dir, "genreport.json"), "w",
              encoding="utf-8") as fh:
        json.dump(report, fh, indent=1, sort_keys=True)
        fh.write("\n")
    click.echo(json.dumps(report["achieved"], sort_keys=True))
    if not report["within_bounds"]:
        raise click.ClickException("generated counts fell outside the "
                                   "configured bounds")


def _gen_report(config: GenConfig, manifest: GroundTruthManifest,
                elapsed: float) -> dict:
    counts = manifest.counts
    n = config.n_customers
    bounds = {
        "accounts": list(config.account_bounds),
        "transactions": list(config.transaction_bounds),
        "addresses": list(config.address_bounds),
    }
    rates = {
        "sanction_rate": counts["sanctioned_customers"] / n if n else 0.0,
        "pep_rate": counts["pep_customers"] / n if n else 0.0,
        "alert_rate": counts["alerted_customers"] / n if n else 0.0,
    }
    within = (not n) or all(
        bounds[key][0] <= counts[key] <= bounds[key][1]
        for key in ("accounts", "transactions", "addresses"))
    return {
        "achieved": {"customers": counts["customers"],
                     "accounts": counts["accounts"],
                     "transactions": counts["transactions"],
                     "addresses": counts["addresses"], **rates},
        "configured_bounds": bounds,
        "configured_rates": {"sanction_rate": config.sanction_rate,
                             "pep_rate": config.pep_rate,
                             "alert_rate": config.alert_rate},
        "within_bounds": within,
        "elapsed_seconds": round(elapsed, 2),
    }


@main.command("serve")
@click.option("--snapshot", required=True, type=click.Path(exists=True))
@click.option("--transport", type=click.Choice(["http", "stdio"]),
              default="http")
@click.option("--host", default=None,
              help="Bind address (env KYCGRAPH_BIND overrides the default "
                   "127.0.0.1).")
@click.option("--port", type=int, default=7688)
@click.option("--log", "log_path", type=click.Path(), default=None,
              help="JSONL request audit log.")
@click.option("--console", "console_dir", type=click.Path(), default=None,
              help="Static directory to mount at /console.")
@click.option("--workers", type=int, default=8)
def serve_cmd(snapshot, transport, host, port, log_path, console_dir, workers):
    """Serve the twelve tools over JSON-RPC (HTTP or stdio)."""
    kit = ToolKit(_load_graph(snapshot))
    dispatcher = Dispatcher(kit, log_path=log_path)
    if transport == "stdio":
        from .server.stdio import serve_stdio
        serve_stdio(dispatcher, sys.stdin, sys.stdout, workers=workers)
        return
    import uvicorn
    from .server.http_app import create_app
    app = create_app(dispatcher, console_dir=console_dir)
    uvicorn.run(app, host=host or os.environ.get("KYCGRAPH_BIND", "127.0.0.1"),
                port=port, log_level="warning")


@main.command("tool")
@click.argument("name")
@click.option("--args", "args_json", default="{}",
              help="Tool parameters as JSON.")
@click.option("--server", default=None, help="Tool server URL.")
@click.option("--snapshot", type=click.Path(exists=True), default=None)
def tool_cmd(name, args_json, server, snapshot):
    """Invoke one cataloged tool and print its JSON-RPC response."""
    try:
        params = json.loads(args_json)
    except json.JSONDecodeError as exc:
        raise click.UsageError(f"--args is not valid JSON: {exc}")
    client = _client(server, snapshot)
    response = client.call(name, params)
    click.echo(json.dumps(response, sort_keys=True, indent=1))
    if "error" in response:
        sys.exit(1)


@main.command("query")
@click.argument("query_text")
@click.option("--params", "params_json", default="{}")
@click.option("--server", default=None)
@click.option("--snapshot", type=click.Path(exists=True), default=None)
@click.option("--explain", "show_plan", is_flag=True,
              help="Print the query plan instead of executing.")
@click.option("--canonical", is_flag=True,
              help="Print only the result payload as canonical JSON (for "
                   "byte-level cross-interface comparisons).")
def query_cmd(query_text, params_json, server, snapshot, show_plan, canonical):
    """Run a raw query (sugar over the execute_cypher tool)."""
    if show_plan:
        from .cypher.planner import explain
        click.echo(explain(query_text)["text"])
        return
    try:
        params = json.loads(params_json)
    except json.JSONDecodeError as exc:
        raise click.UsageError(f"--params is not valid JSON: {exc}")
    client = _client(server, snapshot)
    response = client.call("execute_cypher",
                           {"query": query_text, "params": params})
    if canonical:
        if "error" in response:
            click.echo(json.dumps(response["error"], sort_keys=True,
                                  separators=(",", ":")))
            sys.exit(1)
        click.echo(json.dumps(response["result"]["payload"], sort_keys=True,
                              separators=(",", ":")))
        return
    click.echo(json.dumps(response, sort_keys=True, indent=1))
    if "error" in response:
        sys.exit(1)


@main.command("agent")
@click.option("--question", required=True)
@click.option("--backend", type=click.Choice(["scripted", "remote"]),
              default="scripted")
@click.option("--server", default=None)
@click.option("--snapshot", type=click.Path(exists=True), default=None)
@click.option("--budget", type=int, default=8)
@click.option("--out", "out_file", type=click.Path(), default=None,
              help="Write the transcript JSON here instead of stdout.")
@click.option("--endpoint", default=None,
              help="Remote chat-completions endpoint (remote backend).")
@click.option("--model", default=None, help="Remote model name.")
def agent_cmd(question, backend, server, snapshot, budget, out_file,
              endpoint, model):
    """Run one investigation and emit the transcript."""
    from .agent import investigate, ScriptedTransport
    from .agent.loop import InvestigationFailed
    client = _client(server, snapshot)
    if backend == "scripted":
        transport = ScriptedTransport()
    else:
        transport = _remote_transport(endpoint, model)
    try:
        transcript = investigate(question, transport, client, budget=budget)
    except InvestigationFailed as exc:
        click.echo(f"investigation failed: {exc}", err=True)
        click.echo(exc.transcript.to_json(), err=True)
        sys.exit(2)
    except KycGraphError as exc:
        raise click.ClickException(str(exc))
    body = json.dumps(transcript.to_dict(), sort_keys=True, indent=1)
    if out_file:
        with open(out_file, "w", encoding="utf-8") as fh:
            fh.write(body)
            fh.write("\n")
        click.echo(transcript.answer.render())
    else:
        click.echo(body)


@main.command("eval")
@click.option("--snapshot", required=True, type=click.Path(exists=True))
@click.option("--manifest", "manifest_file", type=click.Path(exists=True),
              default=None, help="Defaults to SNAPSHOT/manifest.json.")
@click.option("--questions", "questions_file", type=click.Path(exists=True),
              default=None, help="JSONL benchmark to reuse.")
@click.option("--generate", "n_generate", type=int, default=None,
              help="Generate this many questions instead.")
@click.option("--seed", type=int, default=11, help="Question sampling seed.")
@click.option("--system", type=click.Choice(["graph", "vector", "both"]),
              default="both")
@click.option("--backend", type=click.Choice(["scripted", "remote"]),
              default="scripted")
@click.option("--k", "top_k", type=int, default=5,
              help="Vector baseline top-k.")
@click.option("--budget", type=int, default=8)
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.option("--no-plots", is_flag=True)
@click.option("--endpoint", default=None, help="Remote backend endpoint.")
@click.option("--model", default=None, help="Remote backend model.")
def eval_cmd(snapshot, manifest_file, questions_file, n_generate, seed,
             system, backend, top_k, budget, out_dir, no_plots,
             endpoint, model):
    """Run the benchmark and emit the report bundle."""
    from .evaluation import (DocCorpus, build_report, emit_report,
                             generate_questions, run_graph_system,
                             run_vector_baseline)
    from .evaluation.questions import load_questions, save_questions
    from .evaluation.runner import save_run

    if bool(questions_file) == bool(n_generate):
        raise click.UsageError("choose exactly one of --questions FILE or "
                               "--generate N")
    graph = _load_graph(snapshot)
    kit = ToolKit(graph)
    digest = graph.digest()
    os.makedirs(out_dir, exist_ok=True)

    if questions_file:
        questions = load_questions(questions_file)
    else:
        manifest_path = manifest_file or os.path.join(snapshot, "manifest.json")
        manifest = GroundTruthManifest.load(manifest_path)
        questions, warnings = generate_questions(graph, manifest, seed,
                                                 n_generate, kit)
        for warning in warnings:
            click.echo(f"warning: {warning}", err=True)
        save_questions(questions, os.path.join(out_dir, "questions.jsonl"))

    reports = []
    if system in ("graph", "both"):
        client = LocalToolClient(Dispatcher(kit))
        transport = None
        if backend == "remote":
            transport = _remote_transport(endpoint, model)
        transcripts = {}
        records = run_graph_system(
            questions, client, transport=transport, budget=budget,
            transcript_sink=lambda q, t: transcripts.update({q.qid: t}))
        save_run(os.path.join(out_dir, "transcripts.jsonl"), questions,
                 transcripts)
        reports.append(build_report("graph-rag", digest, records))
    if system in ("vector", "both"):
        corpus = DocCorpus.build(graph)
        records = run_vector_baseline(questions, corpus, k=top_k)
        reports.append(build_report("vector-rag", digest, records))

    emit_report(reports, out_dir, plots=not no_plots)
    for report in reports:
        overall = report.overall()
        click.echo(f"{report.system}: " + " ".join(
            f"{metric}={overall[metric]:.3f}"
            for metric in ("faithfulness", "answer_relevancy",
                           "context_precision", "context_recall")))


@main.command("verify-snapshot")
@click.option("--snapshot", required=True, type=click.Path(exists=True))
def verify_cmd(snapshot):
    """Integrity check: load, re-serialize, compare digests."""
    graph = _load_graph(snapshot)
    problems = graph.check_referential_integrity()
    click.echo(json.dumps({
        "nodes": graph.node_count,
        "edges": graph.edge_count,
        "referential_integrity_problems": len(problems),
        "file_digest": snapshot_digest(snapshot),
        "graph_digest": graph.digest(),
    }, indent=1, sort_keys=True))
    if problems:
        sys.exit(1)


if __name__ == "__main__":
    main()
