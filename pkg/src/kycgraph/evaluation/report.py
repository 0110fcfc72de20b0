"""Report bundle emission: canonical JSON, a level-by-system table,
heatmap data by question type, and static plots.

Reports built from different snapshots are rejected (comparability guard);
report.json is canonical bytes so regeneration from stored records is
reproducible.
"""

from __future__ import annotations

import json
import os

from .runner import METRICS, MetricReport

_METRIC_TITLES = {
    "faithfulness": "Faithfulness",
    "answer_relevancy": "Answer Relevancy",
    "context_precision": "Context Precision",
    "context_recall": "Context Recall",
}


def emit_report(reports: list[MetricReport], out_dir: str,
                plots: bool = True) -> dict:
    """Write report.json, table.md, heatmap.json and plots/*.svg."""
    if not reports:
        raise ValueError("no reports to emit")
    digests = {report.snapshot_digest for report in reports}
    if len(digests) > 1:
        raise ValueError(
            f"reports come from different snapshots ({len(digests)} digests); "
            f"refusing to compare them")
    os.makedirs(out_dir, exist_ok=True)

    bundle = {
        "snapshot_digest": reports[0].snapshot_digest,
        "systems": {report.system: report.to_dict() for report in reports},
    }
    with open(os.path.join(out_dir, "report.json"), "w", encoding="utf-8") as fh:
        fh.write(json.dumps(bundle, sort_keys=True, indent=1))
        fh.write("\n")

    with open(os.path.join(out_dir, "table.md"), "w", encoding="utf-8") as fh:
        fh.write(_level_table(reports))

    heatmap = {report.system: report.aggregate("qtype") for report in reports}
    with open(os.path.join(out_dir, "heatmap.json"), "w", encoding="utf-8") as fh:
        fh.write(json.dumps(heatmap, sort_keys=True, indent=1))
        fh.write("\n")

    if plots:
        _emit_plots(reports, os.path.join(out_dir, "plots"))
    return bundle


def _level_table(reports: list[MetricReport]) -> str:
    lines = ["| Question Level | Method | Faithfulness | Answer Relevancy | "
             "Context Precision | Context Recall |",
             "|---|---|---|---|---|---|"]
    levels = sorted({record["level"] for report in reports
                     for record in report.per_question})
    for level in levels:
        for report in reports:
            by_level = report.aggregate("level").get(str(level))
            if by_level is None:
                continue
            lines.append(
                f"| Level {level} | {report.system} | "
                + " | ".join(f"{by_level[m]:.3f}" for m in METRICS) + " |")
    return "\n".join(lines) + "\n"


def _emit_plots(reports: list[MetricReport], plot_dir: str) -> None:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    matplotlib.rcParams["svg.hashsalt"] = "kycgraph"
    os.makedirs(plot_dir, exist_ok=True)

    levels = sorted({record["level"] for report in reports
                     for record in report.per_question})
    x = range(len(levels))
    fig, axes = plt.subplots(2, 2, figsize=(10, 7), sharey=True)
    for axis, metric in zip(axes.flat, METRICS):
        width = 0.8 / max(1, len(reports))
        for i, report in enumerate(reports):
            by_level = report.aggregate("level")
            values = [by_level.get(str(level), {}).get(metric, 0.0)
                      for level in levels]
            axis.bar([xi + i * width for xi in x], values, width=width,
                     label=report.system)
        axis.set_title(_METRIC_TITLES[metric])
        axis.set_xticks([xi + 0.4 - width / 2 for xi in x])
        axis.set_xticklabels([f"L{level}" for level in levels])
        axis.set_ylim(0, 1.05)
    axes[0][0].legend(loc="lower left")
    fig.suptitle("Metrics by question difficulty level")
    fig.tight_layout()
    fig.savefig(os.path.join(plot_dir, "by_level.svg"),
                metadata={"Date": None})
    plt.close(fig)

    qtypes = sorted({record["qtype"] for report in reports
                     for record in report.per_question})
    fig, axes = plt.subplots(1, len(reports), figsize=(6 * len(reports), 4.5),
                             squeeze=False)
    for axis, report in zip(axes[0], reports):
        by_qtype = report.aggregate("qtype")
        grid = [[by_qtype.get(qtype, {}).get(metric, 0.0)
                 for metric in METRICS] for qtype in qtypes]
        image = axis.imshow(grid, vmin=0.0, vmax=1.0, cmap="viridis",
                            aspect="auto")
        axis.set_yticks(range(len(qtypes)))
        axis.set_yticklabels(qtypes)
        axis.set_xticks(range(len(METRICS)))
        axis.set_xticklabels([_METRIC_TITLES[m] for m in METRICS],
                             rotation=20, ha="right")
        axis.set_title(report.system)
        for yi, row in enumerate(grid):
            for xi, value in enumerate(row):
                axis.text(xi, yi, f"{value:.2f}", ha="center", va="center",
                          color="white" if value < 0.6 else "black",
                          fontsize=8)
    fig.colorbar(image, ax=axes[0][-1], fraction=0.04)
    fig.suptitle("Metrics by question type")
    fig.tight_layout()
    fig.savefig(os.path.join(plot_dir, "by_qtype.svg"),
                metadata={"Date": None})
    plt.close(fig)
