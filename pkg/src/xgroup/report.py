"""Delimited report rendering plus matplotlib figures for the corpus and
tower runs. Reports are tab-separated with a fixed column order so repeated
runs diff byte-exactly; figures land next to the tables as PNG files."""

from __future__ import annotations

from pathlib import Path
from typing import Optional

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

FIG_SIZE = (7.0, 4.3)
FIG_DPI = 150

CORPUS_COLUMNS = ("name", "order", "intended", "label", "brute", "recursive",
                  "status")
TOWER_COLUMNS = ("level", "order", "x_verdict", "theorem_case", "embedding_ok")


def corpus_tsv(summary: dict) -> str:
    lines = ["\t".join(CORPUS_COLUMNS)]
    for row in summary["rows"]:
        lines.append("\t".join(str(row.get(col, "")) for col in CORPUS_COLUMNS))
    lines.append(f"# entries={summary['entries']}\tmatches={summary['matches']}"
                 f"\twarnings={summary['warnings']}"
                 f"\tmismatches={summary['mismatches']}")
    return "\n".join(lines) + "\n"


def tower_tsv(report) -> str:
    lines = [f"# {report.spec.describe()}"]
    lines.append("\t".join(TOWER_COLUMNS))
    for row in report.levels:
        lines.append("\t".join(str(row[col]) for col in TOWER_COLUMNS))
    lines.append(f"# labels_constant={report.labels_constant}"
                 f"\tembeddings_ok={report.embeddings_ok}"
                 f"\tstabilization_ok={report.stabilization_ok}")
    return "\n".join(lines) + "\n"


def _new_axes(title: str):
    fig, ax = plt.subplots(figsize=FIG_SIZE, dpi=FIG_DPI)
    ax.set_title(title)
    ax.grid(alpha=0.3)
    return fig, ax


def render_corpus_figures(summary: dict, outdir: Path) -> list[Path]:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []

    counts: dict[str, int] = {}
    for row in summary["rows"]:
        counts[row.get("label", "?")] = counts.get(row.get("label", "?"), 0) + 1
    labels = sorted(counts)
    fig, ax = _new_axes("case label distribution")
    ax.bar(range(len(labels)), [counts[l] for l in labels], color="#4878d0")
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels, rotation=60, ha="right", fontsize=7)
    ax.set_ylabel("groups")
    fig.tight_layout()
    path = outdir / "case_distribution.png"
    fig.savefig(path)
    plt.close(fig)
    written.append(path)

    fig, ax = _new_axes("group order by verdict")
    statuses = sorted({r["status"] for r in summary["rows"]})
    colors = {"match": "#4878d0", "WARN-structural-only": "#ee854a",
              "MISMATCH": "#d65f5f"}
    for si, status in enumerate(statuses):
        orders = [r["order"] for r in summary["rows"] if r["status"] == status]
        ax.scatter(orders, [si] * len(orders), s=18, alpha=0.8,
                   color=colors.get(status, "#6acc64"), label=status)
    ax.set_xscale("log")
    ax.set_xlabel("order")
    ax.set_yticks(range(len(statuses)))
    ax.set_yticklabels(statuses, fontsize=8)
    ax.legend(fontsize=7, loc="upper right")
    fig.tight_layout()
    path = outdir / "order_by_status.png"
    fig.savefig(path)
    plt.close(fig)
    written.append(path)
    return written


def render_tower_figure(report, outdir: Path) -> Path:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    fig, ax = _new_axes(report.spec.describe())
    levels = [row["level"] for row in report.levels]
    orders = [row["order"] for row in report.levels]
    ok = [row["x_verdict"] == "IsX" for row in report.levels]
    ax.plot(levels, orders, "-o", color="#4878d0")
    for lvl, order, good in zip(levels, orders, ok):
        if not good:
            ax.scatter([lvl], [order], marker="x", s=90, color="#d65f5f",
                       zorder=3)
    ax.set_yscale("log")
    ax.set_xlabel("level")
    ax.set_ylabel("order")
    ax.set_xticks(levels)
    fig.tight_layout()
    path = outdir / "tower_orders.png"
    fig.savefig(path)
    plt.close(fig)
    return path
