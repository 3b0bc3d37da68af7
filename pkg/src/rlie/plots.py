"""Figures and a TSV table for campaign summaries."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

STATUSES = ("CONFIRMED", "VACUOUS", "VIOLATION")
COLORS = {"CONFIRMED": "#3b7d4f", "VACUOUS": "#9aa5b1", "VIOLATION": "#c0392b"}


def write_table(summary: dict, path: Path):
    lines = ["p\t" + "\t".join(STATUSES) + "\tpipeline_run\tpipeline_passed"]
    for p, entry in summary["per_prime"].items():
        c = entry["counts"]
        pipe = entry.get("pipeline", {})
        lines.append("\t".join([p] + [str(c[s]) for s in STATUSES]
                               + [str(pipe.get("run", "")), str(pipe.get("passed", ""))]))
    path.write_text("\n".join(lines) + "\n")


def status_bars(summary: dict, path: Path):
    primes = list(summary["per_prime"])
    fig, ax = plt.subplots(figsize=(5, 3.5))
    bottom = [0] * len(primes)
    for s in STATUSES:
        vals = [summary["per_prime"][p]["counts"][s] for p in primes]
        ax.bar([f"p={p}" for p in primes], vals, bottom=bottom, color=COLORS[s], label=s)
        bottom = [b + v for b, v in zip(bottom, vals)]
    ax.set_ylabel("instances")
    ax.set_title("Verdicts per characteristic")
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def hypothesis_failures(summary: dict, path: Path):
    primes = list(summary["per_prime"])
    names = list(next(iter(summary["per_prime"].values()))["failed_hypotheses"])
    fig, ax = plt.subplots(figsize=(6.5, 3.5))
    width = 0.8 / max(len(primes), 1)
    for k, p in enumerate(primes):
        vals = [summary["per_prime"][p]["failed_hypotheses"][h] for h in names]
        ax.bar([i + k * width for i in range(len(names))], vals, width, label=f"p={p}")
    ax.set_xticks([i + width * (len(primes) - 1) / 2 for i in range(len(names))])
    ax.set_xticklabels(names, rotation=30, ha="right", fontsize=8)
    ax.set_ylabel("instances failing")
    ax.set_title("Which hypothesis made an instance vacuous")
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def dimension_scatter(summary: dict, path: Path):
    fig, ax = plt.subplots(figsize=(5, 3.5))
    for s in STATUSES:
        xs, ys = [], []
        for entry in summary["per_prime"].values():
            for r in entry.get("records", []):
                if r["status"] == s:
                    xs.append(r["dim_V"] + 0.1 * (r["dim_L"] - 2))
                    ys.append(r["dim_W"])
        if xs:
            ax.scatter(xs, ys, s=10, alpha=0.5, color=COLORS[s], label=s)
    ax.set_xlabel("dim V (jittered by dim L)")
    ax.set_ylabel("dim W")
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_campaign(summary: dict, outdir: Path) -> list[Path]:
    outdir.mkdir(parents=True, exist_ok=True)
    paths = [outdir / "verdicts.png", outdir / "hypothesis_failures.png", outdir / "dimensions.png"]
    status_bars(summary, paths[0])
    hypothesis_failures(summary, paths[1])
    dimension_scatter(summary, paths[2])
    write_table(summary, outdir / "summary.tsv")
    return paths + [outdir / "summary.tsv"]
