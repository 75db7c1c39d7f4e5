"""Figure rendering for score reports and seed lists.

Everything goes through the Agg backend and writes PNG with the software
metadata chunk stripped, so re-running a pipeline reproduces the files
byte for byte.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

_SAVE_KW = {"dpi": 120, "metadata": {"Software": None}}


def render_metrics_figure(report, path) -> None:
    """Bar chart of every metric in a report, values annotated."""
    names = list(report.values)
    scores = [report.values[n] for n in names]
    fig, ax = plt.subplots(figsize=(max(4.0, 1.1 * len(names)), 3.2))
    bars = ax.bar(range(len(names)), scores, color="#4878a8")
    ax.set_xticks(range(len(names)))
    ax.set_xticklabels(names, rotation=30, ha="right", fontsize=8)
    ax.set_ylim(0.0, 1.05)
    ax.set_ylabel("score")
    ax.set_title(f"{report.task} metrics")
    for bar, score in zip(bars, scores):
        ax.text(bar.get_x() + bar.get_width() / 2, score + 0.02, f"{score:.3f}",
                ha="center", fontsize=7)
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)


def render_seed_figure(seed_lists, path) -> None:
    """One horizontal-bar panel per aspect with its top seed scores."""
    aspects = sorted(seed_lists)
    fig, axes = plt.subplots(1, len(aspects), figsize=(2.6 * len(aspects), 3.4), squeeze=False)
    for ax, aspect in zip(axes[0], aspects):
        seeds = seed_lists[aspect].seeds
        tokens = [t for t, _ in seeds][::-1]
        scores = [s for _, s in seeds][::-1]
        ax.barh(range(len(tokens)), scores, color="#6aa84f")
        ax.set_yticks(range(len(tokens)))
        ax.set_yticklabels(tokens, fontsize=7)
        ax.set_title(aspect, fontsize=9)
        ax.tick_params(axis="x", labelsize=7)
    fig.suptitle("aspect seed words", fontsize=10)
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)
