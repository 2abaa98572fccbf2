"""Static matplotlib figures for reports and evolutions (Agg backend, files only)."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.colors import ListedColormap  # noqa: E402

from .battery import BatteryReport  # noqa: E402
from .sts import TEST_IDS, TEST_NAMES  # noqa: E402

_VERDICT_CODE = {None: 0, "R": 1, "A": 2}


def verdict_heatmap(matrix: dict[str, dict[str, str | None]], path, title: str | None = None):
    labels = list(matrix)
    grid = np.array([[_VERDICT_CODE[matrix[lab][t]] for lab in labels] for t in TEST_IDS])
    fig, ax = plt.subplots(figsize=(2.0 + 1.1 * max(len(labels), 1), 6.5))
    cmap = ListedColormap(["#d9d9d9", "#d6604d", "#4393c3"])
    ax.imshow(grid if labels else np.zeros((len(TEST_IDS), 1)), cmap=cmap, vmin=0, vmax=2,
              aspect="auto")
    for i in range(len(TEST_IDS)):
        for j, lab in enumerate(labels):
            ax.text(j, i, matrix[lab][TEST_IDS[i]] or "—", ha="center", va="center", fontsize=9)
    ax.set_xticks(range(len(labels)), [f"Rule {lab}" for lab in labels])
    ax.set_yticks(range(len(TEST_IDS)), [TEST_NAMES[t] for t in TEST_IDS], fontsize=8)
    ax.set_title(title or "Test verdicts")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def proportion_heatmap(report: BatteryReport, path):
    labels = [r.label for r in report.rules]
    grid = np.full((len(TEST_IDS), max(len(labels), 1)), np.nan)
    for j, r in enumerate(report.rules):
        for i, t in enumerate(TEST_IDS):
            if r.tests[t].proportion is not None:
                grid[i, j] = r.tests[t].proportion
    fig, ax = plt.subplots(figsize=(2.5 + 1.1 * max(len(labels), 1), 6.5))
    im = ax.imshow(grid, cmap="viridis", vmin=0.0, vmax=1.0, aspect="auto")
    for i in range(len(TEST_IDS)):
        for j in range(len(labels)):
            if not np.isnan(grid[i, j]):
                ax.text(j, i, f"{grid[i, j]:.3f}", ha="center", va="center", fontsize=7,
                        color="white" if grid[i, j] < 0.6 else "black")
    ax.set_xticks(range(len(labels)), [f"Rule {lab}" for lab in labels])
    ax.set_yticks(range(len(TEST_IDS)), [TEST_NAMES[t] for t in TEST_IDS], fontsize=8)
    ax.set_title("Pass proportion (p >= alpha)")
    fig.colorbar(im, ax=ax, fraction=0.05)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def pvalue_histograms(report: BatteryReport, path, bins: int = 10):
    """One panel per test: pooled p-values of every rule, overlaid."""
    fig, axes = plt.subplots(3, 5, figsize=(15, 8), sharex=True)
    for ax, t in zip(axes.flat, TEST_IDS):
        for r in report.rules:
            ps = [p for stream in r.tests[t].p_values if stream is not None for p in stream]
            if ps:
                ax.hist(ps, bins=bins, range=(0, 1), histtype="step", label=f"Rule {r.label}")
        ax.set_title(TEST_NAMES[t], fontsize=8)
        ax.tick_params(labelsize=7)
    handles, names = axes.flat[0].get_legend_handles_labels()
    if not handles:
        for ax in axes.flat:
            handles, names = ax.get_legend_handles_labels()
            if handles:
                break
    if handles:
        fig.legend(handles, names, loc="lower center", ncol=len(handles), fontsize=8)
    fig.supxlabel("p-value")
    fig.tight_layout(rect=(0, 0.04, 1, 1))
    fig.savefig(path, dpi=110)
    plt.close(fig)
    return path


def evolution_raster(rows: np.ndarray, path, title: str | None = None):
    rows = np.asarray(rows)
    h, w = rows.shape
    fig, ax = plt.subplots(figsize=(min(12, 2 + w / 20), min(12, 1 + h / 20)))
    ax.imshow(rows, cmap="binary", interpolation="nearest", aspect="equal")
    ax.set_xlabel("cell")
    ax.set_ylabel("step")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def report_figures(report: BatteryReport, stem) -> list[str]:
    """Write the standard figures for a report next to ``stem``; return their paths."""
    return [
        verdict_heatmap(report.matrix(), f"{stem}.verdicts.png"),
        proportion_heatmap(report, f"{stem}.proportions.png"),
        pvalue_histograms(report, f"{stem}.pvalues.png"),
    ]
