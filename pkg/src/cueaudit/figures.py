"""Figure rendering for the report pipeline.

Everything draws through the Agg backend with pinned sizes, dpi, and PNG
metadata, so a rerun writes byte-identical images. Positive interaction
values (female-synergistic) render orange, negative render blue, matching
the color classes used in the delimited outputs.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
from matplotlib.colors import LinearSegmentedColormap

_BIAS_CMAP = LinearSegmentedColormap.from_list(
    "bias", ["#2166ac", "#f7f7f7", "#e08214"]
)
_SAVE_OPTS = dict(dpi=120, metadata={"Software": "cueaudit"})

_AXIS_ORDER = ("status", "career", "persona")


def stage1_figure(rows: Sequence, path: Path) -> Path:
    """Horizontal bars of per-descriptor female probability, one panel per axis."""
    by_axis = {a: [r for r in rows if r.axis == a] for a in _AXIS_ORDER}
    heights = [max(len(v), 1) for v in by_axis.values()]
    fig, axes = plt.subplots(
        3,
        1,
        figsize=(7.0, 0.22 * sum(heights) + 2.0),
        gridspec_kw={"height_ratios": heights},
    )
    for ax, axis_name in zip(axes, _AXIS_ORDER):
        group = by_axis[axis_name]
        ys = np.arange(len(group))
        values = [r.p_hat for r in group]
        colors = ["#e08214" if v >= 0.5 else "#2166ac" for v in values]
        ax.barh(ys, values, color=colors)
        ax.set_yticks(ys)
        ax.set_yticklabels([r.surface for r in group], fontsize=6)
        ax.invert_yaxis()
        ax.set_xlim(0, 1)
        ax.axvline(0.5, color="0.4", linewidth=0.8, linestyle="--")
        ax.set_title(axis_name, fontsize=9, loc="left")
    axes[-1].set_xlabel("P̂(female)")
    fig.suptitle("Univariate descriptor audit", fontsize=11)
    fig.tight_layout(rect=(0, 0, 1, 0.985))
    fig.savefig(path, **_SAVE_OPTS)
    plt.close(fig)
    return path


def _cell_grid(cells: Sequence) -> tuple[list[str], list[str], np.ndarray, np.ndarray]:
    """Arrange one table's cells into a row-label x column-label matrix."""
    rows: list[str] = []
    cols: list[str] = []
    for c in cells:
        parts = c.cell.split(" × ")
        row_label = parts[0]
        col_label = " × ".join(parts[1:])
        if row_label not in rows:
            rows.append(row_label)
        if col_label not in cols:
            cols.append(col_label)
    values = np.full((len(rows), len(cols)), np.nan)
    pvals = np.full((len(rows), len(cols)), np.nan)
    for c in cells:
        parts = c.cell.split(" × ")
        i = rows.index(parts[0])
        j = cols.index(" × ".join(parts[1:]))
        values[i, j] = c.mean_i
        pvals[i, j] = c.mean_p_value
    return rows, cols, values, pvals


def stage2_figure(cells: Sequence, path: Path) -> Path:
    """Heatmaps of mean interaction per cell, one panel per composite table."""
    tables: list[str] = []
    for c in cells:
        if c.table not in tables:
            tables.append(c.table)
    vmax = max(2.8, max(abs(c.mean_i) for c in cells))
    fig, axes = plt.subplots(
        1, len(tables), figsize=(4.2 * len(tables), 3.6), squeeze=False
    )
    for ax, table in zip(axes[0], tables):
        members = [c for c in cells if c.table == table]
        row_labels, col_labels, values, pvals = _cell_grid(members)
        ax.imshow(values, cmap=_BIAS_CMAP, vmin=-vmax, vmax=vmax, aspect="auto")
        ax.set_xticks(range(len(col_labels)))
        ax.set_xticklabels(col_labels, fontsize=7, rotation=20, ha="right")
        ax.set_yticks(range(len(row_labels)))
        ax.set_yticklabels(row_labels, fontsize=7)
        for i in range(values.shape[0]):
            for j in range(values.shape[1]):
                if np.isnan(values[i, j]):
                    continue
                note = "*" if pvals[i, j] < 0.05 else ""
                ax.text(
                    j,
                    i,
                    f"{values[i, j]:+.2f}{note}",
                    ha="center",
                    va="center",
                    fontsize=8,
                )
        ax.set_title(table, fontsize=9)
    fig.suptitle("Interaction terms by cell (orange = female synergy)", fontsize=11)
    fig.tight_layout(rect=(0, 0, 1, 0.94))
    fig.savefig(path, **_SAVE_OPTS)
    plt.close(fig)
    return path


def encoder_figure(groups: Sequence, path: Path) -> Path:
    """Grouped bars of per-subgroup Cohen's d, one bar set per encoder."""
    encoders: list[str] = []
    labels: list[str] = []
    for g in groups:
        if g.encoder not in encoders:
            encoders.append(g.encoder)
        if g.subgroup not in labels:
            labels.append(g.subgroup)
    width = 0.8 / max(len(encoders), 1)
    fig, ax = plt.subplots(figsize=(1.1 * len(labels) + 3.0, 4.0))
    xs = np.arange(len(labels))
    for k, enc in enumerate(encoders):
        values = []
        for label in labels:
            match = [
                g for g in groups if g.encoder == enc and g.subgroup == label
            ]
            d = match[0].cohens_d if match and match[0].cohens_d is not None else 0.0
            values.append(d)
        offset = (k - (len(encoders) - 1) / 2) * width
        colors = ["#e08214" if v >= 0 else "#2166ac" for v in values]
        ax.bar(xs + offset, values, width=width, color=colors, label=enc)
    ax.axhline(0.0, color="0.3", linewidth=0.8)
    ax.set_xticks(xs)
    ax.set_xticklabels(labels, fontsize=7, rotation=25, ha="right")
    ax.set_ylabel("Cohen's d of Δ")
    ax.set_title("Encoder semantic bias by subgroup", fontsize=11)
    if len(encoders) > 1:
        ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path, **_SAVE_OPTS)
    plt.close(fig)
    return path
