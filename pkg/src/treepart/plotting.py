"""Figures for verification reports (PNG, headless backend)."""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def _save(fig, path: Path) -> Path:
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def facet_counts(by_family: dict, path: Path) -> Path:
    """Rows, predicted facets and observed facets per family."""
    fams = list(by_family)
    xs = range(len(fams))
    w = 0.27
    fig, ax = plt.subplots(figsize=(7, 3.6))
    for k, (key, label) in enumerate((("rows", "rows"), ("predicted", "predicted facets"), ("observed", "observed facets"))):
        ax.bar([x + (k - 1) * w for x in xs], [by_family[f][key] for f in fams], w, label=label)
    ax.set_xticks(list(xs))
    ax.set_xticklabels(fams, rotation=20)
    ax.set_ylabel("count")
    ax.legend(frameon=False)
    return _save(fig, path)


def value_agreement(pairs, xlabel: str, ylabel: str, title: str, path: Path) -> Path:
    """Scatter of two exact values per trial; points on the diagonal agree."""
    xs = [float(a) for a, _ in pairs]
    ys = [float(b) for _, b in pairs]
    fig, ax = plt.subplots(figsize=(4.2, 4.2))
    ax.scatter(xs, ys, s=14)
    if xs:
        lo, hi = min(xs + ys), max(xs + ys)
        ax.plot([lo, hi], [lo, hi], lw=0.8, color="gray")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    return _save(fig, path)


def submatrix(matrix, rows, cols, det, path: Path) -> Path:
    """The full constraint matrix with the offending submatrix outlined."""
    fig, ax = plt.subplots(figsize=(5, 4.5))
    ax.imshow(matrix, cmap="bwr", vmin=-1.5, vmax=1.5)
    for i in rows:
        for j in cols:
            ax.add_patch(plt.Rectangle((j - 0.5, i - 0.5), 1, 1, fill=False, lw=1.5))
    ax.set_xlabel("variable")
    ax.set_ylabel("row")
    ax.set_title(f"submatrix determinant {det}")
    return _save(fig, path)


def chain_violations(entries, path: Path) -> Path:
    """Maximum violation per inclusion check; every bar must be <= 0."""
    labels = [e[0] for e in entries]
    vals = [float(e[1]) for e in entries]
    fig, ax = plt.subplots(figsize=(max(4, 0.5 * len(labels)), 3.4))
    ax.bar(range(len(vals)), vals)
    ax.axhline(0, color="gray", lw=0.8)
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels, rotation=60, fontsize=7)
    ax.set_ylabel("max violation")
    return _save(fig, path)
