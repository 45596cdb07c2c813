"""Matplotlib figures for stability reports, written straight to files."""

from __future__ import annotations

import csv
from pathlib import Path

from .stability import StabilityReport


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def write_csv(report: StabilityReport, path) -> Path:
    """Per-embedding table (grade values and numeric conclusions), comma-delimited."""
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(report.header())
        for row in report.rows():
            w.writerow([row[0], *(repr(float(x)) for x in row[1:])])
    return path


def plot_stability(report: StabilityReport, path, *, dpi: int = 120) -> Path:
    """Two panels: the numeric gap between the first two conclusions across
    embeddings, and how often each conclusion comes out on top numerically
    next to the (fixed) lexicographic winner."""
    plt = _pyplot()
    path = Path(path)
    atoms = report.conclusions
    fig, (ax_gap, ax_top) = plt.subplots(1, 2, figsize=(10, 4))

    if len(atoms) >= 2:
        a, b = atoms[0], atoms[1]
        gaps = [float(o[a]) - float(o[b]) for o in report.outcomes]
        ax_gap.hist(gaps, bins=min(40, max(5, len(gaps) // 10)), color="0.55", edgecolor="white")
        ax_gap.axvline(0.0, color="black", linewidth=1)
        ax_gap.set_xlabel(f"pv({a}) - pv({b})")
        ax_gap.set_ylabel("embeddings")
        below = sum(1 for g in gaps if g < 0)
        above = sum(1 for g in gaps if g > 0)
        ax_gap.set_title(f"{report.tnorm.value}: {above} above / {below} below zero")
    else:
        ax_gap.text(0.5, 0.5, "fewer than two conclusions", ha="center", va="center")
        ax_gap.set_axis_off()

    wins = {a: 0 for a in atoms}
    for o in report.outcomes:
        best = max(o.values()) if o else None
        for a in atoms:
            if o[a] == best:
                wins[a] += 1
    lex_top = report.lexicographic_ranking[0][0] if report.lexicographic_ranking else None
    labels = [str(a) for a in atoms]
    heights = [wins[a] / max(1, report.samples) for a in atoms]
    colors = ["tab:blue" if a == lex_top else "0.7" for a in atoms]
    ax_top.bar(range(len(atoms)), heights, color=colors)
    ax_top.set_xticks(range(len(atoms)))
    ax_top.set_xticklabels(labels, rotation=20, ha="right", fontsize=8)
    ax_top.set_ylim(0, 1.05)
    ax_top.set_ylabel("share of embeddings ranked first")
    ax_top.set_title("numeric winner (blue: lexicographic winner)")

    fig.suptitle(
        f"{report.samples} embeddings, {report.flips} flipping pairs"
        + (f", seed {report.seed}" if report.seed is not None else "")
    )
    fig.tight_layout()
    fig.savefig(path, dpi=dpi, metadata={"Software": None} if path.suffix == ".png" else None)
    plt.close(fig)
    return path
