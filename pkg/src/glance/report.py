"""Figure rendering for slice-series reports.

Renders one PNG per tracked feature next to the delimited output, with
flagged slices drawn as filled markers so a faulty slice is visible at
a glance. matplotlib is imported lazily with the Agg backend so library
users without a display (or without plotting needs) pay nothing.
"""

from __future__ import annotations

import os

from .features import SeriesReport

SERIES_FIGURES = (
    ("ipf", "Information packing factor"),
    ("c", "Compactness"),
    ("p", "Porousness"),
    ("w_avg", "Average pore area (pixels)"),
)


def render_series_figures(report: SeriesReport, out_dir: str) -> list[str]:
    """Write one line chart per feature into out_dir; returns the paths."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    os.makedirs(out_dir, exist_ok=True)
    positions = list(range(len(report.records)))
    labels = [rec.source_id for rec in report.records]
    written = []
    for attr, title in SERIES_FIGURES:
        values = [getattr(rec, attr) for rec in report.records]
        xs = [i for i, v in zip(positions, values) if v is not None]
        ys = [v for v in values if v is not None]
        fig, ax = plt.subplots(figsize=(8, 3.2))
        ax.plot(xs, ys, color="#336699", linewidth=1.2, zorder=1)
        normal = [(x, y) for x, y in zip(xs, ys) if not report.flags[x]]
        flagged = [(x, y) for x, y in zip(xs, ys) if report.flags[x]]
        if normal:
            ax.scatter(*zip(*normal), s=18, color="#336699", zorder=2)
        if flagged:
            ax.scatter(*zip(*flagged), s=48, color="#cc3333", marker="D",
                       zorder=3, label="flagged")
            ax.legend(loc="best", fontsize=8)
        ax.set_title(title, fontsize=10)
        ax.set_xlabel("slice")
        ax.set_xticks(positions)
        ax.set_xticklabels(labels, rotation=90, fontsize=6)
        ax.grid(True, alpha=0.3)
        fig.tight_layout()
        path = os.path.join(out_dir, f"{attr}.png")
        fig.savefig(path, dpi=110)
        plt.close(fig)
        written.append(path)
    return written
