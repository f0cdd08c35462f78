"""Matplotlib rendering of the report outputs.

Figures are written next to the CSV data so a run leaves both the numbers
and a quick visual; everything renders off-screen (Agg).
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

__all__ = ["render_density_figure", "render_localization_figure"]

_FAMILY_COLORS = {"bg": "tab:blue", "perelomov": "tab:red"}


def render_density_figure(curves, path: Path, title: str, x_limit: float | None = None):
    """Overlay |psi|^2 curves (solid: bg, dashed: perelomov), labelled by t."""
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    times = sorted({c.t for c in curves})
    for c in curves:
        shade = 0.25 + 0.75 * (times.index(c.t) + 1) / len(times)
        ax.plot(
            c.grid.points,
            c.density,
            color=_FAMILY_COLORS.get(c.family, "k"),
            alpha=shade,
            linestyle="-" if c.family == "bg" else "--",
            label=f"{c.family}, t={c.t:g}",
        )
    ax.set_xlabel("x")
    ax.set_ylabel(r"$|\psi|^2$")
    if x_limit:
        ax.set_xlim(0, x_limit)
    ax.set_title(title)
    ax.legend(fontsize=8, ncol=2)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_localization_figure(rows, path: Path):
    """sigma_x against t for every (family, transformed) series."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    series: dict[tuple, list] = {}
    for r in rows:
        series.setdefault((r["family"], r["transformed"]), []).append(
            (r["t"], r["sigma_x"])
        )
    for (family, transformed), pts in sorted(series.items()):
        pts.sort()
        ts, sig = zip(*pts)
        ax.plot(
            ts,
            sig,
            marker="o",
            color=_FAMILY_COLORS.get(family, "k"),
            linestyle="--" if transformed else "-",
            label=f"{family}{' (transformed)' if transformed else ''}",
        )
    ax.set_xlabel("t")
    ax.set_ylabel(r"$\sigma_x$")
    ax.set_title("localization vs time")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
