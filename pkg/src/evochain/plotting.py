"""Matplotlib rendering of property diagrams.

Import cost is deferred: matplotlib loads only when a figure is actually
requested, so the CSV-only paths stay light.
"""

from __future__ import annotations

import numpy as np

from .transitions import Diagram, DiagramProperty

_GOLDEN = (1 + 5**0.5) / 2


def render_diagram(d: Diagram, path) -> None:
    """Render the diagram cells as a heatmap over the (s, t) triangle."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    n = d.resolution
    values = np.full((n, n), np.nan)
    for i in range(n):
        for j in range(i, n):
            values[j, i] = d.cells[i, j]

    height = 4.2
    fig, ax = plt.subplots(figsize=(height * _GOLDEN, height))
    if d.property is DiagramProperty.IDEMPOTENT_COUNT:
        cmap, vmin, vmax = "viridis", -1, max(1, int(np.nanmax(values)))
    else:
        cmap, vmin, vmax = "RdYlGn", -1, 1
    img = ax.imshow(
        values,
        origin="lower",
        extent=(0.0, d.t_max, 0.0, d.t_max),
        cmap=cmap,
        vmin=vmin,
        vmax=vmax,
        interpolation="nearest",
        aspect="auto",
    )
    ax.plot([0, d.t_max], [0, d.t_max], color="black", linewidth=0.6)
    ax.set_xlabel("s")
    ax.set_ylabel("t")
    ax.set_title(f"{d.property.value} over the time triangle")
    fig.colorbar(img, ax=ax, label="cell value")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
