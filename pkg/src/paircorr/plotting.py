"""Static PNG rendering of the figure tables (Agg backend, no pyplot state)."""

from __future__ import annotations

from pathlib import Path
from typing import Mapping, Sequence

import numpy as np
from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

__all__ = ["line_figure"]

_STYLE = {"linewidth": 1.4}


def line_figure(path, x, series: Mapping[str, Sequence[float]], *, xlabel: str = "",
                ylabel: str = "", title: str = "", hlines: Sequence[float] = (),
                ylim: tuple[float, float] | None = None, steps: Sequence[str] = ()) -> Path:
    """Plot every entry of ``series`` against ``x`` and save as PNG.

    Names listed in ``steps`` are drawn as dashed reference curves.
    """
    fig = Figure(figsize=(6.4, 4.0), dpi=120)
    FigureCanvasAgg(fig)
    ax = fig.add_subplot(1, 1, 1)
    x = np.asarray(x, dtype=float)
    for name, y in series.items():
        style = dict(_STYLE, linestyle="--" if name in steps else "-")
        ax.plot(x, np.asarray(y, dtype=float), label=name, **style)
    for h in hlines:
        ax.axhline(h, color="0.6", linewidth=0.8, linestyle=":")
    if ylim is not None:
        ax.set_ylim(*ylim)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    ax.grid(True, alpha=0.3)
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    path = Path(path)
    # no software or date stamp so reruns give identical files
    fig.savefig(path, format="png", metadata={"Software": None})
    return path
