"""Report figures. Uses the non-interactive Agg backend."""

from __future__ import annotations

from pathlib import Path
from typing import Mapping, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from ..les.partition import BIN_ORDER  # noqa: E402


def plot_f1(summary: Sequence, path: str | Path) -> Path:
    """Grouped F1 bars (mean with sd error bars) per indicator and system."""
    indicators = list(dict.fromkeys(s.indicator for s in summary))
    systems = list(dict.fromkeys(s.system for s in summary))
    lookup = {(s.indicator, s.system): s for s in summary}
    x = np.arange(len(indicators))
    width = 0.8 / max(len(systems), 1)
    fig, ax = plt.subplots(figsize=(max(6, 1.6 * len(indicators)), 4))
    for k, system in enumerate(systems):
        rows = [lookup.get((ind, system)) for ind in indicators]
        means = [r.f1_mean if r else 0.0 for r in rows]
        sds = [r.f1_sd if r else 0.0 for r in rows]
        ax.bar(x + (k - (len(systems) - 1) / 2) * width, means, width, yerr=sds, capsize=3, label=system)
    ax.set_xticks(x, indicators)
    ax.set_ylim(0, 1.05)
    ax.set_ylabel("F1")
    ax.legend(loc="lower right", fontsize="small")
    return _save(fig, path)


def plot_partition(sizes: Mapping[str, Mapping[str, int]], path: str | Path) -> Path:
    """Bin sizes per indicator on a log scale."""
    indicators = list(sizes)
    x = np.arange(len(BIN_ORDER))
    width = 0.8 / max(len(indicators), 1)
    fig, ax = plt.subplots(figsize=(8, 4))
    for k, ind in enumerate(indicators):
        counts = [max(sizes[ind].get(b.value, 0), 0) for b in BIN_ORDER]
        ax.bar(x + (k - (len(indicators) - 1) / 2) * width, counts, width, label=ind)
    ax.set_xticks(x, [b.value for b in BIN_ORDER], rotation=30, ha="right")
    ax.set_yscale("symlog")
    ax.set_ylabel("sentences")
    ax.legend(fontsize="small")
    return _save(fig, path)


def plot_loss_curves(curves: Mapping[str, Sequence[float]], path: str | Path) -> Path:
    fig, ax = plt.subplots(figsize=(6, 4))
    for name, curve in curves.items():
        ax.plot(range(1, len(curve) + 1), curve, marker="o", ms=3, label=name)
    ax.set_xlabel("epoch")
    ax.set_ylabel("training loss")
    ax.legend(fontsize="small")
    return _save(fig, path)


def _save(fig, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    # fixed metadata keeps the PNG bytes reproducible
    fig.savefig(path, dpi=100, metadata={"Software": None})
    plt.close(fig)
    return path
