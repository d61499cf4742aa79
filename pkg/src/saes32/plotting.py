"""PNG figures for the census and gate-count reports (headless Agg backend)."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

_STACK = (("saes32", "saes32 / ssm4"), ("xor", "xor"), ("alu", "other ALU"),
          ("loads", "loads"))


def plot_census(records: list[dict], path: str | Path) -> Path:
    """Stacked bars of the per-workload instruction mix."""
    names = [r["workload"] for r in records]
    x = np.arange(len(names))
    fig, ax = plt.subplots(figsize=(max(6.0, 0.55 * len(names)), 4.0))
    bottom = np.zeros(len(names))
    for key, label in _STACK:
        vals = np.array([r[key] for r in records], dtype=float)
        ax.bar(x, vals, bottom=bottom, label=label, width=0.7)
        bottom += vals
    ax.set_xticks(x)
    ax.set_xticklabels(names, rotation=45, ha="right")
    ax.set_ylabel("instructions per block")
    ax.legend(frameon=False, fontsize="small", loc="upper left", bbox_to_anchor=(1.0, 1.0))
    ax.spines[["top", "right"]].set_visible(False)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_gates(rows: list[dict], path: str | Path) -> Path:
    """Gate counts per layer, XOR / XNOR / AND stacked; depth written on top."""
    labels = [r["component"] for r in rows]
    y = np.arange(len(labels))
    fig, ax = plt.subplots(figsize=(6.5, 3.6))
    left = np.zeros(len(labels))
    for key in ("xor", "xnor", "and"):
        vals = np.array([r[key] for r in rows], dtype=float)
        ax.barh(y, vals, left=left, label=key.upper(), height=0.6)
        left += vals
    for yi, r in zip(y, rows):
        ax.text(r["total"] + 0.8, yi, f"depth {r['depth']}", va="center", fontsize="small")
    ax.set_yticks(y)
    ax.set_yticklabels(labels)
    ax.invert_yaxis()
    ax.set_xlabel("gates")
    ax.set_xlim(0, max(r["total"] for r in rows) * 1.25)
    ax.legend(frameon=False, fontsize="small", loc="lower right")
    ax.spines[["top", "right"]].set_visible(False)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
