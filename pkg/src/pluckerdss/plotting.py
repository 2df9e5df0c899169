"""Figures written next to the run and sweep reports."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

STYLE = {
    "font.size": 9,
    "axes.labelsize": 9,
    "axes.titlesize": 10,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "savefig.dpi": 150,
    "svg.hashsalt": "pluckerdss",
}


def _figure(width=6.0, height=3.2, ncols=1):
    with plt.rc_context(STYLE):
        fig, axes = plt.subplots(1, ncols, figsize=(width, height), squeeze=False)
    return fig, axes[0]


def _save(fig, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with plt.rc_context(STYLE):
        fig.tight_layout()
        fig.savefig(path)
    plt.close(fig)
    return path


def plot_ledger(report, path):
    """Field elements and metadata moved by each scenario step."""
    steps = [s for s in report.steps if s.op != "assert"]
    fig, (ax,) = _figure(width=max(4.0, 0.45 * len(steps) + 2.0))
    xs = range(len(steps))
    data = [s.elements for s in steps]
    meta = [s.metadata for s in steps]
    ax.bar(xs, data, color="#3b6ea5", label="field elements")
    ax.bar(xs, meta, bottom=data, color="#c8a24a", label="metadata")
    ax.set_xticks(list(xs))
    ax.set_xticklabels([f"{s.index}:{s.op}" for s in steps], rotation=45, ha="right")
    for x, s in zip(xs, steps):
        if s.status == "FAILED":
            ax.annotate("x", (x, 0), ha="center", va="bottom", color="#b22222")
    h = report.header
    ax.set_title(f"bandwidth per step, {h['field']} b={h['b']} n={h['n']}")
    ax.set_ylabel("symbols moved")
    ax.legend(frameon=False)
    return _save(fig, path)


def plot_sweep(sweep, path):
    """Histograms of minimum-bandwidth repair cost and local helper count."""
    fig, (a1, a2) = _figure(width=7.0, ncols=2)
    for ax, values, title, xlabel in (
        (a1, sweep.min_bw_costs, "minimum-bandwidth repair", "elements downloaded"),
        (a2, sweep.local_sizes, "local repair", "helpers contacted"),
    ):
        if values:
            lo, hi = min(values), max(values)
            ax.hist(values, bins=[v - 0.5 for v in range(lo, hi + 2)], color="#3b6ea5", rwidth=0.8)
            ax.set_xticks(list(range(lo, hi + 1)))
        else:
            ax.text(0.5, 0.5, "none", ha="center", va="center", transform=ax.transAxes)
        ax.set_title(title)
        ax.set_xlabel(xlabel)
        ax.set_ylabel("repairs")
    fig.suptitle(f"t={sweep.t}: {sweep.sets_checked} failure sets, "
                 f"{'ok' if sweep.ok else 'FAILED'}")
    return _save(fig, path)
