"""Figure rendering for the CLI report path.

Each function takes the same rows a CSV report contains and draws the
matching figure to a file.  Rendering is strictly additive: the delimited
output never depends on matplotlib, and these helpers are only imported
when a plot was actually requested.
"""

from __future__ import annotations

from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

__all__ = [
    "plot_event_probs",
    "plot_guess_curve",
    "plot_bounds",
]

_EVENT_LABELS = ("P(00)", "P(01)", "P(10)", "P(11)")


def _save(fig, path: str) -> None:
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_event_probs(rows: Sequence[dict], x_name: str, path: str) -> None:
    """Detection-event probabilities vs pulse intensity, one panel per basis."""
    betas = sorted({row["beta"] for row in rows})
    fig, axes = plt.subplots(1, len(betas), figsize=(6 * len(betas), 4.2),
                             sharey=True, squeeze=False)
    for ax, beta in zip(axes[0], betas):
        sub = [row for row in rows if row["beta"] == beta]
        x = [row[x_name] for row in sub]
        for key, label in zip(("p00", "p01", "p10", "p11"), _EVENT_LABELS):
            ax.plot(x, [row[key] for row in sub], label=label)
        if sub and "mc_p00" in sub[0]:
            for key, label in zip(("mc_p00", "mc_p01", "mc_p10", "mc_p11"),
                                  _EVENT_LABELS):
                ax.plot(x, [row[key] for row in sub], ".", ms=4,
                        label=f"{label} MC")
        ax.set_xlabel(x_name)
        ax.set_title(f"basis {beta}")
        ax.legend(fontsize=8)
    axes[0][0].set_ylabel("probability")
    _save(fig, path)


def plot_guess_curve(rows: Sequence[dict], x_name: str, y_name: str,
                     path: str, series_name: str = None) -> None:
    """Guessing probability vs sweep variable, optionally one line per series."""
    fig, ax = plt.subplots(figsize=(6, 4.2))
    if series_name is None:
        ax.plot([r[x_name] for r in rows], [r[y_name] for r in rows])
        if rows and "mc_estimate" in rows[0]:
            ax.errorbar([r[x_name] for r in rows],
                        [r["mc_estimate"] for r in rows],
                        yerr=[3 * r["mc_stderr"] for r in rows],
                        fmt=".", ms=5, label="Monte Carlo (3 s.e.)")
            ax.legend(fontsize=8)
    else:
        for value in sorted({r[series_name] for r in rows}):
            sub = [r for r in rows if r[series_name] == value]
            ax.plot([r[x_name] for r in sub], [r[y_name] for r in sub],
                    label=f"{series_name}={value:g}")
        ax.legend(fontsize=8)
    ax.set_xlabel(x_name)
    ax.set_ylabel(y_name)
    _save(fig, path)


def plot_bounds(rows: Sequence[dict], path: str) -> None:
    """Leakage caps vs efficiency spread, one panel per bound, log scale."""
    etas = sorted({r["eta"] for r in rows})
    fig, axes = plt.subplots(2, 1, figsize=(6, 7), sharex=True)
    for ax, key, title in zip(axes, ("b_ii", "b_iii"),
                              ("report-everything bound", "symmetrized bound")):
        for eta in etas:
            sub = [r for r in rows if r["eta"] == eta]
            ax.plot([r["delta_eff"] for r in sub], [r[key] for r in sub],
                    label=f"eta={eta:g}")
        ax.set_yscale("log")
        ax.set_ylabel(key)
        ax.set_title(title, fontsize=10)
    axes[1].set_xlabel("delta_eff")
    axes[0].legend(fontsize=8)
    _save(fig, path)
