"""Figure rendering for sweep and counts tables.

Renders to files only (Agg backend, no display server needed). Figures
are a convenience view of the emitted table: theory curves come from the
same closed forms the runner uses, drawn on a fine angle grid, with the
simulated estimates overlaid as points with one-sigma error bars.
"""

from __future__ import annotations

import math
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402 (backend must be set first)

from .errors import ConfigError  # noqa: E402
from .runner import SweepRow, theory_point  # noqa: E402
from .source import AnglePair  # noqa: E402

#: step of the fine theory grid, degrees
_THEORY_STEP_DEG = 0.25


def _theory_curves(theta1_deg: float, lo: float, hi: float):
    """Closed-form K, C, and sub-concurrence curves over [lo, hi] degrees."""
    steps = max(2, int(round((hi - lo) / _THEORY_STEP_DEG)) + 1)
    grid = [lo + (hi - lo) * i / (steps - 1) for i in range(steps)]
    k_vals, c_vals, c12_vals = [], [], []
    for t2 in grid:
        k, c, c12 = theory_point(AnglePair.from_degrees(theta1_deg, t2))
        k_vals.append(k)
        c_vals.append(c)
        c12_vals.append(c12)
    return grid, k_vals, c_vals, c12_vals


def render_sweep_figure(rows: Sequence[SweepRow], path: str) -> None:
    """One panel per distinct theta1: theory K (green dotted), C (red
    solid), sub-concurrence (black dashed) versus theta2, with estimated
    K and C overlaid as error-bar points."""
    if not rows:
        raise ConfigError("no rows to plot")
    theta1_values = sorted({row.theta1_deg for row in rows})
    ncols = 2 if len(theta1_values) > 1 else 1
    nrows = math.ceil(len(theta1_values) / ncols)
    fig, axes = plt.subplots(
        nrows, ncols, figsize=(5.0 * ncols, 3.4 * nrows), squeeze=False
    )
    for ax in axes.flat[len(theta1_values):]:
        ax.set_visible(False)
    for panel, t1 in enumerate(theta1_values):
        ax = axes.flat[panel]
        panel_rows = [row for row in rows if row.theta1_deg == t1]
        t2_points = [row.theta2_deg for row in panel_rows]
        lo, hi = min(t2_points), max(t2_points)
        if hi == lo:
            lo, hi = lo - 1.0, hi + 1.0
        grid, k_vals, c_vals, c12_vals = _theory_curves(t1, lo, hi)
        ax.plot(grid, c_vals, "r-", label="C theory")
        ax.plot(grid, k_vals, "g:", label="K theory")
        ax.plot(grid, c12_vals, "k--", label="sub-concurrence")
        finite = [row for row in panel_rows if math.isfinite(row.c_est)]
        ax.errorbar(
            [row.theta2_deg for row in finite],
            [row.c_est for row in finite],
            yerr=[row.c_sigma if math.isfinite(row.c_sigma) else 0.0 for row in finite],
            fmt="ro",
            markersize=4,
            capsize=2,
            label="C estimate",
        )
        ax.errorbar(
            [row.theta2_deg for row in finite],
            [row.k_est for row in finite],
            yerr=[row.k_sigma for row in finite],
            fmt="gs",
            markersize=4,
            capsize=2,
            label="K estimate",
        )
        ax.set_title(f"theta1 = {t1:g} deg")
        ax.set_xlabel("theta2 (deg)")
        ax.set_ylabel("value")
        if panel == 0:
            ax.legend(fontsize=8, loc="best")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_counts_figure(rows: Sequence[SweepRow], path: str) -> None:
    """Singles and coincidences versus theta2. Only the shape is
    calibrated (flat singles, spectrum-dependent coincidences); the
    absolute count scale depends entirely on the detection config."""
    if not rows:
        raise ConfigError("no rows to plot")
    t2 = [row.theta2_deg for row in rows]
    fig, (ax_singles, ax_coinc) = plt.subplots(2, 1, figsize=(6.0, 6.0), sharex=True)
    ax_singles.plot(t2, [row.n_a1 for row in rows], "bo-", markersize=4, label="port 1")
    ax_singles.plot(t2, [row.n_a2 for row in rows], "cs-", markersize=4, label="port 2")
    ax_singles.set_ylabel("singles counts")
    ax_singles.set_ylim(bottom=0)
    ax_singles.legend(fontsize=8)
    ax_coinc.plot(t2, [row.n_coinc for row in rows], "ko-", markersize=4)
    ax_coinc.set_ylabel("coincidence counts")
    ax_coinc.set_xlabel("theta2 (deg)")
    ax_coinc.set_ylim(bottom=0)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
