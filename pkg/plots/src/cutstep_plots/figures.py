"""Render study figures from cutstep CSV files.

Every number in a figure comes from the CSV input; reference lines are
drawn from the analytic formulas (slope 1/(3d), level alpha^(1/(d+2))),
never fitted. Rendering is deterministic: file metadata that would embed
timestamps is suppressed.

Figure kinds:
  heatmap         chi-alpha map of one analytic-map column (M, K,
                  lambda or dt_crit)
  dt-vs-chi       dt_crit against chi, one line per alpha (and per
                  degree for element sweeps)
  min-ratio-vs-p  minimum-ratio panels over the polynomial degree
  dt-min-scaling  minimum dt against alpha with 1/(3d)-slope references
  ratio-scaling   min/full ratio against alpha with alpha^(1/(d+2))
                  reference curves
  plate-scatter   per-configuration element/global critical steps with
                  the full-element levels and the modified CFL line
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "cutstep-plots"  # deterministic SVG ids

import matplotlib.pyplot as plt
import numpy as np

__all__ = ["FigureSpec", "render", "read_csv"]

_INT_COLUMNS = {"d", "p", "k", "config", "element_ok", "global_ok"}

KINDS = (
    "heatmap",
    "dt-vs-chi",
    "min-ratio-vs-p",
    "dt-min-scaling",
    "ratio-scaling",
    "plate-scatter",
)


def read_csv(path) -> dict[str, np.ndarray]:
    """Parse a cutstep CSV into named columns; fails loudly when empty."""
    with open(path) as fh:
        lines = [line for line in fh.read().splitlines() if line]
    if len(lines) < 2:
        raise ValueError(f"empty CSV input: {path}")
    header = lines[0].split(",")
    raw = np.array([line.split(",") for line in lines[1:]], dtype=object)
    columns: dict[str, np.ndarray] = {}
    for j, name in enumerate(header):
        col = raw[:, j].astype(float)
        columns[name] = col.astype(int) if name in _INT_COLUMNS else col
    return columns


def _require(columns: dict[str, np.ndarray], names: list[str], kind: str) -> None:
    missing = [n for n in names if n not in columns]
    if missing:
        raise ValueError(f"figure kind '{kind}' needs columns {missing} not present in input")


@dataclass(frozen=True)
class FigureSpec:
    """One figure: input CSVs, kind, scales, reference lines, output path.

    log_x / log_y override the kind's default axis scales when set.
    """

    inputs: list[str]
    kind: str
    out: str
    value: str = "dt_crit"  # heatmap column
    log_x: bool | None = None
    log_y: bool | None = None
    title: str = ""
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown figure kind '{self.kind}' (choose from {KINDS})")
        if not self.inputs:
            raise ValueError("figure needs at least one input CSV")


def _save(fig, out: str):
    path = Path(out)
    if path.suffix == ".svg":
        fig.savefig(path, metadata={"Date": None})
    elif path.suffix == ".png":
        fig.savefig(path, metadata={"Software": None})
    else:
        fig.savefig(path)
    return fig


def _render_heatmap(spec: FigureSpec, ax):
    columns = read_csv(spec.inputs[0])
    _require(columns, ["chi", "alpha", spec.value], spec.kind)
    chi = np.unique(columns["chi"])
    alpha = np.unique(columns["alpha"])
    grid = np.full((chi.size, alpha.size), np.nan)
    ci = np.searchsorted(chi, columns["chi"])
    ai = np.searchsorted(alpha, columns["alpha"])
    grid[ci, ai] = columns[spec.value]
    mesh = ax.pcolormesh(chi, alpha, np.log10(grid).T, shading="nearest")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("chi")
    ax.set_ylabel("alpha")
    ax.figure.colorbar(mesh, ax=ax, label=f"log10 {spec.value}")


def _render_dt_vs_chi(spec: FigureSpec, ax):
    columns = read_csv(spec.inputs[0])
    _require(columns, ["chi", "alpha", "dt_crit"], spec.kind)
    degrees = columns["p"] if "p" in columns else np.ones_like(columns["chi"], dtype=int)
    for alpha in np.unique(columns["alpha"]):
        for p in np.unique(degrees):
            mask = (columns["alpha"] == alpha) & (degrees == p)
            if not mask.any():
                continue
            order = np.argsort(columns["chi"][mask])
            label = f"alpha={alpha:g}" + (f", p={p}" if "p" in columns else "")
            ax.plot(columns["chi"][mask][order], columns["dt_crit"][mask][order], label=label)
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("chi")
    ax.set_ylabel("dt_crit")
    ax.legend(fontsize=6)


def _render_min_ratio_vs_p(spec: FigureSpec, ax):
    columns = read_csv(spec.inputs[0])
    _require(columns, ["p", "alpha", "ratio"], spec.kind)
    for alpha in np.unique(columns["alpha"]):
        mask = columns["alpha"] == alpha
        order = np.argsort(columns["p"][mask])
        ax.plot(
            columns["p"][mask][order],
            columns["ratio"][mask][order],
            marker="o",
            label=f"alpha={alpha:g}",
        )
    ax.set_yscale("log")
    ax.set_xlabel("p")
    ax.set_ylabel("dt_min / dt_full_c")
    ax.legend(fontsize=6)


def _render_dt_min_scaling(spec: FigureSpec, ax):
    """Minimum dt over chi against alpha, with 1/(3d)-slope reference lines."""
    for path in spec.inputs:
        columns = read_csv(path)
        _require(columns, ["d", "chi", "alpha", "dt_crit"], spec.kind)
        d = int(columns["d"][0])
        alphas = np.unique(columns["alpha"])
        mins = np.array(
            [columns["dt_crit"][columns["alpha"] == a].min() for a in alphas]
        )
        (line,) = ax.plot(alphas, mins, marker=".", label=f"d={d}")
        # reference with the exact slope 1/(3d), anchored at the last point
        ref = mins[-1] * (alphas / alphas[-1]) ** (1.0 / (3 * d))
        ax.plot(alphas, ref, "--", color=line.get_color(),
                label=f"ref slope 1/{3 * d}", gid=f"ref-slope-{d}")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("alpha")
    ax.set_ylabel("dt_crit,min")
    ax.legend(fontsize=6)


def _render_ratio_scaling(spec: FigureSpec, ax):
    """Min/full ratio against alpha with alpha^(1/(d+2)) reference curves."""
    for path in spec.inputs:
        columns = read_csv(path)
        _require(columns, ["d", "p", "alpha", "ratio"], spec.kind)
        d = int(columns["d"][0])
        for p in np.unique(columns["p"]):
            mask = columns["p"] == p
            order = np.argsort(columns["alpha"][mask])
            ax.plot(
                columns["alpha"][mask][order],
                columns["ratio"][mask][order],
                marker=".",
                label=f"d={d}, p={p}",
            )
        alphas = np.unique(columns["alpha"])
        ax.plot(alphas, alphas ** (1.0 / (d + 2)), "--", color="black",
                label=f"alpha^(1/{d + 2})", gid=f"ref-level-{d}")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("alpha")
    ax.set_ylabel("dt_min / dt_full_c")
    ax.legend(fontsize=6)


def _render_plate_scatter(spec: FigureSpec, ax):
    columns = read_csv(spec.inputs[0])
    _require(
        columns,
        ["config", "dt_element", "dt_global", "dt_full_c", "dt_full_l", "dt_cfl_fc"],
        spec.kind,
    )
    config = columns["config"]
    ax.axhline(columns["dt_full_l"][0], color="tab:blue", label="dt_full_lumped")
    ax.axhline(columns["dt_full_c"][0], color="tab:green", label="dt_full_consistent")
    ax.axhline(columns["dt_cfl_fc"][0], color="tab:red", linestyle="--",
               label="dt_cfl (modified)", gid="ref-cfl-level")
    ax.scatter(config, columns["dt_element"], s=8, color="black", label="dt_element")
    ax.scatter(config, columns["dt_global"], s=8, color="purple", label="dt_global")
    ax.set_yscale("log")
    ax.set_xlabel("configuration")
    ax.set_ylabel("dt_crit")
    ax.legend(fontsize=6)


_RENDERERS = {
    "heatmap": _render_heatmap,
    "dt-vs-chi": _render_dt_vs_chi,
    "min-ratio-vs-p": _render_min_ratio_vs_p,
    "dt-min-scaling": _render_dt_min_scaling,
    "ratio-scaling": _render_ratio_scaling,
    "plate-scatter": _render_plate_scatter,
}


def render(spec: FigureSpec):
    """Render one figure to spec.out; returns the matplotlib Figure."""
    fig, ax = plt.subplots(figsize=(5.0, 3.6), dpi=150)
    try:
        _RENDERERS[spec.kind](spec, ax)
        if spec.log_x is not None:
            ax.set_xscale("log" if spec.log_x else "linear")
        if spec.log_y is not None:
            ax.set_yscale("log" if spec.log_y else "linear")
        if spec.title:
            ax.set_title(spec.title)
        fig.tight_layout()
        return _save(fig, spec.out)
    except Exception:
        plt.close(fig)
        raise
