"""Command-line interface: sweep drivers with CSV/JSON output.

Four subcommands mirror the studies: analytic-map, element-sweep,
min-ratio (post-processing) and plate-study. All numeric output is
written with 17 significant digits so files round-trip losslessly and
identical configurations produce byte-identical files.

A JSON config file can preset any flag (flags override the file); the
CUTSTEP_OUTDIR environment variable sets the directory for relative
output paths.

Exit codes: 0 success, 1 usage or configuration error, 2 numerical
failure (eigensolver non-convergence).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .eigen import DefinitenessError, EigenConvergenceError
from .studies import (
    PLATE_H,
    PLATE_NX,
    PLATE_NY,
    analytic_map,
    default_degrees,
    element_sweep,
    plate_shift_grid,
    plate_study,
)

__all__ = [
    "RunConfig",
    "main",
    "write_csv",
    "read_csv",
    "format_float",
]

ANALYTIC_HEADER = ["d", "chi", "alpha", "M", "K", "lambda", "dt_crit"]
SWEEP_HEADER = ["d", "p", "alpha", "chi", "lambda_max", "dt_crit"]
RATIO_HEADER = ["d", "p", "alpha", "dt_min", "dt_full_c", "ratio"]
PLATE_HEADER = [
    "config",
    "dx",
    "dy",
    "p",
    "k",
    "dt_element",
    "dt_global",
    "dt_full_c",
    "dt_full_l",
    "dt_cfl_fc",
    "element_ok",
    "global_ok",
]

_INT_COLUMNS = {"d", "p", "k", "config", "element_ok", "global_ok"}


class UsageError(Exception):
    """Invalid flags or configuration; reported once, exit code 1."""


def format_float(x: float) -> str:
    """17-significant-digit decimal rendering (lossless float64 round trip)."""
    return format(float(x), ".17g")


def _format_cell(name: str, value) -> str:
    if name in _INT_COLUMNS:
        return str(int(value))
    return format_float(value)


def write_csv(path: Path, header: list[str], rows) -> None:
    """Write rows (sequences matching header) with fixed formatting."""
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_format_cell(n, v) for n, v in zip(header, row)) + "\n")


def read_csv(path) -> tuple[list[str], list[list[float]]]:
    """Read a CSV written by write_csv; integer columns come back as ints."""
    with open(path) as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise UsageError(f"empty CSV file: {path}")
    header = lines[0].split(",")
    rows = []
    for line in lines[1:]:
        if not line:
            continue
        cells = line.split(",")
        rows.append(
            [int(c) if n in _INT_COLUMNS else float(c) for n, c in zip(header, cells)]
        )
    return header, rows


@dataclass
class RunConfig:
    """Validated options of one CLI invocation."""

    command: str
    dim: int = 1
    chi_min: float = 1e-16
    chi_max: float = 1.0
    chi_count: int = 801
    alpha_min: float = 1e-16
    alpha_max: float = 1.0
    alpha_count: int = 801
    degrees: list[int] = field(default_factory=list)
    alphas: list[float] = field(default_factory=lambda: [1e-4, 1e-8, 1e-12])
    full_degrees: bool = False
    degree: int = 2
    depth: int = 3
    alpha: float = 1e-4
    nx_shifts: int = 15
    ny_shifts: int = 50
    x_stride: int = 1
    y_stride: int = 1
    subsample: int = 1
    nx: int = PLATE_NX
    ny: int = PLATE_NY
    h: float = PLATE_H
    eig_tol: float = 1e-9
    jobs: int = 0
    out: str = ""
    summary: str = ""
    infile: str = ""

    def validate(self) -> None:
        if self.command in ("analytic-map", "element-sweep"):
            if self.dim < 1 or (self.command == "element-sweep" and self.dim > 3):
                raise UsageError(f"invalid dimension {self.dim}")
            if self.chi_count < 1 or self.chi_min <= 0 or self.chi_min > self.chi_max:
                raise UsageError("invalid chi grid specification")
        if self.command == "analytic-map":
            if self.alpha_count < 1 or self.alpha_min <= 0 or self.alpha_min > self.alpha_max:
                raise UsageError("invalid alpha grid specification")
        if self.command == "element-sweep":
            if any(not 1 <= p <= 10 for p in self.degrees):
                raise UsageError("degrees must lie in [1, 10]")
            if any(not 0 < a <= 1 for a in self.alphas):
                raise UsageError("alphas must lie in (0, 1]")
        if self.command == "plate-study":
            if not 1 <= self.degree <= 10:
                raise UsageError(f"degree must lie in [1, 10], got {self.degree}")
            if self.depth < 0:
                raise UsageError(f"depth must be >= 0, got {self.depth}")
            if not 0 < self.alpha <= 1:
                raise UsageError(f"alpha must lie in (0, 1], got {self.alpha}")
            if self.nx_shifts < 1 or self.ny_shifts < 1:
                raise UsageError("shift grid counts must be positive")
            if self.x_stride < 1 or self.y_stride < 1 or self.subsample < 1:
                raise UsageError("strides and subsample must be positive")
        if self.command in ("analytic-map", "element-sweep", "min-ratio", "plate-study"):
            if not self.out:
                raise UsageError("an output path (--out) is required")
        if self.command == "min-ratio" and not self.infile:
            raise UsageError("min-ratio requires an input CSV (--in)")


def _resolve_out(path: str) -> Path:
    p = Path(path)
    if not p.is_absolute():
        base = os.environ.get("CUTSTEP_OUTDIR", "")
        if base:
            p = Path(base) / p
    if p.parent and not p.parent.exists():
        raise UsageError(f"output directory does not exist: {p.parent}")
    return p


def _run_analytic_map(cfg: RunConfig) -> None:
    chi = np.logspace(np.log10(cfg.chi_min), np.log10(cfg.chi_max), cfg.chi_count)
    alpha = np.logspace(np.log10(cfg.alpha_min), np.log10(cfg.alpha_max), cfg.alpha_count)
    amap = analytic_map(cfg.dim, chi, alpha)
    out = _resolve_out(cfg.out)

    def rows():
        for i, c in enumerate(amap.chi):
            for j, a in enumerate(amap.alpha):
                yield (
                    cfg.dim,
                    c,
                    a,
                    amap.M[i, j],
                    amap.K[i, j],
                    amap.lam[i, j],
                    amap.dt_crit[i, j],
                )

    write_csv(out, ANALYTIC_HEADER, rows())


def _run_element_sweep(cfg: RunConfig) -> None:
    degrees = cfg.degrees or default_degrees(cfg.dim, cfg.full_degrees)
    chi = np.logspace(np.log10(cfg.chi_min), np.log10(cfg.chi_max), cfg.chi_count)
    records = element_sweep(cfg.dim, degrees, cfg.alphas, chi)
    out = _resolve_out(cfg.out)
    write_csv(
        out,
        SWEEP_HEADER,
        ((r.d, r.p, r.alpha, r.chi, r.lambda_max, r.dt_crit) for r in records),
    )


def _run_min_ratio(cfg: RunConfig) -> None:
    header, rows = read_csv(cfg.infile)
    if header != SWEEP_HEADER:
        raise UsageError(f"expected element-sweep CSV with header {SWEEP_HEADER}")
    groups: dict[tuple, dict] = {}
    for d, p, alpha, chi, lam, dt in rows:
        key = (d, p, alpha)
        entry = groups.setdefault(key, {"dt_min": np.inf, "dt_full": None})
        entry["dt_min"] = min(entry["dt_min"], dt)
        if chi == 1.0:
            entry["dt_full"] = dt
    out_rows = []
    for (d, p, alpha), entry in groups.items():
        if entry["dt_full"] is None:
            raise UsageError(f"sweep group d={d} p={p} alpha={alpha} lacks the chi=1 sample")
        out_rows.append(
            (d, p, alpha, entry["dt_min"], entry["dt_full"], entry["dt_min"] / entry["dt_full"])
        )
    write_csv(_resolve_out(cfg.out), RATIO_HEADER, out_rows)


def _run_plate_study(cfg: RunConfig) -> None:
    shifts_x, shifts_y = plate_shift_grid(cfg.nx_shifts, cfg.ny_shifts)
    shifts_x = shifts_x[:: cfg.x_stride]
    shifts_y = shifts_y[:: cfg.y_stride]
    jobs = cfg.jobs if cfg.jobs > 0 else (os.cpu_count() or 1)
    records, est = plate_study(
        shifts_x,
        shifts_y,
        p=cfg.degree,
        k=cfg.depth,
        alpha=cfg.alpha,
        nx=cfg.nx,
        ny=cfg.ny,
        h=cfg.h,
        eig_tol=cfg.eig_tol,
        jobs=jobs,
        subsample=cfg.subsample,
    )
    out = _resolve_out(cfg.out)
    write_csv(
        out,
        PLATE_HEADER,
        (
            (
                r.config,
                r.dx,
                r.dy,
                r.p,
                r.k,
                r.dt_element,
                r.dt_global,
                est.dt_full_c,
                est.dt_full_l,
                est.dt_cfl_fc,
                int(r.element_ok),
                int(r.global_ok),
            )
            for r in records
        ),
    )
    summary = {
        "configurations": len(records),
        "p": cfg.degree,
        "k": cfg.depth,
        "alpha": cfg.alpha,
        "element_violations": sum(not r.element_ok for r in records),
        "global_violations": sum(not r.global_ok for r in records),
        "dt_full_c": est.dt_full_c,
        "dt_full_l": est.dt_full_l,
        "cfl_factor": est.cfl_factor,
        "dt_cfl_fc": est.dt_cfl_fc,
        "c_cfl_consistent": est.c_cfl_consistent,
        "c_cfl_lumped": est.c_cfl_lumped,
    }
    summary_path = cfg.summary or (str(out) + ".json")
    with open(_resolve_out(summary_path), "w", newline="\n") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit code 1, single diagnostic
        raise UsageError(message)


def _int_list(text: str) -> list[int]:
    return [int(t) for t in text.split(",") if t]


def _float_list(text: str) -> list[float]:
    return [float(t) for t in text.split(",") if t]


def _build_parser() -> _Parser:
    parser = _Parser(prog="cutstep", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file presetting any flag (flags override)")
    common.add_argument("--out", help="output CSV path")

    am = sub.add_parser("analytic-map", parents=[common], help="single-DOF chi x alpha map")
    am.add_argument("--dim", type=int)
    am.add_argument("--chi-min", type=float)
    am.add_argument("--chi-max", type=float)
    am.add_argument("--chi-count", type=int)
    am.add_argument("--alpha-min", type=float)
    am.add_argument("--alpha-max", type=float)
    am.add_argument("--alpha-count", type=int)

    es = sub.add_parser("element-sweep", parents=[common], help="single-element eigenvalue sweep")
    es.add_argument("--dim", type=int)
    es.add_argument("--degrees", type=_int_list, help="comma-separated degree list")
    es.add_argument("--alphas", type=_float_list, help="comma-separated alpha list")
    es.add_argument("--chi-min", type=float)
    es.add_argument("--chi-max", type=float)
    es.add_argument("--chi-count", type=int)
    es.add_argument("--full-degrees", action="store_const", const=True,
                    help="lift the 3D default degree cap of 6")

    mr = sub.add_parser("min-ratio", parents=[common], help="minimum-dt ratios of a sweep CSV")
    mr.add_argument("--in", dest="infile", help="element-sweep CSV to post-process")

    ps = sub.add_parser("plate-study", parents=[common], help="perforated-plate CFL study")
    ps.add_argument("--degree", type=int)
    ps.add_argument("--depth", type=int)
    ps.add_argument("--alpha", type=float)
    ps.add_argument("--nx-shifts", type=int)
    ps.add_argument("--ny-shifts", type=int)
    ps.add_argument("--x-stride", type=int, help="keep every n-th x shift")
    ps.add_argument("--y-stride", type=int, help="keep every n-th y shift")
    ps.add_argument("--subsample", type=int, help="keep every n-th configuration")
    ps.add_argument("--nx", type=int)
    ps.add_argument("--ny", type=int)
    ps.add_argument("--h", type=float)
    ps.add_argument("--eig-tol", type=float)
    ps.add_argument("--jobs", type=int, help="worker processes (default: all cores)")
    ps.add_argument("--summary", help="JSON summary path (default: <out>.json)")
    return parser


# per-command grid defaults: the analytic map samples chi, alpha in
# [1e-16, 1] with 801 points each, the element sweep chi in [1e-8, 1]
# with 161 points
_COMMAND_DEFAULTS = {
    "element-sweep": {"chi_min": 1e-8, "chi_count": 161},
}


def _merge_config(args: argparse.Namespace) -> RunConfig:
    file_values = {}
    if getattr(args, "config", None):
        try:
            with open(args.config) as fh:
                file_values = json.load(fh)
        except (OSError, json.JSONDecodeError) as err:
            raise UsageError(f"cannot read config file {args.config}: {err}") from err
        if not isinstance(file_values, dict):
            raise UsageError("config file must hold a JSON object of flag values")
    cfg = RunConfig(command=args.command)
    for key, value in _COMMAND_DEFAULTS.get(args.command, {}).items():
        setattr(cfg, key, value)
    for key, value in file_values.items():
        attr = key.replace("-", "_")
        if not hasattr(cfg, attr) or attr == "command":
            raise UsageError(f"unknown config key: {key}")
        setattr(cfg, attr, value)
    for attr, value in vars(args).items():
        if attr in ("command", "config") or value is None:
            continue
        setattr(cfg, attr, value)
    cfg.validate()
    return cfg


_RUNNERS = {
    "analytic-map": _run_analytic_map,
    "element-sweep": _run_element_sweep,
    "min-ratio": _run_min_ratio,
    "plate-study": _run_plate_study,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = _merge_config(args)
        _RUNNERS[cfg.command](cfg)
    except UsageError as err:
        print(f"cutstep: error: {err}", file=sys.stderr)
        return 1
    except (EigenConvergenceError, DefinitenessError) as err:
        print(f"cutstep: numerical failure: {err}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
