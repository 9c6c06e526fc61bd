import numpy as np
import pytest

from cutstep_plots import FigureSpec, read_csv, render
from pathlib import Path

GOLDEN = Path(__file__).parent / "golden"


def _golden(name: str) -> str:
    return str(GOLDEN / name)


def _ref_lines(fig, gid_prefix: str):
    lines = []
    for ax in fig.axes:
        for line in ax.get_lines():
            gid = line.get_gid()
            if gid and gid.startswith(gid_prefix):
                lines.append(line)
    return lines


class TestEachKindRenders:
    def test_heatmap(self, tmp_path):
        for value in ("M", "K", "lambda", "dt_crit"):
            spec = FigureSpec(
                inputs=[_golden("analytic_d1.csv")],
                kind="heatmap",
                value=value,
                out=str(tmp_path / f"heat_{value}.svg"),
            )
            fig = render(spec)
            assert (tmp_path / f"heat_{value}.svg").exists()
            assert fig.axes

    def test_dt_vs_chi_analytic(self, tmp_path):
        spec = FigureSpec(
            inputs=[_golden("analytic_d2.csv")],
            kind="dt-vs-chi",
            out=str(tmp_path / "dt_chi.svg"),
        )
        render(spec)
        assert (tmp_path / "dt_chi.svg").stat().st_size > 0

    def test_dt_vs_chi_element_sweep(self, tmp_path):
        spec = FigureSpec(
            inputs=[_golden("sweep_d2.csv")],
            kind="dt-vs-chi",
            out=str(tmp_path / "sweep.svg"),
        )
        fig = render(spec)
        # alpha families times degree families
        assert len(fig.axes[0].get_lines()) == 9

    def test_min_ratio_vs_p(self, tmp_path):
        spec = FigureSpec(
            inputs=[_golden("ratios_d2.csv")],
            kind="min-ratio-vs-p",
            out=str(tmp_path / "ratio_p.svg"),
        )
        fig = render(spec)
        assert len(fig.axes[0].get_lines()) == 3

    def test_plate_scatter(self, tmp_path):
        spec = FigureSpec(
            inputs=[_golden("plate_p1.csv")],
            kind="plate-scatter",
            out=str(tmp_path / "plate.svg"),
        )
        fig = render(spec)
        labels = [t.get_text() for t in fig.axes[0].get_legend().get_texts()]
        for expected in ("dt_full_lumped", "dt_full_consistent", "dt_cfl (modified)",
                         "dt_element", "dt_global"):
            assert expected in labels


class TestReferenceLines:
    def test_dt_min_scaling_reference_slopes_exact(self, tmp_path):
        spec = FigureSpec(
            inputs=[_golden("analytic_d1.csv"), _golden("analytic_d2.csv")],
            kind="dt-min-scaling",
            out=str(tmp_path / "scaling_min.svg"),
        )
        fig = render(spec)
        refs = _ref_lines(fig, "ref-slope-")
        assert len(refs) == 2
        for line in refs:
            d = int(line.get_gid().rsplit("-", 1)[1])
            x = np.asarray(line.get_xdata(), dtype=float)
            y = np.asarray(line.get_ydata(), dtype=float)
            slope = np.polyfit(np.log(x), np.log(y), 1)[0]
            assert slope == pytest.approx(1.0 / (3 * d), rel=1e-9)

    def test_ratio_scaling_reference_levels_exact(self, tmp_path):
        spec = FigureSpec(
            inputs=[_golden("ratios_alpha_d1.csv")],
            kind="ratio-scaling",
            out=str(tmp_path / "scaling_ratio.svg"),
        )
        fig = render(spec)
        refs = _ref_lines(fig, "ref-level-")
        assert len(refs) == 1
        line = refs[0]
        d = int(line.get_gid().rsplit("-", 1)[1])
        x = np.asarray(line.get_xdata(), dtype=float)
        y = np.asarray(line.get_ydata(), dtype=float)
        assert np.allclose(y, x ** (1.0 / (d + 2)), rtol=1e-12)

    def test_plate_reference_is_tenth_of_full(self, tmp_path):
        columns = read_csv(_golden("plate_p1.csv"))
        assert columns["dt_cfl_fc"][0] == pytest.approx(0.1 * columns["dt_full_c"][0], rel=1e-12)


class TestFailureModes:
    def test_empty_csv_rejected(self, tmp_path):
        empty = tmp_path / "empty.csv"
        empty.write_text("d,chi,alpha,M,K,lambda,dt_crit\n")
        spec = FigureSpec(inputs=[str(empty)], kind="heatmap", out=str(tmp_path / "x.svg"))
        with pytest.raises(ValueError, match="empty"):
            render(spec)
        assert not (tmp_path / "x.svg").exists()

    def test_missing_columns_rejected(self, tmp_path):
        spec = FigureSpec(
            inputs=[_golden("ratios_d2.csv")],
            kind="heatmap",
            out=str(tmp_path / "y.svg"),
        )
        with pytest.raises(ValueError, match="needs columns"):
            render(spec)

    def test_unknown_kind_rejected(self, tmp_path):
        with pytest.raises(ValueError, match="unknown figure kind"):
            FigureSpec(inputs=["x.csv"], kind="pie", out="z.svg")

    def test_axis_scale_override(self, tmp_path):
        spec = FigureSpec(
            inputs=[_golden("analytic_d1.csv")],
            kind="dt-vs-chi",
            out=str(tmp_path / "lin.svg"),
            log_x=False,
        )
        fig = render(spec)
        assert fig.axes[0].get_xscale() == "linear"
        assert fig.axes[0].get_yscale() == "log"

    def test_rerender_identical_bytes(self, tmp_path):
        a = tmp_path / "a.svg"
        b = tmp_path / "b.svg"
        for out in (a, b):
            render(FigureSpec(
                inputs=[_golden("ratios_d2.csv")],
                kind="min-ratio-vs-p",
                out=str(out),
            ))
        assert a.read_bytes() == b.read_bytes()
