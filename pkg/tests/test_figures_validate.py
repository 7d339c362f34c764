import json
import math

import numpy as np
import pytest
from scipy.stats import poisson

from hcs_lab.figures import FIGURES, fig1, fig5, reproduce_figures
from hcs_lab.output import csv_text, diverging_color, fmt, json_text, read_csv, svg_heatmap, svg_line_plot
from hcs_lab.validate import DEFAULT_SEED, DiscrepancyRow, run_validation

TWO_OVER_PI = 2 / math.pi


@pytest.fixture(scope="module")
def figures(tmp_path_factory):
    out = tmp_path_factory.mktemp("figs")
    status = reproduce_figures(out)
    return out, status


def test_all_figures_written(figures):
    out, status = figures
    assert status == {name: "ok" for name in FIGURES}
    for stem in ["fig1", "fig2", "figW", "fig3a", "fig3b", "fig4a", "fig4b"]:
        assert (out / f"{stem}.csv").exists() and (out / f"{stem}.svg").exists()
    assert len(list((out / "fig5").glob("*.csv"))) == 5 * 3 + 1
    assert len(list((out / "fig5").glob("*.svg"))) == 5 * 3


def test_every_csv_carries_metadata(figures):
    out, _ = figures
    for f in list(out.glob("*.csv")) + list((out / "fig5").glob("*.csv")):
        meta, header, rows = read_csv(f)
        assert meta["tool"] == "hcs-lab" and meta["version"]
        assert meta["figure"].startswith("fig")
        assert rows.size > 0


def test_fig1_coherent_column_is_poisson(figures):
    _, header, rows = read_csv(figures[0] / "fig1.csv")
    col = header.index("P_eps1.00")
    np.testing.assert_allclose(rows[:, col], poisson.pmf(rows[:, 0], 4.0), atol=1e-10)
    # no vacuum component in the photon-added state
    assert rows[0, header.index("P_eps0.00")] == 0


def test_fig2_coherent_column_is_zero(figures):
    _, header, rows = read_csv(figures[0] / "fig2.csv")
    np.testing.assert_allclose(rows[:, header.index("Q_eps1.00")], 0, atol=1e-9)


def test_figw_bounds(figures):
    _, header, rows = read_csv(figures[0] / "figW.csv")
    assert np.all(rows[:, 1:] >= 0.5 - 1e-9)
    np.testing.assert_allclose(rows[:, header.index("skew_eps1.00")], 0.5, atol=1e-9)


def test_fig3_and_fig4_have_no_gaps(figures):
    for stem in ["fig3a", "fig3b", "fig4a", "fig4b"]:
        _, _, rows = read_csv(figures[0] / f"{stem}.csv")
        assert np.all(np.isfinite(rows)), stem
        assert rows[-1, 0] == pytest.approx(6.0)


def test_fig5_displaced_photon_minimum(figures):
    _, _, rows = read_csv(figures[0] / "fig5" / "eps0.50_alpha1.csv")
    assert rows[:, 2].min() == pytest.approx(-TWO_OVER_PI, abs=1e-3)


def test_fig5_summary(figures):
    _, header, rows = read_csv(figures[0] / "fig5" / "summary.csv")
    vol = header.index("negative_volume")
    for eps, a, *_rest in rows:
        row = rows[(rows[:, 0] == eps) & (rows[:, 1] == a)][0]
        if eps == 1.0:
            assert row[vol] == pytest.approx(0.0, abs=1e-10)
        else:
            assert row[vol] > 0


def test_figures_are_deterministic(tmp_path):
    fig1(tmp_path / "a")
    fig1(tmp_path / "b")
    for name in ["fig1.csv", "fig1.svg"]:
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_fig5_small_grid(tmp_path):
    fig5(tmp_path, n=21)
    _, _, rows = read_csv(tmp_path / "fig5" / "eps0.00_alpha0.csv")
    assert rows.shape == (21 * 21, 3)


def test_failure_aborts_single_figure(tmp_path, monkeypatch):
    from hcs_lab import figures as figmod
    from hcs_lab.errors import CutoffInsufficient

    def boom(out):
        raise CutoffInsufficient("synthetic")

    monkeypatch.setitem(figmod.FIGURES, "fig2", boom)
    status = reproduce_figures(tmp_path, only=["fig1", "fig2"])
    assert status["fig1"] == "ok"
    assert status["fig2"].startswith("failed")


# --- validate ------------------------------------------------------------------


@pytest.fixture(scope="module")
def report():
    return run_validation(draws=60, regime_draws=15)


def test_validation_rows_present(report):
    formulas = {(r.formula, r.regime) for r in report.rows}
    for f in ["normalization", "photon_distribution", "mean_n", "adag2a2_as_printed", "adag2a2_corrected", "wigner"]:
        assert (f, "generic") in formulas
    assert report.seed == DEFAULT_SEED


def test_validation_matches(report):
    for f in ["normalization", "photon_distribution", "mean_n", "adag2a2_corrected", "wigner"]:
        assert report.row(f, "generic").status == "match", f
    for regime in ["epsilon=0", "epsilon=1", "Re[e^{i(theta-phi)}alpha]=0"]:
        assert report.row("adag2a2_as_printed", regime).status == "match"
    for f in ["kerr_balanced_coherent_coeff", "kerr_balanced_added_coeff", "kerr_general_theta_form"]:
        assert report.row(f, "phi0=0").status == "match"


def test_validation_discrepancies(report):
    bad = {(r.formula, r.regime) for r in report.discrepancies}
    assert bad == {("adag2a2_as_printed", "generic"), ("kerr_balanced_added_coeff", "generic phi0")}
    row = report.row("kerr_balanced_added_coeff", "generic phi0")
    # printed and simulated photon-added coefficients are exact negatives
    assert row.printed == pytest.approx(-row.oracle, abs=1e-12)


def test_validation_deterministic():
    a = json_text(run_validation(draws=10, regime_draws=5).as_dict())
    b = json_text(run_validation(draws=10, regime_draws=5).as_dict())
    assert a == b
    assert json.loads(a)["draws"] == 10


def test_discrepancy_row_status():
    assert DiscrepancyRow("f", "r", 1, 1.0, 1.0, 0.0, 0.0, 1e-9, "").status == "match"
    assert DiscrepancyRow("f", "r", 1, 2.0, 1.0, 1.0, 1.0, 1e-9, "").status == "deviates"
    assert DiscrepancyRow("f", "r", 1, 1e-12, 0.0, 1e-12, math.inf, 1e-9, "", "abs").status == "match"


# --- output helpers ------------------------------------------------------------------


def test_fmt():
    assert fmt(3) == "3"
    assert fmt(0.0) == "0"
    assert fmt(math.nan) == "nan"
    assert fmt(1 / 3) == "0.333333333333"
    assert fmt(np.float64(2.5e-20)) == "2.5e-20"
    assert fmt(True) == "true"


def test_csv_roundtrip(tmp_path):
    text = csv_text(["a", "b"], [[1, 0.5], [2, -1e-3]], {"k": 1.5})
    p = tmp_path / "x.csv"
    p.write_text(text)
    meta, header, rows = read_csv(p)
    assert meta["k"] == "1.5" and header == ["a", "b"]
    np.testing.assert_array_equal(rows, [[1, 0.5], [2, -1e-3]])


def test_json_complex():
    assert json.loads(json_text({"z": 1 + 2j, "a": np.arange(2)})) == {"a": [0, 1], "z": [1.0, 2.0]}


def test_svg_line_plot_handles_nan():
    svg = svg_line_plot([0, 1, 2, 3], {"s": [0, np.nan, 1, 2]}, "t", "x", "y")
    assert svg.count("<polyline") == 2
    assert svg_line_plot([0, 1], {"s": [1, 1]}) == svg_line_plot([0, 1], {"s": [1, 1]})


def test_diverging_palette_pinned():
    assert diverging_color(0.0) == "#f7f7f7"
    assert diverging_color(TWO_OVER_PI) == diverging_color(5.0)
    assert diverging_color(-TWO_OVER_PI) == "#2166ac"


def test_svg_heatmap_downsamples():
    x = np.linspace(-1, 1, 300)
    svg = svg_heatmap(x, x[:5], np.zeros((300, 5)))
    assert svg.count('width="') < 300 * 5
