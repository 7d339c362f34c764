"""Data (CSV) and SVG renderings for the standard figure set."""

from __future__ import annotations

import math
import sys
from pathlib import Path
from typing import Callable

import numpy as np

from .errors import NumericalError
from .hcs import HcsParams, photon_distribution
from .metrics import mandel_q, negativity_report, quadrature_squeezing, s_ass, skew_information, wigner_grid
from .output import csv_text, svg_heatmap, svg_line_plot, write_text
from .parallel import pmap

EPSILONS = (0.0, 0.25, 0.5, 0.75, 1.0)
FIG5_ALPHAS = (0.0, 1.0, 2.0)
R_AXIS = np.linspace(0.05, 4.0, 80)
ABS_ALPHA_AXIS = np.linspace(0.05, 6.0, 120)


def eps_label(eps: float) -> str:
    return f"eps{eps:.2f}"


def metric_sweep(
    metric: Callable[[HcsParams], float],
    axis: np.ndarray,
    make: Callable[[float, float], HcsParams],
    epsilons=EPSILONS,
) -> np.ndarray:
    """metric(make(eps, value)) on the grid; shape (len(axis), len(epsilons))."""

    def row(v: float) -> list[float]:
        out = []
        for eps in epsilons:
            try:
                out.append(metric(make(eps, v)))
            except NumericalError:
                out.append(float("nan"))
        return out

    return np.array(pmap(row, list(axis)))


def _fig1_params(eps: float, r: float) -> HcsParams:
    # omega = phi = 0, theta = pi
    return HcsParams(eps, theta=math.pi, phi=0.0, alpha=complex(r, 0.0))


def _write_sweep(out: Path, stem: str, xname: str, axis, values, metric: str, meta: dict, title: str, ylabel: str):
    header = [xname] + [f"{metric}_{eps_label(e)}" for e in EPSILONS]
    rows = [[x, *vals] for x, vals in zip(axis, values)]
    write_text(out / f"{stem}.csv", csv_text(header, rows, meta))
    series = {f"eps={e:g}": values[:, k] for k, e in enumerate(EPSILONS)}
    write_text(out / f"{stem}.svg", svg_line_plot(axis, series, title, xname, ylabel))


def fig1(out: Path) -> None:
    n_max = 20
    cols = np.stack([photon_distribution(_fig1_params(e, 2.0), n_max) for e in EPSILONS], axis=1)
    meta = {"figure": "fig1", "alpha": 2, "theta": "pi", "phi": 0, "omega": 0}
    header = ["n"] + [f"P_{eps_label(e)}" for e in EPSILONS]
    rows = [[n, *cols[n]] for n in range(n_max + 1)]
    write_text(out / "fig1.csv", csv_text(header, rows, meta))
    series = {f"eps={e:g}": cols[:, k] for k, e in enumerate(EPSILONS)}
    write_text(out / "fig1.svg", svg_line_plot(np.arange(n_max + 1), series, "Photon distribution", "n", "P_n"))


def fig2(out: Path) -> None:
    vals = metric_sweep(mandel_q, R_AXIS, _fig1_params)
    meta = {"figure": "fig2", "theta": "pi", "phi": 0, "omega": 0}
    _write_sweep(out, "fig2", "r", R_AXIS, vals, "Q", meta, "Mandel Q", "Q")


def fig_w(out: Path) -> None:
    vals = metric_sweep(skew_information, R_AXIS, _fig1_params)
    meta = {"figure": "figW", "theta": "pi", "phi": 0, "omega": 0}
    _write_sweep(out, "figW", "r", R_AXIS, vals, "skew", meta, "Wigner-Yanase skew information", "W")


def fig3(out: Path) -> None:
    for stem, phi_quad, label in (("fig3a", 0.0, "0"), ("fig3b", math.pi / 2, "pi/2")):
        vals = metric_sweep(
            lambda p, q=phi_quad: quadrature_squeezing(p, q),
            ABS_ALPHA_AXIS,
            lambda e, r: HcsParams(e, 0.0, 0.0, complex(r, 0.0)),
        )
        meta = {"figure": stem, "phi_quad": label, "theta": 0, "phi": 0, "omega": 0}
        _write_sweep(out, stem, "alpha_mag", ABS_ALPHA_AXIS, vals, "S", meta, f"Quadrature squeezing, phi_quad={label}", "S_phi")


def fig4(out: Path) -> None:
    for stem, phi, label in (("fig4a", 0.0, "0"), ("fig4b", math.pi, "pi")):
        vals = metric_sweep(s_ass, ABS_ALPHA_AXIS, lambda e, r, ph=phi: HcsParams(e, 0.0, ph, complex(r, 0.0)))
        meta = {"figure": stem, "phi": label, "theta": 0, "omega": 0}
        _write_sweep(out, stem, "alpha_mag", ABS_ALPHA_AXIS, vals, "Sass", meta, f"AS squeezing, phi={label}", "S_ass")


def fig5_name(eps: float, alpha: float) -> str:
    return f"{eps_label(eps)}_alpha{alpha:g}"


def fig5(out: Path, n: int = 161) -> None:
    d = out / "fig5"
    summary = []
    for eps in EPSILONS:
        for a in FIG5_ALPHAS:
            p = _fig1_params(eps, a)
            grid = wigner_grid(p, nx=n, np_=n)
            rep = negativity_report(grid)
            name = fig5_name(eps, a)
            meta = {
                "figure": "fig5", "epsilon": eps, "alpha": a, "theta": "pi", "phi": 0,
                "nx": n, "np": n, "method": "closed",
            }
            rows = [[x, pv, grid.values[i, j]] for i, x in enumerate(grid.x) for j, pv in enumerate(grid.p)]
            write_text(d / f"{name}.csv", csv_text(["x", "p", "W"], rows, meta))
            write_text(d / f"{name}.svg", svg_heatmap(grid.x, grid.p, grid.values, f"eps={eps:g}, |alpha|={a:g}"))
            summary.append([eps, a, rep.min_value, rep.min_location.real, rep.min_location.imag, rep.negative_volume])
    header = ["epsilon", "alpha", "min_W", "min_x", "min_p", "negative_volume"]
    write_text(d / "summary.csv", csv_text(header, summary, {"figure": "fig5", "theta": "pi", "phi": 0}))


FIGURES = {"fig1": fig1, "fig2": fig2, "figW": fig_w, "fig3": fig3, "fig4": fig4, "fig5": fig5}


def reproduce_figures(out_dir, only=None) -> dict[str, str]:
    """Write every figure; a numerical failure aborts only that figure."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    status = {}
    for name, fn in FIGURES.items():
        if only and name not in only:
            continue
        try:
            fn(out)
            status[name] = "ok"
        except NumericalError as exc:
            status[name] = f"failed: {exc}"
            print(f"{name}: {exc}", file=sys.stderr)
    return status
