"""Deterministic CSV/JSON writers and dependency-free SVG rendering."""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from . import __version__

WIGNER_LIMIT = 2 / math.pi
MAX_HEATMAP_CELLS = 121


def fmt(v) -> str:
    """12 significant digits, locale independent; integers stay integers."""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, str):
        return v
    v = float(v)
    if math.isnan(v):
        return "nan"
    if v == 0.0:
        return "0"
    return format(v, ".12g")


def csv_text(header: Sequence[str], rows: Sequence[Sequence], meta: Mapping[str, object]) -> str:
    lines = [f"# tool=hcs-lab version={__version__}"]
    lines += [f"# {k}={fmt(v)}" for k, v in meta.items()]
    lines.append(",".join(header))
    lines += [",".join(fmt(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def read_csv(path) -> tuple[dict[str, str], list[str], np.ndarray]:
    """Inverse of :func:`csv_text`: (metadata, header, numeric rows)."""
    meta, header, rows = {}, None, []
    for line in Path(path).read_text().splitlines():
        if line.startswith("#"):
            for tok in line[1:].split():
                if "=" in tok:
                    k, v = tok.split("=", 1)
                    meta[k] = v
        elif header is None:
            header = line.split(",")
        elif line:
            rows.append([float(t) for t in line.split(",")])
    return meta, header, np.array(rows)


def write_text(path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    return path


def json_text(obj) -> str:
    def default(o):
        if isinstance(o, complex):
            return [o.real, o.imag]
        if isinstance(o, np.generic):
            return o.item()
        if isinstance(o, np.ndarray):
            return o.tolist()
        raise TypeError(type(o).__name__)

    return json.dumps(obj, indent=2, sort_keys=True, default=default, allow_nan=True) + "\n"


# --- SVG ----------------------------------------------------------------------

_SERIES_COLORS = ["#1f3b73", "#2a7fb8", "#3aa655", "#e08a1e", "#b8323a", "#6b4c9a", "#555555"]


def _esc(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def _ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / n
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw), default=raw)
    start = math.ceil(lo / step) * step
    out, v = [], start
    while v <= hi + 1e-9 * step:
        out.append(round(v, 12))
        v += step
    return out


def svg_line_plot(
    x: Sequence[float],
    series: Mapping[str, Sequence[float]],
    title: str = "",
    xlabel: str = "",
    ylabel: str = "",
    width: int = 640,
    height: int = 420,
) -> str:
    """Line plot with axes, ticks and a legend; NaN samples break the line."""
    x = np.asarray(x, dtype=float)
    ys = {k: np.asarray(v, dtype=float) for k, v in series.items()}
    finite = np.concatenate([v[np.isfinite(v)] for v in ys.values()] or [np.zeros(1)])
    ylo, yhi = (float(finite.min()), float(finite.max())) if finite.size else (0.0, 1.0)
    if yhi - ylo < 1e-12:
        ylo, yhi = ylo - 0.5, yhi + 0.5
    pad = 0.05 * (yhi - ylo)
    ylo, yhi = ylo - pad, yhi + pad
    xlo, xhi = float(x.min()), float(x.max())
    if xhi == xlo:
        xhi = xlo + 1.0
    left, right, top, bottom = 70, 150, 40, 55
    pw, ph = width - left - right, height - top - bottom

    def sx(v):
        return left + (v - xlo) / (xhi - xlo) * pw

    def sy(v):
        return top + (yhi - v) / (yhi - ylo) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for tx in _ticks(xlo, xhi):
        px = sx(tx)
        out.append(f'<line x1="{px:.2f}" y1="{top + ph}" x2="{px:.2f}" y2="{top + ph + 5}" stroke="black"/>')
        out.append(f'<text x="{px:.2f}" y="{top + ph + 18}" text-anchor="middle">{fmt(tx)}</text>')
    for ty in _ticks(ylo, yhi):
        py = sy(ty)
        out.append(f'<line x1="{left - 5}" y1="{py:.2f}" x2="{left}" y2="{py:.2f}" stroke="black"/>')
        out.append(f'<text x="{left - 8}" y="{py + 4:.2f}" text-anchor="end">{fmt(ty)}</text>')
    if ylo < 0 < yhi:
        out.append(
            f'<line x1="{left}" y1="{sy(0):.2f}" x2="{left + pw}" y2="{sy(0):.2f}" '
            'stroke="#999" stroke-dasharray="4 3"/>'
        )
    for i, (name, y) in enumerate(ys.items()):
        color = _SERIES_COLORS[i % len(_SERIES_COLORS)]
        segs, cur = [], []
        for xv, yv in zip(x, y):
            if math.isfinite(yv):
                cur.append(f"{sx(xv):.2f},{sy(yv):.2f}")
            elif cur:
                segs.append(cur)
                cur = []
        if cur:
            segs.append(cur)
        for seg in segs:
            out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.6" points="{" ".join(seg)}"/>')
        ly = top + 14 + 18 * i
        out.append(f'<line x1="{left + pw + 12}" y1="{ly}" x2="{left + pw + 36}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{left + pw + 42}" y="{ly + 4}">{_esc(name)}</text>')
    out.append(f'<text x="{left + pw / 2:.1f}" y="{top - 14}" text-anchor="middle" font-size="14">{_esc(title)}</text>')
    out.append(f'<text x="{left + pw / 2:.1f}" y="{height - 12}" text-anchor="middle">{_esc(xlabel)}</text>')
    out.append(
        f'<text x="16" y="{top + ph / 2:.1f}" text-anchor="middle" transform="rotate(-90 16 {top + ph / 2:.1f})">'
        f"{_esc(ylabel)}</text>"
    )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def diverging_color(v: float, limit: float = WIGNER_LIMIT) -> str:
    """Blue (negative) - white - red (positive), pinned to [-limit, limit]."""
    t = min(max(v / limit, -1.0), 1.0)
    neg, pos, white = (33, 102, 172), (178, 24, 43), (247, 247, 247)
    end = pos if t >= 0 else neg
    a = abs(t)
    rgb = [round(w + (e - w) * a) for w, e in zip(white, end)]
    return "#{:02x}{:02x}{:02x}".format(*rgb)


def svg_heatmap(x: np.ndarray, p: np.ndarray, values: np.ndarray, title: str = "", size: int = 420) -> str:
    """Heatmap of values[i, j] at (x[i], p[j]) with a fixed [-2/pi, 2/pi] palette."""
    sx_ = max(1, math.ceil(len(x) / MAX_HEATMAP_CELLS))
    sp_ = max(1, math.ceil(len(p) / MAX_HEATMAP_CELLS))
    xs, ps, vals = x[::sx_], p[::sp_], values[::sx_, ::sp_]
    left, top, bar = 60, 40, 90
    w = h = size
    cw, ch = w / len(xs), h / len(ps)
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{left + w + bar}" height="{top + h + 50}" '
        f'font-family="sans-serif" font-size="12">',
        f'<rect width="{left + w + bar}" height="{top + h + 50}" fill="white"/>',
    ]
    for i in range(len(xs)):
        for j in range(len(ps)):
            # p increases upward
            out.append(
                f'<rect x="{left + i * cw:.2f}" y="{top + (len(ps) - 1 - j) * ch:.2f}" '
                f'width="{cw + 0.05:.2f}" height="{ch + 0.05:.2f}" fill="{diverging_color(vals[i, j])}"/>'
            )
    out.append(f'<rect x="{left}" y="{top}" width="{w}" height="{h}" fill="none" stroke="black"/>')
    out.append(f'<text x="{left}" y="{top + h + 18}">{fmt(x[0])}</text>')
    out.append(f'<text x="{left + w}" y="{top + h + 18}" text-anchor="end">{fmt(x[-1])}</text>')
    out.append(f'<text x="{left + w / 2:.1f}" y="{top + h + 36}" text-anchor="middle">x</text>')
    out.append(f'<text x="{left - 6}" y="{top + h}" text-anchor="end">{fmt(p[0])}</text>')
    out.append(f'<text x="{left - 6}" y="{top + 10}" text-anchor="end">{fmt(p[-1])}</text>')
    out.append(f'<text x="{left - 30}" y="{top + h / 2:.1f}">p</text>')
    bx = left + w + 20
    steps = 40
    for k in range(steps):
        v = WIGNER_LIMIT * (1 - 2 * (k + 0.5) / steps)
        out.append(f'<rect x="{bx}" y="{top + k * h / steps:.2f}" width="16" height="{h / steps + 0.05:.2f}" fill="{diverging_color(v)}"/>')
    out.append(f'<text x="{bx + 20}" y="{top + 10}">2/pi</text>')
    out.append(f'<text x="{bx + 20}" y="{top + h / 2 + 4:.1f}">0</text>')
    out.append(f'<text x="{bx + 20}" y="{top + h}">-2/pi</text>')
    out.append(f'<text x="{left + w / 2:.1f}" y="{top - 14}" text-anchor="middle" font-size="14">{_esc(title)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
