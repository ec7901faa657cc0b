"""Minimal deterministic SVG charts: heatmaps for distance tables and
scatter plots for lexical role preferences or model scores."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence
from xml.sax.saxutils import escape

from .analysis import DistanceTable
from .errors import DegenerateExtent

WIDTH, HEIGHT = 640, 480
LEFT, RIGHT, TOP, BOTTOM = 120, 150, 40, 70
PALETTE = ("#d62728", "#2ca02c", "#1f77b4", "#ff7f0e", "#9467bd", "#8c564b", "#7f7f7f")


def _f(v: float) -> str:
    return f"{v:.2f}"


def _blend(frac: float) -> str:
    lo, hi = (255, 255, 255), (8, 81, 156)
    rgb = [round(a + (b - a) * frac) for a, b in zip(lo, hi)]
    return "#%02x%02x%02x" % tuple(rgb)


def plot_box() -> tuple[float, float, float, float]:
    """(left, top, width, height) of the drawing area."""
    return LEFT, TOP, WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM


def project(x: float, y: float, extents: tuple[float, float, float, float]) -> tuple[float, float]:
    """Affine map from data coordinates to viewport pixels (y grows downward)."""
    xmin, xmax, ymin, ymax = extents
    left, top, w, h = plot_box()
    return left + (x - xmin) / (xmax - xmin) * w, top + (ymax - y) / (ymax - ymin) * h


def _open(title: str) -> list[str]:
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">',
        f'<rect class="background" x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>',
        f'<text class="title" x="{WIDTH / 2:.2f}" y="22" text-anchor="middle" font-size="14">{escape(title)}</text>',
    ]


def _axis_labels(x_label: str, y_label: str) -> list[str]:
    left, top, w, h = plot_box()
    return [
        f'<text class="axis-label" x="{_f(left + w / 2)}" y="{HEIGHT - 15}" text-anchor="middle">{escape(x_label)}</text>',
        f'<text class="axis-label" x="18" y="{_f(top + h / 2)}" text-anchor="middle" '
        f'transform="rotate(-90 18 {_f(top + h / 2)})">{escape(y_label)}</text>',
    ]


def heatmap_svg(row_labels: Sequence[str], col_labels: Sequence[str], values: Sequence[Sequence[float]],
                title: str = "", x_label: str = "", y_label: str = "") -> str:
    if not row_labels or not col_labels:
        raise DegenerateExtent("heatmap needs at least one row and one column")
    left, top, w, h = plot_box()
    cw, ch = w / len(col_labels), h / len(row_labels)
    peak = max((v for row in values for v in row), default=0) or 1
    out = _open(title)
    out.append(f'<rect class="frame" x="{_f(left)}" y="{_f(top)}" width="{_f(w)}" height="{_f(h)}" '
               f'fill="none" stroke="#333333"/>')
    for i, (name, row) in enumerate(zip(row_labels, values)):
        y = top + i * ch
        out.append(f'<text class="tick" x="{_f(left - 6)}" y="{_f(y + ch / 2 + 4)}" text-anchor="end">{escape(name)}</text>')
        for j, v in enumerate(row):
            x = left + j * cw
            out.append(f'<rect class="cell" x="{_f(x)}" y="{_f(y)}" width="{_f(cw)}" height="{_f(ch)}" '
                       f'fill="{_blend(v / peak)}" data-value="{v}"/>')
            color = "#ffffff" if v / peak > 0.5 else "#000000"
            out.append(f'<text class="cell-label" x="{_f(x + cw / 2)}" y="{_f(y + ch / 2 + 4)}" '
                       f'text-anchor="middle" fill="{color}">{v}</text>')
    for j, name in enumerate(col_labels):
        x = left + (j + 0.5) * cw
        out.append(f'<text class="tick" x="{_f(x)}" y="{_f(top + h + 16)}" text-anchor="middle">{escape(name)}</text>')
    out += _axis_labels(x_label, y_label)
    lx = WIDTH - RIGHT + 30
    out.append(f'<g class="legend"><text x="{lx}" y="{top + 10}">count</text>')
    for k in range(5):
        frac = k / 4
        out.append(f'<rect x="{lx}" y="{_f(top + 20 + k * 18)}" width="14" height="14" fill="{_blend(frac)}" stroke="#999999"/>')
        out.append(f'<text x="{lx + 20}" y="{_f(top + 31 + k * 18)}">{_f(frac * peak)}</text>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def scatter_svg(points: Sequence[tuple], title: str = "", x_label: str = "", y_label: str = "",
                extents: tuple[float, float, float, float] | None = None) -> str:
    """``points`` are (label, x, y) or (label, x, y, group) tuples."""
    if not points:
        raise DegenerateExtent("scatter needs at least one point")
    xs = [float(p[1]) for p in points]
    ys = [float(p[2]) for p in points]
    if extents is None:
        extents = (min(xs), max(xs), min(ys), max(ys))
    xmin, xmax, ymin, ymax = map(float, extents)
    if not (xmax > xmin and ymax > ymin):
        raise DegenerateExtent(f"zero-width extent {extents}")
    extents = (xmin, xmax, ymin, ymax)
    left, top, w, h = plot_box()
    groups: list[str] = []
    for p in points:
        g = str(p[3]) if len(p) > 3 else "points"
        if g not in groups:
            groups.append(g)
    color = {g: PALETTE[i % len(PALETTE)] for i, g in enumerate(groups)}

    out = _open(title)
    out.append(f'<rect class="frame" x="{_f(left)}" y="{_f(top)}" width="{_f(w)}" height="{_f(h)}" '
               f'fill="none" stroke="#333333"/>')
    for k in range(5):
        fx = xmin + (xmax - xmin) * k / 4
        fy = ymin + (ymax - ymin) * k / 4
        px, _ = project(fx, ymin, extents)
        _, py = project(xmin, fy, extents)
        out.append(f'<text class="tick" x="{_f(px)}" y="{_f(top + h + 16)}" text-anchor="middle">{fx:.2f}</text>')
        out.append(f'<text class="tick" x="{_f(left - 6)}" y="{_f(py + 4)}" text-anchor="end">{fy:.2f}</text>')
    for p, x, y in zip(points, xs, ys):
        px, py = project(x, y, extents)
        g = str(p[3]) if len(p) > 3 else "points"
        out.append(f'<circle class="point" cx="{_f(px)}" cy="{_f(py)}" r="4" fill="{color[g]}" '
                   f'fill-opacity="0.8"><title>{escape(str(p[0]))} ({x:.4f}, {y:.4f})</title></circle>')
    out += _axis_labels(x_label, y_label)
    lx = WIDTH - RIGHT + 30
    out.append('<g class="legend">')
    for i, g in enumerate(groups):
        out.append(f'<circle cx="{lx + 5}" cy="{top + 10 + i * 18}" r="5" fill="{color[g]}"/>')
        out.append(f'<text x="{lx + 16}" y="{top + 14 + i * 18}">{escape(g)}</text>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_svg(data, kind: str, out_path=None, **labels) -> str:
    """Render ``data`` as ``heatmap`` (a DistanceTable or (rows, cols, values))
    or ``scatter`` (a point list); write to ``out_path`` when given."""
    if kind == "heatmap":
        if isinstance(data, DistanceTable):
            svg = heatmap_svg(data.rows, data.bucket_labels(), data.counts, **labels)
        else:
            rows, cols, values = data
            svg = heatmap_svg(rows, cols, values, **labels)
    elif kind == "scatter":
        svg = scatter_svg(data, **labels)
    else:
        raise ValueError(f"unknown chart kind {kind!r}")
    if out_path is not None:
        Path(out_path).write_text(svg, encoding="utf-8")
    return svg
