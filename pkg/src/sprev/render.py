"""Deterministic SVG rendering of embeddings and summary curves.

Output is built from fixed strings and "%.6g"-formatted numbers only, so
equal inputs give byte-equal files.  Only path, circle, text, polyline and
rect elements are emitted.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from xml.sax.saxutils import escape

import numpy as np

from .errors import NonMonotonicX, TooFewPoints
from .layout import Embedding2D, lin_space

# 20 visually distinct colors; class c uses entry c mod 20.
DEFAULT_PALETTE = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
    "#aec7e8", "#ffbb78", "#98df8a", "#ff9896", "#c5b0d5",
    "#c49c94", "#f7b6d2", "#c7c7c7", "#dbdb8d", "#9edae5",
]

_HEX_COLOR = re.compile(r"^#[0-9a-fA-F]{6}$")


@dataclass
class RenderStyle:
    canvas_px: int = 1000
    point_radius_px: float = 3.0
    margin_fraction: float = 0.08
    palette: list[str] = field(default_factory=lambda: list(DEFAULT_PALETTE))

    def __post_init__(self):
        if self.canvas_px < 1:
            raise ValueError(f"canvas_px must be positive, got {self.canvas_px}")
        if not 0.0 <= self.margin_fraction < 0.5:
            raise ValueError(f"margin_fraction must be in [0, 0.5), got {self.margin_fraction}")
        if not self.palette:
            raise ValueError("palette must not be empty")
        for color in self.palette:
            if not _HEX_COLOR.match(color):
                raise ValueError(f"palette entries must look like #rrggbb, got {color!r}")


def _fmt(value: float) -> str:
    return format(float(value), ".6g")


def _svg_open(size: int) -> list[str]:
    return [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<rect x="0" y="0" width="{size}" height="{size}" fill="#ffffff"/>',
    ]


def _legend(names: list[str], colors: list[str], size: int) -> list[str]:
    parts = []
    for i, (name, color) in enumerate(zip(names, colors)):
        y = 12 + 18 * i
        parts.append(f'<rect x="12" y="{y}" width="12" height="12" fill="{color}"/>')
        parts.append(
            f'<text x="30" y="{y + 10}" font-family="sans-serif" font-size="12" '
            f'fill="#000000">{escape(name)}</text>'
        )
    return parts


def render_embedding(emb: Embedding2D, style: RenderStyle | None = None) -> bytes:
    """Scatter plot of an embedding inside its class polygon, as SVG bytes.

    The polygon outline is one closed path; its vertices get anchor marks
    (so a two-class digon still shows as a segment with two marks); samples
    are circles colored by class via palette[class mod palette size].
    """
    if style is None:
        style = RenderStyle()
    size = style.canvas_px
    half = size / 2.0
    scale = half * (1.0 - 2.0 * style.margin_fraction)

    def px(x: float) -> str:
        return _fmt(half + x * scale)

    def py(y: float) -> str:
        return _fmt(half - y * scale)

    colors = [style.palette[c % len(style.palette)] for c in range(len(emb.class_names))]
    parts = _svg_open(size)

    verts = emb.polygon.vertices
    steps = [f"M {px(verts[0, 0])} {py(verts[0, 1])}"]
    steps += [f"L {px(x)} {py(y)}" for x, y in verts[1:]]
    parts.append(
        f'<path d="{" ".join(steps)} Z" fill="none" stroke="#666666" stroke-width="1.5"/>'
    )
    for c, (x, y) in enumerate(verts):
        parts.append(
            f'<circle cx="{px(x)}" cy="{py(y)}" r="{_fmt(style.point_radius_px + 1.5)}" '
            f'fill="{colors[c]}" stroke="#333333" stroke-width="1"/>'
        )

    radius = _fmt(style.point_radius_px)
    for (x, y), label in zip(emb.points, emb.labels):
        parts.append(
            f'<circle cx="{px(x)}" cy="{py(y)}" r="{radius}" '
            f'fill="{colors[label]}" fill-opacity="0.75"/>'
        )

    parts += _legend(emb.class_names, colors, size)
    parts.append("</svg>")
    return ("\n".join(parts) + "\n").encode("utf-8")


@dataclass
class CurveSeries:
    """One named line for render_curve; x must be positive and strictly increasing."""

    xs: np.ndarray
    ys: np.ndarray
    name: str

    def __post_init__(self):
        self.xs = np.asarray(self.xs, dtype=np.float64)
        self.ys = np.asarray(self.ys, dtype=np.float64)


def render_curve(
    series: list[CurveSeries] | CurveSeries,
    style: RenderStyle | None = None,
    x_label: str = "",
    y_label: str = "",
) -> bytes:
    """Line chart with a log-scaled x axis, as SVG bytes.

    Each series needs at least two points with strictly increasing positive
    x.  Ticks sit on powers of ten; series are colored from the palette in
    order and named in the legend.
    """
    if isinstance(series, CurveSeries):
        series = [series]
    if not series:
        raise TooFewPoints(0)
    for s in series:
        if s.xs.shape[0] < 2:
            raise TooFewPoints(s.xs.shape[0])
        for i in range(1, s.xs.shape[0]):
            if s.xs[i] <= s.xs[i - 1]:
                raise NonMonotonicX(i)
        if s.xs[0] <= 0.0:
            raise ValueError("log-scaled x axis requires positive x values")
    if style is None:
        style = RenderStyle()

    size = style.canvas_px
    inset = style.margin_fraction * size
    left, right = 2.0 * inset, size - inset
    top, bottom = inset, size - 1.5 * inset

    lx_min = math.log10(min(s.xs[0] for s in series))
    lx_max = math.log10(max(s.xs[-1] for s in series))
    y_min = min(float(s.ys.min()) for s in series)
    y_max = max(float(s.ys.max()) for s in series)
    if y_min == y_max:
        y_min, y_max = y_min - 0.5, y_max + 0.5
    pad = 0.05 * (y_max - y_min)
    y_min, y_max = y_min - pad, y_max + pad

    def px(x: float) -> float:
        t = (math.log10(x) - lx_min) / (lx_max - lx_min)
        return left + t * (right - left)

    def py(y: float) -> float:
        t = (y - y_min) / (y_max - y_min)
        return bottom - t * (bottom - top)

    parts = _svg_open(size)
    parts.append(
        f'<rect x="{_fmt(left)}" y="{_fmt(top)}" width="{_fmt(right - left)}" '
        f'height="{_fmt(bottom - top)}" fill="none" stroke="#333333" stroke-width="1"/>'
    )

    decades = range(math.ceil(lx_min - 1e-9), math.floor(lx_max + 1e-9) + 1)
    x_ticks = [10.0**d for d in decades] or [10.0**lx_min, 10.0**lx_max]
    for x in x_ticks:
        cx = px(x)
        parts.append(
            f'<path d="M {_fmt(cx)} {_fmt(bottom)} L {_fmt(cx)} {_fmt(bottom + 6)}" '
            f'stroke="#333333" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{_fmt(cx)}" y="{_fmt(bottom + 22)}" font-family="sans-serif" '
            f'font-size="12" fill="#000000" text-anchor="middle">{_fmt(x)}</text>'
        )
    for y in lin_space(y_min, y_max, 5):
        cy = py(float(y))
        parts.append(
            f'<path d="M {_fmt(left - 6)} {_fmt(cy)} L {_fmt(left)} {_fmt(cy)}" '
            f'stroke="#333333" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{_fmt(left - 10)}" y="{_fmt(cy + 4)}" font-family="sans-serif" '
            f'font-size="12" fill="#000000" text-anchor="end">{_fmt(float(y))}</text>'
        )
    if x_label:
        parts.append(
            f'<text x="{_fmt((left + right) / 2)}" y="{_fmt(size - 8)}" font-family="sans-serif" '
            f'font-size="13" fill="#000000" text-anchor="middle">{escape(x_label)}</text>'
        )
    if y_label:
        parts.append(
            f'<text x="{_fmt(left)}" y="{_fmt(top - 8)}" font-family="sans-serif" '
            f'font-size="13" fill="#000000" text-anchor="middle">{escape(y_label)}</text>'
        )

    colors = [style.palette[i % len(style.palette)] for i in range(len(series))]
    for s, color in zip(series, colors):
        points = " ".join(f"{_fmt(px(float(x)))},{_fmt(py(float(y)))}" for x, y in zip(s.xs, s.ys))
        parts.append(f'<polyline points="{points}" fill="none" stroke="{color}" stroke-width="2"/>')

    parts += _legend([s.name for s in series], colors, size)
    parts.append("</svg>")
    return ("\n".join(parts) + "\n").encode("utf-8")
