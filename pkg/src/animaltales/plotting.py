"""Deterministic SVG rendering for biplots and the network overlay.

No plotting library: the figures are labeled points, arrows from the
origin, and straight edges, so the SVG is assembled from strings. All
coordinates are formatted with a fixed precision, making repeated renders
byte-identical.
"""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

from .cooccurrence import CooccurrenceGraph
from .errors import ValidationError

_SIZE = 640.0
_MARGIN_FRACTION = 0.10


def _fmt(x: float) -> str:
    return format(x, ".3f")


class _Canvas:
    """Maps data coordinates onto a fixed square pixel canvas (y up)."""

    def __init__(self, xs: list[float], ys: list[float]):
        xmin, xmax = min(xs), max(xs)
        ymin, ymax = min(ys), max(ys)
        span = max(xmax - xmin, ymax - ymin, 1e-9)
        margin = span * _MARGIN_FRACTION
        cx, cy = (xmin + xmax) / 2.0, (ymin + ymax) / 2.0
        half = span / 2.0 + margin
        self._x0 = cx - half
        self._y0 = cy - half
        self._scale = _SIZE / (2.0 * half)

    def px(self, x: float) -> float:
        return (x - self._x0) * self._scale

    def py(self, y: float) -> float:
        return _SIZE - (y - self._y0) * self._scale


def _svg_header() -> list[str]:
    return [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{int(_SIZE)}" height="{int(_SIZE)}" '
        f'viewBox="0 0 {int(_SIZE)} {int(_SIZE)}">',
        f'<rect width="{int(_SIZE)}" height="{int(_SIZE)}" fill="white"/>',
    ]


def render_biplot_svg(
    points: list[tuple[float, float]],
    arrows: list[tuple[float, float]],
    point_labels: list[str],
    arrow_labels: list[str],
    out,
) -> None:
    """Write a biplot: labeled row points plus variable arrows from the origin."""
    for x, y in points + arrows:
        if not (math.isfinite(x) and math.isfinite(y)):
            raise ValidationError("biplot coordinates must be finite")
    xs = [p[0] for p in points] + [a[0] for a in arrows] + [0.0]
    ys = [p[1] for p in points] + [a[1] for a in arrows] + [0.0]
    canvas = _Canvas(xs, ys)

    parts = _svg_header()
    ox, oy = canvas.px(0.0), canvas.py(0.0)
    parts.append(
        f'<line x1="0" y1="{_fmt(oy)}" x2="{_fmt(_SIZE)}" y2="{_fmt(oy)}" stroke="#dddddd"/>'
    )
    parts.append(
        f'<line x1="{_fmt(ox)}" y1="0" x2="{_fmt(ox)}" y2="{_fmt(_SIZE)}" stroke="#dddddd"/>'
    )
    for (x, y), label in zip(arrows, arrow_labels):
        parts.append(
            f'<line x1="{_fmt(ox)}" y1="{_fmt(oy)}" x2="{_fmt(canvas.px(x))}" '
            f'y2="{_fmt(canvas.py(y))}" stroke="#b03030" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{_fmt(canvas.px(x))}" y="{_fmt(canvas.py(y))}" font-size="10" '
            f'fill="#b03030">{escape(label)}</text>'
        )
    for (x, y), label in zip(points, point_labels):
        parts.append(
            f'<circle cx="{_fmt(canvas.px(x))}" cy="{_fmt(canvas.py(y))}" r="3" fill="#203070"/>'
        )
        parts.append(
            f'<text x="{_fmt(canvas.px(x) + 4)}" y="{_fmt(canvas.py(y) - 4)}" font-size="11" '
            f'fill="#203070">{escape(label)}</text>'
        )
    parts.append("</svg>")
    out.write("\n".join(parts) + "\n")


def render_overlay(
    g: CooccurrenceGraph, coordinates: dict[str, tuple[float, float]], out
) -> list[str]:
    """Draw co-occurrence edges over biplot coordinates.

    Graph nodes without a coordinate are dropped and reported in the
    returned diagnostics list; an empty overlap is a validation error.
    """
    placed = sorted(name for name in g.nodes if name in coordinates)
    dropped = sorted(name for name in g.nodes if name not in coordinates)
    if not placed:
        raise ValidationError("no co-occurrence node has biplot coordinates")
    diagnostics = [f"dropped node without biplot coordinates: {name}" for name in dropped]

    xs = [coordinates[name][0] for name in placed]
    ys = [coordinates[name][1] for name in placed]
    canvas = _Canvas(xs, ys)

    edges = [
        ((a, b), w)
        for (a, b), w in sorted(g.edges.items())
        if a in coordinates and b in coordinates and a in g.nodes and b in g.nodes
    ]
    parts = _svg_header()
    if edges:
        weights = [w for _, w in edges]
        lo, hi = min(weights), max(weights)
        for (a, b), w in edges:
            t = 0.5 if hi == lo else (w - lo) / (hi - lo)
            width = 0.8 + 2.4 * t
            ax, ay = coordinates[a]
            bx, by = coordinates[b]
            parts.append(
                f'<line x1="{_fmt(canvas.px(ax))}" y1="{_fmt(canvas.py(ay))}" '
                f'x2="{_fmt(canvas.px(bx))}" y2="{_fmt(canvas.py(by))}" '
                f'stroke="#888888" stroke-width="{_fmt(width)}"/>'
            )
    for name in placed:
        x, y = coordinates[name]
        parts.append(
            f'<circle cx="{_fmt(canvas.px(x))}" cy="{_fmt(canvas.py(y))}" r="4" fill="#203070"/>'
        )
        parts.append(
            f'<text x="{_fmt(canvas.px(x) + 5)}" y="{_fmt(canvas.py(y) - 5)}" font-size="11" '
            f'fill="#203070">{escape(name)}</text>'
        )
    parts.append("</svg>")
    out.write("\n".join(parts) + "\n")
    return diagnostics
