"""Minimal SVG line, band and heat charts."""

from __future__ import annotations

import math
from typing import Optional, Sequence
from xml.sax.saxutils import escape

WIDTH, HEIGHT = 640, 400
MARGIN = 50
PALETTE = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
]


class _Frame:
    def __init__(self, x_range, y_range, width=WIDTH, height=HEIGHT):
        self.x0, self.x1 = x_range
        self.y0, self.y1 = y_range
        if self.x1 == self.x0:
            self.x1 = self.x0 + 1
        if self.y1 == self.y0:
            self.y1 = self.y0 + 1
        self.width, self.height = width, height

    def x(self, v):
        return MARGIN + (v - self.x0) / (self.x1 - self.x0) * (self.width - 2 * MARGIN)

    def y(self, v):
        return self.height - MARGIN - (v - self.y0) / (self.y1 - self.y0) * (self.height - 2 * MARGIN)


def _header(width, height):
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]


def _axes(frame: _Frame, title, xlabel, ylabel):
    w, h = frame.width, frame.height
    return [
        f'<line x1="{MARGIN}" y1="{h - MARGIN}" x2="{w - MARGIN}" y2="{h - MARGIN}" stroke="black"/>',
        f'<line x1="{MARGIN}" y1="{MARGIN}" x2="{MARGIN}" y2="{h - MARGIN}" stroke="black"/>',
        f'<text x="{w / 2}" y="{MARGIN / 2}" text-anchor="middle" font-size="14">{escape(title)}</text>',
        f'<text x="{w / 2}" y="{h - 10}" text-anchor="middle" font-size="12">{escape(xlabel)}</text>',
        f'<text x="15" y="{h / 2}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 15 {h / 2})">{escape(ylabel)}</text>',
        f'<text x="{MARGIN}" y="{h - MARGIN + 15}" font-size="10">{frame.x0:g}</text>',
        f'<text x="{w - MARGIN}" y="{h - MARGIN + 15}" text-anchor="end" font-size="10">{frame.x1:g}</text>',
        f'<text x="{MARGIN - 5}" y="{h - MARGIN}" text-anchor="end" font-size="10">{frame.y0:g}</text>',
        f'<text x="{MARGIN - 5}" y="{MARGIN + 10}" text-anchor="end" font-size="10">{frame.y1:g}</text>',
    ]


def _polyline(points, colour, width=1.2):
    coords = " ".join(f"{x:.2f},{y:.2f}" for x, y in points)
    return f'<polyline points="{coords}" fill="none" stroke="{colour}" stroke-width="{width}"/>'


def line_chart(
    x: Sequence[float],
    series: Sequence[Sequence[Optional[float]]],
    title: str = "",
    xlabel: str = "",
    ylabel: str = "",
    y_range=(0.0, 1.0),
) -> str:
    """One polyline per series; ``None`` values break the line."""
    frame = _Frame((min(x), max(x)), y_range)
    out = _header(WIDTH, HEIGHT) + _axes(frame, title, xlabel, ylabel)
    for i, values in enumerate(series):
        colour = PALETTE[i % len(PALETTE)]
        segment = []
        for xv, yv in zip(x, values):
            if yv is None:
                if len(segment) > 1:
                    out.append(_polyline(segment, colour))
                segment = []
                continue
            segment.append((frame.x(xv), frame.y(yv)))
        if len(segment) > 1:
            out.append(_polyline(segment, colour))
    out.append("</svg>")
    return "\n".join(out) + "\n"


def band_chart(
    x: Sequence[float],
    mean: Sequence[float],
    low: Sequence[float],
    high: Sequence[float],
    title: str = "",
    xlabel: str = "",
    ylabel: str = "",
) -> str:
    """Mean line over a shaded interval band."""
    lo = min(0.0, min(low))
    hi = max(0.5, max(high))
    frame = _Frame((min(x), max(x)), (lo, hi))
    out = _header(WIDTH, HEIGHT) + _axes(frame, title, xlabel, ylabel)
    upper = [(frame.x(a), frame.y(b)) for a, b in zip(x, high)]
    lower = [(frame.x(a), frame.y(b)) for a, b in zip(x, low)][::-1]
    coords = " ".join(f"{px:.2f},{py:.2f}" for px, py in upper + lower)
    out.append(f'<polygon points="{coords}" fill="{PALETTE[0]}" fill-opacity="0.25" stroke="none"/>')
    out.append(_polyline([(frame.x(a), frame.y(b)) for a, b in zip(x, mean)], PALETTE[0], 2))
    for a, b in zip(x, mean):
        out.append(f'<circle cx="{frame.x(a):.2f}" cy="{frame.y(b):.2f}" r="2.5" fill="{PALETTE[0]}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _colour(t: float) -> str:
    # white -> dark blue
    t = min(max(t, 0.0), 1.0)
    r = round(255 * (1 - t) + 8 * t)
    g = round(255 * (1 - t) + 48 * t)
    b = round(255 * (1 - t) + 107 * t)
    return f"#{r:02x}{g:02x}{b:02x}"


def heatmap(
    row_values: Sequence[float],
    col_values: Sequence[float],
    matrix,
    title: str = "",
    xlabel: str = "",
    ylabel: str = "",
) -> str:
    """Cells coloured by value; non-finite cells are drawn grey."""
    finite = [v for row in matrix for v in row if math.isfinite(v)]
    vmin, vmax = (min(finite), max(finite)) if finite else (0.0, 1.0)
    span = (vmax - vmin) or 1.0
    frame = _Frame((0, len(col_values)), (0, len(row_values)))
    cw = (WIDTH - 2 * MARGIN) / len(col_values)
    ch = (HEIGHT - 2 * MARGIN) / len(row_values)
    out = _header(WIDTH, HEIGHT)
    for i, row in enumerate(matrix):
        for j, v in enumerate(row):
            fill = _colour((v - vmin) / span) if math.isfinite(v) else "#cccccc"
            out.append(
                f'<rect x="{frame.x(j):.2f}" y="{frame.y(i + 1):.2f}" '
                f'width="{cw:.2f}" height="{ch:.2f}" fill="{fill}"/>'
            )
    frame.x0, frame.x1 = col_values[0], col_values[-1]
    frame.y0, frame.y1 = row_values[0], row_values[-1]
    out += _axes(frame, f"{title} [{vmin:.3g}, {vmax:.3g}]", xlabel, ylabel)
    out.append("</svg>")
    return "\n".join(out) + "\n"
