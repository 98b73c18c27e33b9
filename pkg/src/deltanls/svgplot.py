"""Minimal static SVG line plots: axes, polylines, legend.

Deliberately tiny so the command-line tool has no plotting dependency.
Output is deterministic: fixed layout, fixed palette, numbers printed
with repr-stable formatting.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


@dataclass
class Series:
    x: np.ndarray
    y: np.ndarray
    label: str = ""
    color: str | None = None
    closed: bool = False  # draw as a closed outline (used for table cells)

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)
        self.y = np.asarray(self.y, dtype=float)
        if self.x.shape != self.y.shape or self.x.ndim != 1:
            raise ValueError("series coordinates must be 1-d arrays of equal length")


@dataclass
class Figure:
    title: str = ""
    xlabel: str = ""
    ylabel: str = ""
    width: int = 640
    height: int = 420
    series: list[Series] = field(default_factory=list)

    def add(self, x, y, label: str = "", color: str | None = None, closed: bool = False):
        self.series.append(Series(np.asarray(x), np.asarray(y), label, color, closed))


def _num(x: float) -> str:
    return format(float(x), ".6g")


def _ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    if not np.isfinite(lo) or not np.isfinite(hi) or hi <= lo:
        return [lo]
    raw = (hi - lo) / n
    mag = 10.0 ** np.floor(np.log10(raw))
    step = min(s for s in (1.0 * mag, 2.0 * mag, 5.0 * mag, 10.0 * mag) if s >= raw)
    first = np.ceil(lo / step) * step
    return list(np.arange(first, hi + 0.5 * step, step))


def render(fig: Figure) -> str:
    """Render the figure to an SVG document string."""
    margin_l, margin_r, margin_t, margin_b = 64, 16, 28, 44
    w, h = fig.width, fig.height
    px0, px1 = margin_l, w - margin_r
    py0, py1 = h - margin_b, margin_t

    finite = [
        (s.x[np.isfinite(s.x) & np.isfinite(s.y)], s.y[np.isfinite(s.x) & np.isfinite(s.y)])
        for s in fig.series
    ]
    xs = np.concatenate([c[0] for c in finite]) if finite else np.array([0.0, 1.0])
    ys = np.concatenate([c[1] for c in finite]) if finite else np.array([0.0, 1.0])
    if xs.size == 0:
        xs, ys = np.array([0.0, 1.0]), np.array([0.0, 1.0])
    xlo, xhi = float(xs.min()), float(xs.max())
    ylo, yhi = float(ys.min()), float(ys.max())
    if xhi <= xlo:
        xhi = xlo + 1.0
    if yhi <= ylo:
        yhi = ylo + 1.0
    pad = 0.05 * (yhi - ylo)
    ylo, yhi = ylo - pad, yhi + pad

    def sx(x):
        return px0 + (x - xlo) / (xhi - xlo) * (px1 - px0)

    def sy(y):
        return py0 - (y - ylo) / (yhi - ylo) * (py0 - py1)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" '
        f'viewBox="0 0 {w} {h}">',
        f'<rect x="0" y="0" width="{w}" height="{h}" fill="white"/>',
        f'<line x1="{px0}" y1="{py0}" x2="{px1}" y2="{py0}" stroke="black"/>',
        f'<line x1="{px0}" y1="{py0}" x2="{px0}" y2="{py1}" stroke="black"/>',
    ]
    for t in _ticks(xlo, xhi):
        X = _num(sx(t))
        out.append(f'<line x1="{X}" y1="{py0}" x2="{X}" y2="{py0 + 5}" stroke="black"/>')
        out.append(
            f'<text x="{X}" y="{py0 + 18}" font-size="11" text-anchor="middle" '
            f'font-family="sans-serif">{_num(t)}</text>'
        )
    for t in _ticks(ylo, yhi):
        Y = _num(sy(t))
        out.append(f'<line x1="{px0 - 5}" y1="{Y}" x2="{px0}" y2="{Y}" stroke="black"/>')
        out.append(
            f'<text x="{px0 - 8}" y="{Y}" font-size="11" text-anchor="end" '
            f'dominant-baseline="middle" font-family="sans-serif">{_num(t)}</text>'
        )
    if fig.title:
        out.append(
            f'<text x="{(px0 + px1) // 2}" y="18" font-size="13" text-anchor="middle" '
            f'font-family="sans-serif">{fig.title}</text>'
        )
    if fig.xlabel:
        out.append(
            f'<text x="{(px0 + px1) // 2}" y="{h - 8}" font-size="12" text-anchor="middle" '
            f'font-family="sans-serif">{fig.xlabel}</text>'
        )
    if fig.ylabel:
        out.append(
            f'<text x="14" y="{(py0 + py1) // 2}" font-size="12" text-anchor="middle" '
            f'font-family="sans-serif" transform="rotate(-90 14 {(py0 + py1) // 2})">'
            f"{fig.ylabel}</text>"
        )
    for i, s in enumerate(fig.series):
        color = s.color or PALETTE[i % len(PALETTE)]
        mask = np.isfinite(s.x) & np.isfinite(s.y)
        pts = " ".join(f"{_num(sx(x))},{_num(sy(y))}" for x, y in zip(s.x[mask], s.y[mask]))
        tag = "polygon" if s.closed else "polyline"
        out.append(f'<{tag} points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"/>')
    legend = [(i, s) for i, s in enumerate(fig.series) if s.label]
    for row, (i, s) in enumerate(legend):
        color = s.color or PALETTE[i % len(PALETTE)]
        Y = py1 + 14 + 16 * row
        out.append(
            f'<line x1="{px1 - 130}" y1="{Y}" x2="{px1 - 106}" y2="{Y}" '
            f'stroke="{color}" stroke-width="1.5"/>'
        )
        out.append(
            f'<text x="{px1 - 100}" y="{Y + 4}" font-size="11" '
            f'font-family="sans-serif">{s.label}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
