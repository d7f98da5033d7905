"""Minimal deterministic SVG line plots.

No rendering dependency: the document is assembled from fixed-format strings,
so identical inputs produce identical bytes, which makes the plots usable as
golden files.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

WIDTH, HEIGHT = 720, 480
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 72, 24, 36, 52
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
           "#8c564b", "#17becf", "#7f7f7f")


@dataclass(frozen=True)
class Series:
    x: np.ndarray
    y: np.ndarray
    label: str = ""


def _nice_ticks(lo: float, hi: float, target: int = 6):
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise ValueError("tick range must be finite")
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / target
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 5.0, 10.0):
        if raw <= mult * mag:
            step = mult * mag
            break
    first = math.ceil(lo / step) * step
    ticks = []
    t = first
    while t <= hi + 1e-12 * step:
        ticks.append(0.0 if abs(t) < 1e-12 * step else t)
        t += step
    return ticks


def _fmt(v: float) -> str:
    return f"{v:.3f}"


def render_svg(series, xlabel: str, ylabel: str, title: str = "") -> str:
    """Line plot of the given series with axes, ticks and a legend."""
    series = list(series)
    if not series:
        raise ValueError("need at least one series")
    xs = np.concatenate([np.asarray(s.x, dtype=float) for s in series])
    ys = np.concatenate([np.asarray(s.y, dtype=float) for s in series])
    x_lo, x_hi = float(xs.min()), float(xs.max())
    y_lo, y_hi = float(ys.min()), float(ys.max())
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0
    pad = 0.05 * (y_hi - y_lo)
    y_lo, y_hi = y_lo - pad, y_hi + pad

    plot_w = WIDTH - MARGIN_L - MARGIN_R
    plot_h = HEIGHT - MARGIN_T - MARGIN_B

    def px(x):
        return MARGIN_L + (x - x_lo) / (x_hi - x_lo) * plot_w

    def py(y):
        return MARGIN_T + (y_hi - y) / (y_hi - y_lo) * plot_h

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" '
        f'height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>',
        f'<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{plot_w}" '
        f'height="{plot_h}" fill="none" stroke="#000000"/>',
    ]
    font = 'font-family="sans-serif" font-size="13"'
    for t in _nice_ticks(x_lo, x_hi):
        x = px(t)
        out.append(f'<line x1="{_fmt(x)}" y1="{py(y_lo)}" x2="{_fmt(x)}" '
                   f'y2="{_fmt(py(y_lo) + 5)}" stroke="#000000"/>')
        out.append(f'<text x="{_fmt(x)}" y="{_fmt(py(y_lo) + 20)}" {font} '
                   f'text-anchor="middle">{t:g}</text>')
    for t in _nice_ticks(y_lo, y_hi):
        y = py(t)
        out.append(f'<line x1="{MARGIN_L - 5}" y1="{_fmt(y)}" x2="{MARGIN_L}" '
                   f'y2="{_fmt(y)}" stroke="#000000"/>')
        out.append(f'<text x="{MARGIN_L - 8}" y="{_fmt(y + 4)}" {font} '
                   f'text-anchor="end">{t:g}</text>')
    out.append(f'<text x="{MARGIN_L + plot_w / 2:.1f}" y="{HEIGHT - 12}" '
               f'{font} text-anchor="middle">{xlabel}</text>')
    out.append(f'<text x="18" y="{MARGIN_T + plot_h / 2:.1f}" {font} '
               f'text-anchor="middle" transform="rotate(-90 18 '
               f'{MARGIN_T + plot_h / 2:.1f})">{ylabel}</text>')
    if title:
        out.append(f'<text x="{MARGIN_L + plot_w / 2:.1f}" y="24" {font} '
                   f'text-anchor="middle">{title}</text>')

    for i, s in enumerate(series):
        color = PALETTE[i % len(PALETTE)]
        pts = " ".join(f"{_fmt(px(float(x)))},{_fmt(py(float(y)))}"
                       for x, y in zip(np.asarray(s.x), np.asarray(s.y)))
        out.append(f'<polyline points="{pts}" fill="none" stroke="{color}" '
                   f'stroke-width="1.5"/>')
        if s.label:
            ly = MARGIN_T + 16 + 16 * i
            lx = WIDTH - MARGIN_R - 150
            out.append(f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 22}" '
                       f'y2="{ly - 4}" stroke="{color}" stroke-width="1.5"/>')
            out.append(f'<text x="{lx + 28}" y="{ly}" {font}>{s.label}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def spectrum_series(tables, column: str = "R"):
    """One Series per table, labeled from metadata."""
    out = []
    for i, t in enumerate(tables):
        label = t.metadata.get("label", "") if t.metadata else ""
        if not label and len(tables) > 1:
            label = f"run {i}"
        out.append(Series(t.delta_over_gamma, getattr(t, column), label))
    return out


def write_svg(path, svg_text: str) -> None:
    Path(path).write_bytes(svg_text.encode("utf-8"))
