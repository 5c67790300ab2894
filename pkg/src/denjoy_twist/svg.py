"""Minimal standalone SVG line charts (polylines, axes, ticks, legend)."""

from __future__ import annotations

from xml.sax.saxutils import escape

import numpy as np

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e")


def _ticks(lo: float, hi: float, n: int = 5) -> np.ndarray:
    if hi <= lo:
        return np.array([lo])
    raw = (hi - lo) / n
    mag = 10.0 ** np.floor(np.log10(raw))
    step = min((m * mag for m in (1, 2, 5, 10) if m * mag >= raw), default=raw)
    start = np.ceil(lo / step) * step
    return np.arange(start, hi + 0.5 * step, step)


def line_chart(
    series,
    title: str = "",
    xlabel: str = "",
    ylabel: str = "",
    markers=None,
    width: int = 720,
    height: int = 420,
) -> str:
    """Render ``series`` = [(label, xs, ys), ...] as an SVG document string.

    ``markers`` is an optional list of (x, y) points drawn as small circles.
    """
    ml, mr, mt, mb = 70, 20, 40, 50
    pw, ph = width - ml - mr, height - mt - mb
    xs_all = np.concatenate([np.asarray(s[1], float) for s in series])
    ys_all = np.concatenate([np.asarray(s[2], float) for s in series])
    if markers:
        m = np.asarray(markers, float)
        xs_all = np.concatenate([xs_all, m[:, 0]])
        ys_all = np.concatenate([ys_all, m[:, 1]])
    x0, x1 = float(xs_all.min()), float(xs_all.max())
    y0, y1 = float(ys_all.min()), float(ys_all.max())
    if x1 == x0:
        x1 = x0 + 1.0
    pad = 0.05 * (y1 - y0) if y1 > y0 else 0.5
    y0, y1 = y0 - pad, y1 + pad

    def sx(x):
        return ml + (np.asarray(x) - x0) / (x1 - x0) * pw

    def sy(y):
        return mt + (y1 - np.asarray(y)) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.1f}" y="24" text-anchor="middle" font-size="15" '
        f'font-family="sans-serif">{escape(title)}</text>',
        f'<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for t in _ticks(x0, x1):
        X = float(sx(t))
        out.append(f'<line x1="{X:.2f}" y1="{mt + ph}" x2="{X:.2f}" y2="{mt + ph + 5}" stroke="black"/>')
        out.append(
            f'<text x="{X:.2f}" y="{mt + ph + 18}" text-anchor="middle" font-size="11" '
            f'font-family="sans-serif">{t:.4g}</text>'
        )
    for t in _ticks(y0, y1):
        Y = float(sy(t))
        out.append(f'<line x1="{ml - 5}" y1="{Y:.2f}" x2="{ml}" y2="{Y:.2f}" stroke="black"/>')
        out.append(
            f'<text x="{ml - 8}" y="{Y + 4:.2f}" text-anchor="end" font-size="11" '
            f'font-family="sans-serif">{t:.4g}</text>'
        )
    out.append(
        f'<text x="{ml + pw / 2:.1f}" y="{height - 10}" text-anchor="middle" font-size="12" '
        f'font-family="sans-serif">{escape(xlabel)}</text>'
    )
    out.append(
        f'<text x="16" y="{mt + ph / 2:.1f}" text-anchor="middle" font-size="12" font-family="sans-serif" '
        f'transform="rotate(-90 16 {mt + ph / 2:.1f})">{escape(ylabel)}</text>'
    )
    for i, (label, xs, ys) in enumerate(series):
        color = PALETTE[i % len(PALETTE)]
        pts = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(sx(xs), sy(ys)))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.2" points="{pts}"/>')
        ly = mt + 14 + 16 * i
        out.append(f'<line x1="{ml + 10}" y1="{ly}" x2="{ml + 30}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(
            f'<text x="{ml + 36}" y="{ly + 4}" font-size="11" font-family="sans-serif">{escape(label)}</text>'
        )
    for mx, my in markers or ():
        out.append(f'<circle cx="{float(sx(mx)):.2f}" cy="{float(sy(my)):.2f}" r="2.5" fill="black"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
