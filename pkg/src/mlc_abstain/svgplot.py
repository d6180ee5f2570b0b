"""Minimal SVG 1.1 line charts for sweep results: a loss panel and an abstention panel."""

from __future__ import annotations

from xml.sax.saxutils import escape

import numpy as np

COLORS = {"partial": "#1f77b4", "MLC": "#d62728", "ABS": "#2ca02c"}
PANEL_W, PANEL_H = 360, 260
MARGIN = dict(left=60, right=20, top=30, bottom=45)

Y_LABELS = {
    "hamming": "Hamming loss (100 L / m)",
    "rank": "rank loss (L / m)",
    "f1": "expected F-measure",
}


def _nice_ticks(lo, hi, n=5):
    if hi <= lo:
        hi = lo + 1.0
    return np.linspace(lo, hi, n)


def _panel(x0, title, ylabel, series, xlim, ylim):
    (xa, xb), (ya, yb) = xlim, ylim
    w = PANEL_W - MARGIN["left"] - MARGIN["right"]
    h = PANEL_H - MARGIN["top"] - MARGIN["bottom"]
    left, top = x0 + MARGIN["left"], MARGIN["top"]

    def sx(v):
        return left + (v - xa) / (xb - xa) * w if xb > xa else left + w / 2

    def sy(v):
        return top + h - (v - ya) / (yb - ya) * h

    out = [
        f'<text x="{left + w / 2:.1f}" y="18" text-anchor="middle" font-size="13">{escape(title)}</text>',
        f'<rect x="{left}" y="{top}" width="{w}" height="{h}" fill="none" stroke="#333"/>',
    ]
    for t in _nice_ticks(xa, xb):
        out.append(f'<line x1="{sx(t):.1f}" y1="{top + h}" x2="{sx(t):.1f}" y2="{top + h + 4}" stroke="#333"/>')
        out.append(f'<text x="{sx(t):.1f}" y="{top + h + 16}" text-anchor="middle" font-size="10">{t:.3g}</text>')
    for t in _nice_ticks(ya, yb):
        out.append(f'<line x1="{left - 4}" y1="{sy(t):.1f}" x2="{left}" y2="{sy(t):.1f}" stroke="#333"/>')
        out.append(f'<text x="{left - 6}" y="{sy(t) + 3:.1f}" text-anchor="end" font-size="10">{t:.3g}</text>')
    out.append(f'<text x="{left + w / 2:.1f}" y="{top + h + 34}" text-anchor="middle" font-size="11">cost c</text>')
    out.append(
        f'<text x="{x0 + 14}" y="{top + h / 2:.1f}" text-anchor="middle" font-size="11" '
        f'transform="rotate(-90 {x0 + 14} {top + h / 2:.1f})">{escape(ylabel)}</text>'
    )
    for name, (xs, ys) in series.items():
        pts = " ".join(f"{sx(x):.1f},{sy(y):.1f}" for x, y in zip(xs, ys))
        out.append(f'<polyline points="{pts}" fill="none" stroke="{COLORS.get(name, "#555")}" stroke-width="1.8"/>')
    return out


def render_sweep_svg(summary, loss_kind: str, penalty: str) -> str:
    """SVG document with loss and abstention-size panels versus the cost c."""
    names = [s for s in ("partial", "MLC", "ABS") if s in summary]
    cs = np.concatenate([summary[s]["c"] for s in names])
    xlim = (float(cs.min()), float(cs.max()))
    losses = {s: (summary[s]["c"], summary[s]["gen_loss"]) for s in names}
    vals = np.concatenate([v for _, v in losses.values()])
    pad = 0.05 * (vals.max() - vals.min() or 1.0)
    ylim = (float(vals.min() - pad), float(vals.max() + pad))
    abst = {s: (summary[s]["c"], summary[s]["abstention_pct"]) for s in names}

    width = 2 * PANEL_W
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{PANEL_H + 30}" '
        f'viewBox="0 0 {width} {PANEL_H + 30}" font-family="sans-serif">',
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    parts += _panel(0, f"{loss_kind} / {penalty}", Y_LABELS[loss_kind], losses, xlim, ylim)
    parts += _panel(PANEL_W, "abstention size", "abstention (%)", abst, xlim, (0.0, 100.0))
    x = MARGIN["left"]
    for name in names:
        parts.append(f'<line x1="{x}" y1="{PANEL_H + 12}" x2="{x + 20}" y2="{PANEL_H + 12}" stroke="{COLORS[name]}" stroke-width="2"/>')
        parts.append(f'<text x="{x + 25}" y="{PANEL_H + 16}" font-size="11">{name}</text>')
        x += 90
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
