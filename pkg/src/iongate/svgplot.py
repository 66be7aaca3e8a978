"""Minimal deterministic SVG line plots (no plotting dependency).

Output is a single self-contained <svg> element with fixed formatting, so
identical inputs give byte-identical files.
"""
from __future__ import annotations

import numpy as np

from .errors import ConfigError

_PALETTE = ("#1f6feb", "#d1242f", "#1a7f37", "#9a6700", "#8250df", "#bf3989")
_W, _H = 640, 400
_ML, _MR, _MT, _MB = 72, 16, 34, 52


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def _ticks(lo: float, hi: float, n: int = 5) -> np.ndarray:
    if hi <= lo:
        hi = lo + 1.0
    return np.linspace(lo, hi, n)


def line_plot(xs, series, labels, title: str, xlabel: str, ylabel: str) -> str:
    """Render one or more (y over common x) series; returns the SVG text."""
    xs = np.asarray(xs, float)
    series = [np.asarray(ys, float) for ys in series]
    if not series or any(len(ys) != len(xs) for ys in series):
        raise ConfigError("each series must match the x grid")
    if len(labels) != len(series):
        raise ConfigError("one label per series")
    xlo, xhi = float(xs.min()), float(xs.max())
    ylo = min(float(ys.min()) for ys in series)
    yhi = max(float(ys.max()) for ys in series)
    if yhi == ylo:
        ylo, yhi = ylo - 0.5, yhi + 0.5
    pad = 0.04 * (yhi - ylo)
    ylo, yhi = ylo - pad, yhi + pad
    if xhi == xlo:
        xlo, xhi = xlo - 0.5, xhi + 0.5

    def px(x: float) -> float:
        return _ML + (x - xlo) / (xhi - xlo) * (_W - _ML - _MR)

    def py(y: float) -> float:
        return _H - _MB - (y - ylo) / (yhi - ylo) * (_H - _MT - _MB)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}" font-family="sans-serif" font-size="12">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
        f'<text x="{_W / 2:.1f}" y="20" text-anchor="middle" font-size="14">{title}</text>',
    ]
    for tx in _ticks(xlo, xhi):
        out.append(f'<line x1="{px(tx):.2f}" y1="{_MT}" x2="{px(tx):.2f}" '
                   f'y2="{_H - _MB}" stroke="#dddddd" stroke-width="1"/>')
        out.append(f'<text x="{px(tx):.2f}" y="{_H - _MB + 18}" '
                   f'text-anchor="middle">{_fmt(tx)}</text>')
    for ty in _ticks(ylo, yhi):
        out.append(f'<line x1="{_ML}" y1="{py(ty):.2f}" x2="{_W - _MR}" '
                   f'y2="{py(ty):.2f}" stroke="#dddddd" stroke-width="1"/>')
        out.append(f'<text x="{_ML - 6}" y="{py(ty) + 4:.2f}" '
                   f'text-anchor="end">{_fmt(ty)}</text>')
    out.append(f'<rect x="{_ML}" y="{_MT}" width="{_W - _ML - _MR}" '
               f'height="{_H - _MT - _MB}" fill="none" stroke="#333333"/>')
    out.append(f'<text x="{_W / 2:.1f}" y="{_H - 12}" text-anchor="middle">{xlabel}</text>')
    out.append(f'<text x="16" y="{_H / 2:.1f}" text-anchor="middle" '
               f'transform="rotate(-90 16 {_H / 2:.1f})">{ylabel}</text>')
    for si, ys in enumerate(series):
        color = _PALETTE[si % len(_PALETTE)]
        pts = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xs, ys))
        out.append(f'<polyline points="{pts}" fill="none" stroke="{color}" '
                   f'stroke-width="1.5"/>')
        ly = _MT + 16 + 16 * si
        out.append(f'<line x1="{_W - _MR - 150}" y1="{ly}" x2="{_W - _MR - 126}" '
                   f'y2="{ly}" stroke="{color}" stroke-width="1.5"/>')
        out.append(f'<text x="{_W - _MR - 120}" y="{ly + 4}">{labels[si]}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def save_plot(path, xs, series, labels, title: str, xlabel: str, ylabel: str) -> None:
    text = line_plot(xs, series, labels, title, xlabel, ylabel)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
