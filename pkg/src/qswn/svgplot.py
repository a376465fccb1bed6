"""Minimal dependency-free SVG plotting for sweep and profile outputs.

Deliberately small: axes, ticks, one series with optional error bars, or a
scatter.  Every plotted number comes straight from the CSV data."""

from __future__ import annotations

import math

_W, _H = 640, 440
_ML, _MR, _MT, _MB = 70, 20, 40, 55


def _ticks(lo: float, hi: float, target: int = 6) -> list[float]:
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / target
    mag = 10.0 ** math.floor(math.log10(raw))
    for m in (1, 2, 2.5, 5, 10):
        if raw <= m * mag:
            step = m * mag
            break
    first = math.ceil(lo / step) * step
    out = []
    t = first
    while t <= hi + 1e-12 * step:
        out.append(round(t, 12))
        t += step
    return out


class _Frame:
    def __init__(self, xs, ys):
        self.xlo, self.xhi = min(xs), max(xs)
        self.ylo, self.yhi = min(ys), max(ys)
        if self.xhi == self.xlo:
            self.xhi += 1.0
        if self.yhi == self.ylo:
            self.yhi += 1.0
        pad = 0.05 * (self.yhi - self.ylo)
        self.ylo -= pad
        self.yhi += pad

    def px(self, x: float) -> float:
        return _ML + (x - self.xlo) / (self.xhi - self.xlo) * (_W - _ML - _MR)

    def py(self, y: float) -> float:
        return _H - _MB - (y - self.ylo) / (self.yhi - self.ylo) * (_H - _MT - _MB)


def _axes(frame: _Frame, xlabel: str, ylabel: str, title: str) -> list[str]:
    e = []
    e.append(
        f'<rect x="{_ML}" y="{_MT}" width="{_W - _ML - _MR}" '
        f'height="{_H - _MT - _MB}" fill="none" stroke="black"/>'
    )
    for t in _ticks(frame.xlo, frame.xhi):
        x = frame.px(t)
        e.append(f'<line x1="{x:.2f}" y1="{_H - _MB}" x2="{x:.2f}" y2="{_H - _MB + 5}" stroke="black"/>')
        e.append(f'<text x="{x:.2f}" y="{_H - _MB + 20}" font-size="12" text-anchor="middle">{t:g}</text>')
    for t in _ticks(frame.ylo, frame.yhi):
        y = frame.py(t)
        e.append(f'<line x1="{_ML - 5}" y1="{y:.2f}" x2="{_ML}" y2="{y:.2f}" stroke="black"/>')
        e.append(f'<text x="{_ML - 8}" y="{y + 4:.2f}" font-size="12" text-anchor="end">{t:g}</text>')
    e.append(f'<text x="{(_ML + _W - _MR) / 2}" y="{_H - 12}" font-size="14" text-anchor="middle">{xlabel}</text>')
    e.append(
        f'<text x="18" y="{(_MT + _H - _MB) / 2}" font-size="14" text-anchor="middle" '
        f'transform="rotate(-90 18 {(_MT + _H - _MB) / 2})">{ylabel}</text>'
    )
    e.append(f'<text x="{_W / 2}" y="24" font-size="15" text-anchor="middle">{title}</text>')
    return e


def _document(elements: list[str]) -> str:
    body = "\n".join(elements)
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}">\n<rect width="100%" height="100%" fill="white"/>\n'
        f"{body}\n</svg>\n"
    )


def line_plot(x, y, yerr=None, xlabel: str = "", ylabel: str = "", title: str = "") -> str:
    """Polyline with markers and optional error bars."""
    xs, ys = list(map(float, x)), list(map(float, y))
    lo = ys if yerr is None else [v - e for v, e in zip(ys, yerr)] + ys
    hi = ys if yerr is None else [v + e for v, e in zip(ys, yerr)] + ys
    frame = _Frame(xs, list(lo) + list(hi))
    e = _axes(frame, xlabel, ylabel, title)
    pts = " ".join(f"{frame.px(a):.2f},{frame.py(b):.2f}" for a, b in zip(xs, ys))
    e.append(f'<polyline points="{pts}" fill="none" stroke="#1f4e9c" stroke-width="1.5"/>')
    for i, (a, b) in enumerate(zip(xs, ys)):
        px, py = frame.px(a), frame.py(b)
        if yerr is not None and yerr[i] > 0:
            y1, y2 = frame.py(b - yerr[i]), frame.py(b + yerr[i])
            e.append(f'<line x1="{px:.2f}" y1="{y1:.2f}" x2="{px:.2f}" y2="{y2:.2f}" stroke="#1f4e9c"/>')
            e.append(f'<line x1="{px - 3:.2f}" y1="{y1:.2f}" x2="{px + 3:.2f}" y2="{y1:.2f}" stroke="#1f4e9c"/>')
            e.append(f'<line x1="{px - 3:.2f}" y1="{y2:.2f}" x2="{px + 3:.2f}" y2="{y2:.2f}" stroke="#1f4e9c"/>')
        e.append(f'<circle cx="{px:.2f}" cy="{py:.2f}" r="2.5" fill="#1f4e9c"/>')
    return _document(e)


def scatter_plot(x, y, xlabel: str = "", ylabel: str = "", title: str = "") -> str:
    """Plain scatter, used for per-eigenstate entropy profiles."""
    xs, ys = list(map(float, x)), list(map(float, y))
    frame = _Frame(xs, ys)
    e = _axes(frame, xlabel, ylabel, title)
    for a, b in zip(xs, ys):
        e.append(f'<circle cx="{frame.px(a):.2f}" cy="{frame.py(b):.2f}" r="1.8" fill="#b03030" fill-opacity="0.6"/>')
    return _document(e)
