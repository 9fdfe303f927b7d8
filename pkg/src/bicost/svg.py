"""Minimal deterministic SVG line plots (no plotting dependency)."""
from __future__ import annotations

import math

import numpy as np

__all__ = ["emit_svg", "render_svg"]

_COLORS = ("#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf")
_DASH = {"solid": None, "dashed": "8,4", "dashdot": "8,3,2,3", "dotted": "2,3"}
W, H = 640, 420
ML, MR, MT, MB = 70, 170, 40, 55


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _ticks(lo, hi, n=5):
    if hi == lo:
        return [lo]
    step = 10 ** math.floor(math.log10((hi - lo) / n))
    for m in (1, 2, 5, 10):
        if (hi - lo) / (step * m) <= n:
            step *= m
            break
    start = math.ceil(lo / step) * step
    return [start + i * step for i in range(int((hi - start) / step + 1e-9) + 1)]


def render_svg(x, series, title: str = "", xlabel: str = "", ylabel: str = "",
               logx: bool = False, logy: bool = False) -> str:
    """Return SVG text for ``series = [(label, y, style), ...]`` sharing the abscissa ``x``.

    ``style`` is one of ``solid``, ``dashed``, ``dashdot`` or ``dotted``.
    """
    x = np.asarray(x, dtype=float)
    if not series:
        raise ValueError("no series to plot")
    if x.size < 2:
        raise ValueError("need at least 2 points per series")
    ys = []
    for label, y, style in series:
        y = np.asarray(y, dtype=float)
        if y.shape != x.shape:
            raise ValueError(f"series {label!r} does not match the abscissa")
        if style not in _DASH:
            raise ValueError(f"unknown style {style!r}")
        ys.append(y)
    tx = np.log10(x) if logx else x
    tys = [np.log10(y) if logy else y for y in ys]
    finite = np.concatenate([ty[np.isfinite(ty)] for ty in tys])
    if finite.size == 0:
        raise ValueError("no finite values to plot")
    x0, x1 = float(np.min(tx)), float(np.max(tx))
    y0, y1 = float(np.min(finite)), float(np.max(finite))
    if y1 == y0:
        y0, y1 = y0 - 0.5 * max(abs(y0), 1.0), y1 + 0.5 * max(abs(y1), 1.0)
    if x1 == x0:
        x1 = x0 + 1.0
    pw, ph = W - ML - MR, H - MT - MB

    def px(v):
        return ML + (v - x0) / (x1 - x0) * pw

    def py(v):
        return MT + ph - (v - y0) / (y1 - y0) * ph

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">',
           f'<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>',
           f'<rect x="{ML}" y="{MT}" width="{pw}" height="{ph}" fill="none" stroke="black"/>']
    for v in _ticks(x0, x1):
        X = _fmt(px(v))
        lab = f"1e{v:g}" if logx else f"{v:g}"
        out.append(f'<line x1="{X}" y1="{MT + ph}" x2="{X}" y2="{MT + ph + 5}" stroke="black"/>')
        out.append(f'<text x="{X}" y="{MT + ph + 18}" font-size="11" text-anchor="middle">{lab}</text>')
    for v in _ticks(y0, y1):
        Y = _fmt(py(v))
        lab = f"1e{v:g}" if logy else f"{v:.4g}"
        out.append(f'<line x1="{ML - 5}" y1="{Y}" x2="{ML}" y2="{Y}" stroke="black"/>')
        out.append(f'<text x="{ML - 8}" y="{Y}" font-size="11" text-anchor="end" dominant-baseline="middle">{lab}</text>')
    if title:
        out.append(f'<text x="{ML + pw / 2:.2f}" y="{MT - 14}" font-size="14" text-anchor="middle">{_esc(title)}</text>')
    if xlabel:
        out.append(f'<text x="{ML + pw / 2:.2f}" y="{H - 12}" font-size="12" text-anchor="middle">{_esc(xlabel)}</text>')
    if ylabel:
        out.append(f'<text x="16" y="{MT + ph / 2:.2f}" font-size="12" text-anchor="middle" '
                   f'transform="rotate(-90 16 {MT + ph / 2:.2f})">{_esc(ylabel)}</text>')
    for i, ((label, _, style), ty) in enumerate(zip(series, tys)):
        color = _COLORS[i % len(_COLORS)]
        dash = _DASH[style]
        extra = f' stroke-dasharray="{dash}"' if dash else ""
        m = np.isfinite(ty) & np.isfinite(tx)
        pts = " ".join(f"{_fmt(px(a))},{_fmt(py(b))}" for a, b in zip(tx[m], ty[m]))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5"{extra} points="{pts}"/>')
        ly = MT + 10 + 18 * i
        lx = ML + pw + 12
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 28}" y2="{ly}" stroke="{color}" stroke-width="1.5"{extra}/>')
        out.append(f'<text x="{lx + 34}" y="{ly}" font-size="11" dominant-baseline="middle">{_esc(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _esc(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def emit_svg(path, x, series, **kw) -> None:
    text = render_svg(x, series, **kw)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
