"""Minimal deterministic SVG line plots for reports."""
from __future__ import annotations

from xml.sax.saxutils import escape

import numpy as np

from .errors import InputError

# kind -> (x scale, x label, y label); inputs are SI, display units here
KINDS = {
    "magnitude": (1e-9, "Frequency (GHz)", "Magnitude (dB)"),
    "phase": (1e-9, "Frequency (GHz)", "Phase (rad)"),
    "impedance": (1e9, "Time (ns)", "Impedance (Ω)"),
    "envelope": (1e9, "Time (ns)", "Amplitude (V)"),
}
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf")
W, H = 640, 400
ML, MR, MT, MB = 70, 20, 20, 50


def _num(v: float) -> str:
    return f"{v:.2f}".rstrip("0").rstrip(".")


def _ticks(lo: float, hi: float, n: int = 5):
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / n
    mag = 10 ** np.floor(np.log10(raw))
    step = next(m * mag for m in (1, 2, 5, 10) if m * mag >= raw)
    start = np.ceil(lo / step) * step
    ticks = np.arange(start, hi + step * 1e-9, step)
    return [float(t) for t in ticks], step


def _label(v: float, step: float) -> str:
    digits = max(0, int(-np.floor(np.log10(step)))) if step < 1 else 0
    s = f"{v:.{digits}f}"
    return "0" if s.lstrip("-") == f"{0:.{digits}f}" else s


def render_plot(series, kind: str, title: str | None = None) -> str:
    """SVG document for ``series``: a mapping or list of ``(label, x, y)``.

    ``x`` is in SI units (Hz or s); it is rescaled to GHz or ns for display.
    Output depends only on the input values, so identical input gives
    byte-identical documents.
    """
    if kind not in KINDS:
        raise InputError(f"plot kind must be one of {sorted(KINDS)}, got {kind!r}")
    if isinstance(series, dict):
        items = [(label, *xy) for label, xy in series.items()]
    else:
        items = [tuple(s) for s in series]
    if not items:
        raise InputError("nothing to plot: empty series")
    xscale, xlabel, ylabel = KINDS[kind]
    traces = []
    for label, x, y in items:
        x = np.asarray(x, dtype=float) * xscale
        y = np.asarray(y, dtype=float)
        if x.size == 0 or x.shape != y.shape:
            raise InputError(f"series {label!r} is empty or has mismatched x/y")
        ok = np.isfinite(x) & np.isfinite(y)
        traces.append((str(label), x[ok], y[ok]))
    xs = np.concatenate([t[1] for t in traces])
    ys = np.concatenate([t[2] for t in traces])
    if xs.size == 0:
        raise InputError("nothing to plot: no finite samples")
    xt, xstep = _ticks(float(xs.min()), float(xs.max()))
    yt, ystep = _ticks(float(ys.min()), float(ys.max()))
    x0, x1 = min(xt[0], xs.min()), max(xt[-1], xs.max())
    y0, y1 = min(yt[0], ys.min()), max(yt[-1], ys.max())
    x1 = x1 if x1 > x0 else x0 + 1
    y1 = y1 if y1 > y0 else y0 + 1
    pw, ph = W - ML - MR, H - MT - MB

    def px(v):
        return ML + (v - x0) / (x1 - x0) * pw

    def py(v):
        return MT + ph - (v - y0) / (y1 - y0) * ph

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{W}" height="{H}" '
        f'viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>',
    ]
    if title:
        out.append(f'<title>{escape(title)}</title>')
    out.append(f'<rect x="{ML}" y="{MT}" width="{pw}" height="{ph}" fill="none" stroke="black"/>')
    for v in xt:
        X = _num(px(v))
        out.append(f'<line x1="{X}" y1="{MT + ph}" x2="{X}" y2="{MT + ph + 5}" stroke="black"/>')
        out.append(f'<text x="{X}" y="{MT + ph + 18}" text-anchor="middle">{_label(v, xstep)}</text>')
    for v in yt:
        Y = _num(py(v))
        out.append(f'<line x1="{ML - 5}" y1="{Y}" x2="{ML}" y2="{Y}" stroke="black"/>')
        out.append(f'<text x="{ML - 8}" y="{Y}" text-anchor="end" dominant-baseline="middle">'
                   f'{_label(v, ystep)}</text>')
    out.append(f'<text x="{ML + pw / 2:g}" y="{H - 10}" text-anchor="middle">{escape(xlabel)}</text>')
    out.append(f'<text x="15" y="{MT + ph / 2:g}" text-anchor="middle" '
               f'transform="rotate(-90 15 {MT + ph / 2:g})">{escape(ylabel)}</text>')
    for i, (label, x, y) in enumerate(traces):
        color = COLORS[i % len(COLORS)]
        pts = " ".join(f"{_num(px(a))},{_num(py(b))}" for a, b in zip(x, y))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        ly = MT + 15 + 16 * i
        out.append(f'<line x1="{ML + pw - 140}" y1="{ly}" x2="{ML + pw - 115}" y2="{ly}" '
                   f'stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{ML + pw - 110}" y="{ly}" dominant-baseline="middle">{escape(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
