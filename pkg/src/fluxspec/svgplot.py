"""Minimal self-contained SVG rendering: spectrum line plots and map
heatmaps with model-curve overlays. No plotting library, no external
assets; output is deterministic up to the version banner comment.
"""

from __future__ import annotations

import numpy as np

from . import __version__

WIDTH, HEIGHT = 860, 600
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 70, 30, 40, 55

_CURVE_COLORS = ("#000000", "#ffffff", "#d62728", "#1f77b4", "#2ca02c",
                 "#9467bd", "#ff7f0e", "#8c564b")


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def _axis_ticks(lo: float, hi: float, n: int = 6) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    raw = np.linspace(lo, hi, n)
    return [float(t) for t in raw]


class _Canvas:
    def __init__(self, title, xlabel, ylabel, xlim, ylim):
        self.parts: list[str] = []
        self.xlim, self.ylim = xlim, ylim
        self.parts.append(
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" '
            f'height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">')
        self.parts.append(f"<!-- fluxspec {__version__} -->")
        self.parts.append(
            f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>')
        self.parts.append(
            f'<text x="{WIDTH // 2}" y="24" text-anchor="middle" '
            f'font-family="sans-serif" font-size="16">{title}</text>')
        self.parts.append(
            f'<text x="{WIDTH // 2}" y="{HEIGHT - 12}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="13">{xlabel}</text>')
        self.parts.append(
            f'<text x="18" y="{HEIGHT // 2}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="13" '
            f'transform="rotate(-90 18 {HEIGHT // 2})">{ylabel}</text>')

    def x_px(self, x: float) -> float:
        lo, hi = self.xlim
        frac = (x - lo) / (hi - lo) if hi > lo else 0.5
        return MARGIN_L + frac * (WIDTH - MARGIN_L - MARGIN_R)

    def y_px(self, y: float) -> float:
        lo, hi = self.ylim
        frac = (y - lo) / (hi - lo) if hi > lo else 0.5
        return HEIGHT - MARGIN_B - frac * (HEIGHT - MARGIN_T - MARGIN_B)

    def axes(self):
        x0, x1 = MARGIN_L, WIDTH - MARGIN_R
        y0, y1 = HEIGHT - MARGIN_B, MARGIN_T
        self.parts.append(
            f'<rect x="{x0}" y="{y1}" width="{x1 - x0}" height="{y0 - y1}" '
            f'fill="none" stroke="black" stroke-width="1"/>')
        for t in _axis_ticks(*self.xlim):
            px = self.x_px(t)
            self.parts.append(
                f'<line x1="{_fmt(px)}" y1="{y0}" x2="{_fmt(px)}" y2="{y0 + 5}" '
                f'stroke="black"/>')
            self.parts.append(
                f'<text x="{_fmt(px)}" y="{y0 + 20}" text-anchor="middle" '
                f'font-family="sans-serif" font-size="11">{_fmt(t)}</text>')
        for t in _axis_ticks(*self.ylim):
            py = self.y_px(t)
            self.parts.append(
                f'<line x1="{x0 - 5}" y1="{_fmt(py)}" x2="{x0}" y2="{_fmt(py)}" '
                f'stroke="black"/>')
            self.parts.append(
                f'<text x="{x0 - 8}" y="{_fmt(py + 4)}" text-anchor="end" '
                f'font-family="sans-serif" font-size="11">{_fmt(t)}</text>')

    def polyline(self, xs, ys, color, dashed=False, width=1.5):
        pts = " ".join(f"{_fmt(self.x_px(x))},{_fmt(self.y_px(y))}"
                       for x, y in zip(xs, ys) if np.isfinite(x) and np.isfinite(y))
        dash = ' stroke-dasharray="6,4"' if dashed else ""
        self.parts.append(
            f'<polyline points="{pts}" fill="none" stroke="{color}" '
            f'stroke-width="{width}"{dash}/>')

    def legend(self, entries):
        x = MARGIN_L + 12
        y = MARGIN_T + 16
        for label, color, dashed in entries:
            dash = ' stroke-dasharray="6,4"' if dashed else ""
            self.parts.append(
                f'<line x1="{x}" y1="{y - 4}" x2="{x + 26}" y2="{y - 4}" '
                f'stroke="{color}" stroke-width="2"{dash}/>')
            self.parts.append(
                f'<text x="{x + 32}" y="{y}" font-family="sans-serif" '
                f'font-size="12">{label}</text>')
            y += 16

    def render(self) -> str:
        return "\n".join(self.parts + ["</svg>"]) + "\n"


def _viridis(v: float) -> str:
    """Coarse viridis-like map for v in [0, 1]."""
    stops = np.array([
        (0.267, 0.005, 0.329), (0.283, 0.141, 0.458), (0.254, 0.265, 0.530),
        (0.207, 0.372, 0.553), (0.164, 0.471, 0.558), (0.128, 0.567, 0.551),
        (0.135, 0.659, 0.518), (0.267, 0.749, 0.441), (0.478, 0.821, 0.318),
        (0.741, 0.873, 0.150), (0.993, 0.906, 0.144)])
    v = min(max(v, 0.0), 1.0) * (len(stops) - 1)
    i = int(v)
    frac = v - i
    lo = stops[i]
    hi = stops[min(i + 1, len(stops) - 1)]
    rgb = lo + frac * (hi - lo)
    return "#%02x%02x%02x" % tuple(int(round(255 * c)) for c in rgb)


def line_plot(series, title="", xlabel="flux (Phi0)", ylabel="frequency (GHz)") -> str:
    """series: list of (label, x array, y array, color?, dashed?)."""
    xs_all = np.concatenate([np.asarray(s[1], dtype=float) for s in series])
    ys_all = np.concatenate([np.asarray(s[2], dtype=float) for s in series])
    pad = 0.05 * (ys_all.max() - ys_all.min() or 1.0)
    canvas = _Canvas(title, xlabel, ylabel,
                     (float(xs_all.min()), float(xs_all.max())),
                     (float(ys_all.min() - pad), float(ys_all.max() + pad)))
    canvas.axes()
    legend = []
    for i, entry in enumerate(series):
        label, xs, ys = entry[0], entry[1], entry[2]
        color = entry[3] if len(entry) > 3 else _CURVE_COLORS[2 + i % 6]
        dashed = entry[4] if len(entry) > 4 else False
        canvas.polyline(np.asarray(xs, float), np.asarray(ys, float), color, dashed)
        legend.append((label, color, dashed))
    canvas.legend(legend)
    return canvas.render()


def heatmap_with_curves(smap, curves=(), title="", max_cells: int = 40000) -> str:
    """Normalized-map heatmap with optional model curves.

    curves: list of (label, flux array, freq array, color?, dashed?).
    Large maps are stride-downsampled deterministically to max_cells.
    """
    mag = smap.magnitude
    nf, nx = mag.shape
    stride_f = max(1, int(np.ceil(np.sqrt(nf * nx / max_cells) )))
    sub = mag[::stride_f, ::stride_f]
    freq = smap.freq_ghz[::stride_f]
    flux = smap.flux[::stride_f]
    canvas = _Canvas(title, "flux (Phi0)", "frequency (GHz)",
                     (float(smap.flux.min()), float(smap.flux.max())),
                     (float(smap.freq_ghz.min()), float(smap.freq_ghz.max())))
    lo, hi = float(sub.min()), float(sub.max())
    span = hi - lo or 1.0
    for i in range(len(freq)):
        for j in range(len(flux)):
            x = canvas.x_px(flux[j])
            y = canvas.y_px(freq[i])
            x2 = canvas.x_px(flux[min(j + 1, len(flux) - 1)]) if j + 1 < len(flux) \
                else canvas.x_px(float(smap.flux.max()))
            y2 = canvas.y_px(freq[min(i + 1, len(freq) - 1)]) if i + 1 < len(freq) \
                else canvas.y_px(float(smap.freq_ghz.max()))
            w = max(abs(x2 - x), 1.0)
            h = max(abs(y - y2), 1.0)
            color = _viridis((float(sub[i, j]) - lo) / span)
            canvas.parts.append(
                f'<rect x="{_fmt(x)}" y="{_fmt(min(y, y2))}" width="{_fmt(w)}" '
                f'height="{_fmt(h)}" fill="{color}"/>')
    legend = []
    for i, entry in enumerate(curves):
        label, xs, ys = entry[0], entry[1], entry[2]
        color = entry[3] if len(entry) > 3 else _CURVE_COLORS[i % len(_CURVE_COLORS)]
        dashed = entry[4] if len(entry) > 4 else True
        canvas.polyline(np.asarray(xs, float), np.asarray(ys, float), color, dashed)
        legend.append((label, color, dashed))
    canvas.axes()
    canvas.legend(legend)
    return canvas.render()
