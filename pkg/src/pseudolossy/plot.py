"""Minimal deterministic SVG scatter for the savings/similarity trade-off.

Hand-rolled rather than delegating to a plotting library so that identical
inputs produce byte-identical files (golden-file friendly).
"""

from __future__ import annotations

from .errors import NoRows

_W, _H = 640, 480
_ML, _MR, _MT, _MB = 70, 20, 20, 50

_COLORS = {
    "prompt": "#1f77b4",
    "canny": "#ff7f0e",
    "canny-color": "#2ca02c",
    "salient": "#d62728",
}
_FALLBACK_COLOR = "#7f7f7f"


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def emit_tradeoff_plot(rows) -> bytes:
    """Scatter of (savings, embedding similarity) per strategy, with legend.

    Rows need .savings, .embed_sim_preview and .strategy (value string).
    """
    rows = [r for r in rows if r.error is None]
    if not rows:
        raise NoRows("nothing to plot")
    xs = [r.savings for r in rows]
    x_min = min(min(xs), 0.0)
    x_max = max(max(xs), 1.0)
    y_min, y_max = 0.0, 1.0

    def px(x):
        return _ML + (x - x_min) / (x_max - x_min) * (_W - _ML - _MR)

    def py(y):
        return _H - _MB - (y - y_min) / (y_max - y_min) * (_H - _MT - _MB)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
        f'<line x1="{_ML}" y1="{_H - _MB}" x2="{_W - _MR}" y2="{_H - _MB}" stroke="black"/>',
        f'<line x1="{_ML}" y1="{_MT}" x2="{_ML}" y2="{_H - _MB}" stroke="black"/>',
        f'<text x="{(_ML + _W - _MR) // 2}" y="{_H - 12}" text-anchor="middle" '
        'font-family="sans-serif" font-size="13">bandwidth savings</text>',
        f'<text x="16" y="{(_MT + _H - _MB) // 2}" text-anchor="middle" '
        'font-family="sans-serif" font-size="13" '
        f'transform="rotate(-90 16 {(_MT + _H - _MB) // 2})">embedding similarity</text>',
    ]
    for i in range(5):
        xv = x_min + (x_max - x_min) * i / 4
        yv = y_min + (y_max - y_min) * i / 4
        out.append(
            f'<text x="{_fmt(px(xv))}" y="{_H - _MB + 18}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11">{_fmt(xv)}</text>'
        )
        out.append(
            f'<text x="{_ML - 8}" y="{_fmt(py(yv) + 4)}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11">{_fmt(yv)}</text>'
        )
    # data markers: one <circle> per row
    for r in rows:
        color = _COLORS.get(r.strategy, _FALLBACK_COLOR)
        out.append(
            f'<circle cx="{_fmt(px(r.savings))}" cy="{_fmt(py(r.embed_sim_preview))}" '
            f'r="4" fill="{color}" fill-opacity="0.7"/>'
        )
    # legend: rect swatches so circles stay a pure data-count
    strategies = sorted({r.strategy for r in rows})
    for i, s in enumerate(strategies):
        y = _MT + 10 + i * 18
        color = _COLORS.get(s, _FALLBACK_COLOR)
        out.append(f'<rect x="{_ML + 10}" y="{y}" width="10" height="10" fill="{color}"/>')
        out.append(
            f'<text x="{_ML + 26}" y="{y + 9}" font-family="sans-serif" font-size="12">{s}</text>'
        )
    out.append("</svg>")
    return ("\n".join(out) + "\n").encode("utf-8")
