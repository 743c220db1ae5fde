"""Minimal standalone SVG line plots for experiment tables."""
from __future__ import annotations

from xml.sax.saxutils import escape

__all__ = ["emit_svg", "error_curve_svg", "sweep_svg"]

_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf", "#7f7f7f")
W, H = 640, 420
L, R, T, B = 70, 160, 40, 55


def _ticks(lo, hi, n=5):
    if hi == lo:
        return [lo]
    step = (hi - lo) / (n - 1)
    return [lo + i * step for i in range(n)]


def emit_svg(rows, x, y, series, title="", xlabel=None, ylabel=None, marker_x=None, marker_label=None):
    """Render ``rows`` (dicts) as one polyline per distinct ``series`` value.

    ``marker_x`` draws a dashed vertical reference line.
    """
    rows = list(rows)
    if not rows:
        raise ValueError("cannot plot an empty table")
    groups = {}
    for r in rows:
        groups.setdefault(r[series], []).append((float(r[x]), float(r[y])))
    xs = [px for pts in groups.values() for px, _ in pts]
    ys = [py for pts in groups.values() for _, py in pts]
    if marker_x is not None:
        xs.append(float(marker_x))
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(0.0, min(ys)), max(ys)
    if x1 == x0:
        x0, x1 = x0 - 0.5, x1 + 0.5
    if y1 == y0:
        y1 = y0 + 1.0
    pw, ph = W - L - R, H - T - B

    def sx(v):
        return L + (v - x0) / (x1 - x0) * pw

    def sy(v):
        return T + ph - (v - y0) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>',
        f'<text x="{W / 2:.1f}" y="22" text-anchor="middle" font-size="14">{escape(title)}</text>',
        f'<line x1="{L}" y1="{T + ph}" x2="{L + pw}" y2="{T + ph}" stroke="black"/>',
        f'<line x1="{L}" y1="{T}" x2="{L}" y2="{T + ph}" stroke="black"/>',
    ]
    for v in _ticks(x0, x1):
        out.append(f'<line x1="{sx(v):.1f}" y1="{T + ph}" x2="{sx(v):.1f}" y2="{T + ph + 5}" stroke="black"/>')
        out.append(f'<text x="{sx(v):.1f}" y="{T + ph + 18}" text-anchor="middle">{v:.4g}</text>')
    for v in _ticks(y0, y1):
        out.append(f'<line x1="{L - 5}" y1="{sy(v):.1f}" x2="{L}" y2="{sy(v):.1f}" stroke="black"/>')
        out.append(f'<text x="{L - 8}" y="{sy(v) + 4:.1f}" text-anchor="end">{v:.4g}</text>')
    out.append(f'<text x="{L + pw / 2:.1f}" y="{H - 12}" text-anchor="middle">{escape(xlabel or x)}</text>')
    out.append(
        f'<text x="18" y="{T + ph / 2:.1f}" text-anchor="middle" transform="rotate(-90 18 {T + ph / 2:.1f})">{escape(ylabel or y)}</text>'
    )
    if marker_x is not None:
        mx = sx(float(marker_x))
        out.append(
            f'<line class="marker" x1="{mx:.1f}" y1="{T}" x2="{mx:.1f}" y2="{T + ph}" stroke="gray" stroke-dasharray="5,4"/>'
        )
        if marker_label:
            out.append(f'<text x="{mx + 4:.1f}" y="{T + 12}" fill="gray">{escape(marker_label)}</text>')
    for i, (name, pts) in enumerate(sorted(groups.items(), key=lambda kv: str(kv[0]))):
        color = _COLORS[i % len(_COLORS)]
        pts = sorted(pts)
        coords = " ".join(f"{sx(a):.1f},{sy(b):.1f}" for a, b in pts)
        if len(pts) > 1:
            out.append(f'<polyline class="series" points="{coords}" fill="none" stroke="{color}" stroke-width="2"/>')
        for a, b in pts:
            out.append(f'<circle cx="{sx(a):.1f}" cy="{sy(b):.1f}" r="3" fill="{color}"/>')
        ly = T + 10 + 18 * i
        out.append(f'<line x1="{W - R + 15}" y1="{ly}" x2="{W - R + 40}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text class="legend" x="{W - R + 45}" y="{ly + 4}">{escape(f"{series}={name}")}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def error_curve_svg(rows):
    r0 = rows[0] if rows else {}
    return emit_svg(
        rows, "m", "mean_error", "method",
        title=f"n={r0.get('n')}, k={r0.get('k')}", xlabel="measurements m", ylabel="mean l2 error",
    )


def sweep_svg(rows):
    r0 = rows[0] if rows else {}
    k = r0.get("k")
    return emit_svg(
        rows, "p", "mean_superset_size", "m",
        title=f"n={r0.get('n')}, k={k}", xlabel="Bernoulli probability p", ylabel="mean superset size",
        marker_x=1.0 / (k + 1) if k else None, marker_label="1/(k+1)",
    )
