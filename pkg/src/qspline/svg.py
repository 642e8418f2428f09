"""Standalone SVG plots of a fit, written by hand so there is no plotting
dependency: the target curve as a polyline, the recovered points as circle
markers, plus axes, ticks, and a small legend.
"""

from __future__ import annotations

import numpy as np

from .report import FitReport

__all__ = ["render", "write_svg"]

WIDTH, HEIGHT = 640, 440
MARGIN_LEFT, MARGIN_RIGHT, MARGIN_TOP, MARGIN_BOTTOM = 72, 24, 48, 56
TARGET_COLOR = "#2266bb"
ESTIMATE_COLOR = "#cc5511"


def _fmt(v: float) -> str:
    return f"{float(v):.6g}"


def _axis_range(values: np.ndarray) -> tuple[float, float]:
    lo, hi = float(np.min(values)), float(np.max(values))
    if hi == lo:
        return lo - 0.5, hi + 0.5
    pad = 0.06 * (hi - lo)
    return lo - pad, hi + pad


def render(report: FitReport) -> str:
    """Whole SVG document for one fit report."""
    xs = np.asarray(report.xs, dtype=float)
    y_t = np.asarray(report.y_target, dtype=float)
    y_e = np.asarray(report.y_estimate, dtype=float)

    x_lo, x_hi = _axis_range(xs)
    y_lo, y_hi = _axis_range(np.concatenate([y_t, y_e]))
    plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM

    def px(x: float) -> float:
        return MARGIN_LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w

    def py(y: float) -> float:
        return MARGIN_TOP + (y_hi - y) / (y_hi - y_lo) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2:.1f}" y="24" text-anchor="middle" '
        f'font-family="sans-serif" font-size="15">'
        f"{report.function}, K={report.knots}, NRMSE {report.nrmse:.3e}</text>",
    ]

    # frame and ticks
    x0, y0 = px(x_lo), py(y_lo)
    x1, y1 = px(x_hi), py(y_hi)
    parts.append(
        f'<rect x="{x1 - plot_w:.1f}" y="{y1:.1f}" width="{plot_w}" height="{plot_h}" '
        'fill="none" stroke="#444" stroke-width="1"/>'
    )
    for tick in np.linspace(x_lo, x_hi, 5):
        tx = px(tick)
        parts.append(
            f'<line x1="{tx:.1f}" y1="{y0:.1f}" x2="{tx:.1f}" y2="{y0 + 5:.1f}" '
            'stroke="#444" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{tx:.1f}" y="{y0 + 20:.1f}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11">{_fmt(tick)}</text>'
        )
    for tick in np.linspace(y_lo, y_hi, 5):
        ty = py(tick)
        parts.append(
            f'<line x1="{x0 - 5:.1f}" y1="{ty:.1f}" x2="{x0:.1f}" y2="{ty:.1f}" '
            'stroke="#444" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{x0 - 8:.1f}" y="{ty + 4:.1f}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11">{_fmt(tick)}</text>'
        )
    parts.append(
        f'<text x="{(x0 + x1) / 2:.1f}" y="{HEIGHT - 12}" text-anchor="middle" '
        'font-family="sans-serif" font-size="12">x</text>'
    )
    parts.append(
        f'<text x="18" y="{(y0 + y1) / 2:.1f}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="12" '
        f'transform="rotate(-90 18 {(y0 + y1) / 2:.1f})">y (normalized)</text>'
    )

    points = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xs, y_t))
    parts.append(
        f'<polyline points="{points}" fill="none" stroke="{TARGET_COLOR}" stroke-width="2"/>'
    )
    for x, y in zip(xs, y_e):
        parts.append(
            f'<circle cx="{px(x):.2f}" cy="{py(y):.2f}" r="4" fill="none" '
            f'stroke="{ESTIMATE_COLOR}" stroke-width="1.8"/>'
        )

    # legend, top-left inside the frame
    lx, ly = x0 + 12, y1 + 16
    parts.append(
        f'<line x1="{lx:.1f}" y1="{ly:.1f}" x2="{lx + 26:.1f}" y2="{ly:.1f}" '
        f'stroke="{TARGET_COLOR}" stroke-width="2"/>'
    )
    parts.append(
        f'<text x="{lx + 32:.1f}" y="{ly + 4:.1f}" font-family="sans-serif" '
        'font-size="12">target</text>'
    )
    parts.append(
        f'<circle cx="{lx + 13:.1f}" cy="{ly + 18:.1f}" r="4" fill="none" '
        f'stroke="{ESTIMATE_COLOR}" stroke-width="1.8"/>'
    )
    parts.append(
        f'<text x="{lx + 32:.1f}" y="{ly + 22:.1f}" font-family="sans-serif" '
        'font-size="12">estimate</text>'
    )

    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write_svg(report: FitReport, path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(render(report))
