"""Minimal static SVG rendering of transmission spectra.

No plotting dependency: the chart is assembled from polylines and text
elements. Baseline curves draw solid, defect curves dashed. Output contains
no timestamps, so identical inputs give byte-identical files.
"""

from __future__ import annotations

import os
from xml.sax.saxutils import escape

import numpy as np

WIDTH = 1024
HEIGHT = 640
MARGIN_LEFT = 80
MARGIN_RIGHT = 30
MARGIN_TOP = 50
MARGIN_BOTTOM = 60

BASE_STYLE = 'fill="none" stroke="#000000" stroke-width="1.6"'
DEFECT_STYLE = 'fill="none" stroke="#cc2222" stroke-width="1.6" stroke-dasharray="8 5"'


def _nice_ticks(lo: float, hi: float, target: int = 6):
    """Round tick positions covering [lo, hi], at most ~target of them."""
    span = hi - lo
    if span <= 0:
        return [lo]
    raw = span / max(target - 1, 1)
    mag = 10.0 ** np.floor(np.log10(raw))
    for mult in (1.0, 2.0, 5.0, 10.0):
        step = mult * mag
        if span / step <= target - 1 + 1e-9:
            break
    first = np.ceil(lo / step) * step
    ticks = []
    value = first
    while value <= hi + 1e-9 * span:
        ticks.append(0.0 if abs(value) < 1e-12 * span else float(value))
        value += step
    return ticks


def _fmt(value: float) -> str:
    return f"{value:.2f}".rstrip("0").rstrip(".")


def _polyline(xs, ys, style: str) -> str:
    pts = " ".join(f"{x:.2f},{y:.2f}" for x, y in zip(xs, ys))
    return f'<polyline {style} points="{pts}"/>'


def render_overlay(base_spec, defect_spec=None, base_label: str = "baseline",
                   defect_label: str = "defect", title: str = "") -> str:
    """SVG document string: baseline T(E) solid, optional defect dashed."""
    energies = base_spec.energies
    e_lo, e_hi = float(energies[0]), float(energies[-1])
    t_hi = max(1.0, float(np.max(base_spec.T)))
    if defect_spec is not None:
        t_hi = max(t_hi, float(np.max(defect_spec.T)))
    t_hi *= 1.02
    t_lo = 0.0

    plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM

    def sx(e):
        return MARGIN_LEFT + (e - e_lo) / (e_hi - e_lo) * plot_w

    def sy(t):
        return MARGIN_TOP + (t_hi - t) / (t_hi - t_lo) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>',
    ]
    if title:
        parts.append(
            f'<text x="{WIDTH / 2:.2f}" y="28" font-family="sans-serif" font-size="18" '
            f'text-anchor="middle">{escape(title)}</text>'
        )

    # axes box
    parts.append(
        f'<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{plot_w}" height="{plot_h}" '
        f'fill="none" stroke="#333333" stroke-width="1"/>'
    )
    for e in _nice_ticks(e_lo, e_hi):
        x = sx(e)
        parts.append(f'<line x1="{x:.2f}" y1="{sy(t_lo):.2f}" x2="{x:.2f}" '
                     f'y2="{sy(t_lo) + 6:.2f}" stroke="#333333" stroke-width="1"/>')
        parts.append(f'<text x="{x:.2f}" y="{sy(t_lo) + 22:.2f}" font-family="sans-serif" '
                     f'font-size="13" text-anchor="middle">{_fmt(e)}</text>')
    for t in _nice_ticks(t_lo, t_hi, target=5):
        y = sy(t)
        parts.append(f'<line x1="{MARGIN_LEFT - 6}" y1="{y:.2f}" x2="{MARGIN_LEFT}" '
                     f'y2="{y:.2f}" stroke="#333333" stroke-width="1"/>')
        parts.append(f'<text x="{MARGIN_LEFT - 10}" y="{y + 4:.2f}" font-family="sans-serif" '
                     f'font-size="13" text-anchor="end">{_fmt(t)}</text>')

    parts.append(
        f'<text x="{MARGIN_LEFT + plot_w / 2:.2f}" y="{HEIGHT - 14}" '
        f'font-family="sans-serif" font-size="15" text-anchor="middle">'
        f'probe energy (cm^-1)</text>'
    )
    parts.append(
        f'<text x="22" y="{MARGIN_TOP + plot_h / 2:.2f}" font-family="sans-serif" '
        f'font-size="15" text-anchor="middle" '
        f'transform="rotate(-90 22 {MARGIN_TOP + plot_h / 2:.2f})">transmission</text>'
    )

    parts.append(_polyline([sx(e) for e in energies],
                           [sy(t) for t in base_spec.T], BASE_STYLE))
    if defect_spec is not None:
        d_energies = defect_spec.energies
        parts.append(_polyline([sx(e) for e in d_energies],
                               [sy(t) for t in defect_spec.T], DEFECT_STYLE))

    # legend, top-right inside the plot box
    lx = MARGIN_LEFT + plot_w - 250
    ly = MARGIN_TOP + 16
    parts.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 40}" y2="{ly}" '
                 f'stroke="#000000" stroke-width="1.6"/>')
    parts.append(f'<text x="{lx + 48}" y="{ly + 4}" font-family="sans-serif" '
                 f'font-size="13">{escape(base_label)}</text>')
    if defect_spec is not None:
        ly2 = ly + 20
        parts.append(f'<line x1="{lx}" y1="{ly2}" x2="{lx + 40}" y2="{ly2}" '
                     f'stroke="#cc2222" stroke-width="1.6" stroke-dasharray="8 5"/>')
        parts.append(f'<text x="{lx + 48}" y="{ly2 + 4}" font-family="sans-serif" '
                     f'font-size="13">{escape(defect_label)}</text>')

    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write_overlay(path, base_spec, defect_spec=None, base_label="baseline",
                  defect_label="defect", title=""):
    doc = render_overlay(base_spec, defect_spec, base_label=base_label,
                         defect_label=defect_label, title=title)
    parent = os.path.dirname(os.path.abspath(path))
    os.makedirs(parent, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(doc)
