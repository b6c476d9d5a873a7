"""Deterministic SVG rendering of portrait documents.

Fixed 800x800 canvas, unit disk centered, all coordinates formatted with a
fixed precision so identical documents produce byte-identical files.
"""
from __future__ import annotations

CANVAS = 800
RADIUS = 370.0
CENTER = CANVAS / 2.0

SEPARATRIX_COLORS = ("#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e",
                     "#17becf", "#8c564b", "#e377c2", "#7f7f7f")
HIGHLIGHT_COLOR = "#d62728"
FAN_COLOR = "#c8c8c8"


def _fmt(value: float) -> str:
    return f"{value:.4f}"


def _canvas_xy(disk_xy) -> tuple[float, float]:
    return CENTER + RADIUS * disk_xy[0], CENTER - RADIUS * disk_xy[1]


def _polyline(points, color: str, width: float, opacity: float = 1.0) -> str:
    coords = " ".join(
        f"{_fmt(cx)},{_fmt(cy)}" for cx, cy in (_canvas_xy(q) for q in points))
    return (f'<polyline points="{coords}" fill="none" stroke="{color}" '
            f'stroke-width="{_fmt(width)}" stroke-opacity="{_fmt(opacity)}"/>')


def render_portrait_svg(doc: dict) -> str:
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{CANVAS}" height="{CANVAS}" '
        f'viewBox="0 0 {CANVAS} {CANVAS}">',
        f'<rect width="{CANVAS}" height="{CANVAS}" fill="#ffffff"/>',
        f'<circle cx="{_fmt(CENTER)}" cy="{_fmt(CENTER)}" r="{_fmt(RADIUS)}" '
        'fill="none" stroke="#000000" stroke-width="1.5"/>',
    ]
    params = doc["params"]
    cls = doc["classification"]
    title = (f"n={params['n']} k={params['k']} c={params['c']:.17g} "
             f"class {cls['tag']} ({cls['equivalence']})")
    lines.append(f'<text x="20" y="30" font-family="monospace" '
                 f'font-size="16" fill="#333333">{title}</text>')

    for orbit in doc.get("orbits", []):
        if len(orbit["points"]) > 1:
            lines.append(_polyline(orbit["points"], FAN_COLOR, 0.7, 0.8))
    for i, sep in enumerate(doc.get("separatrices", [])):
        if len(sep["points"]) > 1:
            color = SEPARATRIX_COLORS[i % len(SEPARATRIX_COLORS)]
            lines.append(_polyline(sep["points"], color, 1.6))
    for item in doc.get("highlight", []):
        if len(item["points"]) > 1:
            lines.append(_polyline(item["points"], HIGHLIGHT_COLOR, 2.8))

    for eq in doc.get("equilibria", []):
        cx, cy = _canvas_xy(eq["disk"])
        stable = eq["kind"].startswith("stable")
        fill = "#000000" if stable else "#ffffff"
        lines.append(f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="4.5" '
                     f'fill="{fill}" stroke="#000000" stroke-width="1.2"/>')
        lines.append(f'<text x="{_fmt(cx + 7)}" y="{_fmt(cy - 7)}" '
                     f'font-family="monospace" font-size="13" '
                     f'fill="#222222">{eq["display"]}</text>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
