"""Minimal dependency-free SVG line charts for CSV series."""

from __future__ import annotations

import math

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2")

_WIDTH, _HEIGHT, _MARGIN = 640, 420, 60


def _finite_pairs(xs, ys):
    return [(x, y) for x, y in zip(xs, ys) if math.isfinite(x) and math.isfinite(y)]


def write_line_chart(path, series, x_label="", y_label="", log_x=False, log_y=False):
    """Write one SVG polyline per (label, xs, ys) triple in ``series``."""
    points = {}
    for label, xs, ys in series:
        pairs = _finite_pairs(xs, ys)
        if log_x:
            pairs = [(math.log10(x), y) for x, y in pairs if x > 0]
        if log_y:
            pairs = [(x, math.log10(y)) for x, y in pairs if y > 0]
        if pairs:
            points[label] = pairs
    if not points:
        raise ValueError("no finite data to chart")
    all_x = [x for pairs in points.values() for x, _ in pairs]
    all_y = [y for pairs in points.values() for _, y in pairs]
    x_lo, x_hi = min(all_x), max(all_x)
    y_lo, y_hi = min(all_y), max(all_y)
    x_span = (x_hi - x_lo) or 1.0
    y_span = (y_hi - y_lo) or 1.0
    inner_w = _WIDTH - 2 * _MARGIN
    inner_h = _HEIGHT - 2 * _MARGIN

    def to_px(x, y):
        px = _MARGIN + (x - x_lo) / x_span * inner_w
        py = _HEIGHT - _MARGIN - (y - y_lo) / y_span * inner_h
        return f"{px:.2f},{py:.2f}"

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" height="{_HEIGHT}">',
        f'<rect x="{_MARGIN}" y="{_MARGIN}" width="{inner_w}" height="{inner_h}" '
        'fill="none" stroke="#333"/>',
    ]
    for idx, (label, pairs) in enumerate(points.items()):
        color = _PALETTE[idx % len(_PALETTE)]
        path_points = " ".join(to_px(x, y) for x, y in pairs)
        lines.append(f'<polyline points="{path_points}" fill="none" stroke="{color}"/>')
        lines.append(
            f'<text x="{_MARGIN + 8}" y="{_MARGIN + 16 + 14 * idx}" '
            f'fill="{color}" font-size="12">{label}</text>'
        )
    x_title = f"{x_label}{' (log10)' if log_x else ''}"
    y_title = f"{y_label}{' (log10)' if log_y else ''}"
    lines.append(
        f'<text x="{_WIDTH / 2:.0f}" y="{_HEIGHT - 12}" text-anchor="middle" '
        f'font-size="12">{x_title}</text>'
    )
    lines.append(
        f'<text x="14" y="{_HEIGHT / 2:.0f}" writing-mode="tb" font-size="12">{y_title}</text>'
    )
    lines.append("</svg>")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
