"""Static SVG heatmap for similarity matrices (green = 0 ... red = 1)."""

from __future__ import annotations

CELL_W = 96
CELL_H = 44
LEFT = 140
TOP = 46


def _color(v):
    v = min(1.0, max(0.0, v))
    r = int(round(255 * min(1.0, 2.0 * v)))
    g = int(round(200 * min(1.0, 2.0 * (1.0 - v))))
    return f"rgb({r},{g},0)"


def heatmap_svg(row_names, col_names, values, title="") -> str:
    """Render the matrix with each cell labeled by its exact 6-digit value."""
    m, n = len(row_names), len(col_names)
    width = LEFT + n * CELL_W + 10
    height = TOP + m * CELL_H + (30 if title else 10)
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width}" height="{height}" '
        f'font-family="monospace" font-size="12">'
    ]
    if title:
        out.append(
            f'<text x="{LEFT}" y="{height - 10}" font-size="13">{title}</text>'
        )
    for j, col in enumerate(col_names):
        x = LEFT + j * CELL_W + CELL_W // 2
        out.append(f'<text x="{x}" y="{TOP - 12}" text-anchor="middle">{col}</text>')
    for i, row in enumerate(row_names):
        y = TOP + i * CELL_H + CELL_H // 2 + 4
        out.append(f'<text x="{LEFT - 10}" y="{y}" text-anchor="end">{row}</text>')
        for j in range(n):
            v = float(values[i][j])
            x = LEFT + j * CELL_W
            yy = TOP + i * CELL_H
            out.append(
                f'<rect x="{x}" y="{yy}" width="{CELL_W}" height="{CELL_H}" '
                f'fill="{_color(v)}" stroke="white"/>'
            )
            out.append(
                f'<text x="{x + CELL_W // 2}" y="{yy + CELL_H // 2 + 4}" '
                f'text-anchor="middle" fill="black">{v:.6f}</text>'
            )
    out.append("</svg>")
    return "\n".join(out) + "\n"
