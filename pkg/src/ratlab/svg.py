"""Static SVG scatter plots of pair clouds.

The output is a fixed 600x600 viewBox with the square [0, alpha]^2 mapped to
the plotting area and one 1-px square per point. Coordinates are printed with
two decimals, so the same points always give the same bytes.
"""

from __future__ import annotations

import numpy as np

__all__ = ["scatter_svg", "write_scatter"]

SIZE = 600
MARGIN = 40


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def scatter_svg(points, alpha: float, title: str | None = None) -> str:
    """SVG text for ``points`` (rows ``(w, z)``) on the axes ``[0, alpha]^2``."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    alpha = float(alpha)
    span = SIZE - 2 * MARGIN
    px = MARGIN + pts[:, 0] / alpha * span
    py = SIZE - MARGIN - pts[:, 1] / alpha * span
    lo, hi = MARGIN, SIZE - MARGIN
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {SIZE} {SIZE}" '
        f'width="{SIZE}" height="{SIZE}">',
        f'<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="white"/>',
        f'<path d="M{lo} {lo}V{hi}H{hi}" fill="none" stroke="black" stroke-width="1"/>',
        f'<text x="{lo}" y="{hi + 16}" font-size="12" text-anchor="middle">0</text>',
        f'<text x="{hi}" y="{hi + 16}" font-size="12" text-anchor="middle">{alpha:g}</text>',
        f'<text x="{lo - 8}" y="{lo + 4}" font-size="12" text-anchor="end">{alpha:g}</text>',
    ]
    if title:
        lines.append(f'<text x="{SIZE // 2}" y="24" font-size="14" '
                     f'text-anchor="middle">{title}</text>')
    lines.append('<g fill="black">')
    lines.extend(f'<rect x="{_fmt(x)}" y="{_fmt(y)}" width="1" height="1"/>'
                 for x, y in zip(px, py - 1.0))
    lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def write_scatter(path: str, points, alpha: float, title: str | None = None) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(scatter_svg(points, alpha, title))
