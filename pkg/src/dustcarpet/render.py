"""Deterministic SVG drawings of prefractals, type occurrences and tube contours."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage
from skimage import measure

from .counting import IntersectionType, occurrence_mask
from .errors import BudgetExceeded
from .pattern import Prefractal

MAX_CELLS = 250_000


@dataclass(frozen=True)
class RenderOptions:
    level: int = 3
    highlight: tuple = field(default=())  # (IntersectionType, color) pairs
    contour_t: float | None = None
    canvas: int = 600
    contour_pixels: int = 8  # raster pixels per cell for the contour

    def __post_init__(self):
        if self.contour_t is not None and self.contour_t < 0:
            raise ValueError("contour radius must be nonnegative")
        if self.canvas <= 0:
            raise ValueError("canvas must be positive")


def _n(x: float) -> str:
    s = f"{x:.4f}".rstrip("0").rstrip(".")
    return "0" if s == "-0" else s


def occurrence_points(occ: np.ndarray, t: IntersectionType) -> list[tuple[float, float]]:
    """Marker positions in cell units (x right, y up): shared edge midpoints or shared vertices."""
    rows, cols = np.nonzero(occurrence_mask(occ, t))
    if t is IntersectionType.EDGE_V:
        pts = zip(cols + 1.0, rows + 0.5)
    elif t is IntersectionType.EDGE_H:
        pts = zip(cols + 0.5, rows + 1.0)
    else:
        pts = zip(cols + 1.0, rows + 1.0)
    return sorted((float(x), float(y)) for x, y in pts)


def contour_paths(occ: np.ndarray, t: float, q: int) -> list[list[tuple[float, float]]]:
    """Level curves of the distance to the kept cells at radius t (cell units)."""
    n = occ.shape[0]
    pad = int(math.ceil(t * n * q)) + 2
    raster = np.zeros((n * q + 2 * pad,) * 2, dtype=bool)
    raster[pad:pad + n * q, pad:pad + n * q] = np.kron(occ, np.ones((q, q), dtype=bool))
    if raster.size > 16_000_000:
        raise BudgetExceeded("contour raster too large")
    dist = ndimage.distance_transform_edt(~raster) / (n * q) - 0.5 / (n * q)
    paths = []
    for c in measure.find_contours(dist, t):
        # contour coords are (row, col) in pixel centres
        paths.append([((col + 0.5 - pad) / q, (row + 0.5 - pad) / q) for row, col in c])
    return paths


def render_svg(grid: Prefractal, options: RenderOptions = RenderOptions()) -> str:
    occ = grid.occupancy
    n = occ.shape[0]
    if occ.sum() > MAX_CELLS:
        raise BudgetExceeded(f"{int(occ.sum())} cells exceed the render budget {MAX_CELLS}")
    margin = 0.0 if options.contour_t is None else options.contour_t * n + 0.5
    lo, size = -margin, n + 2 * margin

    def Y(y):  # flip so row 0 sits at the bottom
        return n - y

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{options.canvas}" height="{options.canvas}" '
        f'viewBox="{_n(lo)} {_n(lo)} {_n(size)} {_n(size)}">',
        f'<rect x="{_n(lo)}" y="{_n(lo)}" width="{_n(size)}" height="{_n(size)}" fill="white"/>',
        '<g fill="black" shape-rendering="crispEdges">',
    ]
    rows, cols = np.nonzero(occ)
    for r, c in sorted(zip(rows.tolist(), cols.tolist())):
        out.append(f'<rect x="{c}" y="{_n(Y(r + 1))}" width="1" height="1"/>')
    out.append("</g>")
    radius = 0.18
    for t, color in options.highlight:
        t = IntersectionType.parse(t) if isinstance(t, str) else t
        out.append(f'<g fill="{color}" class="{t.value}">')
        for x, y in occurrence_points(occ, t):
            out.append(f'<circle cx="{_n(x)}" cy="{_n(Y(y))}" r="{radius}"/>')
        out.append("</g>")
    if options.contour_t is not None and options.contour_t > 0:
        out.append('<g fill="none" stroke="red" stroke-width="0.05">')
        for path in contour_paths(occ, options.contour_t, options.contour_pixels):
            d = " ".join(f"{'M' if i == 0 else 'L'}{_n(x)},{_n(Y(y))}" for i, (x, y) in enumerate(path))
            out.append(f'<path d="{d}"/>')
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
