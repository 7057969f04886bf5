"""Raster tube areas, the Cantor reference curve and the truncated tube zeta function.

A set given as an occupancy grid of ``P x P`` cells on a square of side
``side`` is rasterized with ``q`` pixels per cell, so the pixel spacing is
``eps = side / (P q)``.  The distance from a pixel centre to the set is taken
from the exact Euclidean distance transform of the kept pixels, minus half a
pixel (exact for axis-aligned nearest pixels).
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage, integrate

from .errors import BudgetExceeded
from .pattern import Pattern, Prefractal, build_prefractal

MAX_PIXELS = 64_000_000
MAX_SIDE_TUBE = 3**8


@dataclass(frozen=True)
class TubeSample:
    t: float
    area: float
    resolution: float
    error_bound: float


@dataclass(frozen=True)
class ZetaConfig:
    delta: float = 1.0
    resolution: float = 1 / 2048
    tail_points: int = 4  # samples used to fit the small-t power law
    N: int = 2

    def __post_init__(self):
        if self.delta <= 0:
            raise ValueError("delta must be positive")
        if self.resolution <= 0:
            raise ValueError("resolution must be positive")
        if self.N != 2:
            raise ValueError("only the planar case N = 2 is supported")


def _occupancy(grid) -> np.ndarray:
    occ = grid.occupancy if isinstance(grid, Prefractal) else np.asarray(grid, dtype=bool)
    if occ.ndim != 2 or occ.shape[0] != occ.shape[1]:
        raise ValueError("occupancy grid must be square")
    return occ


def pixels_per_cell(n_cells: int, side: float, resolution: float) -> int:
    if resolution <= 0:
        raise ValueError("resolution must be positive")
    q = side / (n_cells * resolution)
    qi = int(round(q))
    if qi < 1 or abs(q - qi) > 1e-9 * max(q, 1):
        raise ValueError(f"resolution {resolution} is not a whole fraction of the cell size {side / n_cells}")
    return qi


class DistanceField:
    """Per-pixel distance to the set, valid up to ``reach``."""

    def __init__(self, grid, resolution: float, side: float = 1.0, reach: float = 0.5):
        occ = _occupancy(grid)
        n = occ.shape[0]
        q = pixels_per_cell(n, side, resolution)
        rows, cols = np.nonzero(occ)
        if len(rows) == 0:
            raise ValueError("grid has no kept cells")
        occ = occ[rows.min():rows.max() + 1, cols.min():cols.max() + 1]
        pad = int(math.ceil(reach / resolution)) + 2
        shape = (occ.shape[0] * q + 2 * pad, occ.shape[1] * q + 2 * pad)
        if shape[0] * shape[1] > MAX_PIXELS:
            raise BudgetExceeded(f"raster {shape} exceeds {MAX_PIXELS} pixels")
        raster = np.zeros(shape, dtype=bool)
        raster[pad:shape[0] - pad, pad:shape[1] - pad] = np.kron(occ, np.ones((q, q), dtype=bool))
        edt = ndimage.distance_transform_edt(~raster)
        self.eps = resolution
        self.reach = reach
        self.d = np.maximum(edt * resolution - resolution / 2, 0.0).ravel()
        self.d.sort()

    def area(self, t: float) -> float:
        # at t = 0 report the set itself rather than the empty open tube
        return self.eps**2 * np.searchsorted(self.d, t, side="right" if t == 0 else "left")

    def sample(self, t: float) -> TubeSample:
        if t < 0:
            raise ValueError("radius must be nonnegative")
        if t > self.reach:
            raise ValueError(f"radius {t} beyond the raster reach {self.reach}")
        # pixels whose membership could flip under a one-pixel distance error
        lo = np.searchsorted(self.d, t - self.eps, side="left")
        hi = np.searchsorted(self.d, t + self.eps, side="left")
        return TubeSample(t, self.area(t), self.eps, self.eps**2 * (hi - lo))


def tube_area(grid, t: float, resolution: float, side: float = 1.0) -> TubeSample:
    """Area of the open t-neighbourhood of the kept cells."""
    if t < 0:
        raise ValueError("radius must be nonnegative")
    return DistanceField(grid, resolution, side, reach=max(t, resolution)).sample(t)


def tube_curve(grid, radii, resolution: float, side: float = 1.0) -> list[TubeSample]:
    radii = list(radii)
    field = DistanceField(grid, resolution, side, reach=max(radii))
    return [field.sample(t) for t in radii]


def cusp_area(r: float, d: float) -> float:
    """Area between two overlapping disks of radius r at centre distance d and their common tangent."""
    if d < 0 or r <= 0:
        raise ValueError("need r > 0 and d >= 0")
    if d >= 2 * r:
        raise ValueError(f"gap {d} does not satisfy d < 2r = {2 * r}")
    if d == 0:
        return 0.0
    root = math.sqrt(4 * r * r - d * d)
    return d * r - 0.25 * d * root - r * r * math.atan(d / root)


def cusp_area_quad(r: float, d: float) -> float:
    val, _ = integrate.quad(lambda x: r - math.sqrt(r * r - (x - d / 2) ** 2), 0, d / 2,
                            epsabs=0, epsrel=1e-13)
    return 2 * val


def cantor_regime(t: float) -> int:
    """n with t in (1 / (2 * 3^(n+1)), 1 / (2 * 3^n)], and 0 for t > 1/6."""
    if t <= 0:
        raise ValueError("radius must be positive")
    n = 0
    while t <= 1 / (2 * 3 ** (n + 1)):
        n += 1
    return n


def cantor_tube_reference(t: float, n_terms: int = 40) -> tuple[float, float]:
    """Exact tube area of the middle-thirds Cantor set on the unit segment, with truncation bound.

    In regime n the set is 2^n disjoint copies of length 3^-n; each copy's tube is
    its stadium minus two cusps per interior gap.
    """
    if n_terms < 20:
        raise ValueError("n_terms must be >= 20")
    n = cantor_regime(t)
    piece = 2 * t * 3.0**-n + math.pi * t * t
    piece -= sum(2**k * cusp_area(t, 3.0 ** -(k + n)) for k in range(1, n_terms + 1))
    # cusp(t, d) <= d^3 / (12 t); geometric tail of 2^k 27^-(k+n)
    ratio = 2 / 27
    tail = 2 ** (n_terms + 1) * 27.0 ** -(n_terms + 1 + n) / (12 * t) / (1 - ratio)
    return 2**n * piece, 2**n * tail


def default_radii(p: int, periods: int = 3, start: int = 2, c: float = 0.5) -> list[float]:
    """Radii c p^-k, one self-similarity period apart."""
    return [c * p ** -k for k in range(start, start + periods)]


def _bbox_cells(pattern: Pattern, level: int) -> tuple[int, int]:
    """Rows and columns spanned by the level-n prefractal (its bounding box)."""
    cols = sorted({c for c, _ in pattern.kept})
    rows = sorted({r for _, r in pattern.kept})

    def span(d):
        lo = sum(d[0] * pattern.p**k for k in range(level))
        hi = sum(d[-1] * pattern.p**k for k in range(level))
        return hi - lo + 1

    return span(rows), span(cols)


def minkowski_estimate(pattern: Pattern, radii=None, level: int | None = None,
                       budget: int = 24_000_000) -> tuple[float, float]:
    """Dimension 2 - slope of log |A_t| against log t, with the rms fit residual.

    The radii default to three points one self-similarity period apart, so the
    log-periodic factor of the tube function cancels.  The prefractal level is
    the finest whose raster (cropped to its bounding box) fits the budget.
    """
    p = pattern.p
    radii = sorted(radii or default_radii(p, periods=3, start=3))
    if len(radii) < 3 or radii[-1] / radii[0] < 4:
        raise ValueError("need at least 3 radii spanning two octaves")

    def plan(n):
        q = max(1, math.ceil(8 / (p**n * radii[0])))
        h, w = _bbox_cells(pattern, n)
        pad = 2 * (radii[-1] * p**n * q + 2)
        return q, (h * q + pad) * (w * q + pad)

    if level is None:
        level = 1
        while p ** (level + 1) <= MAX_SIDE_TUBE and plan(level + 1)[1] <= budget:
            level += 1
    q, _ = plan(level)
    grid = build_prefractal(pattern, level)
    samples = tube_curve(grid, radii, 1 / (p**level * q))
    x = np.log(radii)
    y = np.log([s.area for s in samples])
    if not np.all(np.isfinite(y)):
        raise ValueError("degenerate fit: zero tube area")
    coef, res, *_ = np.polyfit(x, y, 1, full=True)
    resid = math.sqrt(res[0] / len(x)) if len(res) else 0.0
    return float(2 - coef[0]), resid


def _field_zeta(field: DistanceField, s: complex, delta: float, t_min: float) -> complex:
    """Exact integral of t^(s-3) |A_t| over [t_min, delta] for the raster step function."""
    d = field.d[field.d < delta]
    lower = np.maximum(d, t_min).astype(complex)
    a = s - 2
    if abs(a) < 1e-12:
        vals = np.log(delta) - np.log(lower)
    else:
        vals = (delta**a - lower**a) / a
    return field.eps**2 * vals.sum()


def zeta_numeric(grid, s: complex, config: ZetaConfig = ZetaConfig(), side: float = 1.0) -> tuple[complex, float]:
    """Truncated tube zeta integral of t^(s-3) |A_t| over (0, delta].

    The range above t_min = 4 eps is integrated exactly for the raster area;
    below it |A_t| is replaced by a power law C t^(2-D) fitted on
    [t_min, 8 t_min].  The error estimate combines the raster area bounds with
    a quarter of the tail.
    """
    s = complex(s)
    eps = config.resolution
    field = DistanceField(grid, eps, side, reach=config.delta)
    t_min = 4 * eps
    if t_min >= config.delta:
        raise ValueError("resolution too coarse for this delta")
    ts = t_min * 2.0 ** np.arange(config.tail_points)
    areas = np.array([field.area(t) for t in ts])
    slope, logc = np.polyfit(np.log(ts), np.log(areas), 1)
    dim = 2 - slope
    if s.real <= dim + 0.1:
        raise ValueError(f"Re(s) = {s.real} is not above the estimated dimension {dim:.3f} + 0.1")
    tail = math.exp(logc) * t_min ** (s - dim) / (s - dim)
    body = _field_zeta(field, s, config.delta, t_min)
    # one-pixel distance perturbation bounds the raster error
    shifted = DistanceField.__new__(DistanceField)
    shifted.eps, shifted.reach, shifted.d = eps, field.reach, field.d + eps
    err = abs(body - _field_zeta(shifted, s, config.delta, t_min)) + 0.25 * abs(tail)
    return body + tail, float(err)


def scaling_check(grid, s: complex, lam: float, config: ZetaConfig = ZetaConfig()) -> float:
    """Relative residual of zeta(lam A, s, lam delta) against lam^s zeta(A, s, delta).

    Both sides are rasterized at the same absolute pixel size, so the scaled set
    uses lam times as many pixels per cell.
    """
    s = complex(s)
    base, _ = zeta_numeric(grid, s, config)
    scaled_cfg = ZetaConfig(config.delta * lam, config.resolution, config.tail_points)
    scaled, _ = zeta_numeric(grid, s, scaled_cfg, side=lam)
    ref = lam**s * base
    return float(abs(scaled - ref) / abs(ref))


def write_tube_csv(path, samples: list[TubeSample]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "area", "error_bound"])
        for smp in samples:
            w.writerow([f"{smp.t:.12g}", f"{smp.area:.12g}", f"{smp.error_bound:.12g}"])


def write_zeta_csv(path, rows: list[tuple[complex, complex, float]]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["re_s", "im_s", "re_val", "im_val", "err"])
        for s, val, err in rows:
            w.writerow([f"{s.real:.12g}", f"{s.imag:.12g}", f"{val.real:.12g}", f"{val.imag:.12g}", f"{err:.12g}"])
