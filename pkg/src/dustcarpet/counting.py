"""Intersection-type counting on prefractals and the D/H/V recurrence model.

At level ``k`` a type occurrence is either a pair of edge-adjacent kept
cells or an interior grid vertex whose surrounding quadrants include the
type's quadrants.  Occurrences at level ``k + 1`` that fall on the grid
lines of level ``k`` are split by host: on a level-``k`` vertex (D), on a
horizontal line (H) or on a vertical line (V).  Everything else sits inside
a single level-``k`` block and is a translated copy of a level-1 occurrence.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass
from enum import Enum
from fractions import Fraction

import numpy as np

from .errors import (
    InternalInconsistency,
    NonBinaryCoefficient,
    NonIntegralMultiplier,
    SingularSystem,
)
from .pattern import Pattern, Prefractal, build_prefractal

QUADRANTS = ("lu", "ld", "rd", "ru")
# (row offset, col offset) of each quadrant cell relative to the vertex's lower-left cell
_QUAD_OFFSET = {"ld": (0, 0), "rd": (0, 1), "lu": (1, 0), "ru": (1, 1)}


class IntersectionType(str, Enum):
    EDGE_H = "h"
    EDGE_V = "v"
    DIAG_LU_RD = "lu,rd"
    DIAG_LD_RU = "ld,ru"
    TRIPLE_LD_RD_RU = "ld,rd,ru"
    TRIPLE_LU_RD_RU = "lu,rd,ru"
    TRIPLE_LU_LD_RU = "lu,ld,ru"
    TRIPLE_LU_LD_RD = "lu,ld,rd"
    QUAD = "lu,ld,rd,ru"

    @property
    def is_edge(self) -> bool:
        return self in (IntersectionType.EDGE_H, IntersectionType.EDGE_V)

    @property
    def quadrants(self) -> frozenset[str]:
        if self.is_edge:
            return frozenset()
        return frozenset(self.value.split(","))

    @classmethod
    def from_quadrants(cls, quads) -> "IntersectionType":
        quads = frozenset(quads)
        for t in cls:
            if not t.is_edge and t.quadrants == quads:
                return t
        raise ValueError(f"no intersection type with quadrants {sorted(quads)}")

    @classmethod
    def parse(cls, text: str) -> "IntersectionType":
        text = text.strip()
        for t in cls:
            if text in (t.name, t.value, t.name.lower()):
                return t
        aliases = {"edgeh": cls.EDGE_H, "edgev": cls.EDGE_V, "quad": cls.QUAD}
        key = text.lower().replace("_", "")
        if key in aliases:
            return aliases[key]
        return cls.from_quadrants(text.replace("{", "").replace("}", "").split(","))


ALL_TYPES = tuple(IntersectionType)


def transform_type(t: IntersectionType, g: int) -> IntersectionType:
    """Image of an intersection type under dihedral element ``g`` (see pattern._maps)."""
    from .pattern import transform_cells

    if t.is_edge:
        swaps = g in (1, 3, 6, 7)
        if not swaps:
            return t
        return IntersectionType.EDGE_V if t is IntersectionType.EDGE_H else IntersectionType.EDGE_H
    pos = {"ld": (0, 0), "rd": (1, 0), "lu": (0, 1), "ru": (1, 1)}
    back = {v: k for k, v in pos.items()}
    moved = transform_cells([pos[q] for q in t.quadrants], 2, g)
    return IntersectionType.from_quadrants(back[c] for c in moved)


def occurrence_mask(occ: np.ndarray, t: IntersectionType) -> np.ndarray:
    """Boolean map of occurrences.

    Edge types: entry [r, c] marks the pair sharing the edge after cell c
    (EDGE_V, shape side x side-1) or after row r (EDGE_H, side-1 x side).
    Corner types: entry [r, c] marks interior vertex (c + 1, r + 1).
    """
    if t is IntersectionType.EDGE_V:
        return occ[:, :-1] & occ[:, 1:]
    if t is IntersectionType.EDGE_H:
        return occ[:-1, :] & occ[1:, :]
    n = occ.shape[0]
    mask = np.ones((n - 1, n - 1), dtype=bool)
    for q in t.quadrants:
        dr, dc = _QUAD_OFFSET[q]
        mask &= occ[dr:dr + n - 1, dc:dc + n - 1]
    return mask


def count_occurrences(grid: Prefractal, t: IntersectionType) -> int:
    return int(occurrence_mask(grid.occupancy, t).sum())


@dataclass(frozen=True)
class HostCounts:
    interior: int
    D: int
    H: int
    V: int

    def total(self) -> int:
        return self.interior + self.D + self.H + self.V


def classify_hosts(grid: Prefractal, t: IntersectionType, check: bool = True) -> HostCounts:
    """Split level-(k+1) occurrences by their position relative to the level-k grid."""
    p, k = grid.pattern.p, grid.level - 1
    if k < 1:
        raise ValueError("host classification needs a grid of level >= 2")
    mask = occurrence_mask(grid.occupancy, t)
    rows, cols = np.nonzero(mask)
    if t is IntersectionType.EDGE_V:
        on_v = (cols + 1) % p == 0
        on_h = np.zeros_like(on_v)
    elif t is IntersectionType.EDGE_H:
        on_h = (rows + 1) % p == 0
        on_v = np.zeros_like(on_h)
    else:
        on_v = (cols + 1) % p == 0
        on_h = (rows + 1) % p == 0
    d = int(np.sum(on_v & on_h))
    h = int(np.sum(on_h & ~on_v))
    v = int(np.sum(on_v & ~on_h))
    hosts = HostCounts(len(rows) - d - h - v, d, h, v)
    if check:
        i1 = count_occurrences(build_prefractal(grid.pattern, 1), t)
        if hosts.interior != grid.pattern.m**k * i1:
            raise InternalInconsistency(
                f"{t.name}: {hosts.interior} interior occurrences at level {k + 1}, "
                f"expected m^{k} * I(1) = {grid.pattern.m**k * i1}"
            )
    return hosts


@dataclass(frozen=True)
class TypeCounts:
    type: IntersectionType
    m: int
    p: int
    I1: int
    D1: int
    H1: int
    V1: int
    D2: int
    H2: int
    V2: int
    D3: int
    h: int
    v: int
    dH: int | None
    dV: int | None
    d_combined: int | None = None

    @property
    def is_zero(self) -> bool:
        return not (self.I1 or self.D1 or self.H1 or self.V1)

    def spawn_h(self) -> int:
        """Coefficient multiplying the H-sourced D spawns (dH * H1, or the joint value when h = v)."""
        if self.d_combined is not None:
            return self.d_combined
        return (self.dH or 0) * self.H1

    def spawn_v(self) -> int:
        if self.d_combined is not None:
            return 0
        return (self.dV or 0) * self.V1

    def to_dict(self) -> dict:
        out = asdict(self)
        out["type"] = self.type.value
        return out


def _multiplier(x2: int, x1: int, m: int, p: int, label: str) -> int:
    if x1 == 0:
        if x2 != 0:
            raise NonIntegralMultiplier(f"{label}(1) = 0 but {label}(2) = {x2}")
        return 0
    ratio = Fraction(x2 - m * x1, x1)
    if ratio.denominator != 1 or not 0 <= ratio <= p:
        raise NonIntegralMultiplier(f"{label} multiplier {ratio} is not an integer in [0, {p}]")
    return int(ratio)


def _binary(x: Fraction, label: str) -> int:
    if x not in (0, 1):
        raise NonBinaryCoefficient(f"{label} = {x} is not 0 or 1")
    return int(x)


def extract_parameters(pattern: Pattern, t: IntersectionType, grids: dict | None = None) -> TypeCounts:
    """Read I(1), the D/H/V counts at levels 2-4 and the multipliers off brute-force counts."""
    grids = grids if grids is not None else {}
    for level in range(1, 5):
        if level not in grids:
            grids[level] = build_prefractal(pattern, level)
    m, p = pattern.m, pattern.p
    i1 = count_occurrences(grids[1], t)
    c1 = classify_hosts(grids[2], t)
    c2 = classify_hosts(grids[3], t)
    c3 = classify_hosts(grids[4], t)
    h = _multiplier(c2.H, c1.H, m, p, "H")
    v = _multiplier(c2.V, c1.V, m, p, "V")

    rhs1 = c2.D - (m + 1) * c1.D
    rhs2 = c3.D - m * m * c1.D - c2.D
    dH = dV = combined = None
    if c1.H and c1.V and h == v:
        # only the combination dH*H1 + dV*V1 enters the counts
        if rhs2 != (m + h) * rhs1:
            raise SingularSystem(f"D recurrence inconsistent for h = v = {h}")
        if rhs1 not in (0, c1.H, c1.V, c1.H + c1.V):
            raise NonBinaryCoefficient(f"dH*H1 + dV*V1 = {rhs1} has no 0/1 solution")
        combined = rhs1
    elif c1.H and c1.V:
        det = c1.H * c2.V - c1.V * c2.H
        if det == 0:
            raise SingularSystem("singular D system")
        dH = _binary(Fraction(rhs1 * c2.V - c1.V * rhs2, det), "dH")
        dV = _binary(Fraction(c1.H * rhs2 - c2.H * rhs1, det), "dV")
    elif c1.H:
        dH = _binary(Fraction(rhs1, c1.H), "dH")
        dV = 0
        if dH * c2.H != rhs2:
            raise SingularSystem("D recurrence inconsistent at level 4")
    elif c1.V:
        dV = _binary(Fraction(rhs1, c1.V), "dV")
        dH = 0
        if dV * c2.V != rhs2:
            raise SingularSystem("D recurrence inconsistent at level 4")
    else:
        if rhs1 or rhs2:
            raise SingularSystem("D sequence grows without H or V sources")
        dH = dV = 0
    return TypeCounts(t, m, p, i1, c1.D, c1.H, c1.V, c2.D, c2.H, c2.V, c3.D, h, v, dH, dV, combined)


# --- closed form -----------------------------------------------------------

def _pow(base: int, e: int) -> int:
    return 1 if e == 0 else base**e  # 0^0 = 1


def _ratio_term(m: int, r: int, k: int) -> Fraction:
    """(m^(k-1) - r^(k-1)) / (m - r), with its limit when r = m."""
    if r == m:
        return Fraction((k - 1) * _pow(m, k - 2)) if k >= 2 else Fraction(0)
    return Fraction(_pow(m, k - 1) - _pow(r, k - 1), m - r)


def _spawn_term(m: int, r: int, k: int) -> Fraction:
    """Accumulated D spawns from a multiplier-r sequence after k - 1 levels."""
    if k < 2:
        return Fraction(0)
    if r == 1:
        return Fraction(_pow(m, k - 1) - k * (m - 1) + (m - 2), (m - 1) ** 2)
    if r == m:
        # sum_{i=1}^{k-2} i m^(i-1)
        n = k - 2
        return Fraction(1 - (n + 1) * m**n + n * m ** (n + 1), (1 - m) ** 2)
    num = r - _pow(r, k - 1) - m + _pow(r, k - 1) * m + _pow(m, k - 1) - r * _pow(m, k - 1)
    return Fraction(num, (m - 1) * (r - m) * (r - 1))


def closed_form_count(tc: TypeCounts, m: int, k: int) -> int:
    """Explicit I(k) from the level-1 counts and the extracted multipliers."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if m < 2:
        raise ValueError("closed form needs m >= 2")
    total = (
        Fraction(tc.spawn_h()) * _spawn_term(m, tc.h, k)
        + Fraction(tc.spawn_v()) * _spawn_term(m, tc.v, k)
        + tc.H1 * _ratio_term(m, tc.h, k)
        + tc.V1 * _ratio_term(m, tc.v, k)
        + tc.D1 * Fraction(_pow(m, k - 1) - 1, m - 1)
        + tc.I1 * _pow(m, k - 1)
    )
    if total.denominator != 1:
        raise InternalInconsistency(f"closed form gave non-integer count {total}")
    return int(total)


def recurrence_count(tc: TypeCounts, m: int, k: int) -> int:
    """I(k) by stepping the D/H/V recurrences; an independent route to closed_form_count."""
    if k == 1:
        return tc.I1
    D, H, V = tc.D1, tc.H1, tc.V1
    for j in range(2, k):
        D = m ** (j - 1) * tc.D1 + D + _spawn_coeff(tc, "h") * H + _spawn_coeff(tc, "v") * V
        H = m ** (j - 1) * tc.H1 + tc.h * H
        V = m ** (j - 1) * tc.V1 + tc.v * V
    return m ** (k - 1) * tc.I1 + D + H + V


def _spawn_coeff(tc: TypeCounts, which: str) -> Fraction:
    if tc.d_combined is not None:
        # h = v, so H and V grow in proportion; split the joint spawn evenly by weight
        return Fraction(tc.d_combined, tc.H1 + tc.V1)
    return Fraction(tc.dH if which == "h" else tc.dV or 0)


@dataclass(frozen=True)
class ValidationReport:
    type: IntersectionType
    levels: tuple[int, ...]
    brute: tuple[int, ...]
    closed: tuple[int, ...]
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None and self.brute == self.closed

    @property
    def first_mismatch(self) -> int | None:
        for k, a, b in zip(self.levels, self.brute, self.closed):
            if a != b:
                return k
        return None


def validate_model(pattern: Pattern, t: IntersectionType, k_max: int = 5, grids: dict | None = None,
                   tc: TypeCounts | None = None) -> ValidationReport:
    grids = grids if grids is not None else {}
    levels = tuple(range(1, k_max + 1))
    for k in levels:
        if k not in grids:
            grids[k] = build_prefractal(pattern, k)
    brute = tuple(count_occurrences(grids[k], t) for k in levels)
    try:
        tc = tc or extract_parameters(pattern, t, grids)
        closed = tuple(closed_form_count(tc, pattern.m, k) for k in levels)
    except Exception as exc:  # report content, not a failure of the validation itself
        return ValidationReport(t, levels, brute, (), f"{type(exc).__name__}: {exc}")
    return ValidationReport(t, levels, brute, closed)
