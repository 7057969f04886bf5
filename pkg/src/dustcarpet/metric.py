"""Copy distances, the disconnection threshold and the Completely Dusty test.

Distances between translated copies of the attractor are bracketed by a
refinement over integer offsets.  ``D(o) = dist(A, A + o)`` obeys
``D(o) = min over a, b in S of D(p*o + b - a) / p``; at depth k the distance
between the convex hulls of level-k copies gives a lower bound and periodic
points of the generating maps give an upper bound.
All bounds are kept as exact squared rationals so that ties (the common
case for dust carpets) are certified rather than guessed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

import numpy as np
from scipy.sparse.csgraph import minimum_spanning_tree

from .counting import IntersectionType, TypeCounts
from .errors import BudgetExceeded, ConnectedAttractorError
from .pattern import Pattern, Prefractal, build_prefractal
from .topology import attractor_connected

# Frontier size at which the offset refinement stops and reports its bracket.
MAX_FRONTIER = 200_000
MAX_MST_CELLS = 4096
SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class Bracket:
    """Closed interval [lo, hi] of a nonnegative length, stored as exact squares."""

    lo2: Fraction
    hi2: Fraction

    @property
    def lo(self) -> float:
        return math.sqrt(self.lo2)

    @property
    def hi(self) -> float:
        return math.sqrt(self.hi2)

    @property
    def exact(self) -> bool:
        return self.lo2 == self.hi2

    def scaled(self, factor: Fraction) -> "Bracket":
        f2 = Fraction(factor) ** 2
        return Bracket(self.lo2 * f2, self.hi2 * f2)

    def contains(self, x: float, tol: float = 1e-12) -> bool:
        return self.lo - tol <= x <= self.hi + tol

    def as_list(self) -> list[float]:
        return [self.lo, self.hi]


def _bracket_max(items) -> Bracket:
    items = list(items)
    return Bracket(max(b.lo2 for b in items), max(b.hi2 for b in items))


def _hull(points: np.ndarray) -> np.ndarray:
    """Convex hull of integer points, counterclockwise, collinear points dropped."""
    pts = sorted(set(map(tuple, points.tolist())))
    if len(pts) <= 2:
        return np.array(pts, dtype=np.int64)

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for pt in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], pt) <= 0:
            lower.pop()
        lower.append(pt)
    for pt in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], pt) <= 0:
            upper.pop()
        upper.append(pt)
    return np.array(lower[:-1] + upper[:-1], dtype=np.int64)


def _hull_dist2(q: np.ndarray, hull: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Squared distance from integer points q to an integer convex polygon, as num / den."""
    n = len(q)
    if len(hull) == 1:
        d = q - hull[0]
        return (d**2).sum(axis=1), np.ones(n, dtype=np.int64)
    edges = [(hull[i], hull[(i + 1) % len(hull)]) for i in range(len(hull) if len(hull) > 2 else 1)]
    best_num = np.full(n, -1, dtype=np.int64)
    best_den = np.ones(n, dtype=np.int64)
    inside = np.ones(n, dtype=bool) if len(hull) > 2 else np.zeros(n, dtype=bool)
    for a, b in edges:
        e = b - a
        w = q - a
        cr = e[0] * w[:, 1] - e[1] * w[:, 0]
        inside &= cr >= 0
        t = w @ e
        ee = int(e @ e)
        num = np.where(t <= 0, (w**2).sum(axis=1) * ee,
                       np.where(t >= ee, ((q - b) ** 2).sum(axis=1) * ee, cr**2))
        den = np.full(n, ee, dtype=np.int64)
        better = (best_num < 0) | (num * best_den < best_num * den)
        best_num = np.where(better, num, best_num)
        best_den = np.where(better, den, best_den)
    best_num = np.where(inside, 0, best_num)
    return best_num, best_den


@lru_cache(maxsize=4096)
def offset_distance(pattern: Pattern, offset: tuple[int, int], depth: int) -> Bracket:
    """Bracket on dist(A, A + offset), refining the offset tree to the given depth.

    Every point of A is a convex combination of the fixed points a / (p - 1),
    so the hull of A is hull(S) / (p - 1); distances between hulls bound the
    copy distance from below and distances between points of period one or
    two bound it from above.
    """
    p = pattern.p
    q1 = p - 1
    kept = np.array(sorted(pattern.kept), dtype=np.int64)
    deltas = np.unique((kept[None, :, :] - kept[:, None, :]).reshape(-1, 2), axis=0)
    hull = _hull(deltas)
    # differences of period-2 points, fixed by f_i o f_j, scaled by p^2 - 1
    q2 = p * p - 1
    pairs2 = np.unique((p * deltas[:, None, :] + deltas[None, :, :]).reshape(-1, 2), axis=0)
    frontier = np.array([offset], dtype=np.int64)
    best_hi = None
    lo2 = Fraction(0)
    for k in range(depth + 1):
        scale = q1**2 * p ** (2 * k)
        num, den = _hull_dist2(q1 * frontier, hull)
        approx = num / den
        i = int(np.argmin(approx))
        lo_k = min(Fraction(int(n), int(d)) for n, d in zip(num[approx <= approx[i] * (1 + 1e-9)],
                                                             den[approx <= approx[i] * (1 + 1e-9)]))
        lo2 = max(lo2, lo_k / scale)
        fp = ((deltas[None, :, :] - q1 * frontier[:, None, :]) ** 2).sum(axis=2).min(axis=1)
        cand = Fraction(int(fp.min()), scale)
        for chunk in np.array_split(frontier, max(1, len(frontier) * len(pairs2) // 2_000_000 + 1)):
            fp2 = ((pairs2[None, :, :] - q2 * chunk[:, None, :]) ** 2).sum(axis=2).min()
            cand = min(cand, Fraction(int(fp2), q2**2 * p ** (2 * k)))
        best_hi = cand if best_hi is None else min(best_hi, cand)
        if lo2 >= best_hi or k == depth:
            break
        keep = approx / scale <= float(best_hi) * (1 + 1e-9)
        parents = frontier[keep]
        children = (p * parents[:, None, :] + deltas[None, :, :]).reshape(-1, 2)
        frontier = np.unique(children, axis=0)
        if len(frontier) > MAX_FRONTIER:
            break
    return Bracket(min(lo2, best_hi), best_hi)


def copy_gap(pattern: Pattern, offset: tuple[int, int], level: int) -> Bracket:
    """Distance between the attractor and its unit translate by ``offset`` (unit-square units)."""
    if offset not in {(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1)}:
        raise ValueError(f"invalid offset {offset}")
    if level < 1:
        raise ValueError("level must be >= 1")
    return offset_distance(pattern, tuple(offset), level)


def cell_pair_gap(pattern: Pattern, a, b, level: int) -> Bracket:
    """Distance between the copies of A sitting in kept cells a and b (at scale 1/p)."""
    off = (b[0] - a[0], b[1] - a[1])
    return offset_distance(pattern, off, max(level - 1, 0)).scaled(Fraction(1, pattern.p))


def _bottleneck(n: int, edges: list[tuple[Fraction, int, int]]) -> Fraction:
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    worst = Fraction(0)
    joined = 1
    for w, i, j in sorted(edges):
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
            worst = w
            joined += 1
            if joined == n:
                break
    return worst


@dataclass(frozen=True)
class ThresholdEstimate:
    lower: float
    upper: float
    level: int
    gap: Bracket  # bracket on 2 * alpha, the bottleneck copy distance
    # copy graph: (i, j, canonical offset, distance bracket) for every pair of kept cells
    edges: tuple = field(default=(), repr=False, compare=False)
    m: int = 0

    @property
    def exact(self) -> bool:
        return self.gap.exact

    def as_list(self) -> list[float]:
        return [self.lower, self.upper]


def threshold_alpha(pattern: Pattern, level: int) -> ThresholdEstimate:
    """Bracket on the largest t at which the open t-neighbourhood is still disconnected.

    The threshold is half the bottleneck (largest minimum-spanning-tree edge)
    of the graph on the m first-level copies weighted by copy distance.
    """
    if level < 2:
        raise ValueError("level must be >= 2")
    if attractor_connected(pattern):
        raise ConnectedAttractorError("a connected attractor has no disconnection threshold")
    cells = sorted(pattern.kept)
    edges = []
    for i, j in combinations(range(len(cells)), 2):
        g = cell_pair_gap(pattern, cells[i], cells[j], level)
        edges.append((i, j, _canonical(cells[i], cells[j]), g))
    n = len(cells)
    w = Bracket(_bottleneck(n, [(g.lo2, i, j) for i, j, _, g in edges]),
                _bottleneck(n, [(g.hi2, i, j) for i, j, _, g in edges]))
    return ThresholdEstimate(w.lo / 2, w.hi / 2, level, w, tuple(edges), n)


def _canonical(a, b) -> tuple[int, int]:
    off = (b[0] - a[0], b[1] - a[1])
    return max(off, (-off[0], -off[1]))


def _connects(n: int, pairs) -> bool:
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, j in pairs:
        parent[find(i)] = find(j)
    return len({find(i) for i in range(n)}) == 1


def compare_to_bottleneck(alpha: ThresholdEstimate, gap: Bracket, offsets) -> int | None:
    """Sign of ``gap - 2 alpha`` as +1 (gap >= 2 alpha), -1 (gap < 2 alpha) or None.

    ``offsets`` are the copy offsets whose distances ``gap`` is the maximum of;
    edges with one of those offsets are known to be no longer than the gap, which
    decides ties that no finite bracket can.  The bottleneck is at most the gap
    exactly when the edges no longer than the gap connect every copy.
    """
    offsets = {max(o, (-o[0], -o[1])) for o in offsets}
    sure = [(i, j) for i, j, o, g in alpha.edges if o in offsets or g.hi2 <= gap.lo2]
    if _connects(alpha.m, sure):
        return 1
    maybe = [(i, j) for i, j, o, g in alpha.edges if o in offsets or g.lo2 <= gap.hi2]
    if not _connects(alpha.m, maybe):
        return -1
    return None


class Dusty(str, Enum):
    YES = "Yes"
    NO = "No"
    BORDERLINE = "Borderline"


def completely_dusty(pattern: Pattern, level: int, alpha: ThresholdEstimate | None = None) -> Dusty:
    """Do the first-level copies stay pairwise disjoint at the threshold inflation?"""
    alpha = alpha or threshold_alpha(pattern, level)
    cells = sorted(pattern.kept)
    verdict = Dusty.YES
    for a, b in combinations(cells, 2):
        g = cell_pair_gap(pattern, a, b, level)
        sign = compare_to_bottleneck(alpha, g, [(b[0] - a[0], b[1] - a[1])])
        if sign == -1:
            return Dusty.NO
        if sign is None:
            verdict = Dusty.BORDERLINE
    return verdict


class ConditionStatus(str, Enum):
    SATISFIED = "Satisfied"
    NOT_SATISFIED = "NotSatisfied"
    NOT_PRESENT = "NotPresent"
    BORDERLINE = "Borderline"


@dataclass(frozen=True)
class ConditionVerdict:
    status: ConditionStatus
    gap: Bracket | None
    alpha: ThresholdEstimate | None

    def to_dict(self) -> dict:
        return {
            "status": self.status.value,
            "gap": None if self.gap is None else self.gap.as_list(),
        }


_QUAD_POS = {"ld": (0, 0), "rd": (1, 0), "lu": (0, 1), "ru": (1, 1)}


def type_offsets(t: IntersectionType) -> list[tuple[int, int]]:
    if t is IntersectionType.EDGE_V:
        return [(1, 0)]
    if t is IntersectionType.EDGE_H:
        return [(0, 1)]
    pos = sorted(_QUAD_POS[q] for q in t.quadrants)
    return [(b[0] - a[0], b[1] - a[1]) for a, b in combinations(pos, 2)]


def type_gap(pattern: Pattern, t: IntersectionType, level: int) -> Bracket:
    """Copy distance that must close before the type's overlap region can have area.

    Edge and diagonal types use their single pair of copies.  Triples and the
    quad use the largest pairwise distance among the participating quadrant
    copies, a necessary condition for a common overlap.
    """
    return _bracket_max(cell_pair_gap(pattern, (0, 0), o, level) for o in type_offsets(t))


def condition_c(pattern: Pattern, t: IntersectionType, alpha: ThresholdEstimate, level: int,
                counts: TypeCounts | None = None, present: bool | None = None) -> ConditionVerdict:
    """Does the type's overlap area stay positive on a set of radii of positive measure below alpha?"""
    if present is None:
        if counts is not None:
            present = not counts.is_zero
        else:
            from .counting import count_occurrences

            present = any(count_occurrences(build_prefractal(pattern, k), t) for k in (1, 2, 3))
    if not present:
        return ConditionVerdict(ConditionStatus.NOT_PRESENT, None, alpha)
    gap = type_gap(pattern, t, level)
    sign = compare_to_bottleneck(alpha, gap, type_offsets(t))
    status = {1: ConditionStatus.NOT_SATISFIED, -1: ConditionStatus.SATISFIED,
              None: ConditionStatus.BORDERLINE}[sign]
    return ConditionVerdict(status, gap, alpha)


# --- prefractal minimum spanning trees --------------------------------------

def mst_weights(grid: Prefractal) -> np.ndarray:
    """Edge weights of a minimum spanning tree on the kept closed cells (unit-square units)."""
    rows, cols = np.nonzero(grid.occupancy)
    n = len(rows)
    if n > MAX_MST_CELLS:
        raise BudgetExceeded(f"{n} cells exceed the MST budget {MAX_MST_CELLS}")
    if n < 2:
        return np.zeros(0)
    gx = np.maximum(np.abs(cols[:, None] - cols[None, :]) - 1, 0)
    gy = np.maximum(np.abs(rows[:, None] - rows[None, :]) - 1, 0)
    dist = np.sqrt(gx**2 + gy**2).astype(float) / grid.side
    tiny = 1e-300
    dist[dist == 0] = tiny  # csgraph treats zeros as missing edges
    np.fill_diagonal(dist, 0)
    tree = minimum_spanning_tree(dist).tocoo()
    w = tree.data
    return np.where(w <= 1e-200, 0.0, w)


def distinct_weights(weights: np.ndarray, rel: float = 1e-9) -> list[float]:
    out: list[float] = []
    for w in sorted(float(x) for x in weights if x > 0):
        if not out or w > out[-1] * (1 + rel):
            out.append(w)
    return out


def mst_bottleneck(grid: Prefractal) -> float:
    w = mst_weights(grid)
    return float(w.max()) if len(w) else 0.0


def threshold_cascade_check(pattern: Pattern, level: int) -> bool:
    """Each level-(n-1) bottleneck reappears scaled by 1/p among the level-n bottlenecks."""
    if level < 3:
        raise ValueError("level must be >= 3")
    if attractor_connected(pattern):
        raise ConnectedAttractorError("cascade is only defined for disconnected attractors")
    p = pattern.p
    fine = distinct_weights(mst_weights(build_prefractal(pattern, level)))
    coarse = distinct_weights(mst_weights(build_prefractal(pattern, level - 1)))
    tol = p ** (-level)
    return all(any(abs(w - c / p) <= tol for w in fine) for c in coarse)
