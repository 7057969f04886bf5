"""Connectivity of attractors, prefractals and their complements."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy import ndimage

from .pattern import Pattern, Prefractal, build_prefractal

EIGHT = np.ones((3, 3), dtype=bool)
FOUR = ndimage.generate_binary_structure(2, 1)

SIDES = ("left", "right", "bottom", "top")


class Verdict(str, Enum):
    DEGENERATE = "Degenerate"
    NEVER_DUST_GRID = "NeverDustGrid"
    CONNECTED_ATTRACTOR = "ConnectedAttractor"
    DUST_TYPE = "DustType"
    COMPLEMENT_OBSTRUCTED = "ComplementObstructed"
    UNDETERMINED = "Undetermined"


@dataclass(frozen=True)
class ComplementStatus:
    kind: str  # "ConnectedVerifiedToDepth" | "CertifiedDisconnected" | "UndeterminedAtDepth"
    depth: int

    def __str__(self):
        return f"{self.kind}({self.depth})"


@dataclass(frozen=True)
class DustClassification:
    verdict: Verdict
    attractor_connected: bool
    complement_status: ComplementStatus | None
    evidence: tuple[str, ...] = field(default=())

    @property
    def is_dust(self) -> bool:
        return self.verdict is Verdict.DUST_TYPE


def default_depth(p: int) -> int:
    n = 2
    while p ** (n + 1) <= 1024:
        n += 1
    return n


def prefractal_connected(grid: Prefractal) -> bool:
    """Closed kept squares form one connected union (edge or corner contact)."""
    _, n = ndimage.label(grid.occupancy, structure=EIGHT)
    return n == 1


def _complement_labels(occ: np.ndarray) -> tuple[np.ndarray, int]:
    removed = np.pad(~occ, 1, constant_values=True)
    labels, _ = ndimage.label(removed, structure=FOUR)
    return labels, labels[0, 0]


def complement_connected_at_level(grid: Prefractal) -> bool:
    """Every removed cell reaches the exterior through open edges of removed cells."""
    labels, outside = _complement_labels(grid.occupancy)
    return bool(np.all(labels[labels > 0] == outside))


def vertex_in_attractor(pattern: Pattern, occ: np.ndarray) -> np.ndarray:
    """For each interior grid vertex, whether it belongs to the limit set.

    A vertex is in the attractor iff one of the kept cells around it holds the
    matching corner of its copy, i.e. the generator keeps that corner cell.
    """
    q = pattern.p - 1
    kept = pattern.kept
    ld, rd = occ[:-1, :-1], occ[:-1, 1:]
    lu, ru = occ[1:, :-1], occ[1:, 1:]
    inside = np.zeros(ld.shape, dtype=bool)
    if (q, q) in kept:
        inside |= ld
    if (0, q) in kept:
        inside |= rd
    if (q, 0) in kept:
        inside |= lu
    if (0, 0) in kept:
        inside |= ru
    return inside


def complement_connected_through_vertices(grid: Prefractal) -> bool:
    """Complement connectivity where removed cells may also meet at a vertex outside A.

    The passable set (removed open cells, their shared open edges, and grid
    vertices missing from the attractor) lies in the complement of A and
    grows with the level.
    """
    occ = grid.occupancy
    labels, outside = _complement_labels(occ)
    inner = labels[1:-1, 1:-1]
    passable = ~vertex_in_attractor(grid.pattern, occ)
    parent = {}

    def find(a):
        parent.setdefault(a, a)
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a, b in ((inner[:-1, :-1], inner[1:, 1:]), (inner[1:, :-1], inner[:-1, 1:])):
        link = passable & (a > 0) & (b > 0) & (a != b)
        for x, y in set(zip(a[link].tolist(), b[link].tolist())):
            parent[find(x)] = find(y)
    roots = {find(int(v)) for v in np.unique(labels[labels > 0])}
    return len(roots) == 1


def edge_digits(pattern: Pattern, side: str) -> frozenset[int]:
    """Digit set of the attractor's trace on one side of the unit square."""
    q = pattern.p - 1
    if side == "left":
        return frozenset(r for c, r in pattern.kept if c == 0)
    if side == "right":
        return frozenset(r for c, r in pattern.kept if c == q)
    if side == "bottom":
        return frozenset(c for c, r in pattern.kept if r == 0)
    if side == "top":
        return frozenset(c for c, r in pattern.kept if r == q)
    raise ValueError(f"unknown side {side!r}")


def trace_intersect(p: int, d1, d2) -> bool:
    """Do the base-p digit Cantor sets C(d1) and C(d2) in [0, 1] meet?

    Runs the carry automaton: after k digits the scaled difference of the
    two partial expansions is an integer v, and an infinite continuation
    exists only while |v| <= 1.
    """
    d1, d2 = set(d1), set(d2)
    if not d1 or not d2:
        return False
    diffs = {a - b for a in d1 for b in d2}
    succ = {v: {p * v + d for d in diffs if abs(p * v + d) <= 1} for v in (-1, 0, 1)}
    alive = {-1, 0, 1}
    while True:
        keep = {v for v in alive if succ[v] & alive}
        if keep == alive:
            break
        alive = keep
    return 0 in alive


def contact_edges(pattern: Pattern) -> list[tuple[tuple[int, int], tuple[int, int]]]:
    """Pairs of kept cells whose attractor copies intersect."""
    p, kept = pattern.p, pattern.kept
    q = p - 1
    horiz = trace_intersect(p, edge_digits(pattern, "right"), edge_digits(pattern, "left"))
    vert = trace_intersect(p, edge_digits(pattern, "top"), edge_digits(pattern, "bottom"))
    diag = (q, q) in kept and (0, 0) in kept
    anti = (q, 0) in kept and (0, q) in kept
    edges = []
    for c, r in sorted(kept):
        if horiz and (c + 1, r) in kept:
            edges.append(((c, r), (c + 1, r)))
        if vert and (c, r + 1) in kept:
            edges.append(((c, r), (c, r + 1)))
        if diag and (c + 1, r + 1) in kept:
            edges.append(((c, r), (c + 1, r + 1)))
        if anti and (c + 1, r - 1) in kept:
            edges.append(((c, r), (c + 1, r - 1)))
    return edges


def attractor_connected(pattern: Pattern) -> bool:
    """Exact connectivity of the limit set via its contact graph."""
    cells = sorted(pattern.kept)
    index = {cell: i for i, cell in enumerate(cells)}
    parent = list(range(len(cells)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for a, b in contact_edges(pattern):
        parent[find(index[a])] = find(index[b])
    return len({find(i) for i in range(len(cells))}) == 1


def full_sides(pattern: Pattern) -> dict[str, bool]:
    return {side: len(edge_digits(pattern, side)) == pattern.p for side in SIDES}


def sealed_region_certified(grid: Prefractal) -> bool:
    """Is some enclosed removed region bounded entirely by full edges of the attractor?

    A region is a 4-connected component of removed cells that does not reach
    the exterior.  Each of its edges toward a kept cell lies in the attractor
    when the matching side of the generator is entirely kept, in which case
    the region's boundary is a closed curve inside the attractor.
    """
    occ = grid.occupancy
    labels, outside = _complement_labels(occ)
    labels = labels[1:-1, 1:-1]
    enclosed = (labels > 0) & (labels != outside)
    if not enclosed.any():
        return False
    full = full_sides(grid.pattern)
    bad = np.zeros_like(enclosed)
    # region cell with a kept neighbour to its right needs the kept cell's left side full
    if not full["left"]:
        bad[:, :-1] |= enclosed[:, :-1] & occ[:, 1:]
    if not full["right"]:
        bad[:, 1:] |= enclosed[:, 1:] & occ[:, :-1]
    if not full["bottom"]:
        bad[:-1, :] |= enclosed[:-1, :] & occ[1:, :]
    if not full["top"]:
        bad[1:, :] |= enclosed[1:, :] & occ[:-1, :]
    region_ids = set(np.unique(labels[enclosed]).tolist())
    bad_ids = set(np.unique(labels[bad]).tolist()) if bad.any() else set()
    return bool(region_ids - bad_ids)


def complement_status(pattern: Pattern, depth: int) -> tuple[ComplementStatus, list[str]]:
    notes = []
    connected = {}
    grid = build_prefractal(pattern, 1)
    for level in range(1, depth + 1):
        if level > 1:
            grid = build_prefractal(pattern, level)
        connected[level] = complement_connected_through_vertices(grid)
        if not connected[level] and sealed_region_certified(grid):
            notes.append(f"enclosed removed region at level {level} bounded by full attractor edges")
            return ComplementStatus("CertifiedDisconnected", level), notes
    # enclosed regions may open up at deeper levels, so only the tail matters
    if connected[depth] and connected.get(depth - 1, True):
        notes.append(f"complement connected at levels {depth - 1} and {depth}")
        return ComplementStatus("ConnectedVerifiedToDepth", depth), notes
    closed = [lv for lv, ok in connected.items() if not ok]
    notes.append(f"prefractal complement disconnected at levels {closed}, no seal certificate")
    return ComplementStatus("UndeterminedAtDepth", depth), notes


def classify(pattern: Pattern, depth: int | None = None) -> DustClassification:
    if depth is None:
        depth = default_depth(pattern.p)
    if depth < 2:
        raise ValueError("depth must be >= 2")
    connected = attractor_connected(pattern)
    if pattern.m == 1:
        return DustClassification(Verdict.DEGENERATE, connected, None, ("single kept cell: the limit is a point",))
    if pattern.p == 2:
        return DustClassification(Verdict.NEVER_DUST_GRID, connected, None, ("2x2 grids never produce dust",))
    status, notes = complement_status(pattern, depth)
    notes.append("attractor connected" if connected else "attractor disconnected (contact graph)")
    if status.kind == "CertifiedDisconnected":
        verdict = Verdict.COMPLEMENT_OBSTRUCTED
    elif connected:
        verdict = Verdict.CONNECTED_ATTRACTOR
    elif status.kind == "ConnectedVerifiedToDepth":
        verdict = Verdict.DUST_TYPE
    else:
        verdict = Verdict.UNDETERMINED
    return DustClassification(verdict, connected, status, tuple(notes))
