"""Generator patterns, prefractals and the dihedral action on patterns.

Cells are addressed as ``(col, row)`` with the column counted from the left
and the row counted from the bottom, so cell ``(i, j)`` is the image of the
unit square under ``(x, y) -> ((x + i) / p, (y + j) / p)``.  Occupancy
arrays are indexed ``occ[row, col]`` with row 0 at the bottom.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .errors import BudgetExceeded, EmptyGrid, FullGrid, PatternError

# Largest prefractal side (in cells) that build_prefractal will allocate.
MAX_SIDE = 2**15

Cell = tuple[int, int]


@dataclass(frozen=True, eq=False)
class Pattern:
    p: int
    kept: frozenset[Cell]

    def __post_init__(self):
        if self.p < 2:
            raise PatternError(f"grid size must be >= 2, got {self.p}")
        kept = frozenset((int(c), int(r)) for c, r in self.kept)
        for c, r in kept:
            if not (0 <= c < self.p and 0 <= r < self.p):
                raise PatternError(f"cell {(c, r)} outside the {self.p}x{self.p} grid")
        if not kept:
            raise EmptyGrid("pattern keeps no cells")
        if len(kept) == self.p * self.p:
            raise FullGrid("pattern keeps every cell")
        object.__setattr__(self, "kept", kept)

    @property
    def m(self) -> int:
        return len(self.kept)

    @property
    def cells(self) -> tuple[Cell, ...]:
        """Kept cells in (row, col) reading order; the canonical ordering."""
        return tuple(sorted(self.kept, key=lambda c: (c[1], c[0])))

    def key(self) -> tuple:
        return (self.p, self.cells)

    def __eq__(self, other):
        if not isinstance(other, Pattern):
            return NotImplemented
        return self.p == other.p and self.kept == other.kept

    def __hash__(self):
        return hash((self.p, self.kept))

    def __lt__(self, other):
        return self.key() < other.key()

    def grid(self) -> np.ndarray:
        occ = np.zeros((self.p, self.p), dtype=bool)
        for c, r in self.kept:
            occ[r, c] = True
        return occ

    def to_ascii(self) -> str:
        occ = self.grid()
        rows = ["".join("#" if v else "." for v in occ[r]) for r in range(self.p - 1, -1, -1)]
        return "\n".join(rows) + "\n"

    def to_json(self) -> str:
        return json.dumps({"p": self.p, "kept": [list(c) for c in self.cells]})

    def __repr__(self):
        return f"Pattern(p={self.p}, kept={list(self.cells)})"


def parse_pattern(text: str) -> Pattern:
    """Parse either the ASCII grid form or the JSON form of a pattern."""
    stripped = text.strip()
    if stripped.startswith("{"):
        try:
            doc = json.loads(stripped)
            p = int(doc["p"])
            kept = [tuple(cell) for cell in doc["kept"]]
        except (ValueError, KeyError, TypeError) as exc:
            raise PatternError(f"bad JSON pattern: {exc}") from exc
        if any(len(cell) != 2 for cell in kept):
            raise PatternError("JSON cells must be [col, row] pairs")
        if len(set(kept)) != len(kept):
            raise PatternError("duplicate cells in JSON pattern")
        return Pattern(p, frozenset(kept))

    rows = [line.strip() for line in stripped.splitlines() if line.strip()]
    if not rows:
        raise EmptyGrid("empty pattern document")
    p = len(rows[0])
    if any(len(row) != p for row in rows):
        raise PatternError("ragged rows in ASCII pattern")
    if len(rows) != p:
        raise PatternError(f"ASCII pattern must be square, got {len(rows)} rows of width {p}")
    bad = set("".join(rows)) - {"#", "."}
    if bad:
        raise PatternError(f"unexpected characters {sorted(bad)}")
    kept = {(c, p - 1 - i) for i, row in enumerate(rows) for c, ch in enumerate(row) if ch == "#"}
    return Pattern(p, frozenset(kept))


def load_pattern(path) -> Pattern:
    with open(path, encoding="utf-8") as fh:
        return parse_pattern(fh.read())


@dataclass(frozen=True, eq=False)
class Prefractal:
    pattern: Pattern
    level: int
    occupancy: np.ndarray

    @property
    def side(self) -> int:
        return self.occupancy.shape[0]

    @property
    def count(self) -> int:
        return int(self.occupancy.sum())

    def __eq__(self, other):
        if not isinstance(other, Prefractal):
            return NotImplemented
        return (
            self.pattern == other.pattern
            and self.level == other.level
            and np.array_equal(self.occupancy, other.occupancy)
        )


def _check_budget(p: int, level: int, max_side: int | None) -> None:
    limit = MAX_SIDE if max_side is None else max_side
    if level < 0:
        raise ValueError("level must be >= 0")
    if p**level > limit:
        raise BudgetExceeded(f"p^n = {p}^{level} exceeds the side budget {limit}")


def build_prefractal(pattern: Pattern, level: int, max_side: int | None = None) -> Prefractal:
    """Level-n prefractal: cell (c, r) is kept iff every base-p digit pair of (c, r) is kept."""
    _check_budget(pattern.p, level, max_side)
    side = pattern.p**level
    base = pattern.grid()
    keep = np.ones((side, side), dtype=bool)
    idx = np.arange(side)
    for k in range(level):
        digits = (idx // pattern.p**k) % pattern.p
        keep &= base[digits[:, None], digits[None, :]]
    keep.setflags(write=False)
    return Prefractal(pattern, level, keep)


def refine(grid: Prefractal, max_side: int | None = None) -> Prefractal:
    """Replace every kept cell by a copy of the generator."""
    _check_budget(grid.pattern.p, grid.level + 1, max_side)
    occ = np.kron(grid.occupancy, grid.pattern.grid()).astype(bool)
    occ.setflags(write=False)
    return Prefractal(grid.pattern, grid.level + 1, occ)


# --- dihedral action -------------------------------------------------------

def _maps(n: int) -> list[Callable[[int, int], Cell]]:
    q = n - 1
    return [
        lambda c, r: (c, r),
        lambda c, r: (q - r, c),  # rotate 90 degrees counterclockwise
        lambda c, r: (q - c, q - r),
        lambda c, r: (r, q - c),
        lambda c, r: (q - c, r),  # mirror in the vertical axis
        lambda c, r: (c, q - r),
        lambda c, r: (r, c),
        lambda c, r: (q - r, q - c),
    ]


SYMMETRY_NAMES = ("id", "rot90", "rot180", "rot270", "flip_x", "flip_y", "transpose", "antitranspose")


def transform_cells(cells: Iterable[Cell], n: int, g: int) -> frozenset[Cell]:
    """Apply dihedral element ``g`` (0..7) to cells of an ``n x n`` grid."""
    f = _maps(n)[g]
    return frozenset(f(c, r) for c, r in cells)


def transform_point(x: float, y: float, g: int) -> tuple[float, float]:
    """Dihedral element ``g`` acting on the unit square."""
    return {
        0: (x, y), 1: (1 - y, x), 2: (1 - x, 1 - y), 3: (y, 1 - x),
        4: (1 - x, y), 5: (x, 1 - y), 6: (y, x), 7: (1 - y, 1 - x),
    }[g]


def transform_pattern(pattern: Pattern, g: int) -> Pattern:
    return Pattern(pattern.p, transform_cells(pattern.kept, pattern.p, g))


def dihedral_images(pattern: Pattern) -> list[Pattern]:
    return [transform_pattern(pattern, g) for g in range(8)]


def symmetry_canonical(pattern: Pattern) -> Pattern:
    return min(dihedral_images(pattern), key=Pattern.key)


def orbit_size(pattern: Pattern) -> int:
    return len(set(dihedral_images(pattern)))


# Named fixtures used across tests, scripts and the README.
def _from_rows(*rows: str) -> Pattern:
    return parse_pattern("\n".join(rows))


CANTOR = _from_rows("...", "...", "#.#")
FOUR_CORNER = _from_rows("#.#", "...", "#.#")
SIERPINSKI = _from_rows("###", "#.#", "###")
BOTTOM_ROW = _from_rows("...", "...", "###")
DIAGONAL = _from_rows("..#", ".#.", "#..")
