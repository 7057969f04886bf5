"""Complex-dimension analysis of dust-type Sierpinski carpet modifications."""
from .pattern import (
    BOTTOM_ROW,
    CANTOR,
    DIAGONAL,
    FOUR_CORNER,
    SIERPINSKI,
    Pattern,
    Prefractal,
    build_prefractal,
    parse_pattern,
    refine,
    symmetry_canonical,
)

__all__ = [
    "BOTTOM_ROW",
    "CANTOR",
    "DIAGONAL",
    "FOUR_CORNER",
    "SIERPINSKI",
    "Pattern",
    "Prefractal",
    "build_prefractal",
    "parse_pattern",
    "refine",
    "symmetry_canonical",
]
