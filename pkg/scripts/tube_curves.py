"""Tube areas and log-log slopes for the fixture patterns.

Writes one CSV per fixture with t, area and error bound, and prints the
Minkowski estimate next to log_p(m).
"""
import argparse
import math
from pathlib import Path

import numpy as np

from dustcarpet.pattern import BOTTOM_ROW, CANTOR, DIAGONAL, FOUR_CORNER, SIERPINSKI, build_prefractal
from dustcarpet.tube import minkowski_estimate, tube_curve, write_tube_csv

FIXTURES = {"cantor": CANTOR, "four_corner": FOUR_CORNER, "sierpinski": SIERPINSKI,
            "bottom_row": BOTTOM_ROW, "diagonal": DIAGONAL}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--level", type=int, default=5)
    ap.add_argument("--q", type=int, default=4, help="pixels per cell")
    ap.add_argument("--outdir", default="tube_out")
    args = ap.parse_args()
    out = Path(args.outdir)
    out.mkdir(exist_ok=True)

    radii = np.geomspace(1e-3, 0.3, 25)
    for name, pat in FIXTURES.items():
        grid = build_prefractal(pat, args.level)
        samples = tube_curve(grid, radii, 1 / (grid.side * args.q))
        write_tube_csv(out / f"{name}.csv", samples)
        est, resid = minkowski_estimate(pat)
        print(f"{name:<12} D ~ {est:.4f}  (log_p m = {math.log(pat.m, pat.p):.4f}, fit rms {resid:.1e})")


if __name__ == "__main__":
    main()
