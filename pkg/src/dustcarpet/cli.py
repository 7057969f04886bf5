"""Command-line entry point: ``dustcarpet <command> ...``."""
from __future__ import annotations

import argparse
import json
import sys

from .counting import IntersectionType, classify_hosts, closed_form_count, count_occurrences, extract_parameters
from .dimensions import AnalysisConfig, analyze
from .errors import CarpetError, InternalInconsistency, ModelViolation
from .pattern import build_prefractal, load_pattern
from .render import RenderOptions, render_svg
from .survey import SurveyConfig, run_survey, write_survey
from .topology import classify
from .tube import ZetaConfig, tube_curve, write_tube_csv, zeta_numeric

EXIT_OK, EXIT_USAGE, EXIT_CAVEAT, EXIT_INTERNAL = 0, 2, 3, 4


class UsageError(Exception):
    pass


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"bad number list {text!r}") from exc


def _m_range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition("..")
    try:
        return (int(lo), int(hi)) if sep else (int(lo), int(lo))
    except ValueError as exc:
        raise UsageError(f"bad m range {text!r}, expected LO..HI") from exc


def _highlight(text: str) -> tuple[IntersectionType, str]:
    name, sep, color = text.rpartition(":")
    if not sep:
        name, color = text, "red"
    try:
        return IntersectionType.parse(name), color
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _load(path):
    try:
        return load_pattern(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc


def _print_report(rep) -> None:
    doc = rep.to_dict()
    print(f"classification: {doc['classification']}")
    if doc["alpha"] is not None:
        print(f"alpha: [{doc['alpha'][0]}, {doc['alpha'][1]}]")
        print(f"completely dusty: {doc['completelyDusty']}")
    for t in doc["types"]:
        cond = t["conditionC"]["status"] if t["conditionC"] else "-"
        fams = " ".join(f"{f['r']}^{f['order']}" for f in t["families"]) or "-"
        extra = f" error={t['error']}" if t["error"] else ""
        print(f"  {t['type']:<12} h={t['h']} v={t['v']} dH={t['dH']} dV={t['dV']} C={cond} poles(r^order)={fams}{extra}")
    if doc["combined"] == "NotApplicable":
        print("dimensions: NotApplicable")
    else:
        p = rep.pattern.p
        print("possible complex dimensions: " + ", ".join(
            f"log_{p}({f['r']}) = {f['sigma']} (order {f['order']})" for f in doc["combined"]))
        if doc["conditional"]:
            print("conditional: " + ", ".join(f"r={f['r']} order {f['order']}" for f in doc["conditional"]))
    for c in doc["caveats"]:
        print(f"note: {c}")


def _analysis_exit(rep) -> int:
    if any(e.error for e in rep.types.values()):
        return EXIT_CAVEAT
    if rep.dimensions is not None and rep.dimensions.conditional:
        return EXIT_CAVEAT
    return EXIT_OK


def cmd_analyze(args) -> int:
    pat = _load(args.pattern)
    rep = analyze(pat, AnalysisConfig(args.depth, args.level))
    _print_report(rep)
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(rep.to_dict(), fh, indent=1)
            fh.write("\n")
    if args.svg:
        level = 3 if pat.p ** 3 <= 729 else 2
        with open(args.svg, "w", encoding="utf-8") as fh:
            fh.write(render_svg(build_prefractal(pat, level), RenderOptions(level=level)))
    return _analysis_exit(rep)


def cmd_classify(args) -> int:
    res = classify(_load(args.pattern), args.depth)
    print(res.verdict.value)
    print(f"attractor connected: {res.attractor_connected}")
    if res.complement_status is not None:
        print(f"complement: {res.complement_status}")
    for line in res.evidence:
        print(f"note: {line}")
    return EXIT_OK


def cmd_count(args) -> int:
    pat = _load(args.pattern)
    t = IntersectionType.parse(args.type)
    if args.levels < 1:
        raise UsageError("--levels must be >= 1")
    try:
        tc = extract_parameters(pat, t)
    except ModelViolation as exc:
        tc = None
        print(f"note: parameters unavailable: {type(exc).__name__}: {exc}", file=sys.stderr)
    print("level,count,D,H,V,closed_form")
    for k in range(1, args.levels + 1):
        grid = build_prefractal(pat, k)
        hosts = "," * 2 if k == 1 else "{0.D},{0.H},{0.V}".format(classify_hosts(grid, t))
        closed = "" if tc is None else closed_form_count(tc, pat.m, k)
        print(f"{k},{count_occurrences(grid, t)},{hosts},{closed}")
    if tc is None:
        return EXIT_CAVEAT
    print(f"h={tc.h} v={tc.v} dH={tc.dH} dV={tc.dV}" + (f" dCombined={tc.d_combined}" if tc.d_combined is not None else ""))
    return EXIT_OK


def cmd_dimensions(args) -> int:
    rep = analyze(_load(args.pattern), AnalysisConfig(args.depth, args.level))
    doc = rep.to_dict()
    print(json.dumps({"classification": doc["classification"], "combined": doc["combined"],
                      "conditional": doc["conditional"], "caveats": doc["caveats"]}, indent=1))
    return _analysis_exit(rep)


def _tube_level(p: int, level) -> int:
    if level is not None:
        return level
    n = 1
    while p ** (n + 1) <= 729:
        n += 1
    return n


def cmd_tube(args) -> int:
    pat = _load(args.pattern)
    radii = _floats(args.t)
    if not radii or min(radii) < 0:
        raise UsageError("--t needs nonnegative radii")
    grid = build_prefractal(pat, _tube_level(pat.p, args.level))
    samples = tube_curve(grid, radii, args.resolution or 1 / (grid.side * 2))
    if args.csv:
        write_tube_csv(args.csv, samples)
    for s in samples:
        print(f"t={s.t:.6g} area={s.area:.10g} +/- {s.error_bound:.3g}")
    return EXIT_OK


def cmd_zeta(args) -> int:
    pat = _load(args.pattern)
    parts = _floats(args.s)
    if len(parts) not in (1, 2):
        raise UsageError("--s expects RE or RE,IM")
    s = complex(parts[0], parts[1] if len(parts) == 2 else 0.0)
    grid = build_prefractal(pat, _tube_level(pat.p, args.level))
    cfg = ZetaConfig(args.delta, args.resolution or 1 / (grid.side * 2))
    val, err = zeta_numeric(grid, s, cfg)
    print(f"zeta({s.real:g}{s.imag:+g}i, delta={args.delta:g}) = {val.real:.10g}{val.imag:+.10g}i +/- {err:.3g}")
    return EXIT_OK


def cmd_survey(args) -> int:
    lo, hi = _m_range(args.m) if args.m else (2, args.p**2 - 1)
    cfg = SurveyConfig(args.p, lo, hi, args.dedup, timings=args.timings, allow_large=args.allow_large)
    records = run_survey(cfg, args.workers)
    fmt = args.format or ("json" if str(args.out).endswith(".json") else "csv")
    write_survey(records, fmt, args.out)
    counts: dict[str, int] = {}
    for r in records:
        counts[r.verdict] = counts.get(r.verdict, 0) + 1
    print(f"{len(records)} records: " + ", ".join(f"{k}={v}" for k, v in sorted(counts.items())))
    return EXIT_OK


def cmd_render(args) -> int:
    pat = _load(args.pattern)
    opts = RenderOptions(args.level, tuple(_highlight(h) for h in args.highlight or ()),
                         args.contour, args.canvas)
    svg = render_svg(build_prefractal(pat, args.level), opts)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(svg)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dustcarpet", description="Complex-dimension analysis of carpet patterns.")
    sub = ap.add_subparsers(dest="command", required=True)

    def with_pattern(name, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("pattern", help="pattern file (ASCII grid or JSON)")
        return sp

    sp = with_pattern("analyze", "full pipeline report")
    sp.add_argument("--depth", type=int)
    sp.add_argument("--level", type=int)
    sp.add_argument("--json")
    sp.add_argument("--svg")
    sp.set_defaults(func=cmd_analyze)

    sp = with_pattern("classify", "topological classification")
    sp.add_argument("--depth", type=int)
    sp.set_defaults(func=cmd_classify)

    sp = with_pattern("count", "intersection-type counts per level")
    sp.add_argument("--type", required=True)
    sp.add_argument("--levels", type=int, default=4)
    sp.set_defaults(func=cmd_count)

    sp = with_pattern("dimensions", "possible complex dimensions as JSON")
    sp.add_argument("--depth", type=int)
    sp.add_argument("--level", type=int)
    sp.set_defaults(func=cmd_dimensions)

    sp = with_pattern("tube", "tube areas on a raster")
    sp.add_argument("--t", required=True, help="comma-separated radii")
    sp.add_argument("--resolution", type=float)
    sp.add_argument("--level", type=int)
    sp.add_argument("--csv")
    sp.set_defaults(func=cmd_tube)

    sp = with_pattern("zeta", "truncated tube zeta integral")
    sp.add_argument("--s", required=True, help="RE or RE,IM")
    sp.add_argument("--delta", type=float, default=1.0)
    sp.add_argument("--resolution", type=float)
    sp.add_argument("--level", type=int)
    sp.set_defaults(func=cmd_zeta)

    sp = sub.add_parser("survey", help="enumerate and analyze a pattern space")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--m", help="LO..HI")
    sp.add_argument("--dedup", action="store_true")
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--format", choices=("csv", "json"))
    sp.add_argument("--timings", action="store_true")
    sp.add_argument("--allow-large", action="store_true")
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_survey)

    sp = with_pattern("render", "SVG of a prefractal")
    sp.add_argument("--level", type=int, default=3)
    sp.add_argument("--highlight", action="append", help="TYPE:COLOR, repeatable")
    sp.add_argument("--contour", type=float)
    sp.add_argument("--canvas", type=int, default=600)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_render)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except InternalInconsistency as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except ModelViolation as exc:
        print(f"model violation: {exc}", file=sys.stderr)
        return EXIT_CAVEAT
    except (UsageError, ValueError, CarpetError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
