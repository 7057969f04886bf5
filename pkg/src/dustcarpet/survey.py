"""Exhaustive enumeration of generator patterns and batch analysis."""
from __future__ import annotations

import csv
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from itertools import combinations
from math import comb

import numpy as np

from .dimensions import AnalysisConfig, analyze
from .errors import CarpetError
from .pattern import Pattern, _maps, orbit_size, parse_pattern, symmetry_canonical


@dataclass(frozen=True)
class SurveyConfig:
    p: int = 3
    m_lo: int = 2
    m_hi: int | None = None  # defaults to p^2 - 1
    dedup: bool = False
    depth: int | None = None
    level: int | None = None
    k_max: int = 5
    timings: bool = False  # wall-clock columns break byte-identical output, so they are opt-in
    allow_large: bool = False

    @property
    def m_range(self) -> tuple[int, int]:
        return self.m_lo, self.m_hi if self.m_hi is not None else self.p**2 - 1


def enumerate_patterns(p: int, m_range: tuple[int, int] | None = None, dedup: bool = False):
    """Patterns with m in m_range, in lexicographic order of their row-major cell lists."""
    if p not in (2, 3, 4):
        raise ValueError("p must be 2, 3 or 4")
    lo, hi = m_range or (2, p * p - 1)
    if not 2 <= lo <= hi <= p * p - 1:
        raise ValueError(f"m range [{lo}, {hi}] not inside [2, {p * p - 1}]")
    cells = [(c, r) for r in range(p) for c in range(p)]
    for m in range(lo, hi + 1):
        for chosen in combinations(cells, m):
            pat = Pattern(p, frozenset(chosen))
            if dedup and symmetry_canonical(pat) != pat:
                continue
            yield pat


def burnside_orbit_count(p: int, m: int) -> int:
    """Number of dihedral orbits of m-cell patterns, from cycle counts of each symmetry."""
    cells = [(c, r) for r in range(p) for c in range(p)]
    total = 0
    for f in _maps(p):
        seen, poly = set(), np.zeros(p * p + 1, dtype=object)
        poly[0] = 1
        for cell in cells:
            if cell in seen:
                continue
            length, cur = 0, cell
            while cur not in seen:
                seen.add(cur)
                cur = f(*cur)
                length += 1
            shifted = np.zeros_like(poly)
            shifted[length:] = poly[:-length]
            poly = poly + shifted
        total += int(poly[m])
    return total // 8


def pattern_count(p: int, m_range: tuple[int, int]) -> int:
    return sum(comb(p * p, m) for m in range(m_range[0], m_range[1] + 1))


def pattern_label(pattern: Pattern) -> str:
    return pattern.to_ascii().strip().replace("\n", "/")


@dataclass
class SurveyRecord:
    pattern: str
    p: int
    m: int
    orbit_size: int
    verdict: str
    alpha_lo: float | None
    alpha_hi: float | None
    families: list = field(default_factory=list)  # [r, order] pairs of the combined multiset
    conditional: list = field(default_factory=list)
    validation: str = "ok"
    millis: float | None = None
    report: dict | None = None
    error: str | None = None

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, doc: dict) -> "SurveyRecord":
        return cls(**doc)


def _analyze_one(args) -> SurveyRecord:
    pattern, config = args
    start = time.perf_counter()
    base = dict(pattern=pattern_label(pattern), p=pattern.p, m=pattern.m,
                orbit_size=orbit_size(pattern))
    try:
        rep = analyze(pattern, AnalysisConfig(config.depth, config.level, config.k_max))
    except CarpetError as exc:
        return SurveyRecord(**base, verdict="Error", alpha_lo=None, alpha_hi=None,
                            validation="error", error=f"{type(exc).__name__}: {exc}")
    doc = rep.to_dict()
    errors = [e.error for e in rep.types.values() if e.error]
    if errors:
        validation = "model-violation"
    elif all(rep.validation.values()):
        validation = "ok"
    else:
        validation = "mismatch"
    dims = rep.dimensions
    millis = round((time.perf_counter() - start) * 1000, 1) if config.timings else None
    return SurveyRecord(
        **base,
        verdict=rep.classification.verdict.value,
        alpha_lo=None if doc["alpha"] is None else doc["alpha"][0],
        alpha_hi=None if doc["alpha"] is None else doc["alpha"][1],
        families=[] if dims is None else [[f.r, f.order] for f in dims.combined],
        conditional=[] if dims is None else [[f.r, f.order] for f in dims.conditional],
        validation=validation,
        millis=millis,
        report=doc,
    )


def run_survey(config: SurveyConfig, workers: int = 1) -> list[SurveyRecord]:
    """Analyze every pattern (or orbit representative) of the configured space, in enumeration order."""
    if workers < 1:
        raise ValueError("workers must be >= 1")
    if config.p == 4 and not config.allow_large:
        raise ValueError("the p = 4 space is large; pass allow_large to run it")
    jobs = [(pat, config) for pat in enumerate_patterns(config.p, config.m_range, config.dedup)]
    if workers == 1:
        return [_analyze_one(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_analyze_one, jobs, chunksize=max(1, len(jobs) // (8 * workers))))


CSV_COLUMNS = ["canonical_pattern", "p", "m", "orbit_size", "verdict", "alpha_lo", "alpha_hi",
               "sigmas", "validation", "millis"]


def _fmt(x) -> str:
    return "" if x is None else f"{x:.12g}"


def write_survey(records: list[SurveyRecord], fmt: str, destination) -> None:
    if not records:
        raise ValueError("no records to write")
    if fmt == "csv":
        with open(destination, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(CSV_COLUMNS)
            for r in records:
                sig = ";".join(f"{a}:{b}" for a, b in r.families)
                w.writerow([r.pattern, r.p, r.m, r.orbit_size, r.verdict, _fmt(r.alpha_lo),
                            _fmt(r.alpha_hi), sig, r.validation, _fmt(r.millis)])
    elif fmt == "json":
        with open(destination, "w", encoding="utf-8") as fh:
            json.dump([r.to_dict() for r in records], fh, indent=1, sort_keys=True)
            fh.write("\n")
    else:
        raise ValueError(f"unknown format {fmt!r}")


def read_survey_json(path) -> list[SurveyRecord]:
    with open(path, encoding="utf-8") as fh:
        return [SurveyRecord.from_dict(d) for d in json.load(fh)]


def record_pattern(record: SurveyRecord) -> Pattern:
    return parse_pattern(record.pattern.replace("/", "\n"))
