"""Possible complex dimensions of dust carpets from intersection-type counts.

Each type contributes the poles of its generating function
``sum_k I(k) x^-k`` with ``x = p^s``, a sum of six partial-fraction terms
with denominators drawn from ``(x - 1)``, ``(x - h)``, ``(x - v)`` and
``(x - m)``.  A root ``x = r > 0`` gives the vertical family
``log_p(r) + 2 pi i z / ln p``.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

from .counting import ALL_TYPES, IntersectionType, TypeCounts, extract_parameters, validate_model
from .errors import CarpetError, InternalInconsistency
from .metric import (ConditionStatus, ConditionVerdict, Dusty, ThresholdEstimate, completely_dusty,
                     condition_c, threshold_alpha)
from .pattern import Pattern, build_prefractal
from .topology import DustClassification, Verdict, classify

SIG = 12


def _num(x: float) -> float:
    return float(f"{x:.{SIG}g}")


@dataclass(frozen=True, order=True)
class PoleFamily:
    """Poles ``log_p(r) + 2 pi i z / ln p`` for all integers z."""

    r: int
    p: int
    order: int = 1
    source: str = "Base"

    @property
    def sigma(self) -> float:
        return math.log(self.r) / math.log(self.p)

    @property
    def period(self) -> float:
        return 2 * math.pi / math.log(self.p)

    def to_dict(self) -> dict:
        return {"sigma": _num(self.sigma), "r": self.r, "p": self.p, "order": self.order}


def base_family(pattern: Pattern) -> PoleFamily:
    if pattern.m < 2:
        raise ValueError("the base family needs m >= 2")
    return PoleFamily(pattern.m, pattern.p, 1, "Base")


def _term_roots(tc: TypeCounts) -> list[tuple[int, list[int]]]:
    """(numerator, roots of the denominator) for the six partial-fraction terms."""
    m, h, v = tc.m, tc.h, tc.v
    return [
        (tc.spawn_h(), [1, h, m]),
        (tc.spawn_v(), [1, v, m]),
        (tc.H1, [h, m]),
        (tc.V1, [v, m]),
        (tc.D1, [1, m]),
        (tc.I1, [m]),
    ]


def pole_orders(tc: TypeCounts) -> dict[int, int]:
    """Worst-case pole order at each positive root x = r (r = 0 gives no pole in s)."""
    orders: dict[int, int] = {}
    for num, roots in _term_roots(tc):
        if not num:
            continue
        for r, k in Counter(roots).items():
            if r > 0:
                orders[r] = max(orders.get(r, 0), k)
    return orders


def case_table_roots(h: int, v: int, d_present: bool) -> Counter:
    """Multiset of roots r listed for one type by the (h, v, D) case table."""
    def special(x):
        return x in (0, 1)

    if h == v == 1:
        out = [1]
    elif h == v == 0:
        out = []
    elif h == v:
        out = [h]
    elif not special(h) and not special(v):
        out = [h, v]
    elif not special(h) and v == 1:
        out = [h, 1]
    elif h == 1 and not special(v):
        out = [v, 1]
    elif not special(h) and v == 0:
        out = [h]
    elif h == 0 and not special(v):
        out = [v]
    else:  # (h, v) = (0, 1) or (1, 0): absent from the table, treated as the generic reading
        out = [1]
    if d_present:
        out.append(1)
    return Counter(out)


def type_pole_families(tc: TypeCounts, m: int, p: int, check: bool = True) -> list[PoleFamily]:
    """Pole families contributed by one type; poles at x = m of order 1 stay in the base family."""
    orders = pole_orders(tc)
    fams = [PoleFamily(r, p, k, tc.type.value) for r, k in sorted(orders.items()) if not (r == m and k == 1)]
    if check and m not in (tc.h, tc.v) and not tc.is_zero:
        got = Counter({r: k for r, k in orders.items() if r != m})
        d_present = bool(tc.D1 or tc.spawn_h() or tc.spawn_v())
        table = case_table_roots(tc.h if tc.H1 else 0, tc.v if tc.V1 else 0, d_present)
        if got - table:
            raise InternalInconsistency(
                f"type {tc.type.value}: partial fractions give {dict(got)}, table allows {dict(table)}")
    return fams


def _merge(families) -> list[PoleFamily]:
    best: dict[int, PoleFamily] = {}
    for f in families:
        if f.r not in best or f.order > best[f.r].order:
            best[f.r] = f
    return [best[r] for r in sorted(best)]


@dataclass
class TypeEntry:
    counts: TypeCounts | None
    condition: ConditionVerdict | None
    families: list[PoleFamily]
    error: str | None = None


@dataclass
class DimensionReport:
    base: PoleFamily
    combined: list[PoleFamily]
    conditional: list[PoleFamily]
    caveats: list[str]


CAVEAT_UPPER = "possible complex dimensions only: zero-pole cancellation is not excluded"
CAVEAT_ORDER = "orders are worst case across types"


def combine(base: PoleFamily, per_type: list[TypeEntry]) -> DimensionReport:
    """Union the base family with the families of every type whose overlap condition holds."""
    chosen, cond = [base], []
    caveats = [CAVEAT_UPPER, CAVEAT_ORDER]
    for entry in per_type:
        if entry.condition is None:
            continue
        status = entry.condition.status
        if status is ConditionStatus.SATISFIED:
            chosen.extend(entry.families)
        elif status is ConditionStatus.BORDERLINE and entry.families:
            cond.extend(entry.families)
            caveats.append(f"type {entry.counts.type.value}: overlap condition borderline, "
                           "its families are listed as conditional")
    combined = _merge(PoleFamily(f.r, f.p, f.order, "Combined") for f in chosen)
    conditional = _merge(PoleFamily(f.r, f.p, f.order, "Conditional") for f in cond)
    return DimensionReport(base, combined, conditional, caveats)


@dataclass(frozen=True)
class AnalysisConfig:
    depth: int | None = None  # complement check depth
    level: int | None = None  # threshold level
    k_max: int = 5  # brute-force validation depth


def default_level(p: int) -> int:
    n = 2
    while p ** (n + 1) <= 729:
        n += 1
    return n


@dataclass
class AnalysisReport:
    pattern: Pattern
    classification: DustClassification
    alpha: ThresholdEstimate | None
    dusty: Dusty | None
    types: dict[IntersectionType, TypeEntry]
    validation: dict[IntersectionType, bool]
    dimensions: DimensionReport | None
    caveats: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        types = []
        for t, e in self.types.items():
            tc = e.counts
            types.append({
                "type": t.value,
                "counts": None if tc is None else {
                    k: getattr(tc, k) for k in ("I1", "D1", "H1", "V1", "D2", "H2", "V2", "D3")},
                "h": None if tc is None else tc.h,
                "v": None if tc is None else tc.v,
                "dH": None if tc is None else tc.dH,
                "dV": None if tc is None else tc.dV,
                "dCombined": None if tc is None else tc.d_combined,
                "validated": self.validation.get(t),
                "conditionC": None if e.condition is None else e.condition.to_dict(),
                "families": [f.to_dict() for f in e.families],
                "error": e.error,
            })
        dims = self.dimensions
        return {
            "pattern": {"p": self.pattern.p, "kept": [list(c) for c in self.pattern.cells]},
            "classification": self.classification.verdict.value,
            "completelyDusty": None if self.dusty is None else self.dusty.value,
            "alpha": None if self.alpha is None else [_num(x) for x in self.alpha.as_list()],
            "types": types,
            "base": None if dims is None else dims.base.to_dict(),
            "combined": "NotApplicable" if dims is None else [f.to_dict() for f in dims.combined],
            "conditional": [] if dims is None else [f.to_dict() for f in dims.conditional],
            "caveats": self.caveats + ([] if dims is None else dims.caveats),
        }


def analyze(pattern: Pattern, config: AnalysisConfig | None = None) -> AnalysisReport:
    config = config or AnalysisConfig()
    level = config.level or default_level(pattern.p)
    cls = classify(pattern, config.depth)
    dust = cls.verdict is Verdict.DUST_TYPE
    grids = {k: build_prefractal(pattern, k) for k in range(1, 5)}
    alpha = threshold_alpha(pattern, level) if dust else None
    dusty = completely_dusty(pattern, level, alpha) if dust else None
    entries: dict[IntersectionType, TypeEntry] = {}
    validation: dict[IntersectionType, bool] = {}
    caveats: list[str] = []
    for t in ALL_TYPES:
        try:
            tc = extract_parameters(pattern, t, grids)
        except CarpetError as exc:
            entries[t] = TypeEntry(None, None, [], f"{type(exc).__name__}: {exc}")
            continue
        rep = validate_model(pattern, t, config.k_max, tc=tc)
        validation[t] = rep.ok
        if not dust:
            entries[t] = TypeEntry(tc, None, [])
            continue
        cond = condition_c(pattern, t, alpha, level, counts=tc)
        fams = [] if tc.is_zero else type_pole_families(tc, pattern.m, pattern.p)
        entries[t] = TypeEntry(tc, cond, fams)
    if not dust:
        caveats.append(f"classification {cls.verdict.value}: counts are reported but the dust "
                       "pole analysis does not apply, so no dimensions are claimed")
        return AnalysisReport(pattern, cls, None, None, entries, validation, None, caveats)
    dims = combine(base_family(pattern), list(entries.values()))
    return AnalysisReport(pattern, cls, alpha, dusty, entries, validation, dims, caveats)
