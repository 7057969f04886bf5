import numpy as np
import pytest
from hypothesis import given, strategies as st

from dustcarpet.counting import (
    ALL_TYPES, IntersectionType as T, TypeCounts, classify_hosts, closed_form_count,
    count_occurrences, extract_parameters, recurrence_count, transform_type, validate_model,
)
from dustcarpet.errors import ModelViolation
from dustcarpet.pattern import (
    BOTTOM_ROW, CANTOR, SIERPINSKI, build_prefractal, transform_pattern,
)

from conftest import patterns

CORNERS = [t for t in ALL_TYPES if not t.is_edge]


def _zero_counts(t=T.EDGE_V, **kw):
    base = dict(type=t, m=3, p=3, I1=0, D1=0, H1=0, V1=0, D2=0, H2=0, V2=0, D3=0,
                h=0, v=0, dH=0, dV=0)
    base.update(kw)
    return TypeCounts(**base)


def test_type_parsing_roundtrip():
    for t in ALL_TYPES:
        assert T.parse(t.value) is t
        if not t.is_edge:
            assert T.from_quadrants(t.quadrants) is t
            assert len(t.quadrants) in (2, 3, 4)
    assert len(ALL_TYPES) == 9
    with pytest.raises(ValueError):
        T.parse("lu,ld")  # same-side pair is not a diagonal


@pytest.mark.parametrize("k,want", [(1, 2), (2, 8), (3, 26)])
def test_bottom_row_edge_counts(k, want):
    assert count_occurrences(build_prefractal(BOTTOM_ROW, k), T.EDGE_V) == want
    assert count_occurrences(build_prefractal(BOTTOM_ROW, k), T.EDGE_H) == 0


def test_sierpinski_level_one_corners():
    g = build_prefractal(SIERPINSKI, 1)
    assert count_occurrences(g, T.parse("lu,ld,rd,ru")) == 0
    for t in CORNERS:
        if len(t.quadrants) == 3:
            assert count_occurrences(g, t) == 1


@pytest.mark.parametrize("k", [1, 2, 3])
def test_cantor_has_no_occurrences(k):
    g = build_prefractal(CANTOR, k)
    assert all(count_occurrences(g, t) == 0 for t in ALL_TYPES)


def test_corner_counts_use_superset_occupancy():
    # a full 2x2 block contributes to every corner type at its centre
    g = build_prefractal(SIERPINSKI, 2)
    quad = count_occurrences(g, T.parse("lu,ld,rd,ru"))
    for t in CORNERS:
        assert count_occurrences(g, t) >= quad


def test_bottom_row_hosts():
    h2 = classify_hosts(build_prefractal(BOTTOM_ROW, 2), T.EDGE_V)
    assert (h2.interior, h2.D, h2.H, h2.V) == (6, 0, 0, 2)
    h3 = classify_hosts(build_prefractal(BOTTOM_ROW, 3), T.EDGE_V)
    assert (h3.interior, h3.D, h3.H, h3.V) == (18, 0, 0, 8)
    hc = classify_hosts(build_prefractal(CANTOR, 3), T.parse("lu,rd"))
    assert hc.total() == 0


def test_bottom_row_parameters():
    tc = extract_parameters(BOTTOM_ROW, T.EDGE_V)
    assert (tc.I1, tc.V1, tc.V2, tc.H1, tc.D1) == (2, 2, 8, 0, 0)
    assert (tc.v, tc.h, tc.dV) == (1, 0, 0)
    assert closed_form_count(tc, 3, 4) == 80
    rep = validate_model(BOTTOM_ROW, T.EDGE_V, 5)
    assert rep.ok and rep.brute == (2, 8, 26, 80, 242)


def test_cantor_parameters_all_zero():
    for t in ALL_TYPES:
        tc = extract_parameters(CANTOR, t)
        assert tc.is_zero and tc.h == tc.v == 0
        assert validate_model(CANTOR, t, 4).ok


def test_closed_form_trivial_inputs():
    for k in range(1, 7):
        assert closed_form_count(_zero_counts(), 3, k) == 0
        assert closed_form_count(_zero_counts(I1=1), 3, k) == 3 ** (k - 1)
    with pytest.raises(ValueError):
        closed_form_count(_zero_counts(), 3, 0)


@given(patterns(), st.sampled_from(ALL_TYPES))
def test_host_decomposition(pattern, t):
    for k in (1, 2):
        fine = build_prefractal(pattern, k + 1)
        hosts = classify_hosts(fine, t)
        assert hosts.total() == count_occurrences(fine, t)
        # occurrences strictly inside level-1 blocks replicate with every copy
        assert hosts.interior == pattern.m ** k * count_occurrences(build_prefractal(pattern, 1), t)
        if t.is_edge:
            assert hosts.D == 0


@given(patterns(), st.sampled_from(ALL_TYPES))
def test_recurrence_consistency(pattern, t):
    try:
        tc = extract_parameters(pattern, t)
    except ModelViolation:
        return
    m = pattern.m
    assert tc.H2 == (m + tc.h) * tc.H1
    assert tc.V2 == (m + tc.v) * tc.V1
    assert 0 <= tc.h <= pattern.p and 0 <= tc.v <= pattern.p
    if tc.H1 == 0:
        assert tc.h == 0
    if tc.V1 == 0:
        assert tc.v == 0
    assert tc.D2 == (m + 1) * tc.D1 + tc.spawn_h() + tc.spawn_v()


@given(patterns(), st.sampled_from(ALL_TYPES))
def test_closed_form_matches_recurrence_and_brute_force(pattern, t):
    if pattern.m < 2:
        return
    rep = validate_model(pattern, t, 4)
    if rep.error:
        return
    assert rep.ok, rep
    tc = extract_parameters(pattern, t)
    for k in range(1, 6):
        assert recurrence_count(tc, pattern.m, k) == closed_form_count(tc, pattern.m, k)


@given(patterns(), st.sampled_from(ALL_TYPES), st.integers(0, 7))
def test_counts_dihedral_invariant(pattern, t, g):
    moved = transform_pattern(pattern, g)
    t2 = transform_type(t, g)
    for k in (1, 2, 3):
        assert count_occurrences(build_prefractal(pattern, k), t) == \
            count_occurrences(build_prefractal(moved, k), t2)


@given(patterns(), st.sampled_from(CORNERS))
def test_corner_occurrence_nesting(pattern, t):
    # corners of the coarse grid seen at the fine level are occurrences at the coarse level too
    from dustcarpet.counting import occurrence_mask
    p = pattern.p
    fine = occurrence_mask(build_prefractal(pattern, 3).occupancy, t)
    coarse = occurrence_mask(build_prefractal(pattern, 2).occupancy, t)
    idx = np.arange(p - 1, fine.shape[0], p)
    assert not np.any(fine[np.ix_(idx, idx)] & ~coarse)
