import pytest
from hypothesis import given, strategies as st

from conftest import patterns
from dustcarpet.pattern import (BOTTOM_ROW, CANTOR, DIAGONAL, FOUR_CORNER, SIERPINSKI, Pattern, build_prefractal,
                                transform_pattern)
from dustcarpet.topology import (Verdict, attractor_connected, classify, complement_connected_at_level,
                                 edge_digits, prefractal_connected, trace_intersect)


def test_prefractal_connected_examples():
    assert prefractal_connected(build_prefractal(BOTTOM_ROW, 1))
    assert not prefractal_connected(build_prefractal(CANTOR, 1))
    touch = Pattern(3, frozenset({(0, 0), (1, 1)}))
    assert prefractal_connected(build_prefractal(touch, 1))
    assert not prefractal_connected(build_prefractal(touch, 2))


def test_complement_examples():
    assert not complement_connected_at_level(build_prefractal(SIERPINSKI, 1))
    for n in range(1, 5):
        assert complement_connected_at_level(build_prefractal(CANTOR, n))
    assert complement_connected_at_level(build_prefractal(BOTTOM_ROW, 2))


def test_edge_digits():
    assert edge_digits(CANTOR, "bottom") == {0, 2}
    assert edge_digits(CANTOR, "top") == frozenset()
    assert edge_digits(FOUR_CORNER, "left") == {0, 2}


def test_trace_intersect_examples():
    assert trace_intersect(3, {0, 2}, {0, 2})
    assert not trace_intersect(3, {2}, {0})
    assert trace_intersect(3, {0, 1}, {0, 2})
    assert not trace_intersect(3, set(), {0})


def _cantor_points(p, digits, depth=7):
    pts = {0}
    for _ in range(depth):
        pts = {x * p + d for x in pts for d in digits}
    return pts  # integers; the set scaled by p^depth


@given(st.sets(st.integers(0, 2), min_size=1), st.sets(st.integers(0, 2), min_size=1))
def test_trace_intersect_properties(d1, d2):
    assert trace_intersect(3, d1, d2) == trace_intersect(3, d2, d1)
    if d1 & d2:
        assert trace_intersect(3, d1, d2)
    # brute force: level-k interval covers intersect at every level iff the sets meet
    k = 6
    a = _cantor_points(3, d1, k)
    b = _cantor_points(3, d2, k)
    meet = any(abs(x - y) <= 1 for x in a for y in b)
    if trace_intersect(3, d1, d2):
        assert meet


def test_attractor_connected_examples():
    assert attractor_connected(DIAGONAL)
    assert not attractor_connected(CANTOR)
    assert attractor_connected(SIERPINSKI)


def test_classify_examples():
    assert classify(CANTOR).verdict is Verdict.DUST_TYPE
    assert classify(FOUR_CORNER).verdict is Verdict.DUST_TYPE
    assert classify(SIERPINSKI).verdict is Verdict.COMPLEMENT_OBSTRUCTED
    assert classify(DIAGONAL).verdict is Verdict.CONNECTED_ATTRACTOR
    assert classify(BOTTOM_ROW).verdict is Verdict.CONNECTED_ATTRACTOR
    assert classify(Pattern(3, frozenset({(1, 1)}))).verdict is Verdict.DEGENERATE
    assert classify(Pattern(2, frozenset({(0, 0), (1, 1)}))).verdict is Verdict.NEVER_DUST_GRID


def test_classify_depth_argument():
    with pytest.raises(ValueError):
        classify(CANTOR, depth=1)


@given(patterns())
def test_classification_invariants(pat):
    res = classify(pat)
    if res.verdict is Verdict.DUST_TYPE:
        assert not res.attractor_connected
        assert res.complement_status.kind == "ConnectedVerifiedToDepth"
    verdicts = {classify(transform_pattern(pat, g)).verdict for g in range(8)}
    assert verdicts == {res.verdict}


@given(patterns())
def test_connectivity_against_prefractals(pat):
    levels = [prefractal_connected(build_prefractal(pat, n)) for n in range(1, 7)]
    # nested prefractals can only lose connectivity
    assert all(a or not b for a, b in zip(levels, levels[1:]))
    if attractor_connected(pat):
        assert all(levels)
    else:
        assert not all(levels)
