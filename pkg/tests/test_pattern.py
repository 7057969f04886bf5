import numpy as np
import pytest
from hypothesis import given

from conftest import patterns
from dustcarpet.errors import BudgetExceeded, EmptyGrid, FullGrid, PatternError
from dustcarpet.pattern import (BOTTOM_ROW, CANTOR, FOUR_CORNER, Pattern, build_prefractal, dihedral_images,
                                orbit_size, parse_pattern, refine, symmetry_canonical, transform_pattern)


def test_parse_ascii_corners():
    pat = parse_pattern("#.#\n...\n#.#")
    assert pat.p == 3 and pat.m == 4
    assert pat.kept == {(0, 0), (2, 0), (0, 2), (2, 2)}


def test_parse_cantor_rows_from_bottom():
    pat = parse_pattern("...\n...\n#.#")
    assert pat.kept == {(0, 0), (2, 0)}
    assert pat == CANTOR


@pytest.mark.parametrize("text,exc", [
    ("##\n##", FullGrid),
    ("..\n..", EmptyGrid),
    ("#.\n#", PatternError),
    ("#x\n..", PatternError),
    ("#", PatternError),
    ("#.#\n...", PatternError),
    ('{"p": 3, "kept": [[0,0],[0,0]]}', PatternError),
])
def test_parse_rejects(text, exc):
    with pytest.raises(exc):
        parse_pattern(text)


def test_json_roundtrip_fixture():
    doc = FOUR_CORNER.to_json()
    assert parse_pattern(doc) == FOUR_CORNER


@given(patterns())
def test_text_roundtrips(pat):
    assert parse_pattern(pat.to_ascii()) == pat
    assert parse_pattern(pat.to_json()) == pat


def test_prefractal_examples():
    g = build_prefractal(CANTOR, 3)
    rows, cols = np.nonzero(g.occupancy)
    assert g.count == 8 and set(rows) == {0}
    g = build_prefractal(BOTTOM_ROW, 2)
    assert set(zip(*np.nonzero(g.occupancy))) == {(0, c) for c in range(9)}
    g0 = build_prefractal(CANTOR, 0)
    assert g0.occupancy.shape == (1, 1) and g0.count == 1


def test_budget_guard():
    with pytest.raises(BudgetExceeded):
        build_prefractal(CANTOR, 10)


@given(patterns(), patterns(p=4))
def test_count_and_nesting(a, b):
    for pat in (a, b):
        for n in (1, 2, 3):
            g = build_prefractal(pat, n)
            assert g.count == pat.m**n
            coarse = build_prefractal(pat, n - 1).occupancy
            rows, cols = np.nonzero(g.occupancy)
            assert coarse[rows // pat.p, cols // pat.p].all()


@given(patterns())
def test_refine_matches_build(pat):
    g = build_prefractal(pat, 1)
    for n in (2, 3):
        g = refine(g)
        assert g == build_prefractal(pat, n)


@given(patterns())
def test_dihedral_group_properties(pat):
    images = dihedral_images(pat)
    assert len(set(images)) == orbit_size(pat)
    assert orbit_size(pat) in (1, 2, 4, 8)
    canon = symmetry_canonical(pat)
    assert all(symmetry_canonical(img) == canon for img in images)
    # rotation by 90 degrees has order 4
    rot = pat
    for _ in range(4):
        rot = transform_pattern(rot, 1)
    assert rot == pat


def test_rotation_direction():
    pat = Pattern(3, frozenset({(2, 0)}) | {(0, 0)})
    rotated = transform_pattern(pat, 1)  # counterclockwise: bottom-right goes to top-right
    assert (2, 2) in rotated.kept and (2, 0) in rotated.kept
