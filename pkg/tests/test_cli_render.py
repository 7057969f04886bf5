import json
import re

import numpy as np
import pytest

from dustcarpet.cli import main
from dustcarpet.counting import IntersectionType as T
from dustcarpet.pattern import BOTTOM_ROW, CANTOR, build_prefractal
from dustcarpet.render import RenderOptions, occurrence_points, render_svg


@pytest.fixture
def cantor_file(tmp_path):
    path = tmp_path / "cantor.txt"
    path.write_text(CANTOR.to_ascii())
    return path


@pytest.fixture
def row_file(tmp_path):
    path = tmp_path / "row.txt"
    path.write_text(BOTTOM_ROW.to_ascii())
    return path


def test_level_zero_is_one_square():
    svg = render_svg(build_prefractal(CANTOR, 0), RenderOptions(level=0))
    assert len(re.findall(r'<rect x="\d+" y="[\d.]+" width="1" height="1"/>', svg)) == 1


def test_bottom_row_markers():
    grid = build_prefractal(BOTTOM_ROW, 2)
    svg = render_svg(grid, RenderOptions(level=2, highlight=((T.EDGE_V, "blue"),)))
    assert svg.count("<circle") == 8
    pts = occurrence_points(grid.occupancy, T.EDGE_V)
    assert all(y == 0.5 for _, y in pts)


def test_render_is_deterministic():
    grid = build_prefractal(CANTOR, 3)
    opts = RenderOptions(level=3, highlight=((T.EDGE_V, "red"),), contour_t=0.05)
    a, b = render_svg(grid, opts), render_svg(grid, opts)
    assert a == b and "<path" in a


def test_contour_option_validation():
    with pytest.raises(ValueError):
        RenderOptions(contour_t=-1.0)


def test_analyze_command(cantor_file, tmp_path, capsys):
    out_json, out_svg = tmp_path / "r.json", tmp_path / "r.svg"
    assert main(["analyze", str(cantor_file), "--json", str(out_json), "--svg", str(out_svg)]) == 0
    doc = json.loads(out_json.read_text())
    assert doc["classification"] == "DustType"
    assert [f["r"] for f in doc["combined"]] == [2]
    assert out_svg.read_text().startswith("<svg")
    assert "log_3(2)" in capsys.readouterr().out


def test_count_command(row_file, capsys):
    assert main(["count", str(row_file), "--type", "v", "--levels", "4"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert [int(l.split(",")[1]) for l in lines[1:5]] == [2, 8, 26, 80]
    assert all(l.split(",")[1] == l.split(",")[5] for l in lines[1:5])


def test_classify_and_dimensions(cantor_file, capsys):
    assert main(["classify", str(cantor_file)]) == 0
    assert capsys.readouterr().out.startswith("DustType")
    assert main(["dimensions", str(cantor_file)]) == 0
    assert json.loads(capsys.readouterr().out)["combined"][0]["r"] == 2


def test_tube_and_zeta(cantor_file, tmp_path, capsys):
    csv_path = tmp_path / "t.csv"
    assert main(["tube", str(cantor_file), "--t", "0.1,0.2", "--level", "4", "--csv", str(csv_path)]) == 0
    assert len(csv_path.read_text().splitlines()) == 3
    assert main(["zeta", str(cantor_file), "--s", "2.5", "--delta", "0.5", "--level", "4"]) == 0
    assert "zeta(" in capsys.readouterr().out


def test_survey_command(tmp_path):
    out = tmp_path / "s.csv"
    assert main(["survey", "--p", "2", "--out", str(out)]) == 0
    assert len(out.read_text().splitlines()) == 11


def test_render_command(row_file, tmp_path):
    out = tmp_path / "r.svg"
    assert main(["render", str(row_file), "--level", "2", "--highlight", "v:#00f", "--out", str(out)]) == 0
    assert out.read_text().count("<circle") == 8


def test_exit_codes(tmp_path, cantor_file):
    assert main(["analyze", str(tmp_path / "missing.txt")]) == 2
    bad = tmp_path / "bad.txt"
    bad.write_text("#x#\n...\n...\n")
    assert main(["classify", str(bad)]) == 2
    assert main(["tube", str(cantor_file), "--t", "-1"]) == 2
    assert main(["count", str(cantor_file), "--type", "nonsense"]) == 2
    assert main(["nonsense"]) == 2
