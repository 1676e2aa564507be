import pytest
from PIL import Image

from src.cluster.polygon import Arc, triangulations
from src.utils.render import graph_dot, polygon_dot, polygon_png, polygon_svg, polygon_vertices, quiver_dot


def test_quiver_dot():
    text = quiver_dot("AR", ["P1", "P2"], [("P1", "P2", ""), ("P2", "P1", "2")], highlight=["P2"])
    assert text.startswith('digraph "AR"')
    assert '"P1" -> "P2";' in text
    assert '"P2" -> "P1" [label="2"];' in text
    assert 'fillcolor="#ffe08a"' in text


def test_graph_dot_groups_components():
    text = graph_dot("C", [("分支 0", ["S2", "S3"]), ("分支 1", ["P3"])], [("S2", "S3")])
    assert "subgraph cluster_0" in text and "subgraph cluster_1" in text
    assert '"S2" -- "S3";' in text


def test_polygon_vertices_are_on_circle():
    vertices = polygon_vertices(4)
    assert len(vertices) == 7
    assert vertices[0]["x"] == pytest.approx(200.0)
    assert vertices[0]["y"] < vertices[1]["y"]


def test_polygon_svg_draws_every_arc():
    T = triangulations(3)[0]
    text = polygon_svg(3, [("T", T)], title="C_2(A_3)")
    assert text.startswith("<svg")
    assert text.count("<line") == len(T)
    assert text.count("<circle") == 6
    assert "<title>C_2(A_3)</title>" in text


def test_polygon_dot_uses_fixed_positions():
    text = polygon_dot(2, [("I", [Arc(0, 2, 2)]), ("X", [Arc(0, 3, 2)])])
    assert "layout=neato" in text
    assert "v0 -- v2" in text and "v0 -- v3" in text
    assert text.count("!\"]") == 5


def test_polygon_png(tmp_path):
    path = polygon_png(tmp_path / "sub" / "p.png", 4, [("S", [Arc(1, 3, 4)])], size=200)
    with Image.open(path) as img:
        assert img.format == "PNG"
        assert img.size == (200, 200)
