"""DOT / SVG / PNG 产物渲染"""
import math
from pathlib import Path
from typing import Iterable, Optional

from jinja2 import Environment, FileSystemLoader, StrictUndefined
from PIL import Image, ImageDraw

from ..cluster.polygon import Arc, vertex_count

TEMPLATES_DIR = Path(__file__).parent.parent / "templates"

_env = Environment(
    loader=FileSystemLoader(TEMPLATES_DIR),
    undefined=StrictUndefined,
    trim_blocks=True,
    lstrip_blocks=True,
    keep_trailing_newline=True,
)

# 高亮调色板，依次分配给各组对角线
PALETTE = ["#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"]


def _render(template: str, **context) -> str:
    return _env.get_template(template).render(**context)


# ============ 箭图与图 ============

def quiver_dot(title: str, nodes: Iterable[str], edges: Iterable[tuple[str, str, str]],
               highlight: Optional[Iterable[str]] = None) -> str:
    """有向箭图；edges 为 (源, 靶, 标签)"""
    marked = set(highlight or ())
    node_list = [{"id": v, "label": v, "color": "#ffe08a" if v in marked else None} for v in nodes]
    edge_list = [{"source": u, "target": v, "label": label} for u, v, label in edges]
    return _render("quiver.dot.jinja2", title=title, nodes=node_list, edges=edge_list)


def graph_dot(title: str, groups: Iterable[tuple[str, Iterable[str]]], edges: Iterable[tuple[str, str]]) -> str:
    """无向图，按分支分组"""
    group_list = [{"label": label, "nodes": list(nodes)} for label, nodes in groups]
    edge_list = [{"source": u, "target": v} for u, v in edges]
    return _render("graph.dot.jinja2", title=title, groups=group_list, edges=edge_list)


# ============ 多边形 ============

def polygon_vertices(n: int, size: float = 400.0, margin: float = 30.0) -> list[dict]:
    """正 (n+3) 边形顶点坐标，0 号顶点在正上方，顺时针编号"""
    N = vertex_count(n)
    r = size / 2 - margin
    c = size / 2
    out = []
    for k in range(N):
        t = -math.pi / 2 + 2 * math.pi * k / N
        out.append({
            "index": k,
            "x": c + r * math.cos(t),
            "y": c + r * math.sin(t),
            "lx": c + (r + 16) * math.cos(t),
            "ly": c + (r + 16) * math.sin(t),
        })
    return out


def _arc_rows(groups: Iterable[tuple[str, Iterable[Arc]]], vertices: list[dict]) -> list[dict]:
    rows = []
    for g, (label, arcs) in enumerate(groups):
        color = PALETTE[g % len(PALETTE)]
        for a in arcs:
            p, q = vertices[a.i], vertices[a.j]
            rows.append({"i": a.i, "j": a.j, "x1": p["x"], "y1": p["y"], "x2": q["x"], "y2": q["y"],
                         "color": color, "label": label})
    return rows


def polygon_svg(n: int, groups: Iterable[tuple[str, Iterable[Arc]]], title: str = "", size: int = 400) -> str:
    vertices = polygon_vertices(n, size)
    return _render("polygon.svg.jinja2", title=title, size=size, vertices=vertices,
                   arcs=_arc_rows(groups, vertices))


def polygon_dot(n: int, groups: Iterable[tuple[str, Iterable[Arc]]], title: str = "") -> str:
    # neato 坐标以英寸计
    vertices = [{**v, "x": v["x"] / 72, "y": -v["y"] / 72} for v in polygon_vertices(n)]
    return _render("polygon.dot.jinja2", title=title, vertices=vertices, arcs=_arc_rows(groups, vertices))


def polygon_png(path: Path, n: int, groups: Iterable[tuple[str, Iterable[Arc]]], size: int = 400) -> Path:
    """用 Pillow 画同一张多边形图"""
    vertices = polygon_vertices(n, size)
    img = Image.new("RGB", (size, size), "white")
    draw = ImageDraw.Draw(img)
    ring = [(v["x"], v["y"]) for v in vertices]
    draw.polygon(ring, outline="#444444")
    for row in _arc_rows(groups, vertices):
        draw.line([(row["x1"], row["y1"]), (row["x2"], row["y2"])], fill=row["color"], width=3)
    for v in vertices:
        draw.ellipse([v["x"] - 4, v["y"] - 4, v["x"] + 4, v["y"] + 4], fill="#222222")
        draw.text((v["lx"] - 4, v["ly"] - 6), str(v["index"]), fill="#000000")
    path.parent.mkdir(parents=True, exist_ok=True)
    img.save(path, format="PNG")
    return path
