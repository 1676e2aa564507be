"""d = 2 的几何模型：(n+3) 边形的对角线

对象 ↔ 对角线，Ext¹ ≠ 0 ↔ 相交，[1] ↔ 旋转一格。
双射在所有二面体摆放中取字典序最小且通过两项相容性检查的那个。
"""
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Optional

import networkx as nx

from ..engine.errors import CrossingInput, NoCompatibleBijection
from .orbit import ObjId, OrbitCategory

logger = logging.getLogger(__name__)


def vertex_count(n: int) -> int:
    return n + 3


@dataclass(frozen=True, order=True)
class Arc:
    """(n+3) 边形的对角线，端点 0 ≤ i < j < n+3 且不相邻"""
    i: int
    j: int
    n: int

    def __post_init__(self):
        N = vertex_count(self.n)
        if not (0 <= self.i < self.j < N):
            raise ValueError(f"端点越界或未排序: ({self.i}, {self.j})")
        if self.j - self.i in (1, N - 1):
            raise ValueError(f"({self.i}, {self.j}) 是边而不是对角线")

    @property
    def endpoints(self) -> tuple[int, int]:
        return self.i, self.j

    def __str__(self) -> str:
        return f"{{{self.i},{self.j}}}"


def arc(u: int, v: int, n: int) -> Arc:
    """无序端点构造，端点按 mod n+3 约化"""
    N = vertex_count(n)
    u, v = u % N, v % N
    return Arc(min(u, v), max(u, v), n)


def all_arcs(n: int) -> list[Arc]:
    N = vertex_count(n)
    return [Arc(i, j, n) for i in range(N) for j in range(i + 2, N) if j - i != N - 1]


def cross(a: Arc, b: Arc) -> bool:
    """端点在圆周上严格交错"""
    return a.i < b.i < a.j < b.j or b.i < a.i < b.j < a.j


def rotate(a: Arc, k: int) -> Arc:
    """每个端点移动 −k"""
    return arc(a.i - k, a.j - k, a.n)


def is_noncrossing(arcs: Iterable[Arc]) -> bool:
    arcs = list(arcs)
    return not any(cross(a, b) for x, a in enumerate(arcs) for b in arcs[x + 1:])


# ============ 对象 ↔ 对角线 ============

def base_arc(X: ObjId, n: int) -> Arc:
    """基本摆放：[a,b] ↦ {a, b+2}，P_i[1] ↦ {0, i+1}"""
    if X.shift == 0:
        return arc(X.interval.a, X.interval.b + 2, n)
    if X.shift == 1 and X.interval.a == 1:
        return arc(0, X.interval.b + 1, n)
    raise ValueError(f"{X} 不在 C_2 的基本区域中")


def _place(a: Arc, k: int, reflect: bool) -> Arc:
    if reflect:
        return arc(k - a.i, k - a.j, a.n)
    return arc(a.i + k, a.j + k, a.n)


class PolygonModel:
    """C_2(A_n) 与 (n+3) 边形对角线之间的规范双射"""

    def __init__(self, cat: OrbitCategory):
        if cat.d != 2:
            raise ValueError("几何模型只覆盖 d = 2")
        self.cat = cat
        self.n = cat.n
        self._arc_of: dict[ObjId, Arc] = self._search()
        self._obj_of: dict[Arc, ObjId] = {a: X for X, a in self._arc_of.items()}

    def _compatible(self, arcs: dict[ObjId, Arc]) -> bool:
        cat = self.cat
        for X in cat.objects:
            if arcs[cat.shift(X, 1)] != rotate(arcs[X], 1):
                return False
        for X in cat.objects:
            for Y in cat.objects:
                if cross(arcs[X], arcs[Y]) != (cat.ext_dim(X, Y) != 0):
                    return False
        return True

    def _search(self) -> dict[ObjId, Arc]:
        N = vertex_count(self.n)
        base = {X: base_arc(X, self.n) for X in self.cat.objects}
        best: Optional[tuple] = None
        best_map = None
        for reflect in (False, True):
            for k in range(N):
                placed = {X: _place(a, k, reflect) for X, a in base.items()}
                if not self._compatible(placed):
                    continue
                key = tuple((placed[X].i, placed[X].j) for X in self.cat.objects)
                if best is None or key < best:
                    best, best_map = key, placed
        if best_map is None:
            raise NoCompatibleBijection(f"n = {self.n} 时没有与 Ext¹ 和平移同时相容的摆放")
        logger.debug("n = %d 的规范摆放已确定", self.n)
        return best_map

    def arc_of_object(self, X: ObjId) -> Arc:
        return self._arc_of[self.cat.check(X)]

    def object_of_arc(self, a: Arc) -> ObjId:
        if a.n != self.n:
            raise ValueError(f"对角线属于 n = {a.n}，模型是 n = {self.n}")
        return self._obj_of[a]

    def arcs_of(self, objs: Iterable[ObjId]) -> list[Arc]:
        return sorted(self.arc_of_object(X) for X in objs)

    def objects_of(self, arcs: Iterable[Arc]) -> frozenset[ObjId]:
        return frozenset(self.object_of_arc(a) for a in arcs)


# ============ 胞腔分解 ============

@dataclass
class CellDecomposition:
    n: int
    cells: list[tuple[int, ...]] = field(default_factory=list)
    interior: list[list[Arc]] = field(default_factory=list)

    @property
    def ns(self) -> int:
        """带内部对角线的胞腔数，即商范畴的不可分解分支数"""
        return sum(1 for arcs in self.interior if arcs)


def _cell_diagonals(cell: tuple[int, ...], n: int) -> list[Arc]:
    m = len(cell)
    out = []
    for p in range(m):
        for q in range(p + 2, m):
            if p == 0 and q == m - 1:
                continue
            out.append(arc(cell[p], cell[q], n))
    return sorted(out)


def cells(arcs: Iterable[Arc], n: int) -> CellDecomposition:
    """用互不相交的对角线切分多边形"""
    arcs = sorted(set(arcs))
    if not is_noncrossing(arcs):
        raise CrossingInput("对角线集合中有相交的对角线")
    polys: list[tuple[int, ...]] = [tuple(range(vertex_count(n)))]
    for a in arcs:
        for idx, poly in enumerate(polys):
            if a.i not in poly or a.j not in poly:
                continue
            p, q = sorted((poly.index(a.i), poly.index(a.j)))
            if q - p in (1, len(poly) - 1):
                continue
            polys[idx:idx + 1] = [poly[p:q + 1], poly[q:] + poly[:p + 1]]
            break
    ordered = sorted(polys, key=lambda c: sorted(c))
    return CellDecomposition(n, ordered, [_cell_diagonals(c, n) for c in ordered])


# ============ 枚举 ============

def compatibility_graph(n: int) -> nx.Graph:
    """顶点为对角线，不相交的两条之间连边"""
    G = nx.Graph()
    arcs = all_arcs(n)
    G.add_nodes_from(arcs)
    for x, a in enumerate(arcs):
        for b in arcs[x + 1:]:
            if not cross(a, b):
                G.add_edge(a, b)
    return G


@lru_cache(maxsize=None)
def noncrossing_sets(n: int) -> tuple[frozenset[Arc], ...]:
    """所有互不相交的对角线集合（含空集）"""
    found = [frozenset()] + [frozenset(c) for c in nx.enumerate_all_cliques(compatibility_graph(n))]
    return tuple(sorted(found, key=lambda s: (len(s), sorted(s))))


def _triangulate(poly: tuple[int, ...], n: int) -> list[frozenset[Arc]]:
    if len(poly) < 4:
        return [frozenset()]
    a, b = poly[0], poly[-1]
    out = []
    for k in range(1, len(poly) - 1):
        apex = poly[k]
        extra = set()
        if k > 1:
            extra.add(arc(a, apex, n))
        if k < len(poly) - 2:
            extra.add(arc(apex, b, n))
        for left in _triangulate(poly[:k + 1], n):
            for right in _triangulate(poly[k:], n):
                out.append(frozenset(extra | left | right))
    return out


@lru_cache(maxsize=None)
def triangulations(n: int) -> tuple[frozenset[Arc], ...]:
    """极大不相交集合，共 Catalan(n+1) 个"""
    return tuple(sorted(_triangulate(tuple(range(vertex_count(n))), n), key=sorted))


def flip(T: Iterable[Arc], a: Arc) -> frozenset[Arc]:
    """把 a 换成它所在四边形的另一条对角线"""
    T = frozenset(T)
    if a not in T:
        raise ValueError(f"{a} 不在三角剖分中")
    rest = T - {a}
    decomposition = cells(rest, a.n)
    for cell, inner in zip(decomposition.cells, decomposition.interior):
        if a in inner:
            if len(cell) != 4:
                raise ValueError(f"{a} 所在胞腔不是四边形，输入不是三角剖分")
            (other,) = [x for x in inner if x != a]
            return rest | {other}
    raise ValueError(f"{a} 不是任何胞腔的内部对角线")
