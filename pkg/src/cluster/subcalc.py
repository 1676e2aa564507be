"""子范畴演算

子范畴一律用不可分解对象的 frozenset 表示（加法闭包隐含）。
逼近、锥与商 Hom 都在 D^b 的提升上计算：固定被逼近对象的提升，另一端沿 F 重新提升。
"""
import logging
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import networkx as nx
from sympy import Rational

from ..engine.derived import DMorphism, DObject, Summand, Triangle, positions_in, shift_D
from ..engine.errors import CyError, NotAPartition, NotInPerp, NotRigid, NotSubset
from .orbit import ObjId, OrbitCategory

logger = logging.getLogger(__name__)

Subcat = frozenset[ObjId]


def subcat(objs: Iterable[ObjId]) -> Subcat:
    return frozenset(objs)


def shifted(cat: OrbitCategory, S: Iterable[ObjId], k: int) -> Subcat:
    return frozenset(cat.shift(A, k) for A in S)


# ============ 垂直子范畴与刚性 ============

def perp_left(cat: OrbitCategory, S: Iterable[ObjId], k: int = 1) -> Subcat:
    """{X : Hom(X, S'[k]) = 0, ∀ S' ∈ S}"""
    targets = shifted(cat, S, k)
    return frozenset(X for X in cat.objects if all(cat.hom_dim(X, B) == 0 for B in targets))


def perp_right(cat: OrbitCategory, S: Iterable[ObjId], k: int = 1) -> Subcat:
    """{X : Hom(S', X[k]) = 0, ∀ S' ∈ S}"""
    S = list(S)
    return frozenset(X for X in cat.objects
                     if all(cat.hom_dim(A, cat.shift(X, k)) == 0 for A in S))


def ext_free(cat: OrbitCategory, S: Iterable[ObjId], T: Iterable[ObjId], d: Optional[int] = None) -> bool:
    """Ext^i(S, T) = 0，1 ≤ i ≤ d−1"""
    d = cat.d if d is None else d
    T = list(T)
    return all(cat.ext_dim(A, B, i) == 0 for A in S for B in T for i in range(1, d))


def is_rigid(cat: OrbitCategory, S: Iterable[ObjId], d: Optional[int] = None) -> bool:
    S = list(S)
    return ext_free(cat, S, S, d)


def is_cluster_tilting(cat: OrbitCategory, S: Iterable[ObjId], d: Optional[int] = None) -> bool:
    """刚性且 S = {X : Ext^i(S, X) = 0, 1 ≤ i ≤ d−1}"""
    S = frozenset(S)
    if not is_rigid(cat, S, d):
        return False
    orth = frozenset(X for X in cat.objects if ext_free(cat, S, [X], d))
    return orth == S


# ============ 极小逼近 ============

@dataclass(eq=False)
class Approximation:
    """极小逼近在 D^b 中的提升

    右逼近 morphism: lifts → anchor；左逼近 morphism: anchor → lifts。
    """
    side: str
    anchor: DObject
    lifts: DObject
    morphism: DMorphism
    objects: tuple[ObjId, ...] = field(default=())

    def is_zero(self) -> bool:
        return self.lifts.is_zero()


def _right_lifts(cat: OrbitCategory, K: Summand, S: Subcat) -> tuple[Summand, ...]:
    key = ("right", K, S)
    if key not in cat.memo:
        cands = sorted({L for A in S for L in cat.lifts_into(A, K)})
        cat.memo[key] = tuple(L for L in cands
                              if not any(L2 != L and cat.D.structure_constant(L, L2, K) != 0 for L2 in cands))
    return cat.memo[key]


def _left_lifts(cat: OrbitCategory, K: Summand, S: Subcat) -> tuple[Summand, ...]:
    key = ("left", K, S)
    if key not in cat.memo:
        cands = sorted({L for A in S for L in cat.lifts_from(K, A)})
        cat.memo[key] = tuple(L for L in cands
                              if not any(L2 != L and cat.D.structure_constant(K, L2, L) != 0 for L2 in cands))
    return cat.memo[key]


def right_approximation(cat: OrbitCategory, M: DObject, S: Iterable[ObjId]) -> Approximation:
    """⊕ 各直和项的极小右 S-逼近；丢弃经 rad 分解的基方向"""
    S = frozenset(S)
    pieces = [(L, j) for j, K in enumerate(M) for L in _right_lifts(cat, K, S)]
    src = DObject.of(L for L, _ in pieces)
    pos = positions_in(src, [L for L, _ in pieces])
    coeffs = {(j, p): Rational(1) for (_, j), p in zip(pieces, pos)}
    return Approximation("right", M, src, DMorphism(src, M, coeffs), cat.project_object(src))


def left_approximation(cat: OrbitCategory, M: DObject, S: Iterable[ObjId]) -> Approximation:
    S = frozenset(S)
    pieces = [(L, j) for j, K in enumerate(M) for L in _left_lifts(cat, K, S)]
    tgt = DObject.of(L for L, _ in pieces)
    pos = positions_in(tgt, [L for L, _ in pieces])
    coeffs = {(p, j): Rational(1) for (_, j), p in zip(pieces, pos)}
    return Approximation("left", M, tgt, DMorphism(M, tgt, coeffs), cat.project_object(tgt))


def min_right_approx(cat: OrbitCategory, M: ObjId, S: Iterable[ObjId]) -> Approximation:
    return right_approximation(cat, DObject((cat.check(M).lift,)), S)


def min_left_approx(cat: OrbitCategory, M: ObjId, S: Iterable[ObjId]) -> Approximation:
    return left_approximation(cat, DObject((cat.check(M).lift,)), S)


# ============ 锥 ============

def cone_of(cat: OrbitCategory, f: DMorphism) -> DObject:
    """锥对象（提升层面），按态射的块数据缓存"""
    if f.source.is_zero():
        return f.target
    if f.target.is_zero():
        return shift_D(f.source, 1)
    key = ("cone", f.source, f.target, frozenset((k, v) for k, v in f.coeffs.items() if v != 0))
    if key not in cat.memo:
        cat.memo[key] = cat.D.cone_object(f)
    return cat.memo[key]


def cone_triangle(cat: OrbitCategory, f: DMorphism) -> Triangle:
    """带结构映射的三角；源为零时退化为 0 → Y = Y → 0"""
    if f.source.is_zero():
        Y = f.target
        return Triangle(f.source, Y, Y, f, cat.D.identity(Y), DMorphism(Y, shift_D(f.source, 1)))
    return cat.D.cone_D(f)


def approximation_cone(cat: OrbitCategory, approx: Approximation) -> tuple[ObjId, ...]:
    return cat.project_object(cone_of(cat, approx.morphism))


# ============ 商范畴 ============

def quotient_hom_dim(cat: OrbitCategory, X: ObjId, Y: ObjId, I: Iterable[ObjId]) -> int:
    """dim Hom_{C/I}(X, Y)：扣掉经 I 非零分解的扭次分量"""
    I = sorted(set(I))
    K = cat.check(Y).lift
    return sum(1 for L in cat.lifts_into(cat.check(X), K) if not cat.factors_through(L, K, I))


@dataclass
class GabrielQuiver:
    vertices: list[ObjId]
    arrow_counts: dict[tuple[ObjId, ObjId], int] = field(default_factory=dict)

    def graph(self) -> nx.MultiDiGraph:
        G = nx.MultiDiGraph()
        G.add_nodes_from(self.vertices)
        for (X, Y), c in sorted(self.arrow_counts.items()):
            for _ in range(c):
                G.add_edge(X, Y)
        return G

    @property
    def nc(self) -> int:
        """连通分支数"""
        if not self.vertices:
            return 0
        return nx.number_weakly_connected_components(self.graph())

    def loops(self) -> int:
        return sum(c for (X, Y), c in self.arrow_counts.items() if X == Y)


def gabriel_quiver(cat: OrbitCategory, T: Iterable[ObjId], modulo: Iterable[ObjId] = ()) -> GabrielQuiver:
    """rad/rad² 给出箭头；给定 modulo 时是商范畴 C/add(modulo) 中 T\\modulo 的箭图"""
    ideal = frozenset(modulo)
    verts = sorted(frozenset(T) - ideal)
    return GabrielQuiver(verts, cat.irreducible_counts(verts, modulo=ideal))


@dataclass
class Decomposition:
    components: list[Subcat] = field(default_factory=list)

    @property
    def ns(self) -> int:
        return len(self.components)

    def with_core(self, I: Iterable[ObjId]) -> list[Subcat]:
        core = frozenset(I)
        return [c | core for c in self.components]

    def component_of(self, X: ObjId) -> Subcat:
        for c in self.components:
            if X in c:
                return c
        return frozenset()


def _components(G: nx.Graph) -> Decomposition:
    comps = sorted((frozenset(c) for c in nx.connected_components(G)), key=sorted)
    return Decomposition(comps)


def components_of_quotient(cat: OrbitCategory, I: Iterable[ObjId], allow_higher: bool = False) -> Decomposition:
    """⊥(I[1])/I 的不可分解分支：商 Hom 非零或 M⟨1⟩ = N 时连边"""
    I = frozenset(I)
    if cat.d != 2 and not allow_higher:
        raise ValueError("商范畴分解只对 d = 2 开放，d > 2 需显式 allow_higher")
    if not is_rigid(cat, I, 2):
        raise NotRigid(f"{cat.names(I)} 不是刚性的")
    region = sorted(perp_left(cat, I, 1) - I)
    G = nx.Graph()
    G.add_nodes_from(region)
    for x, X in enumerate(region):
        for Y in region[x + 1:]:
            if quotient_hom_dim(cat, X, Y, I) or quotient_hom_dim(cat, Y, X, I):
                G.add_edge(X, Y)
    if cat.d == 2:
        for M in region:
            up = iy_shift(cat, M, I)
            if up is not None and up in G:
                G.add_edge(M, up)
    dec = _components(G)
    logger.debug("⊥(%s[1])/%s 有 %d 个分支", cat.names(I), cat.names(I), dec.ns)
    return dec


def decompose_category(cat: OrbitCategory) -> Decomposition:
    """Hom 图与 [1] 轨道共同生成的连通分支"""
    G = nx.Graph()
    G.add_nodes_from(cat.objects)
    for X in cat.objects:
        for Y in cat.objects:
            if X != Y and cat.hom_dim(X, Y):
                G.add_edge(X, Y)
        G.add_edge(X, cat.shift(X, 1))
    return _components(G)


# ============ 扩张链与分解检查 ============

def in_extension_chain(cat: OrbitCategory, Z: ObjId, parts: Sequence[Iterable[ObjId]]) -> bool:
    """Z ∈ S_0 ∗ S_1 ∗ … ∗ S_k：逐层取极小右逼近的锥

    要求 Hom(S_i, S_{i+1} ∗ … ∗ S_k) = 0，此时极小逼近的锥落在余下部分当且仅当 Z 属于该扩张。
    """
    cur = DObject((cat.check(Z).lift,))
    for S in parts:
        if cur.is_zero():
            return True
        cur = cone_of(cat, right_approximation(cat, cur, S).morphism)
    return cur.is_zero()


def _hom_vanishes(cat: OrbitCategory, A: Iterable[ObjId], B: Iterable[ObjId]) -> bool:
    B = list(B)
    return all(cat.hom_dim(X, Y) == 0 for X in A for Y in B)


def check_ct_decomposition(cat: OrbitCategory, T: Iterable[ObjId], parts: Sequence[Iterable[ObjId]]) -> tuple[bool, dict]:
    """T = ⊕ T_i 的三条条件，成立时再用两条路线比较 C_i 与 Hom 图分支"""
    T = frozenset(T)
    parts = [frozenset(p) for p in parts]
    union = frozenset().union(*parts) if parts else frozenset()
    if union != T or sum(len(p) for p in parts) != len(T):
        raise NotAPartition("parts 不是 T 的划分")
    d = cat.d
    report: dict = {"condition1": True, "condition2": True, "condition3": True}
    for i, Ti in enumerate(parts):
        for j, Tj in enumerate(parts):
            if i == j:
                continue
            if not _hom_vanishes(cat, Ti, Tj):
                report["condition2"] = False
                report.setdefault("witness2", [i, j])
            for k in range(1, d - 1):
                if not _hom_vanishes(cat, shifted(cat, Ti, k), Tj):
                    report["condition3"] = False
                    bad = next((A, B) for A in Ti for B in Tj if cat.hom_dim(cat.shift(A, k), B))
                    report.setdefault("witness3", {"k": k, "from": cat.name(cat.shift(bad[0], k)),
                                                  "to": cat.name(bad[1])})
    ok = report["condition2"] and report["condition3"]
    if not ok:
        return False, report

    graph = decompose_category(cat)
    routes = []
    for i, Ti in enumerate(parts):
        expected = frozenset().union(*(graph.component_of(A) for A in Ti)) if Ti else frozenset()
        chain = [shifted(cat, Ti, k) for k in range(d)]
        via_cones = frozenset(Z for Z in cat.objects if Ti and in_extension_chain(cat, Z, chain))
        others = [shifted(cat, Tj, k) for j, Tj in enumerate(parts) if j != i for k in range(1, 2 * d - 1)]
        via_perp = frozenset(cat.objects)
        for S in others:
            via_perp &= perp_left(cat, S, 0)
        routes.append({
            "part": cat.names(Ti),
            "component": cat.names(expected),
            "cones_match": via_cones == expected,
            "perp_match": via_perp == expected,
        })
    report["routes"] = routes
    ok = all(r["cones_match"] and r["perp_match"] for r in routes)
    return ok, report


# ============ Iyama–Yoshino 平移 ============

def _iy_checks(cat: OrbitCategory, M: ObjId, D: Subcat) -> None:
    if not is_rigid(cat, D, 2):
        raise NotRigid(f"{cat.names(D)} 不是刚性的")
    if M not in perp_left(cat, D, 1):
        raise NotInPerp(f"{cat.name(M)} 不在 ⊥({cat.names(D)}[1]) 中")


def _single(cat: OrbitCategory, objs: Iterable[ObjId], D: Subcat, what: str) -> Optional[ObjId]:
    rest = sorted(X for X in objs if X not in D)
    if len(rest) > 1:
        raise CyError(f"{what} 在商范畴中不是不可分解的: {cat.names(rest)}")
    return rest[0] if rest else None


def iy_shift(cat: OrbitCategory, M: ObjId, D: Iterable[ObjId]) -> Optional[ObjId]:
    """M⟨1⟩：M → I_M（极小左 D-逼近）的锥；商中为零时返回 None"""
    D = frozenset(D)
    _iy_checks(cat, M, D)
    approx = min_left_approx(cat, M, D)
    return _single(cat, approximation_cone(cat, approx), D, f"{cat.name(M)}⟨1⟩")


def iy_shift_inv(cat: OrbitCategory, M: ObjId, D: Iterable[ObjId]) -> Optional[ObjId]:
    """M⟨−1⟩：极小右 D-逼近 I^M → M 的余锥"""
    D = frozenset(D)
    _iy_checks(cat, M, D)
    approx = min_right_approx(cat, M, D)
    cocone = shift_D(cone_of(cat, approx.morphism), -1)
    return _single(cat, cat.project_object(cocone), D, f"{cat.name(M)}⟨−1⟩")


# ============ 相对簇倾斜与补 ============

def is_relative_cluster_tilting(cat: OrbitCategory, Dset: Iterable[ObjId], X: Iterable[ObjId]) -> bool:
    """对 M ∈ X：M ∈ Dset ⟺ Ext¹(Dset, M) = 0 ⟺ Ext¹(M, Dset) = 0"""
    Dset, X = frozenset(Dset), frozenset(X)
    if not Dset <= X:
        raise NotSubset("Dset 不包含于 X")
    for M in X:
        inside = M in Dset
        right = all(cat.ext_dim(A, M) == 0 for A in Dset)
        left = all(cat.ext_dim(M, A) == 0 for A in Dset)
        if not (inside == right == left):
            return False
    return True


def rigid_graph(cat: OrbitCategory, d: Optional[int] = None) -> nx.Graph:
    """顶点为自身刚性的对象，两两 Ext 正交时连边"""
    G = nx.Graph()
    verts = [X for X in cat.objects if is_rigid(cat, [X], d)]
    G.add_nodes_from(verts)
    for x, X in enumerate(verts):
        for Y in verts[x + 1:]:
            if ext_free(cat, [X], [Y], d) and ext_free(cat, [Y], [X], d):
                G.add_edge(X, Y)
    return G


def rigid_subcategories(cat: OrbitCategory, d: Optional[int] = None) -> list[Subcat]:
    G = rigid_graph(cat, d)
    found = [frozenset()] + [frozenset(c) for c in nx.enumerate_all_cliques(G)]
    return sorted(found, key=lambda s: (len(s), sorted(s)))


def cluster_tilting_objects(cat: OrbitCategory, d: Optional[int] = None) -> list[Subcat]:
    G = rigid_graph(cat, d)
    found = [frozenset(c) for c in nx.find_cliques(G)] if G.number_of_nodes() else []
    return sorted((S for S in found if is_cluster_tilting(cat, S, d)), key=sorted)


def complements(cat: OrbitCategory, T0: Iterable[ObjId], d: Optional[int] = None) -> list[ObjId]:
    """使 T0 ⊕ X 为 d-簇倾斜的不可分解 X"""
    T0 = frozenset(T0)
    return sorted(X for X in cat.objects if X not in T0 and is_cluster_tilting(cat, T0 | {X}, d))


def is_cluster_tilting_in_subquotient(cat: OrbitCategory, T: Iterable[ObjId], I: Iterable[ObjId]) -> bool:
    """T ⊇ I 簇倾斜时，T\\I 在 ⊥(I[1])/I 中簇倾斜（商中的 Ext¹ 与 C 中一致）"""
    T, I = frozenset(T), frozenset(I)
    if not I <= T:
        raise NotSubset("I 不包含于 T")
    region = perp_left(cat, I, 1) - I
    rest = T - I
    if not rest <= region:
        return False
    if not is_rigid(cat, rest, 2):
        return False
    orth = frozenset(X for X in region if all(cat.ext_dim(A, X) == 0 for A in rest))
    return orth == rest
