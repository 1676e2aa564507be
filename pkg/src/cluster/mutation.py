"""余挠对的 D-变换与簇倾斜对象的变换"""
import logging
from dataclasses import dataclass
from typing import Iterable, Optional

import networkx as nx

from ..engine.errors import CoreNotContained, CyError, DNotInCore, NotClusterTilting
from .cotorsion import CotorsionPair, validated_pair
from .orbit import ObjId, OrbitCategory
from .subcalc import Subcat, approximation_cone, iy_shift, is_cluster_tilting, is_relative_cluster_tilting, min_left_approx

logger = logging.getLogger(__name__)


# ============ 余挠对 ============

def _mutate_class(cat: OrbitCategory, S: Subcat, D: Subcat) -> Subcat:
    out = set(D)
    for M in S - D:
        N = iy_shift(cat, M, D)
        if N is not None:
            out.add(N)
    return frozenset(out)


def mutate_pair(cat: OrbitCategory, P: CotorsionPair, D: Iterable[ObjId]) -> CotorsionPair:
    """μ⁻¹(X; D) = D ∪ {M⟨1⟩ : M ∈ X\\D}，Y 同理"""
    D = frozenset(D)
    if not D <= P.core:
        raise DNotInCore(f"{cat.names(D - P.core)} 不在核 {cat.names(P.core)} 中")
    Q = validated_pair(cat, _mutate_class(cat, P.X, D), _mutate_class(cat, P.Y, D))
    if Q.delta != P.delta:
        raise CyError(f"变换改变了 δ: {P.delta} → {Q.delta}")
    logger.debug("μ(%s; %s) 核 %s → %s", cat.names(P.X), cat.names(D), cat.names(P.core), cat.names(Q.core))
    return Q


def mutate_at(cat: OrbitCategory, P: CotorsionPair, I0: ObjId) -> CotorsionPair:
    """在核的不可分解项 I0 处变换（D = core \\ I0）"""
    if I0 not in P.core:
        raise DNotInCore(f"{cat.name(I0)} 不是核的直和项")
    return mutate_pair(cat, P, P.core - {I0})


def mutation_quiver(cat: OrbitCategory, pairs: Iterable[CotorsionPair]) -> nx.MultiDiGraph:
    """顶点是同一层 CTN_δ 的余挠对，箭头 P → μ_{I0}(P)；δ = 0 时唯一的 D 是 ∅"""
    pairs = sorted(pairs, key=CotorsionPair.sort_key)
    G = nx.MultiDiGraph()
    G.add_nodes_from(pairs)
    for P in pairs:
        if P.delta == 0:
            G.add_edge(P, mutate_pair(cat, P, frozenset()), at=None)
            continue
        for I0 in sorted(P.core):
            G.add_edge(P, mutate_at(cat, P, I0), at=I0)
    return G


def flip_graph(G: nx.MultiDiGraph) -> nx.Graph:
    """合并双向箭头、去掉自环后的无向图"""
    H = nx.Graph()
    H.add_nodes_from(G.nodes)
    H.add_edges_from((u, v) for u, v in G.edges() if u != v)
    return H


# ============ 簇倾斜对象 ============

@dataclass
class Exchange:
    """交换三角 T0 → B → T0' → T0[1]"""
    T0: ObjId
    B: tuple[ObjId, ...]
    T0_new: ObjId
    result: Subcat


def mutate_ct(cat: OrbitCategory, T: Iterable[ObjId], T0: ObjId) -> Exchange:
    T = frozenset(T)
    if T0 not in T:
        raise NotClusterTilting(f"{cat.name(T0)} 不是 T 的直和项")
    if not is_cluster_tilting(cat, T):
        raise NotClusterTilting(f"{cat.names(T)} 不是簇倾斜的")
    rest = T - {T0}
    approx = min_left_approx(cat, T0, rest)
    cone = [X for X in approximation_cone(cat, approx) if X not in rest]
    if len(cone) != 1:
        raise CyError(f"交换三角的锥不是单个新对象: {cat.names(cone)}")
    return Exchange(T0, approx.objects, cone[0], rest | {cone[0]})


# ============ 相对分解 ============

def split_ct_relative(cat: OrbitCategory, T: Iterable[ObjId], P: CotorsionPair) -> tuple[Subcat, Subcat, Subcat]:
    """T = T_X ⊔ I ⊔ T_Y，并检查 T_X ⊕ I、T_Y ⊕ I 分别是 X-、Y-簇倾斜的"""
    T = frozenset(T)
    I = P.core
    if not I <= T:
        raise CoreNotContained(f"核 {cat.names(I)} 不包含于 {cat.names(T)}")
    TX = (T & P.X) - I
    TY = (T & P.Y) - I
    if TX | I | TY != T:
        raise CyError(f"{cat.names(T - (TX | I | TY))} 既不在 X 也不在 Y 中")
    if not is_relative_cluster_tilting(cat, TX | I, P.X):
        raise CyError(f"{cat.names(TX | I)} 不是 X-簇倾斜的")
    if not is_relative_cluster_tilting(cat, TY | I, P.Y):
        raise CyError(f"{cat.names(TY | I)} 不是 Y-簇倾斜的")
    return TX, I, TY


def mutation_compatibility(cat: OrbitCategory, T: Iterable[ObjId], T0: ObjId, P: CotorsionPair) -> tuple[bool, dict]:
    """簇倾斜对象的变换与余挠对变换的相容性"""
    T = frozenset(T)
    TX, I, TY = split_ct_relative(cat, T, P)
    ex = mutate_ct(cat, T, T0)
    report = {"T0": cat.name(T0), "B": cat.names(ex.B), "new": cat.name(ex.T0_new), "mutated": cat.names(ex.result)}
    if T0 in I:
        # T0 在核中：比较的是 T 的 D-变换 D ∪ (T \ D)⟨1⟩，D = I \ T0
        D = I - {T0}
        Q = mutate_pair(cat, P, D)
        T_new = _mutate_class(cat, T, D)
        report["case"] = "core"
        report["pair"] = {"X": cat.names(Q.X), "Y": cat.names(Q.Y), "core": cat.names(Q.core)}
        report["D_mutation"] = cat.names(T_new)
        report["same_as_exchange"] = T_new == ex.result
        try:
            split_ct_relative(cat, T_new, Q)
        except CyError as exc:
            report["error"] = str(exc)
            return False, report
        return True, report
    side, own = ("X", P.X) if T0 in TX else ("Y", P.Y)
    allowed = (TX if side == "X" else TY) | I
    report["case"] = side
    ok = ex.T0_new in own and set(ex.B) <= allowed
    return ok, report


def path_from(cat: OrbitCategory, P: CotorsionPair, steps: Iterable[ObjId]) -> list[CotorsionPair]:
    """依次在给定核直和项处变换，返回整条路径（含起点）"""
    path = [P]
    for I0 in steps:
        path.append(mutate_at(cat, path[-1], I0))
    return path


def find_pair(pairs: Iterable[CotorsionPair], X: Iterable[ObjId], Y: Optional[Iterable[ObjId]] = None) -> Optional[CotorsionPair]:
    X = frozenset(X)
    Y = None if Y is None else frozenset(Y)
    for P in pairs:
        if P.X == X and (Y is None or P.Y == Y):
            return P
    return None
