"""余挠对的心 H = (X[−1] ∗ I) ∩ (I ∗ Y[1]) 及其商 H/I"""
import logging
from dataclasses import dataclass, field
from typing import Iterable, Optional

import networkx as nx

from ..engine.derived import DMorphism, DObject, shift_D
from ..engine.errors import NotRigid
from .cotorsion import CotorsionPair, enumerate_with_core, validated_pair
from .orbit import ObjId, OrbitCategory
from .subcalc import (GabrielQuiver, Subcat, cone_of, cone_triangle, gabriel_quiver, is_rigid, iy_shift,
                      iy_shift_inv, min_left_approx, min_right_approx, perp_left, perp_right,
                      quotient_hom_dim, right_approximation, shifted)

logger = logging.getLogger(__name__)


def in_I_star_Y1(cat: OrbitCategory, Z: ObjId, P: CotorsionPair) -> bool:
    """Z ∈ I ∗ Y[1] ⟺ 极小右 X-逼近的源在 add I 中"""
    return set(min_right_approx(cat, Z, P.X).objects) <= P.core


def in_Xm1_star_I(cat: OrbitCategory, Z: ObjId, P: CotorsionPair) -> bool:
    """Z ∈ X[−1] ∗ I ⟺ 极小左 Y-逼近的靶在 add I 中"""
    return set(min_left_approx(cat, Z, P.Y).objects) <= P.core


@dataclass
class HeartReport:
    H: Subcat
    heart: list[ObjId]
    quotient_hom_table: dict[tuple[ObjId, ObjId], int] = field(default_factory=dict)
    tstructure_heart_A: Subcat = frozenset()
    end_I_quiver: Optional[GabrielQuiver] = None

    def to_json(self, cat: OrbitCategory) -> dict:
        return {
            "objects": cat.names(self.heart),
            "quotient_hom_table": {f"{cat.name(A)}|{cat.name(B)}": v
                                   for (A, B), v in sorted(self.quotient_hom_table.items()) if v},
            "A": cat.names(self.tstructure_heart_A),
        }


def _quotient_heart_A(cat: OrbitCategory, P: CotorsionPair) -> Subcat:
    """商范畴 ⊥(I[1])/I 中 t-结构 (X/I, Y/I) 的心 (X/I)⟨−1⟩ ∩ (Y/I)⟨1⟩"""
    I = P.core
    region = perp_left(cat, I, 1) - I
    A = set()
    for M in region:
        up, down = iy_shift(cat, M, I), iy_shift_inv(cat, M, I)
        if up is not None and down is not None and up in P.X and down in P.Y:
            A.add(M)
    return frozenset(A)


def heart(cat: OrbitCategory, P: CotorsionPair) -> HeartReport:
    I = P.core
    H = frozenset(Z for Z in cat.objects if in_I_star_Y1(cat, Z, P) and in_Xm1_star_I(cat, Z, P))
    objs = sorted(H - I)
    table = {(A, B): quotient_hom_dim(cat, A, B, I) for A in objs for B in objs}
    A = _quotient_heart_A(cat, P) if is_rigid(cat, I, 2) else frozenset()
    logger.debug("心 %s（核 %s）", cat.names(objs), cat.names(I))
    return HeartReport(H, objs, table, A, gabriel_quiver(cat, I))


def abelian_subcategory_check(cat: OrbitCategory, P: CotorsionPair, report: Optional[HeartReport] = None) -> bool:
    """对象层面 A ⊆ H"""
    report = report or heart(cat, P)
    return report.tstructure_heart_A <= report.H


# ============ 心投影 ============

@dataclass
class TriangleWitness:
    """两次八面体构造的中间对象（都已投影回基本区域）"""
    M: ObjId
    X_M: tuple[ObjId, ...]
    Y_M: tuple[ObjId, ...]
    X_M1: tuple[ObjId, ...]
    Y_M1: tuple[ObjId, ...]
    M_tilde: tuple[ObjId, ...]
    X_M2: tuple[ObjId, ...]
    Y_M2: tuple[ObjId, ...]
    X_M3: tuple[ObjId, ...]
    Y_M3: tuple[ObjId, ...]
    M_bar_full: tuple[ObjId, ...]
    M_bar: tuple[ObjId, ...]
    morphisms: dict[str, DMorphism] = field(default_factory=dict, repr=False)

    def to_json(self, cat: OrbitCategory) -> dict:
        out = {}
        for key in ("X_M", "Y_M", "X_M1", "Y_M1", "M_tilde", "X_M2", "Y_M2", "X_M3", "Y_M3", "M_bar_full", "M_bar"):
            out[key] = cat.names(getattr(self, key))
        out["M"] = cat.name(self.M)
        return out


def _cocone(cat: OrbitCategory, f: DMorphism) -> tuple[ObjId, ...]:
    return cat.project_object(shift_D(cone_of(cat, f), -1))


def heart_projection(cat: OrbitCategory, M: ObjId, P: CotorsionPair) -> TriangleWitness:
    """M ↦ M̄ ∈ H/I

    Y_M → X_M → M；X'_M[−1] → X_M → Y'_M；M̃ = cone(X'_M[−1] → M)；
    X''_M[−1] → M̃ → Y''_M → X''_M；Y'''_M → X'''_M → Y''_M；
    M̄ = cocone(X'''_M → Y''_M → X''_M)。
    """
    X, I = P.X, P.core
    Xm1 = shifted(cat, X, -1)
    K = DObject((cat.check(M).lift,))

    a = right_approximation(cat, K, X).morphism
    b = right_approximation(cat, a.source, Xm1).morphism
    ab = cat.D.compose_D(b, a) if not b.source.is_zero() else DMorphism(b.source, K)
    M_tilde = cone_of(cat, ab)

    c = right_approximation(cat, M_tilde, Xm1).morphism
    tri = cone_triangle(cat, c)
    Y2 = tri.Z
    h = tri.h
    g = right_approximation(cat, Y2, X).morphism
    if g.source.is_zero() or h.target.is_zero():
        w = DMorphism(g.source, h.target)
    else:
        w = cat.D.compose_D(g, h)
    M_bar_lift = shift_D(cone_of(cat, w), -1)
    full = cat.project_object(M_bar_lift)
    return TriangleWitness(
        M=M,
        X_M=cat.project_object(a.source),
        Y_M=_cocone(cat, a),
        X_M1=cat.project_object(shift_D(b.source, 1)),
        Y_M1=cat.project_object(cone_of(cat, b)),
        M_tilde=cat.project_object(M_tilde),
        X_M2=cat.project_object(shift_D(c.source, 1)),
        Y_M2=cat.project_object(Y2),
        X_M3=cat.project_object(g.source),
        Y_M3=_cocone(cat, g),
        M_bar_full=full,
        M_bar=tuple(Z for Z in full if Z not in I),
        morphisms={"a": a, "b": b, "c": c, "g": g, "h": h, "w": w},
    )


# ============ 同核的心 ============

def _table_graph(report: HeartReport) -> nx.DiGraph:
    G = nx.DiGraph()
    G.add_nodes_from(report.heart)
    for (A, B), v in report.quotient_hom_table.items():
        if v:
            G.add_edge(A, B, dim=v)
    return G


def tables_isomorphic(r1: HeartReport, r2: HeartReport) -> bool:
    if len(r1.heart) != len(r2.heart):
        return False
    return nx.is_isomorphic(_table_graph(r1), _table_graph(r2),
                            edge_match=lambda e1, e2: e1["dim"] == e2["dim"])


def verify_heart_theorem(cat: OrbitCategory, core: Iterable[ObjId]) -> tuple[bool, dict]:
    """同核余挠对的心两两等价（对象数与商 Hom 表同构）"""
    core = frozenset(core)
    if not is_rigid(cat, core, 2):
        raise NotRigid(f"{cat.names(core)} 不是刚性的")
    pairs = enumerate_with_core(cat, core)
    reports = [heart(cat, P) for P in pairs]
    sizes = [len(r.heart) for r in reports]
    ok = len(set(sizes)) <= 1 and all(tables_isomorphic(reports[0], r) for r in reports[1:])
    return ok, {
        "core": cat.names(core),
        "pairs": len(pairs),
        "hearts": [cat.names(r.heart) for r in reports],
        "sizes": sizes,
        "end_I_arrows": sum(reports[0].end_I_quiver.arrow_counts.values()) if reports else 0,
    }


def lemma_hypotheses(cat: OrbitCategory, core: Iterable[ObjId]) -> tuple[bool, dict]:
    """对 (I, ⊥(I[1]))：心投影在 ⊥(I[1]) 与 (I[−1])⊥ 上为零"""
    I = frozenset(core)
    P = validated_pair(cat, I, perp_left(cat, I, 1))
    failures = []
    for region_name, region in (("perp_left", perp_left(cat, I, 1)), ("perp_right", perp_right(cat, I, 1))):
        for M in sorted(region):
            proj = heart_projection(cat, M, P)
            if proj.M_bar:
                failures.append({"region": region_name, "M": cat.name(M), "M_bar": cat.names(proj.M_bar)})
    return not failures, {"core": cat.names(I), "failures": failures}
