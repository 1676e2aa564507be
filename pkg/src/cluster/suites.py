"""验收套件：每个套件通过时返回摘要字典，失败时抛出带反例的 SuiteFailure"""
import logging
from typing import Callable

import networkx as nx

from ..engine.errors import SuiteFailure
from ..engine.repcore import verify_fast_rules
from ..utils.cache import load_or_build
from .cotorsion import (CotorsionPair, brute_force_pairs, enumerate_all, enumerate_co_t_structures,
                        enumerate_t_structures, enumerate_with_core, is_cotorsion_pair, lemma_triple, swap,
                        trivial_pairs, validated_pair)
from .heart import heart, heart_projection, lemma_hypotheses, verify_heart_theorem
from .mutation import flip_graph, mutate_at, mutate_ct, mutate_pair, mutation_compatibility, mutation_quiver
from .orbit import OrbitCategory
from .polygon import PolygonModel, cells, cross, flip, rotate, triangulations
from .subcalc import (check_ct_decomposition, cluster_tilting_objects, complements, components_of_quotient,
                      decompose_category, gabriel_quiver, is_cluster_tilting, is_cluster_tilting_in_subquotient,
                      perp_left)

logger = logging.getLogger(__name__)


def _expect(cond: bool, message: str, **counterexample) -> None:
    if not cond:
        raise SuiteFailure(message, counterexample)


def _cat(n: int, d: int, no_cache: bool) -> OrbitCategory:
    return load_or_build(n, d, no_cache=no_cache)


# ============ 引擎 ============

def suite_serre(n: int = 4, jobs: int = 1, no_cache: bool = False) -> dict:
    """C_2(A_1..6) 与 C_4(A_3) 的 d-CY 对称性（构造时即校验）"""
    checked = []
    for m in range(1, 7):
        _expect(not verify_fast_rules(m), "组合规则与线性代数不一致", n=m)
        _cat(m, 2, no_cache)
        checked.append(f"C_2(A_{m})")
    _cat(3, 4, no_cache)
    checked.append("C_4(A_3)")
    return {"categories": checked}


def suite_engines(n: int = 4, jobs: int = 1, no_cache: bool = False) -> dict:
    """多边形 Ext¹ 与轨道范畴一致，旋转即平移，⊥ 与不相交一致"""
    pairs = 0
    for m in range(2, 7):
        cat = _cat(m, 2, no_cache)
        model = PolygonModel(cat)
        for X in cat.objects:
            a = model.arc_of_object(X)
            _expect(model.arc_of_object(cat.shift(X, 1)) == rotate(a, 1), "旋转与平移不一致", n=m, X=cat.name(X))
            for k in (1, 2):
                perp = perp_left(cat, [X], k)
                target = rotate(a, k - 1)
                geometric = frozenset(Y for Y in cat.objects
                                      if not cross(model.arc_of_object(Y), target))
                _expect(perp == geometric, "⊥ 与多边形不一致", n=m, S=cat.name(X), k=k)
            pairs += len(cat.objects)
        if m <= 4:
            cts = cluster_tilting_objects(cat)
            _expect(len(cts) == len(triangulations(m)), "簇倾斜对象数 ≠ 三角剖分数",
                    n=m, ct=len(cts), triangulations=len(triangulations(m)))
    return {"checked_objects": pairs}


# ============ 例子 ============

def suite_example_c4a3(n: int = 4, jobs: int = 1, no_cache: bool = False) -> dict:
    cat = _cat(3, 4, no_cache)
    T = frozenset(cat.parse_list("P1,P3,S3[1]"))
    _expect(is_cluster_tilting(cat, T), "P1 ⊕ P3 ⊕ S3[1] 不是 4-簇倾斜的")
    _expect(cat.hom_dim(cat.parse("P3[1]"), cat.parse("S3[1]")) != 0, "Hom(P3[1], S3[1]) = 0")
    ok, report = check_ct_decomposition(cat, T, [cat.parse_list("P1,P3"), cat.parse_list("S3[1]")])
    _expect(not ok and report["condition2"] and not report["condition3"], "分解条件与预期不符", report=report)
    comps = complements(cat, cat.parse_list("P1,P3"))
    expected = sorted(cat.parse_list("P2,S3,S3[1],S3[2]"))
    _expect(comps == expected, "P1 ⊕ P3 的补不符", got=cat.names(comps))
    return {"complements": cat.names(comps), "condition3_witness": report.get("witness3")}


def suite_decomposition(n: int = 4, jobs: int = 1, no_cache: bool = False) -> dict:
    cat = _cat(4, 2, no_cache)
    I = cat.parse_list("E")
    dec = components_of_quotient(cat, I)
    expected = sorted([frozenset(cat.parse_list("S2,S3")), frozenset(cat.parse_list("P3,P4[1],P4,I2,P1[1]"))],
                      key=sorted)
    _expect(dec.components == expected, "⊥(E[1])/E 的分支不符", got=[cat.names(c) for c in dec.components])
    model = PolygonModel(cat)
    cd = cells(model.arcs_of(I), 4)
    sizes = sorted(len(a) for a in cd.interior if a)
    _expect(sizes == [2, 5], "多边形胞腔内部对角线数不符", got=sizes)
    ns = {}
    for m in range(1, n + 1):
        ns[m] = decompose_category(_cat(m, 2, no_cache)).ns
        _expect(ns[m] == 1, "C_2(A_n) 应当不可分解", n=m, ns=ns[m])
    return {"components": [cat.names(c) for c in dec.components], "ns": ns}


def suite_t_structures(n: int = 4, jobs: int = 1, no_cache: bool = False) -> dict:
    counts = {}
    for m in range(1, n + 1):
        cat = _cat(m, 2, no_cache)
        trivial = trivial_pairs(cat)
        t = enumerate_t_structures(cat)
        co = enumerate_co_t_structures(cat)
        _expect(t == trivial, "存在非平凡 t-结构", n=m, got=[cat.names(P.X) for P in t])
        _expect(co == trivial, "存在非平凡余 t-结构", n=m, got=[cat.names(P.X) for P in co])
        counts[m] = len(t)
    return {"t_structures": counts}


def suite_classification(n: int = 4, jobs: int = 1, no_cache: bool = False) -> dict:
    """每个刚性核恰有 2^ns 个余挠对，暴力扫描不多不少"""
    cat = _cat(n, 2, no_cache)
    model = PolygonModel(cat)
    strata = enumerate_all(cat, jobs=jobs)
    cores: dict[frozenset, list[CotorsionPair]] = {}
    for pairs in strata.values():
        for P in pairs:
            cores.setdefault(P.core, []).append(P)
    scanned = 0
    for I, pairs in sorted(cores.items(), key=lambda kv: (len(kv[0]), sorted(kv[0]))):
        ns = components_of_quotient(cat, I).ns
        _expect(len(pairs) == 2 ** ns, "余挠对个数 ≠ 2^ns", core=cat.names(I), pairs=len(pairs), ns=ns)
        _expect(cells(model.arcs_of(I), n).ns == ns, "胞腔数与商分支数不符", core=cat.names(I))
        for P in pairs:
            ok, _ = is_cotorsion_pair(cat, P.Y, P.X)
            _expect(ok, "交换后不再是余挠对", X=cat.names(P.X), Y=cat.names(P.Y))
        brute = brute_force_pairs(cat, I)
        if brute is not None:
            scanned += 1
            _expect(brute == sorted(pairs, key=CotorsionPair.sort_key), "暴力扫描结果不同",
                    core=cat.names(I), brute=[cat.names(P.X) for P in brute])
    _expect(strata.get(0) == trivial_pairs(cat), "CTN_0 不是两个平凡对")
    top = strata.get(n, [])
    _expect(len(top) == len(triangulations(n)), "CTN_n 的个数 ≠ 三角剖分数", got=len(top))
    return {"strata": {k: len(v) for k, v in strata.items()}, "cores": len(cores), "brute_forced": scanned}


def _core_table(cat: OrbitCategory) -> list[tuple[CotorsionPair, frozenset]]:
    I = frozenset(cat.parse_list("P2[1],P3[1]"))
    perp = perp_left(cat, I, 1)
    third = validated_pair(cat, cat.parse_list("P2[1],P3[1],P4[1],I4"), cat.parse_list("P2[1],P3[1],P1[1],P1"))
    return [
        (validated_pair(cat, I, perp), frozenset(cat.parse_list("P2,P3,S3"))),
        (validated_pair(cat, perp, I), frozenset(cat.parse_list("S2,I2,I3"))),
        (third, frozenset(cat.parse_list("P2,P4,I3"))),
        (swap(third), frozenset(cat.parse_list("S2,E,S3"))),
    ]


def suite_hearts_example(n: int = 4, jobs: int = 1, no_cache: bool = False) -> dict:
    cat = _cat(4, 2, no_cache)
    I = frozenset(cat.parse_list("P2[1],P3[1]"))
    pairs = enumerate_with_core(cat, I)
    fixture = _core_table(cat)
    _expect(len(pairs) == 4, "核 {P2[1], P3[1]} 的余挠对不是 4 个", got=len(pairs))
    _expect(set(pairs) == {P for P, _ in fixture}, "余挠对与表中列出的不同",
            got=[[cat.names(P.X), cat.names(P.Y)] for P in pairs])
    hearts = []
    for P, expected in fixture:
        got = frozenset(heart(cat, P).heart)
        _expect(got == expected, "心不符", X=cat.names(P.X), expected=cat.names(expected), got=cat.names(got))
        hearts.append(cat.names(got))
    return {"hearts": hearts}


def _mutation_start(cat: OrbitCategory) -> CotorsionPair:
    return validated_pair(cat, cat.parse_list("P1,P2,P3,S2"), cat.parse_list("P2,P3,P4,P4[1]"))


def suite_mutation_example(n: int = 4, jobs: int = 1, no_cache: bool = False) -> dict:
    cat = _cat(4, 2, no_cache)
    P = _mutation_start(cat)
    _expect(P.core == frozenset(cat.parse_list("P2,P3")), "核不是 {P2, P3}")
    P1 = mutate_at(cat, P, cat.parse("P2"))
    _expect(P1.X == frozenset(cat.parse_list("E,S3,P3,P1")), "第一步 X₁ 不符", got=cat.names(P1.X))
    _expect(P1.Y == frozenset(cat.parse_list("S3,P3,P4[1],P4")), "第一步 Y₁ 不符", got=cat.names(P1.Y))
    _expect(P1.core == frozenset(cat.parse_list("S3,P3")), "第一步核不符", got=cat.names(P1.core))
    P2 = mutate_at(cat, P1, cat.parse("S3"))
    _expect(P2.core == frozenset(cat.parse_list("S2,P3")), "第二步核不符", got=cat.names(P2.core))
    _expect(P2 != P, "两步变换回到了起点")
    return {"I1": cat.names(P1.core), "I2": cat.names(P2.core),
            "X2": cat.names(P2.X), "Y2": cat.names(P2.Y)}


# ============ 全局定律 ============

def suite_gabriel(n: int = 4, jobs: int = 1, no_cache: bool = False) -> dict:
    cat = _cat(n, 2, no_cache)
    model = PolygonModel(cat)
    ns = decompose_category(cat).ns
    cts = cluster_tilting_objects(cat)
    for T in cts:
        nc = gabriel_quiver(cat, T).nc
        _expect(nc == ns, "nc(Γ_T) ≠ ns(C)", T=cat.names(T), nc=nc, ns=ns)
        for T0 in sorted(T):
            ex = mutate_ct(cat, T, T0)
            flipped = model.objects_of(flip(model.arcs_of(T), model.arc_of_object(T0)))
            _expect(ex.result == flipped, "簇倾斜变换 ≠ 对角线翻转", T=cat.names(T), at=cat.name(T0))
    quiver = flip_graph(mutation_quiver(cat, enumerate_all(cat, jobs=jobs).get(n, [])))
    degrees = {deg for _, deg in quiver.degree()}
    _expect(quiver.number_of_nodes() == len(cts), "变换箭图顶点数不符", got=quiver.number_of_nodes())
    _expect(degrees == {n}, "变换箭图不是正则图", degrees=sorted(degrees))
    _expect(nx.is_connected(quiver), "变换箭图不连通")
    return {"cluster_tilting": len(cts), "ns": ns, "mutation_quiver": quiver.number_of_nodes()}


def suite_heart_laws(n: int = 4, jobs: int = 1, no_cache: bool = False) -> dict:
    """心投影落在心中，在 X、Y 上为零，在心上为恒等；同核的心等价"""
    cat = _cat(n, 2, no_cache)
    strata = enumerate_all(cat, jobs=jobs)
    checked = 0
    cores = set()
    for pairs in strata.values():
        for P in pairs:
            cores.add(P.core)
            report = heart(cat, P)
            for M in cat.objects:
                proj = heart_projection(cat, M, P).M_bar
                _expect(set(proj) <= set(report.heart), "心投影不落在心中", X=cat.names(P.X), M=cat.name(M),
                        got=cat.names(proj), heart=cat.names(report.heart))
                if M in P.X or M in P.Y:
                    _expect(not proj, "心投影在 X 或 Y 上不为零", X=cat.names(P.X), M=cat.name(M),
                            got=cat.names(proj))
                if M in report.heart:
                    _expect(proj == (M,), "心投影在心上不是恒等", X=cat.names(P.X), M=cat.name(M),
                            got=cat.names(proj))
                checked += 1
            _expect(not report.tstructure_heart_A, "商范畴 t-结构的心非空", X=cat.names(P.X))
    for I in sorted(cores, key=lambda s: (len(s), sorted(s))):
        ok, info = verify_heart_theorem(cat, I)
        _expect(ok, "同核的心不等价", **info)
    I = frozenset(cat.parse_list("P2[1],P3[1]")) if n == 4 else frozenset()
    ok, info = lemma_hypotheses(cat, I)
    _expect(ok, "引理假设不成立", **info)
    return {"projections": checked, "cores": len(cores)}


def suite_mutation_laws(n: int = 4, jobs: int = 1, no_cache: bool = False) -> dict:
    cat = _cat(n, 2, no_cache)
    strata = enumerate_all(cat, jobs=jobs)
    cts = cluster_tilting_objects(cat)
    mutations = 0
    verdicts = 0
    for pairs in strata.values():
        for P in pairs:
            for flag, value in lemma_triple(cat, P).items():
                _expect(value, "core/t-结构/刚性三元关系不成立", law=flag, X=cat.names(P.X))
            _expect(mutate_pair(cat, P, P.core) == P, "μ(P, core) ≠ P", X=cat.names(P.X))
            shifted = mutate_pair(cat, P, frozenset())
            _expect(shifted.X == frozenset(cat.shift(A, 1) for A in P.X), "μ(P, ∅) ≠ P[1]", X=cat.names(P.X))
            core = sorted(P.core)
            for mask in range(1 << len(core)):
                D = frozenset(A for k, A in enumerate(core) if mask >> k & 1)
                Q = mutate_pair(cat, P, D)
                mutations += 1
                _expect(Q.delta == P.delta, "变换改变了 δ", X=cat.names(P.X), D=cat.names(D))
                if Q.core == P.core:
                    _expect(Q == P, "核不变但余挠对改变", X=cat.names(P.X), D=cat.names(D))
            for T in cts:
                if not P.core <= T:
                    continue
                for T0 in sorted(T):
                    ok, report = mutation_compatibility(cat, T, T0, P)
                    verdicts += 1
                    _expect(ok, "簇倾斜变换与余挠对变换不相容", **report)
    return {"mutations": mutations, "verdicts": verdicts}


def suite_subquotient_example(n: int = 4, jobs: int = 1, no_cache: bool = False) -> dict:
    """含 E 的簇倾斜对象 P4[1] ⊕ P3 ⊕ E ⊕ S3 在 ⊥(E[1])/E 中仍簇倾斜"""
    cat = _cat(4, 2, no_cache)
    T = frozenset(cat.parse_list("P4[1],P3,E,S3"))
    _expect(is_cluster_tilting(cat, T), "P4[1] ⊕ P3 ⊕ E ⊕ S3 不是簇倾斜的")
    _expect(is_cluster_tilting_in_subquotient(cat, T, cat.parse_list("E")), "在商范畴中不是簇倾斜的")
    return {"T": cat.names(T)}


SUITES: dict[str, Callable[..., dict]] = {
    "serre": suite_serre,
    "engines": suite_engines,
    "example-c4a3": suite_example_c4a3,
    "decomposition": suite_decomposition,
    "subquotient-example": suite_subquotient_example,
    "t-structures": suite_t_structures,
    "classification": suite_classification,
    "hearts-example": suite_hearts_example,
    "mutation-example": suite_mutation_example,
    "gabriel": suite_gabriel,
    "heart-laws": suite_heart_laws,
    "mutation-laws": suite_mutation_laws,
}


def run_suite(name: str, n: int = 4, jobs: int = 1, no_cache: bool = False) -> dict:
    """运行单个套件或 all；返回 {套件名: 摘要}"""
    names = list(SUITES) if name == "all" else [name]
    out = {}
    for key in names:
        if key not in SUITES:
            raise KeyError(key)
        logger.info("套件 %s 开始", key)
        out[key] = SUITES[key](n=n, jobs=jobs, no_cache=no_cache)
        logger.info("套件 %s 通过", key)
    return out
