"""余挠对 (X, Y)：Ext¹(X, Y) = 0 且 C = X ∗ Y[1]

谓词返回 (是否成立, 见证) 二元组；见证是可直接写进 JSON 的字典。
"""
import itertools
import logging
import multiprocessing as mp
from dataclasses import dataclass, field
from typing import Iterable, Optional

from ..engine.errors import NotRigid, SuiteFailure
from .orbit import ObjId, OrbitCategory
from .subcalc import (Subcat, approximation_cone, components_of_quotient, is_cluster_tilting, is_rigid,
                      min_right_approx, perp_left, perp_right, rigid_subcategories, shifted)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CotorsionPair:
    X: Subcat
    Y: Subcat
    witness: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    @property
    def core(self) -> Subcat:
        return self.X & self.Y

    @property
    def delta(self) -> int:
        return len(self.core)

    def sort_key(self) -> tuple:
        return (self.delta, sorted(self.core), sorted(self.X), sorted(self.Y))


def pair_to_json(cat: OrbitCategory, P: CotorsionPair) -> dict:
    return {
        "X": cat.names(P.X),
        "Y": cat.names(P.Y),
        "core": cat.names(P.core),
        "delta": P.delta,
        "classification": classify(cat, P),
    }


def _require_d2(cat: OrbitCategory) -> None:
    if cat.d != 2:
        raise ValueError("余挠对层只对 d = 2 定义")


# ============ 谓词 ============

def is_cotorsion_pair(cat: OrbitCategory, X: Iterable[ObjId], Y: Iterable[ObjId]) -> tuple[bool, dict]:
    """Ext¹ 消失，且每个 Z 的极小右 X-逼近的锥落在 Y[1]"""
    _require_d2(cat)
    X, Y = frozenset(X), frozenset(Y)
    for A in sorted(X):
        for B in sorted(Y):
            if cat.ext_dim(A, B):
                return False, {"reason": "ext", "X": cat.name(A), "Y": cat.name(B)}
    triangles = {}
    for Z in cat.objects:
        approx = min_right_approx(cat, Z, X)
        cone = approximation_cone(cat, approx)
        if any(cat.shift(C, -1) not in Y for C in cone):
            return False, {"reason": "decomposition", "Z": cat.name(Z),
                           "X_Z": cat.names(approx.objects), "cone": cat.names(cone)}
        triangles[cat.name(Z)] = {"X_Z": cat.names(approx.objects), "Y_Z[1]": cat.names(cone)}
    return True, {"triangles": triangles}


def validated_pair(cat: OrbitCategory, X: Iterable[ObjId], Y: Iterable[ObjId]) -> CotorsionPair:
    """构造并校验；失败时带反例抛出"""
    ok, witness = is_cotorsion_pair(cat, X, Y)
    if not ok:
        raise SuiteFailure("不是余挠对", {"X": cat.names(X), "Y": cat.names(Y), **witness})
    return CotorsionPair(frozenset(X), frozenset(Y), witness)


def is_torsion_pair(cat: OrbitCategory, X: Iterable[ObjId], Y: Iterable[ObjId]) -> tuple[bool, dict]:
    """(X, Y) 是挠对 ⟺ (X, Y[−1]) 是余挠对"""
    return is_cotorsion_pair(cat, X, shifted(cat, Y, -1))


def _closed_under(cat: OrbitCategory, S: Subcat, k: int) -> bool:
    return all(cat.shift(A, k) in S for A in S)


def is_t_structure(cat: OrbitCategory, P: CotorsionPair) -> bool:
    return _closed_under(cat, P.X, 1)


def is_co_t_structure(cat: OrbitCategory, P: CotorsionPair) -> bool:
    return _closed_under(cat, P.X, -1)


def classify(cat: OrbitCategory, P: CotorsionPair) -> dict:
    return {
        "t_structure": is_t_structure(cat, P),
        "co_t_structure": is_co_t_structure(cat, P),
        "cluster_tilting": P.X == P.Y and is_cluster_tilting(cat, P.X, 2),
    }


def lemma_triple(cat: OrbitCategory, P: CotorsionPair) -> dict:
    """core = ∅ ⟺ t-结构；X 刚性 ⟺ X = core；X 簇倾斜 ⟺ X = core = Y"""
    return {
        "empty_core_iff_t": (P.delta == 0) == is_t_structure(cat, P),
        "rigid_iff_core": is_rigid(cat, P.X, 2) == (P.X == P.core),
        "ct_iff_self_paired": is_cluster_tilting(cat, P.X, 2) == (P.X == P.core == P.Y),
    }


def swap(P: CotorsionPair) -> CotorsionPair:
    return CotorsionPair(P.Y, P.X)


# ============ 分类 ============

def enumerate_with_core(cat: OrbitCategory, I: Iterable[ObjId]) -> list[CotorsionPair]:
    """以 I 为核的全部 2^ns 个余挠对：每个分支整体落在 X 一侧或 Y 一侧"""
    _require_d2(cat)
    I = frozenset(I)
    if not is_rigid(cat, I, 2):
        raise NotRigid(f"{cat.names(I)} 不是刚性的")
    comps = components_of_quotient(cat, I).components
    pairs = []
    for mask in itertools.product((False, True), repeat=len(comps)):
        X = I.union(*(c for c, m in zip(comps, mask) if m))
        Y = I.union(*(c for c, m in zip(comps, mask) if not m))
        pairs.append(validated_pair(cat, X, Y))
    logger.debug("核 %s：%d 个余挠对", cat.names(I), len(pairs))
    return sorted(pairs, key=CotorsionPair.sort_key)


def rigid_cores(cat: OrbitCategory) -> list[Subcat]:
    """所有刚性子范畴；d = 2 时走多边形不相交对角线集合"""
    if cat.d == 2:
        from .polygon import PolygonModel, noncrossing_sets
        model = PolygonModel(cat)
        return sorted((model.objects_of(s) for s in noncrossing_sets(cat.n)), key=lambda s: (len(s), sorted(s)))
    return rigid_subcategories(cat)


# 子进程各自从 JSON 重建范畴，按核分派
_worker_cat: Optional[OrbitCategory] = None


def _init_worker(doc: dict) -> None:
    global _worker_cat
    _worker_cat = OrbitCategory.from_json(doc)


def _enumerate_in_worker(I: Subcat) -> list[CotorsionPair]:
    return enumerate_with_core(_worker_cat, I)


def enumerate_all(cat: OrbitCategory, jobs: int = 1) -> dict[int, list[CotorsionPair]]:
    """按 δ 分层的全部余挠对"""
    _require_d2(cat)
    cores = rigid_cores(cat)
    if jobs > 1:
        with mp.get_context("spawn").Pool(processes=jobs, initializer=_init_worker, initargs=(cat.to_json(),)) as pool:
            results = pool.map(_enumerate_in_worker, cores, chunksize=max(1, len(cores) // (4 * jobs)))
    else:
        results = [enumerate_with_core(cat, I) for I in cores]
    strata: dict[int, list[CotorsionPair]] = {}
    for pairs in results:
        for P in pairs:
            strata.setdefault(P.delta, []).append(P)
    for delta in strata:
        strata[delta].sort(key=CotorsionPair.sort_key)
    logger.info("C_2(A_%d)：%d 个核，%d 个余挠对", cat.n, len(cores), sum(len(v) for v in strata.values()))
    return dict(sorted(strata.items()))


def brute_force_pairs(cat: OrbitCategory, I: Iterable[ObjId], limit: int = 12) -> Optional[list[CotorsionPair]]:
    """独立扫描：遍历 X = I ∪ A（A ⊆ ⊥(I[1])\\I），Y 取 X 的 Ext¹ 右垂直

    余挠对中 Y 由 X 唯一确定，所以只需扫 X。区域超过 limit 时返回 None。
    """
    I = frozenset(I)
    region = sorted(perp_left(cat, I, 1) - I)
    if len(region) > limit:
        return None
    found = []
    for r in range(len(region) + 1):
        for A in itertools.combinations(region, r):
            X = I | frozenset(A)
            Y = perp_right(cat, X, 1)
            if X & Y != I:
                continue
            ok, _ = is_cotorsion_pair(cat, X, Y)
            if ok:
                found.append(CotorsionPair(X, Y))
    return sorted(found, key=CotorsionPair.sort_key)


def _shift_orbits(cat: OrbitCategory) -> list[Subcat]:
    seen: set[ObjId] = set()
    orbits = []
    for X in cat.objects:
        if X in seen:
            continue
        orbit = []
        Z = X
        while Z not in orbit:
            orbit.append(Z)
            Z = cat.shift_perm[Z]
        seen.update(orbit)
        orbits.append(frozenset(orbit))
    return orbits


def _orbit_candidates(cat: OrbitCategory, predicate) -> list[CotorsionPair]:
    orbits = _shift_orbits(cat)
    found = []
    for mask in itertools.product((False, True), repeat=len(orbits)):
        X = frozenset().union(*(o for o, m in zip(orbits, mask) if m))
        Y = perp_right(cat, X, 1)
        ok, witness = is_cotorsion_pair(cat, X, Y)
        if ok:
            P = CotorsionPair(X, Y, witness)
            if predicate(cat, P):
                found.append(P)
    return sorted(found, key=CotorsionPair.sort_key)


def enumerate_t_structures(cat: OrbitCategory) -> list[CotorsionPair]:
    """X 取 [1]-轨道的并，Y 由 X 决定后校验"""
    _require_d2(cat)
    return _orbit_candidates(cat, is_t_structure)


def enumerate_co_t_structures(cat: OrbitCategory) -> list[CotorsionPair]:
    _require_d2(cat)
    return _orbit_candidates(cat, is_co_t_structure)


def trivial_pairs(cat: OrbitCategory) -> list[CotorsionPair]:
    everything = frozenset(cat.objects)
    return sorted([CotorsionPair(everything, frozenset()), CotorsionPair(frozenset(), everything)],
                  key=CotorsionPair.sort_key)
