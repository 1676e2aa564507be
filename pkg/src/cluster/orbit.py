"""轨道范畴 C_d(A_n) = D^b(kA_n) / F，F = τ⁻¹[d−1]

基本区域 = mod kA_n ∪ mod[1] ∪ … ∪ mod[d−2] ∪ {P_i[d−1]}，
Hom_C(X, Y) = ⊕_m Hom_D(X, F^m Y)，每个扭次 m 的分量至多一维。
"""
import logging
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from sympy import Rational

from ..engine.derived import DMorphism, DObject, Derived, Summand, Triangle, get_derived, positions_in
from ..engine.errors import CyError, LiftError, SerreCheckFailed, UnknownObject
from ..engine.naming import format_summand, parse_list, parse_summand
from ..engine.repcore import Interval, all_intervals, verify_fast_rules

logger = logging.getLogger(__name__)

# 投影到基本区域时的最大迭代次数
MAX_PROJECT_STEPS = 256
JSON_VERSION = 1


@dataclass(frozen=True, order=True)
class ObjId:
    """基本区域中的不可分解对象，排序键 (平移, a, b)"""
    shift: int
    interval: Interval

    @property
    def lift(self) -> Summand:
        return Summand(self.shift, self.interval)

    @classmethod
    def of(cls, s: Summand) -> "ObjId":
        return cls(s.shift, s.interval)

    def __str__(self) -> str:
        return str(self.lift)


@dataclass(eq=False)
class CMorphism:
    """C 中的态射：comps[(j, i)][m] 是 X_i → F^m Y_j 分量在固定基下的系数"""
    source: tuple[ObjId, ...]
    target: tuple[ObjId, ...]
    comps: dict[tuple[int, int], dict[int, Rational]] = field(default_factory=dict)


@dataclass(eq=False)
class CTriangle:
    """C 中的三角，记录它在 D^b 中的提升"""
    X: tuple[ObjId, ...]
    Y: tuple[ObjId, ...]
    Z: tuple[ObjId, ...]
    lift: Triangle


class OrbitCategory:
    """有限范畴 C_d(A_n)：对象、分次 Hom 表与平移置换"""

    def __init__(self, n: int, d: int, twists: Optional[dict[tuple[ObjId, ObjId], tuple[int, ...]]] = None):
        if n < 1 or d < 2:
            raise ValueError("需要 n ≥ 1 且 d ≥ 2")
        self.n, self.d = n, d
        self.D: Derived = get_derived(n)
        self.window = 2 * n + 2 * d
        self.objects: list[ObjId] = self._fundamental_domain()
        self.index = {X: i for i, X in enumerate(self.objects)}
        self._F_lifts: dict[tuple[Summand, int], Summand] = {}
        self._twists: dict[tuple[ObjId, ObjId], tuple[int, ...]] = dict(twists or {})
        # 子范畴演算的逐实例缓存（逼近提升、锥）
        self.memo: dict[tuple, object] = {}
        self.shift_perm = {X: self.project(X.lift.shifted(1)) for X in self.objects}
        self.serre_ok = False

    # ---------- 对象 ----------

    def _fundamental_domain(self) -> list[ObjId]:
        objs = [ObjId(s, iv) for s in range(self.d - 1) for iv in all_intervals(self.n)]
        objs += [ObjId(self.d - 1, Interval(1, i)) for i in range(1, self.n + 1)]
        return sorted(objs)

    def in_domain(self, s: Summand) -> bool:
        return 0 <= s.shift <= self.d - 2 or (s.shift == self.d - 1 and s.a == 1)

    def above_domain(self, s: Summand) -> bool:
        return s.shift > self.d - 1 or (s.shift == self.d - 1 and s.a > 1)

    def project(self, s: Summand) -> ObjId:
        """沿 F 的轨道把平移区间送回基本区域"""
        return self.locate(s)[0]

    def project_object(self, X: DObject) -> tuple[ObjId, ...]:
        return tuple(sorted(self.project(s) for s in X))

    def check(self, X: ObjId) -> ObjId:
        if X not in self.index:
            raise UnknownObject(f"{X} 不在 C_{self.d}(A_{self.n}) 中")
        return X

    def locate(self, s: Summand) -> tuple[ObjId, int]:
        """返回 (X, t) 使 s = F^t(X)"""
        t = 0
        for _ in range(MAX_PROJECT_STEPS):
            if self.in_domain(s):
                return ObjId.of(s), t
            p = -1 if self.above_domain(s) else 1
            s = self.D.F_summand(s, self.d, p)
            t -= p
        raise CyError(f"{s} 无法投影到基本区域")

    def lifts(self, X: ObjId, window: Optional[int] = None) -> list[Summand]:
        w = self.window if window is None else window
        return [self.F_lift(X.lift, m) for m in range(-w, w + 1)]

    def lifts_into(self, A: ObjId, K: Summand) -> list[Summand]:
        """A 的提升 L 中满足 Hom_D(L, K) ≠ 0 的那些"""
        P, t = self.locate(K)
        return [self.F_lift(A.lift, t - m) for m in self.twists(A, P)]

    def lifts_from(self, K: Summand, A: ObjId) -> list[Summand]:
        """A 的提升 L 中满足 Hom_D(K, L) ≠ 0 的那些"""
        P, t = self.locate(K)
        return [self.F_lift(A.lift, t + m) for m in self.twists(P, A)]

    def F_lift(self, s: Summand, m: int) -> Summand:
        """F^m(s)，按 m 逐步缓存"""
        if m == 0:
            return s
        key = (s, m)
        if key not in self._F_lifts:
            step = 1 if m > 0 else -1
            self._F_lifts[key] = self.D.F_summand(self.F_lift(s, m - step), self.d, step)
        return self._F_lifts[key]

    # ---------- 命名 ----------

    def name(self, X: ObjId) -> str:
        return format_summand(X.lift, self.n)

    def names(self, objs: Iterable[ObjId]) -> list[str]:
        return [self.name(X) for X in sorted(objs)]

    def parse(self, text: str) -> ObjId:
        return self.project(parse_summand(text, self.n))

    def parse_list(self, text: str) -> list[ObjId]:
        return [self.project(s) for s in parse_list(text, self.n)]

    # ---------- Hom ----------

    def twists(self, X: ObjId, Y: ObjId) -> tuple[int, ...]:
        """使 Hom_D(X, F^m Y) ≠ 0 的扭次 m（升序）"""
        key = (X, Y)
        if key not in self._twists:
            x = X.lift
            found = []
            for m in range(-self.window, self.window + 1):
                if self.D.block_dim(x, self.F_lift(Y.lift, m)):
                    if abs(m) == self.window:
                        raise SerreCheckFailed(f"Hom({X}, F^{m}{Y}) 在窗口边缘非零")
                    found.append(m)
            self._twists[key] = tuple(found)
        return self._twists[key]

    def hom_dim(self, X: ObjId, Y: ObjId) -> int:
        self.check(X)
        self.check(Y)
        return len(self.twists(X, Y))

    def shift(self, X: ObjId, k: int) -> ObjId:
        self.check(X)
        return self.project(X.lift.shifted(k))

    def ext_dim(self, X: ObjId, Y: ObjId, k: int = 1) -> int:
        return self.hom_dim(X, self.shift(Y, k))

    def hom_basis(self, X: ObjId, Y: ObjId) -> list[tuple[int, DMorphism]]:
        """Hom_C(X, Y) 的基：(扭次 m, X → F^m Y 的初等态射)"""
        x = DObject((X.lift,))
        return [(m, DMorphism(x, DObject((self.F_lift(Y.lift, m),)), {(0, 0): Rational(1)}))
                for m in self.twists(X, Y)]

    def compose(self, X: ObjId, Y: ObjId, Z: ObjId, u: dict[int, Rational], v: dict[int, Rational]) -> dict[int, Rational]:
        """v ∘ u，u、v 以扭次为键给出系数；结构常数经 F 在态射上的作用算出"""
        out: dict[int, Rational] = {}
        for m1, a in u.items():
            for m2, b in v.items():
                if a == 0 or b == 0 or m1 + m2 not in self.twists(X, Z):
                    continue
                ub = DMorphism(DObject((X.lift,)), DObject((self.F_lift(Y.lift, m1),)), {(0, 0): Rational(1)})
                vb = DMorphism(DObject((Y.lift,)), DObject((self.F_lift(Z.lift, m2),)), {(0, 0): Rational(1)})
                moved = self.D.F_apply(vb, self.d, m1)
                comp = self.D.compose_D(ub, moved)
                c = comp.coeff(0, 0)
                if c != 0:
                    out[m1 + m2] = out.get(m1 + m2, Rational(0)) + a * b * c
        return {m: c for m, c in out.items() if c != 0}

    def factors_through(self, L: Summand, K: Summand, middle: Iterable[ObjId], exclude: Iterable[Summand] = ()) -> bool:
        """初等态射 L → K 是否经 middle 中某对象的提升非零地分解"""
        skip = set(exclude)
        for J in middle:
            for Jl in self.lifts_into(J, K):
                if Jl not in skip and self.D.structure_constant(L, Jl, K) != 0:
                    return True
        return False

    def irreducible_counts(self, objs: Sequence[ObjId], modulo: Iterable[ObjId] = ()) -> dict[tuple[ObjId, ObjId], int]:
        """dim rad(X, Y) / rad²(X, Y)；给出 modulo 时在商范畴 C/add(modulo) 中计算"""
        objs = sorted(set(objs))
        ideal = sorted(set(modulo))
        counts: dict[tuple[ObjId, ObjId], int] = {}
        for Y in objs:
            K = Y.lift
            for X in objs:
                c = 0
                for L in self.lifts_into(X, K):
                    if L == K:
                        continue
                    if ideal and self.factors_through(L, K, ideal):
                        continue
                    if self.factors_through(L, K, objs, exclude=(L, K)):
                        continue
                    c += 1
                if c:
                    counts[(X, Y)] = c
        return counts

    def ar_quiver(self) -> dict[tuple[ObjId, ObjId], int]:
        """整个范畴上的不可约态射"""
        return self.irreducible_counts(self.objects)

    # ---------- 校验 ----------

    def verify(self) -> None:
        """快速规则、自同态维数与 d-CY 对称性"""
        mismatches = verify_fast_rules(self.n)
        if mismatches:
            raise SerreCheckFailed(f"组合 Hom/Ext 规则与线性代数不一致: {mismatches[:3]}")
        for X in self.objects:
            if self.hom_dim(X, X) != 1:
                raise SerreCheckFailed(f"dim End({self.name(X)}) = {self.hom_dim(X, X)} ≠ 1")
        for X in self.objects:
            Xd = self.shift(X, self.d)
            for Y in self.objects:
                if self.hom_dim(X, Y) != self.hom_dim(Y, Xd):
                    raise SerreCheckFailed(
                        f"dim Hom({self.name(X)}, {self.name(Y)}) ≠ dim Hom({self.name(Y)}, {self.name(X)}[{self.d}])")
        self.serre_ok = True
        logger.info("C_%d(A_%d) 校验通过：%d 个对象", self.d, self.n, len(self.objects))

    # ---------- 三角 ----------

    def cone_orbit(self, f: CMorphism) -> CTriangle:
        """把 f 提升为 D^b 中的态射（源、靶各自沿 F 重新提升）后取锥"""
        src_pot, tgt_pot = self._potentials(f)
        xs = [self.F_lift(X.lift, src_pot[i]) for i, X in enumerate(f.source)]
        ys = [self.F_lift(Y.lift, tgt_pot[j]) for j, Y in enumerate(f.target)]
        X, Y = DObject.of(xs), DObject.of(ys)
        sp, tp = positions_in(X, xs), positions_in(Y, ys)
        coeffs = {}
        for (j, i), parts in f.comps.items():
            for m, c in parts.items():
                if c == 0:
                    continue
                # 基 X_i → F^m Y_j 经 F^{s_i} 搬到 F^{s_i} X_i → F^{t_j} Y_j
                basis = DMorphism(DObject((f.source[i].lift,)),
                                  DObject((self.F_lift(f.target[j].lift, m),)), {(0, 0): Rational(1)})
                moved = self.D.F_apply(basis, self.d, src_pot[i])
                coeffs[(tp[j], sp[i])] = coeffs.get((tp[j], sp[i]), Rational(0)) + c * moved.coeff(0, 0)
        tri = self.D.cone_D(DMorphism(X, Y, coeffs))
        return CTriangle(tuple(sorted(f.source)), tuple(sorted(f.target)),
                         self.project_object(tri.Z), tri)

    def _potentials(self, f: CMorphism) -> tuple[list[int], list[int]]:
        """求 s_i、t_j 使每个非零分量满足 m = t_j − s_i"""
        edges = [(i, j, m) for (j, i), parts in f.comps.items() for m, c in parts.items() if c != 0]
        src: dict[int, int] = {}
        tgt: dict[int, int] = {}
        changed = True
        while changed:
            changed = False
            for i, j, m in edges:
                if i in src and j not in tgt:
                    tgt[j] = src[i] + m
                    changed = True
                elif j in tgt and i not in src:
                    src[i] = tgt[j] - m
                    changed = True
                elif i not in src and j not in tgt:
                    src[i], tgt[j] = 0, m
                    changed = True
                elif tgt[j] - src[i] != m:
                    raise LiftError("态射的分量混合了不同扭次，无法整体提升")
        return ([src.get(i, 0) for i in range(len(f.source))],
                [tgt.get(j, 0) for j in range(len(f.target))])

    # ---------- 序列化 ----------

    def to_json(self) -> dict:
        homs = {}
        for X in self.objects:
            for Y in self.objects:
                t = self.twists(X, Y)
                if t:
                    homs[f"{X}|{Y}"] = list(t)
        return {
            "version": JSON_VERSION,
            "n": self.n,
            "d": self.d,
            "objects": [str(X) for X in self.objects],
            "names": [self.name(X) for X in self.objects],
            "homs": homs,
            "shift_perm": {str(X): str(self.shift_perm[X]) for X in self.objects},
        }

    @classmethod
    def from_json(cls, doc: dict) -> "OrbitCategory":
        if doc.get("version") != JSON_VERSION:
            raise ValueError("缓存版本不匹配")
        n, d = doc["n"], doc["d"]
        by_str = {}
        for s in doc["objects"]:
            obj = ObjId.of(parse_summand(s, n))
            by_str[s] = obj
        twists = {}
        for X in by_str.values():
            for Y in by_str.values():
                twists[(X, Y)] = tuple(doc["homs"].get(f"{X}|{Y}", []))
        cat = cls(n, d, twists=twists)
        if [str(X) for X in cat.objects] != doc["objects"]:
            raise ValueError("缓存中的对象表与基本区域不符")
        return cat


def build_category(n: int, d: int) -> OrbitCategory:
    """构造并校验 C_d(A_n)"""
    cat = OrbitCategory(n, d)
    for X in cat.objects:
        for Y in cat.objects:
            cat.twists(X, Y)
    cat.verify()
    return cat
