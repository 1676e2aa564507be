"""有界导出范畴 D^b(kA_n)

对象是平移区间模的多重集；两个平移区间之间的 Hom 至多一维，
每个非零块取一个固定基（repcore 的 rref 解），态射记为这些基上的系数，
复合用预先算好的结构常数。映射锥与 F 在态射上的作用走投射复形实现。
"""
import logging
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Union

from sympy import Matrix, Rational

from . import linalg
from .complexes import (ChainHom, ChainMap, ProjComplex, SummandLayout, apply_F, apply_F_map,
                        compose_chain, cone, find_iso, normal_form, standard_complex)
from .errors import CompositionError, CyError
from .repcore import (Ext1Class, Interval, ModMap, canonical_map, compose, compose_mod, ext1_space,
                      ext_coordinate, ext_rule, hom_rule, hom_space, identity_map, injective,
                      lift_to_resolutions, map_coordinate, projective, rep_of, tau, tau_inv)

logger = logging.getLogger(__name__)


# ============ 对象 ============

@dataclass(frozen=True, order=True)
class Summand:
    """平移区间模 M[s]；排序键为 (平移, a, b)"""
    shift: int
    interval: Interval

    @property
    def a(self) -> int:
        return self.interval.a

    @property
    def b(self) -> int:
        return self.interval.b

    def shifted(self, k: int) -> "Summand":
        return Summand(self.shift + k, self.interval)

    def __str__(self) -> str:
        return f"M[{self.a},{self.b}]@{self.shift}"


def summand(a: int, b: int, shift: int = 0) -> Summand:
    return Summand(shift, Interval(a, b))


@dataclass(frozen=True)
class DObject:
    """导出范畴中的对象，summands 保持正规序"""
    summands: tuple[Summand, ...] = ()

    @classmethod
    def of(cls, items: Iterable[Summand]) -> "DObject":
        return cls(tuple(sorted(items)))

    def __len__(self) -> int:
        return len(self.summands)

    def __iter__(self):
        return iter(self.summands)

    def __getitem__(self, i: int) -> Summand:
        return self.summands[i]

    def __add__(self, other: "DObject") -> "DObject":
        return DObject.of(self.summands + other.summands)

    def is_zero(self) -> bool:
        return not self.summands

    def __str__(self) -> str:
        return " ⊕ ".join(str(s) for s in self.summands) or "0"


ZERO = DObject()

Block = Union[ModMap, Ext1Class]


@dataclass(eq=False)
class DMorphism:
    """X → Y 的态射：coeffs[(j, i)] 是 X_i → Y_j 块在固定基下的系数"""
    source: DObject
    target: DObject
    coeffs: dict[tuple[int, int], Rational] = field(default_factory=dict)

    def coeff(self, j: int, i: int) -> Rational:
        return self.coeffs.get((j, i), Rational(0))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs.values())

    def scale(self, c) -> "DMorphism":
        return DMorphism(self.source, self.target, {k: c * v for k, v in self.coeffs.items()})

    def __add__(self, other: "DMorphism") -> "DMorphism":
        coeffs = dict(self.coeffs)
        for k, v in other.coeffs.items():
            coeffs[k] = coeffs.get(k, Rational(0)) + v
        return DMorphism(self.source, self.target, coeffs)

    def nonzero(self) -> list[tuple[int, int]]:
        return sorted(k for k, v in self.coeffs.items() if v != 0)


@dataclass(eq=False)
class Triangle:
    """X --f--> Y --g--> Z --h--> X[1]"""
    X: DObject
    Y: DObject
    Z: DObject
    f: DMorphism
    g: DMorphism
    h: DMorphism


# ============ 导出范畴 ============

def block_kind(x: Summand, y: Summand) -> Optional[str]:
    """x → y 的块类型：'hom'（同平移）、'ext'（平移差 1）或 None"""
    if y.shift == x.shift and hom_rule(x.interval, y.interval):
        return "hom"
    if y.shift == x.shift + 1 and ext_rule(x.interval, y.interval):
        return "ext"
    return None


def shift_D(X: DObject, k: int) -> DObject:
    return DObject(tuple(s.shifted(k) for s in X))


class Derived:
    """D^b(kA_n) 的计算上下文，缓存基、结构常数与复形实现"""

    def __init__(self, n: int, seed: int = 0):
        self.n = n
        self.seed = seed
        self._basis: dict[tuple[Interval, Interval, str], Optional[Block]] = {}
        self._constants: dict[tuple[Summand, Summand, Summand], Rational] = {}
        self._identity: dict[Interval, Rational] = {}
        self._realized: dict[DObject, tuple[ProjComplex, list[SummandLayout]]] = {}
        self._comparison: dict[tuple[Summand, int], tuple[ChainMap, ChainMap]] = {}
        self._F_constants: dict[tuple[Summand, Summand, int], Rational] = {}

    # ---------- 块基与结构常数 ----------

    def block_basis(self, x: Summand, y: Summand) -> Optional[Block]:
        kind = block_kind(x, y)
        if kind is None:
            return None
        key = (x.interval, y.interval, kind)
        if key not in self._basis:
            if kind == "hom":
                basis = hom_space(rep_of(x.interval, self.n), rep_of(y.interval, self.n))
            else:
                basis = ext1_space(x.interval, rep_of(y.interval, self.n))
            if len(basis) != 1:
                raise CyError(f"{x} → {y} 的块维数为 {len(basis)}，与组合规则不符")
            self._basis[key] = basis[0]
        return self._basis[key]

    def block_dim(self, x: Summand, y: Summand) -> int:
        return 0 if block_kind(x, y) is None else 1

    def _coordinate(self, value: Optional[Block], basis: Optional[Block]) -> Rational:
        if value is None:
            return Rational(0)
        if isinstance(value, ModMap):
            if value.is_zero():
                return Rational(0)
            if basis is None:
                raise CompositionError("非零复合落在零空间")
            return map_coordinate(value, basis)
        if value.is_zero():
            return Rational(0)
        if basis is None:
            raise CompositionError("非零 Ext 类落在零空间")
        return ext_coordinate(value, basis)

    def structure_constant(self, x: Summand, y: Summand, z: Summand) -> Rational:
        """basis(y→z) ∘ basis(x→y) = κ · basis(x→z)"""
        key = (x, y, z)
        if key not in self._constants:
            f, g = self.block_basis(x, y), self.block_basis(y, z)
            if f is None or g is None:
                value = Rational(0)
            else:
                value = self._coordinate(compose_mod(f, g), self.block_basis(x, z))
            self._constants[key] = value
        return self._constants[key]

    def identity_coeff(self, x: Summand) -> Rational:
        if x.interval not in self._identity:
            basis = self.block_basis(x, x)
            ident = identity_map(rep_of(x.interval, self.n))
            self._identity[x.interval] = map_coordinate(ident, basis)
        return self._identity[x.interval]

    # ---------- 态射 ----------

    def identity(self, X: DObject) -> DMorphism:
        return DMorphism(X, X, {(i, i): self.identity_coeff(x) for i, x in enumerate(X)})

    def zero(self, X: DObject, Y: DObject) -> DMorphism:
        return DMorphism(X, Y, {})

    def hom(self, X: DObject, Y: DObject) -> list[DMorphism]:
        """Hom_D(X, Y) 的基：每个非零块一个初等态射，按 (源, 靶) 下标排序"""
        basis = []
        for i, x in enumerate(X):
            for j, y in enumerate(Y):
                if self.block_dim(x, y):
                    basis.append(DMorphism(X, Y, {(j, i): Rational(1)}))
        return basis

    def hom_dim(self, X: DObject, Y: DObject) -> int:
        return sum(self.block_dim(x, y) for x in X for y in Y)

    def hom_graded(self, X: DObject, Y: DObject, degrees: Iterable[int]) -> dict[int, list[DMorphism]]:
        """各度数 k 上 Hom(X, Y[k]) 的基"""
        return {k: self.hom(X, shift_D(Y, k)) for k in degrees}

    def compose_D(self, f: DMorphism, g: DMorphism) -> DMorphism:
        """g ∘ f；总次数为 2 的乘积自动为零"""
        if f.target != g.source:
            raise CompositionError(f"不可复合：{f.target} 与 {g.source}")
        X, Y, Z = f.source, f.target, g.target
        coeffs: dict[tuple[int, int], Rational] = {}
        for (j, i), a in f.coeffs.items():
            if a == 0:
                continue
            for (k, jj), b in g.coeffs.items():
                if jj != j or b == 0:
                    continue
                kappa = self.structure_constant(X[i], Y[j], Z[k])
                if kappa != 0:
                    coeffs[(k, i)] = coeffs.get((k, i), Rational(0)) + a * b * kappa
        return DMorphism(X, Z, {k: v for k, v in coeffs.items() if v != 0})

    def block(self, f: DMorphism, j: int, i: int) -> Optional[Block]:
        """f 的 (j, i) 块，作为 ModMap 或 Ext1Class"""
        basis = self.block_basis(f.source[i], f.target[j])
        if basis is None:
            return None
        return basis.scale(f.coeff(j, i))

    def shift_morphism(self, f: DMorphism, k: int) -> DMorphism:
        return DMorphism(shift_D(f.source, k), shift_D(f.target, k), dict(f.coeffs))

    # ---------- τ 与 F ----------

    def tau_summand(self, x: Summand) -> Summand:
        """τ(P_i[p]) = I_i[p−1]，其余用 repcore 的 τ"""
        if x.a == 1:
            return Summand(x.shift - 1, injective(x.b, self.n))
        return Summand(x.shift, tau(x.interval, self.n))

    def tau_inv_summand(self, x: Summand) -> Summand:
        """τ⁻¹(I_i[p]) = P_i[p+1]"""
        if x.b == self.n:
            return Summand(x.shift + 1, projective(x.a))
        return Summand(x.shift, tau_inv(x.interval, self.n))

    def tau_D(self, X: DObject) -> DObject:
        return DObject.of(self.tau_summand(x) for x in X)

    def tau_inv_D(self, X: DObject) -> DObject:
        return DObject.of(self.tau_inv_summand(x) for x in X)

    def F_summand(self, x: Summand, d: int, power: int = 1) -> Summand:
        """F^power(x)，F = τ⁻¹[d−1]"""
        for _ in range(power):
            x = self.tau_inv_summand(x).shifted(d - 1)
        for _ in range(-power):
            x = self.tau_summand(x.shifted(1 - d))
        return x

    def F_object(self, X: DObject, d: int, power: int = 1) -> DObject:
        return DObject.of(self.F_summand(x, d, power) for x in X)

    # ---------- 复形实现 ----------

    def realize(self, X: DObject) -> tuple[ProjComplex, list[SummandLayout]]:
        if X not in self._realized:
            self._realized[X] = standard_complex([(x.interval, x.shift) for x in X], self.n)
        return self._realized[X]

    def _block_entries(self, x: Summand, y: Summand, lx: SummandLayout, ly: SummandLayout):
        """固定基块 x → y 对应链映射的非零分量 (度数, 行, 列, 值)"""
        kind = block_kind(x, y)
        basis = self.block_basis(x, y)
        if kind == "hom":
            lam0, lam1 = lift_to_resolutions(basis, x.interval, y.interval)
            entries = [(lx.top_deg, ly.top_pos, lx.top_pos, lam0)]
            if lx.low_pos is not None and ly.low_pos is not None:
                entries.append((lx.top_deg - 1, ly.low_pos, lx.low_pos, lam1))
            return entries
        if kind == "ext":
            mu = self._ext_lift(basis)
            return [(lx.top_deg - 1, ly.top_pos, lx.low_pos, mu)]
        return []

    def _ext_lift(self, cls: Ext1Class) -> Rational:
        """把上闭链 P_{a−1} → N 提升成 P_{a−1} → P_{b'} 的典范映射倍数"""
        n = self.n
        src, N = cls.source, cls.target
        tgt = N.interval
        P = rep_of(projective(src.a - 1), n)
        blocks = []
        for v in range(1, n + 1):
            if v <= src.a - 1:
                blocks.append(N.path(src.a - 1, v) * cls.cocycle)
            else:
                blocks.append(linalg.zeros(N.dim(v), 0))
        cocycle_map = ModMap(P, N, tuple(blocks))
        can = canonical_map(projective(src.a - 1), projective(tgt.b), n)
        pi = canonical_map(projective(tgt.b), tgt, n)
        lhs = compose(can, pi).vector()
        x = linalg.solve(lhs, cocycle_map.vector())
        if x is None:
            raise CompositionError("Ext 类无法提升到投射分解")
        return x[0]

    def realize_morphism(self, f: DMorphism) -> ChainMap:
        K, lk = self.realize(f.source)
        L, ll = self.realize(f.target)
        comps: dict[int, Matrix] = {}
        for (j, i), c in f.coeffs.items():
            if c == 0:
                continue
            for deg, row, col, val in self._block_entries(f.source[i], f.target[j], lk[i], ll[j]):
                if deg not in comps:
                    comps[deg] = linalg.zeros(len(L.term(deg)), len(K.term(deg)))
                comps[deg][row, col] += c * val
        return ChainMap(K, L, comps)

    def from_chain(self, chain: ChainMap, X: DObject, Y: DObject) -> DMorphism:
        """链映射模同伦后读回块系数"""
        _, lk = self.realize(X)
        _, ll = self.realize(Y)
        coeffs = {}
        for i, x in enumerate(X):
            for j, y in enumerate(Y):
                if not self.block_dim(x, y):
                    continue
                sx, sy = DObject((x,)), DObject((y,))
                Kx, _ = self.realize(sx)
                Ky, _ = self.realize(sy)
                sub = {}
                for k in Kx.degrees():
                    rows = self._positions(ll[j], k)
                    cols = self._positions(lk[i], k)
                    if rows and cols:
                        sub[k] = chain.comp(k).extract(rows, cols)
                piece = ChainMap(Kx, Ky, sub)
                basis = self.realize_morphism(DMorphism(sx, sy, {(0, 0): Rational(1)}))
                coeff = ChainHom(Kx, Ky).coordinates(piece, [basis])[0]
                if coeff != 0:
                    coeffs[(j, i)] = coeff
        return DMorphism(X, Y, coeffs)

    @staticmethod
    def _positions(layout: SummandLayout, degree: int) -> list[int]:
        if degree == layout.top_deg:
            return [layout.top_pos]
        if degree == layout.top_deg - 1 and layout.low_pos is not None:
            return [layout.low_pos]
        return []

    # ---------- 映射锥 ----------

    def cone_object(self, f: DMorphism) -> DObject:
        """只求锥对象（不求结构映射）"""
        C, _, _ = cone(self.realize_morphism(f))
        return DObject.of(Summand(s, x) for x, s in normal_form(C))

    def cone_D(self, f: DMorphism) -> Triangle:
        """X → Y → Z → X[1]，Z 为锥复形上同调的正规形"""
        fc = self.realize_morphism(f)
        C, inc, proj = cone(fc)
        Z = DObject.of(Summand(s, x) for x, s in normal_form(C))
        KZ, _ = self.realize(Z)
        phi, psi = find_iso(KZ, C, self.seed)
        g = self.from_chain(compose_chain(inc, psi), f.target, Z)
        h = self.from_chain(compose_chain(phi, proj), Z, shift_D(f.source, 1))
        logger.debug("cone(%s → %s) = %s", f.source, f.target, Z)
        return Triangle(f.source, f.target, Z, f, g, h)

    # ---------- F 在态射上的作用 ----------

    def _comparison_iso(self, x: Summand, d: int) -> tuple[ChainMap, ChainMap]:
        """F(std x) ≅ std(F x) 的同构及其逆，按 x 固定"""
        key = (x, d)
        if key not in self._comparison:
            Kx, _ = self.realize(DObject((x,)))
            target, _ = self.realize(DObject((self.F_summand(x, d),)))
            self._comparison[key] = find_iso(apply_F(Kx, d), target, self.seed)
        return self._comparison[key]

    def F_constant(self, x: Summand, y: Summand, d: int) -> Rational:
        """F(basis(x→y)) = κ · basis(Fx→Fy)"""
        key = (x, y, d)
        if key not in self._F_constants:
            if not self.block_dim(x, y):
                self._F_constants[key] = Rational(0)
                return self._F_constants[key]
            sx, sy = DObject((x,)), DObject((y,))
            b = self.realize_morphism(DMorphism(sx, sy, {(0, 0): Rational(1)}))
            FK, FL = apply_F(b.source, d), apply_F(b.target, d)
            Fb = apply_F_map(b, FK, FL, d)
            cx, cx_inv = self._comparison_iso(x, d)
            cy, _ = self._comparison_iso(y, d)
            conj = compose_chain(compose_chain(cx_inv, Fb), cy)
            fx, fy = DObject((self.F_summand(x, d),)), DObject((self.F_summand(y, d),))
            basis = self.realize_morphism(DMorphism(fx, fy, {(0, 0): Rational(1)}))
            Kfx, _ = self.realize(fx)
            Kfy, _ = self.realize(fy)
            kappa = ChainHom(Kfx, Kfy).coordinates(conj, [basis])[0]
            if kappa == 0:
                raise CyError(f"F 把非零态射 {x} → {y} 送成零")
            self._F_constants[key] = kappa
        return self._F_constants[key]

    def F_apply(self, f: DMorphism, d: int, power: int = 1) -> DMorphism:
        """F^power 作用在态射上，结构常数由链层实现给出"""
        for _ in range(power):
            f = self._F_once(f, d, inverse=False)
        for _ in range(-power):
            f = self._F_once(f, d, inverse=True)
        return f

    def _F_once(self, f: DMorphism, d: int, inverse: bool) -> DMorphism:
        p = -1 if inverse else 1
        X, Y = f.source, f.target
        fx = [self.F_summand(x, d, p) for x in X]
        fy = [self.F_summand(y, d, p) for y in Y]
        FX, FY = DObject.of(fx), DObject.of(fy)
        src_pos = positions_in(FX, fx)
        tgt_pos = positions_in(FY, fy)
        coeffs = {}
        for (j, i), c in f.coeffs.items():
            if c == 0:
                continue
            if inverse:
                kappa = 1 / self.F_constant(fx[i], fy[j], d)
            else:
                kappa = self.F_constant(X[i], Y[j], d)
            coeffs[(tgt_pos[j], src_pos[i])] = c * kappa
        return DMorphism(FX, FY, coeffs)


def positions_in(obj: DObject, items: Sequence[Summand]) -> list[int]:
    """items 中每一项在正规序对象 obj 中的位置（重复项依次占位）"""
    used: dict[Summand, int] = {}
    out = []
    for s in items:
        start = used.get(s, 0)
        idx = obj.summands.index(s, start)
        used[s] = idx + 1
        out.append(idx)
    return out


# ============ 全局实例 ============

_instances: dict[int, Derived] = {}


def get_derived(n: int) -> Derived:
    """按 n 取共享的计算上下文"""
    if n not in _instances:
        from ..utils.config import get_seed
        _instances[n] = Derived(n, seed=get_seed())
    return _instances[n]


def hom_graded(X: DObject, Y: DObject, n: int, degrees: Iterable[int] = range(-2, 3)) -> dict[int, list[DMorphism]]:
    return get_derived(n).hom_graded(X, Y, degrees)


def compose_D(f: DMorphism, g: DMorphism, n: int) -> DMorphism:
    return get_derived(n).compose_D(f, g)


def cone_D(f: DMorphism, n: int) -> Triangle:
    return get_derived(n).cone_D(f)


def tau_D(X: DObject, n: int) -> DObject:
    return get_derived(n).tau_D(X)


def F_apply(value: Union[DObject, DMorphism], d: int, n: int, power: int = 1):
    """F = τ⁻¹[d−1] 作用在对象或态射上"""
    if d < 2:
        raise ValueError("d 必须 ≥ 2")
    D = get_derived(n)
    if isinstance(value, DObject):
        return D.F_object(value, d, power)
    return D.F_apply(value, d, power)
