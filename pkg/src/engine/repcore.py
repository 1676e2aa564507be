"""A_n 型箭图表示：线性定向 n → n−1 → … → 1

所有 Hom / Ext¹ / τ 事实的精确线性代数“真值”，上层的快速规则都要和这里对账。
"""
import logging
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence, Union

from sympy import Matrix, Rational

from . import linalg
from .errors import CompositionError, CyError, InvalidInterval

logger = logging.getLogger(__name__)

# 条形码分解寻找同构见证时的最大尝试次数
MAX_WITNESS_ATTEMPTS = 50


# ============ 区间 ============

@dataclass(frozen=True, order=True)
class Interval:
    """区间模 [a,b]：在顶点 a..b 上维数为 1"""
    a: int
    b: int

    def __str__(self) -> str:
        return f"[{self.a},{self.b}]"

    def contains(self, v: int) -> bool:
        return self.a <= v <= self.b


def interval(a: int, b: int, n: int) -> Interval:
    """构造并校验区间"""
    if not (1 <= a <= b <= n):
        raise InvalidInterval(a, b, n)
    return Interval(a, b)


def projective(i: int) -> Interval:
    return Interval(1, i)


def injective(i: int, n: int) -> Interval:
    return Interval(i, n)


def simple(i: int) -> Interval:
    return Interval(i, i)


def all_intervals(n: int) -> list[Interval]:
    return [Interval(a, b) for a in range(1, n + 1) for b in range(a, n + 1)]


def is_projective(x: Interval) -> bool:
    return x.a == 1


def is_injective(x: Interval, n: int) -> bool:
    return x.b == n


# ============ 表示与模同态 ============

@dataclass(eq=False)
class Rep:
    """箭图表示

    maps[j-1] 是箭头 j+1 → j 上的矩阵，形状 dims[j-1] × dims[j]。
    """
    n: int
    dims: tuple[int, ...]
    maps: tuple[Matrix, ...]
    interval: Optional[Interval] = None

    def __post_init__(self):
        if len(self.dims) != self.n or len(self.maps) != max(self.n - 1, 0):
            raise ValueError("维数向量或箭头个数与 n 不符")
        for j, m in enumerate(self.maps, start=1):
            if m.shape != (self.dims[j - 1], self.dims[j]):
                raise ValueError(f"箭头 {j + 1}→{j} 的矩阵形状 {m.shape} 与维数不符")

    def dim(self, v: int) -> int:
        return self.dims[v - 1]

    def arrow(self, j: int) -> Matrix:
        """箭头 j+1 → j"""
        return self.maps[j - 1]

    def path(self, src: int, tgt: int) -> Matrix:
        """从顶点 src 沿箭头走到 tgt（src ≥ tgt）的复合映射"""
        result = linalg.eye(self.dim(src))
        for j in range(src - 1, tgt - 1, -1):
            result = self.arrow(j) * result
        return result

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def same_as(self, other: "Rep") -> bool:
        return (self.n == other.n and self.dims == other.dims
                and all(x == y for x, y in zip(self.maps, other.maps)))


def zero_rep(n: int) -> Rep:
    return Rep(n, (0,) * n, tuple(linalg.zeros(0, 0) for _ in range(n - 1)))


@lru_cache(maxsize=None)
def interval_rep(a: int, b: int, n: int) -> Rep:
    """区间 [a,b] 对应的表示：区间内维数为 1，箭头为恒等"""
    iv = interval(a, b, n)
    dims = tuple(1 if a <= v <= b else 0 for v in range(1, n + 1))
    maps = []
    for j in range(1, n):
        m = linalg.zeros(dims[j - 1], dims[j])
        if dims[j - 1] and dims[j]:
            m[0, 0] = 1
        maps.append(m)
    return Rep(n, dims, tuple(maps), interval=iv)


def rep_of(x: Interval, n: int) -> Rep:
    return interval_rep(x.a, x.b, n)


def projective_rep(i: int, n: int) -> Rep:
    """P_i，约定 P_0 = 0"""
    return zero_rep(n) if i == 0 else interval_rep(1, i, n)


def direct_sum(reps: Sequence[Rep], n: int) -> Rep:
    """分块直和"""
    dims = tuple(sum(r.dim(v) for r in reps) for v in range(1, n + 1))
    maps = []
    for j in range(1, n):
        m = linalg.zeros(dims[j - 1], dims[j])
        row = col = 0
        for r in reps:
            linalg.place(m, r.arrow(j), row, col)
            row += r.dim(j)
            col += r.dim(j + 1)
        maps.append(m)
    return Rep(n, dims, tuple(maps))


@dataclass(eq=False)
class ModMap:
    """表示间的同态：每个顶点一块矩阵（靶维数 × 源维数）"""
    source: Rep
    target: Rep
    blocks: tuple[Matrix, ...]

    def at(self, v: int) -> Matrix:
        return self.blocks[v - 1]

    def is_zero(self) -> bool:
        return all(linalg.is_zero(b) for b in self.blocks)

    def vector(self) -> Matrix:
        entries = [x for b in self.blocks for x in b]
        return Matrix(len(entries), 1, entries)

    def scale(self, c) -> "ModMap":
        return ModMap(self.source, self.target, tuple(c * b for b in self.blocks))

    def __add__(self, other: "ModMap") -> "ModMap":
        return ModMap(self.source, self.target,
                      tuple(x + y for x, y in zip(self.blocks, other.blocks)))


def zero_map(M: Rep, N: Rep) -> ModMap:
    return ModMap(M, N, tuple(linalg.zeros(N.dim(v), M.dim(v)) for v in range(1, M.n + 1)))


def identity_map(M: Rep) -> ModMap:
    return ModMap(M, M, tuple(linalg.eye(M.dim(v)) for v in range(1, M.n + 1)))


def is_morphism(f: ModMap) -> bool:
    """交织方程是否成立"""
    M, N = f.source, f.target
    for j in range(1, M.n):
        if N.arrow(j) * f.at(j + 1) != f.at(j) * M.arrow(j):
            return False
    return True


def _block_offsets(M: Rep, N: Rep) -> tuple[list[int], int]:
    offsets, total = [], 0
    for v in range(1, M.n + 1):
        offsets.append(total)
        total += N.dim(v) * M.dim(v)
    return offsets, total


def _from_vector(M: Rep, N: Rep, vec: Matrix) -> ModMap:
    offsets, _ = _block_offsets(M, N)
    blocks = []
    for v in range(1, M.n + 1):
        rows, cols = N.dim(v), M.dim(v)
        start = offsets[v - 1]
        blocks.append(Matrix(rows, cols, list(vec[start:start + rows * cols])))
    return ModMap(M, N, tuple(blocks))


def _hom_vectors(M: Rep, N: Rep) -> list[Matrix]:
    """交织方程组的解空间（向量形式）"""
    offsets, total = _block_offsets(M, N)
    equations = []
    for j in range(1, M.n):
        # N.arrow(j) X_{j+1} − X_j M.arrow(j) = 0
        src_cols = M.dim(j + 1)
        for r in range(N.dim(j)):
            for c in range(src_cols):
                row = [0] * total
                for k in range(N.dim(j + 1)):
                    coeff = N.arrow(j)[r, k]
                    if coeff != 0:
                        row[offsets[j] + k * M.dim(j + 1) + c] += coeff
                for k in range(M.dim(j)):
                    coeff = M.arrow(j)[k, c]
                    if coeff != 0:
                        row[offsets[j - 1] + r * M.dim(j) + k] -= coeff
                equations.append(row)
    A = Matrix(equations) if equations else linalg.zeros(0, total)
    if A.cols != total:
        A = linalg.zeros(0, total)
    return linalg.nullspace(A)


def hom_space(M: Rep, N: Rep) -> list[ModMap]:
    """Hom(M, N) 的一组基（rref 解空间，顺序固定）"""
    if M.n != N.n:
        raise CompositionError("两个表示的箭图大小不同")
    return [_from_vector(M, N, v) for v in _hom_vectors(M, N)]


def compose(f: ModMap, g: ModMap) -> ModMap:
    """g ∘ f（先 f 后 g）"""
    if not f.target.same_as(g.source):
        raise CompositionError("f 的靶与 g 的源不一致")
    return ModMap(f.source, g.target, tuple(gb * fb for fb, gb in zip(f.blocks, g.blocks)))


def canonical_map(src: Interval, tgt: Interval, n: int) -> ModMap:
    """区间之间的典范映射：Hom ≠ 0 时在交集上为 1，否则为零映射"""
    M, N = rep_of(src, n), rep_of(tgt, n)
    if not hom_rule(src, tgt):
        return zero_map(M, N)
    blocks = []
    for v in range(1, n + 1):
        b = linalg.zeros(N.dim(v), M.dim(v))
        if M.dim(v) and N.dim(v):
            b[0, 0] = 1
        blocks.append(b)
    return ModMap(M, N, tuple(blocks))


def _projective_canonical(i: int, j: int, n: int) -> ModMap:
    """P_i → P_j 的典范映射，允许下标为 0"""
    if i == 0 or j == 0:
        return zero_map(projective_rep(i, n), projective_rep(j, n))
    return canonical_map(projective(i), projective(j), n)


# ============ 投射分解与提升 ============

def lift_to_resolutions(f: ModMap, src: Interval, tgt: Interval) -> tuple[Rational, Rational]:
    """把 f: src → tgt 提升到典范投射分解 0→P_{a−1}→P_b→[a,b]→0 上

    Returns:
        (λ0, λ1)：P_b → P_b' 与 P_{a−1} → P_{a'−1} 上典范映射的系数
    """
    n = f.source.n
    pi_s = canonical_map(projective(src.b), src, n)
    pi_t = canonical_map(projective(tgt.b), tgt, n)
    can0 = _projective_canonical(src.b, tgt.b, n)
    lhs = compose(can0, pi_t).vector()
    rhs = compose(pi_s, f).vector()
    lam0 = _scalar_solve(lhs, rhs)

    if src.a == 1 or tgt.a == 1:
        if tgt.a == 1 and src.a > 1:
            # ι_t = 0，要求 u0 ∘ ι_s = 0
            iota_s = _projective_canonical(src.a - 1, src.b, n)
            if not compose(iota_s, can0.scale(lam0)).is_zero():
                raise CompositionError("提升在分解的第二项上失败")
        return lam0, Rational(0)

    iota_s = _projective_canonical(src.a - 1, src.b, n)
    iota_t = _projective_canonical(tgt.a - 1, tgt.b, n)
    can1 = _projective_canonical(src.a - 1, tgt.a - 1, n)
    lhs = compose(can1, iota_t).vector()
    rhs = compose(iota_s, can0.scale(lam0)).vector()
    lam1 = _scalar_solve(lhs, rhs)
    return lam0, lam1


def _scalar_solve(lhs: Matrix, rhs: Matrix) -> Rational:
    if linalg.is_zero(rhs):
        return Rational(0)
    x = linalg.solve(lhs, rhs)
    if x is None:
        raise CompositionError("无法把映射提升到投射分解")
    return x[0]


# ============ Ext¹ ============

@dataclass(eq=False)
class Ext1Class:
    """Ext¹(M, N) 中的类

    cocycle 是 N 在顶点 a−1 处的向量，对应 P_{a−1} → N，模去 N_b → N_{a−1} 的像。
    """
    source: Interval
    target: Rep
    cocycle: Matrix

    def image(self) -> Matrix:
        return ext_image(self.source, self.target)

    def is_zero(self) -> bool:
        return linalg.solve(self.image(), self.cocycle) is not None

    def scale(self, c) -> "Ext1Class":
        return Ext1Class(self.source, self.target, c * self.cocycle)


def ext_image(M: Interval, N: Rep) -> Matrix:
    return N.path(M.b, M.a - 1)


def ext1_space(M: Interval, N: Rep) -> list[Ext1Class]:
    """Ext¹(M, N) = coker(Hom(P_b, N) → Hom(P_{a−1}, N)) 的一组基"""
    if M.a == 1:
        return []
    img = ext_image(M, N)
    ambient = linalg.eye(N.dim(M.a - 1))
    return [Ext1Class(M, N, ambient[:, j]) for j in linalg.complement_columns(img, ambient)]


def ext_coordinate(cls: Ext1Class, basis: Ext1Class) -> Rational:
    """cls 在一维空间 Ext¹ 的基 basis 下的坐标"""
    A = basis.cocycle.row_join(cls.image())
    x = linalg.solve(A, cls.cocycle)
    if x is None:
        raise CompositionError("类不在给定基张成的空间中")
    return x[0]


def map_coordinate(f: ModMap, basis: ModMap) -> Rational:
    x = linalg.solve(basis.vector(), f.vector())
    if x is None:
        raise CompositionError("映射不在给定基张成的空间中")
    return x[0]


# ============ Yoneda 复合 ============

Morphism = Union[ModMap, Ext1Class]


def compose_mod(f: Morphism, g: Morphism) -> Optional[Morphism]:
    """Yoneda 复合 g ∘ f（先 f 后 g）

    ModMap∘ModMap 为矩阵乘积；Ext 与 Hom 的复合沿分解推出/拉回；
    Ext∘Ext 落在 Ext² = 0 中，返回 None。
    """
    if isinstance(f, ModMap) and isinstance(g, ModMap):
        return compose(f, g)

    if isinstance(f, Ext1Class) and isinstance(g, ModMap):
        if not f.target.same_as(g.source):
            raise CompositionError("Ext 类的靶与映射的源不一致")
        return Ext1Class(f.source, g.target, g.at(f.source.a - 1) * f.cocycle)

    if isinstance(f, ModMap) and isinstance(g, Ext1Class):
        src = f.source.interval
        if src is None or not f.target.same_as(rep_of(g.source, f.source.n)):
            raise CompositionError("拉回需要区间模之间的映射")
        N = g.target
        if src.a == 1:
            return None
        _, lam1 = lift_to_resolutions(f, src, g.source)
        if lam1 == 0:
            return Ext1Class(src, N, linalg.zeros(N.dim(src.a - 1), 1))
        cocycle = lam1 * N.path(g.source.a - 1, src.a - 1) * g.cocycle
        return Ext1Class(src, N, cocycle)

    return None


# ============ 核、余核与 τ ============

def kernel(f: ModMap) -> tuple[Rep, ModMap]:
    """ker f 作为子表示，连同包含映射"""
    M = f.source
    bases = []
    for v in range(1, M.n + 1):
        bases.append(linalg.columns(linalg.nullspace(f.at(v)), M.dim(v)))
    dims = tuple(B.cols for B in bases)
    maps = []
    for j in range(1, M.n):
        image = M.arrow(j) * bases[j]
        cols = []
        for c in range(image.cols):
            x = linalg.solve(bases[j - 1], image[:, c])
            cols.append(x)
        maps.append(linalg.columns(cols, dims[j - 1]))
    K = Rep(M.n, dims, tuple(maps))
    return K, ModMap(K, M, tuple(bases))


def cokernel(f: ModMap) -> tuple[Rep, ModMap]:
    """coker f 作为商表示，连同商映射"""
    N = f.target
    sections, projections = [], []
    for v in range(1, N.n + 1):
        img = f.at(v)
        _, pivots = linalg.rref(img)
        img_basis = linalg.columns([img[:, p] for p in pivots], N.dim(v))
        ambient = linalg.eye(N.dim(v))
        comp = linalg.columns([ambient[:, j] for j in linalg.complement_columns(img_basis, ambient)],
                              N.dim(v))
        full = img_basis.row_join(comp)
        inv = linalg.inverse(full)
        sections.append(comp)
        projections.append(inv[img_basis.cols:, :])
    dims = tuple(s.cols for s in sections)
    maps = tuple(projections[j - 1] * N.arrow(j) * sections[j] for j in range(1, N.n))
    Q = Rep(N.n, dims, maps)
    return Q, ModMap(N, Q, tuple(projections))


def _single_interval(M: Rep) -> Optional[Interval]:
    bars = barcode(M)
    if not bars:
        return None
    if len(bars) != 1:
        raise CyError(f"期望不可分解表示，得到 {len(bars)} 个区间")
    return bars[0]


@lru_cache(maxsize=None)
def tau(x: Interval, n: int) -> Optional[Interval]:
    """AR 平移：τM = ker(ν P_{a−1} → ν P_b)，投射模返回 None"""
    if x.a == 1:
        return None
    f = canonical_map(injective(x.a - 1, n), injective(x.b, n), n)
    K, _ = kernel(f)
    return _single_interval(K)


@lru_cache(maxsize=None)
def tau_inv(x: Interval, n: int) -> Optional[Interval]:
    """逆 AR 平移：τ⁻¹M = coker(ν⁻¹ I_a → ν⁻¹ I_{b+1})，内射模返回 None"""
    if x.b == n:
        return None
    f = canonical_map(projective(x.a), projective(x.b + 1), n)
    Q, _ = cokernel(f)
    return _single_interval(Q)


# ============ 条形码分解 ============

def _rank_invariant(M: Rep, a: int, b: int) -> int:
    if a < 1 or b > M.n or a > b:
        return 0
    return linalg.rank(M.path(b, a))


def barcode(M: Rep) -> list[Interval]:
    """由秩不变量读出区间重数，结果按 (a, b) 排序"""
    bars = []
    for a in range(1, M.n + 1):
        for b in range(a, M.n + 1):
            mult = (_rank_invariant(M, a, b) - _rank_invariant(M, a - 1, b)
                    - _rank_invariant(M, a, b + 1) + _rank_invariant(M, a - 1, b + 1))
            bars.extend([Interval(a, b)] * mult)
    return bars


def barcode_decompose(M: Rep, seed: int = 0) -> tuple[list[Interval], ModMap, ModMap]:
    """M ≅ ⊕ 区间，返回 (区间列表, φ: ⊕ → M, ψ: M → ⊕)

    φ 取 Hom(⊕, M) 中的一般元素，逐顶点检验可逆。
    """
    bars = barcode(M)
    S = direct_sum([rep_of(x, M.n) for x in bars], M.n)
    vectors = _hom_vectors(S, M)
    rng = random.Random(seed)
    _, total = _block_offsets(S, M)
    for attempt in range(MAX_WITNESS_ATTEMPTS):
        phi = _from_vector(S, M, linalg.generic_combination(vectors, rng, total))
        if all(linalg.is_invertible(b) for b in phi.blocks):
            psi = ModMap(M, S, tuple(linalg.inverse(b) for b in phi.blocks))
            return bars, phi, psi
        logger.debug("条形码见证第 %d 次尝试不可逆", attempt + 1)
    raise CyError("找不到条形码分解的同构见证")


# ============ 快速组合规则（需对账） ============

def hom_rule(x: Interval, y: Interval) -> bool:
    """Hom([a,b],[c,e]) ≠ 0 当且仅当 a ≤ c ≤ b ≤ e"""
    return x.a <= y.a <= x.b <= y.b


def ext_rule(x: Interval, y: Interval) -> bool:
    """Ext¹([a,b],[c,e]) ≠ 0 当且仅当 c < a ≤ e+1 ≤ b"""
    return y.a < x.a <= y.b + 1 <= x.b


def hom_dim(x: Interval, y: Interval, n: int) -> int:
    return len(hom_space(rep_of(x, n), rep_of(y, n)))


def ext1_dim(x: Interval, y: Interval, n: int) -> int:
    return len(ext1_space(x, rep_of(y, n)))


@lru_cache(maxsize=None)
def verify_fast_rules(n: int) -> tuple[tuple[str, Interval, Interval], ...]:
    """把组合规则与线性代数结果逐对核对，返回不一致的 (种类, X, Y)"""
    mismatches = []
    for x in all_intervals(n):
        for y in all_intervals(n):
            if hom_dim(x, y, n) != int(hom_rule(x, y)):
                mismatches.append(("hom", x, y))
            if ext1_dim(x, y, n) != int(ext_rule(x, y)):
                mismatches.append(("ext", x, y))
    logger.debug("n=%d 快速规则核对完成，不一致 %d 处", n, len(mismatches))
    return tuple(mismatches)


def ar_duality_mismatches(n: int) -> list[tuple[Interval, Interval]]:
    """dim Ext¹(X,Y) = dim Hom(Y, τX) 不成立的 (X, Y)"""
    bad = []
    for x in all_intervals(n):
        tx = tau(x, n)
        if tx is None:
            continue
        for y in all_intervals(n):
            if ext1_dim(x, y, n) != hom_dim(y, tx, n):
                bad.append((x, y))
    return bad
