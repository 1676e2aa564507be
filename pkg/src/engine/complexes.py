"""K^b(proj kA_n) 中的投射复形与链映射

P_i → P_j 的非零映射只有典范映射（i ≤ j）的倍数，
所以复形的微分与链映射都记为标量矩阵，(t, s) 位置只在 index(s) ≤ index(t) 时允许非零。
"""
import logging
import random
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from sympy import Matrix

from . import linalg
from .errors import CompositionError, CyError
from .repcore import Interval

logger = logging.getLogger(__name__)

MAX_ISO_ATTEMPTS = 50


def sign(p: int) -> int:
    return 1 if p % 2 == 0 else -1


@dataclass(eq=False)
class ProjComplex:
    """有界投射复形：terms[k] 是第 k 度各直和项 P_i 的下标"""
    n: int
    terms: dict[int, tuple[int, ...]]
    diffs: dict[int, Matrix]

    def term(self, k: int) -> tuple[int, ...]:
        return self.terms.get(k, ())

    def diff(self, k: int) -> Matrix:
        """d^k: K^k → K^{k+1}"""
        if k in self.diffs:
            return self.diffs[k]
        return linalg.zeros(len(self.term(k + 1)), len(self.term(k)))

    def degrees(self) -> list[int]:
        return sorted(k for k, t in self.terms.items() if t)

    def shift(self, p: int) -> "ProjComplex":
        """K[p]^k = K^{k+p}，微分乘 (−1)^p"""
        terms = {k - p: t for k, t in self.terms.items()}
        diffs = {k - p: sign(p) * m for k, m in self.diffs.items()}
        return ProjComplex(self.n, terms, diffs)

    def is_complex(self) -> bool:
        for k in self.degrees():
            if not linalg.is_zero(self.diff(k + 1) * self.diff(k)):
                return False
        return True


@dataclass(eq=False)
class ChainMap:
    source: ProjComplex
    target: ProjComplex
    comps: dict[int, Matrix]

    def comp(self, k: int) -> Matrix:
        if k in self.comps:
            return self.comps[k]
        return linalg.zeros(len(self.target.term(k)), len(self.source.term(k)))

    def is_chain_map(self) -> bool:
        K, L = self.source, self.target
        for k in set(K.degrees()) | set(L.degrees()):
            if L.diff(k) * self.comp(k) != self.comp(k + 1) * K.diff(k):
                return False
        return True


def zero_chain(K: ProjComplex, L: ProjComplex) -> ChainMap:
    return ChainMap(K, L, {})


def identity_chain(K: ProjComplex) -> ChainMap:
    return ChainMap(K, K, {k: linalg.eye(len(K.term(k))) for k in K.degrees()})


def compose_chain(f: ChainMap, g: ChainMap) -> ChainMap:
    """g ∘ f"""
    if f.target.terms != g.source.terms:
        raise CompositionError("链映射不可复合")
    degrees = set(f.source.degrees()) & set(g.target.degrees())
    return ChainMap(f.source, g.target, {k: g.comp(k) * f.comp(k) for k in degrees})


def add_chain(f: ChainMap, g: ChainMap, scale=1) -> ChainMap:
    degrees = set(f.comps) | set(g.comps)
    return ChainMap(f.source, f.target, {k: f.comp(k) + scale * g.comp(k) for k in degrees})


# ============ 标准复形 ============

@dataclass(frozen=True)
class SummandLayout:
    """直和项 M[p] 在标准复形中的位置：P_b 在 -p 度，P_{a−1} 在 -p−1 度"""
    top_deg: int
    top_pos: int
    low_pos: Optional[int]


def standard_complex(summands: Sequence[tuple[Interval, int]], n: int) -> tuple[ProjComplex, list[SummandLayout]]:
    """⊕ M[p] 的标准投射复形 P_{a−1} → P_b，微分 (−1)^p"""
    terms: dict[int, list[int]] = defaultdict(list)
    layout = []
    for x, p in summands:
        top = -p
        top_pos = len(terms[top])
        terms[top].append(x.b)
        low_pos = None
        if x.a > 1:
            low_pos = len(terms[top - 1])
            terms[top - 1].append(x.a - 1)
        layout.append(SummandLayout(top, top_pos, low_pos))

    diffs = {}
    for (x, p), lay in zip(summands, layout):
        if lay.low_pos is None:
            continue
        k = lay.top_deg - 1
        if k not in diffs:
            diffs[k] = linalg.zeros(len(terms[k + 1]), len(terms[k]))
        diffs[k][lay.top_pos, lay.low_pos] = sign(p)
    complex_ = ProjComplex(n, {k: tuple(v) for k, v in terms.items() if v}, diffs)
    return complex_, layout


# ============ 分次映射空间 ============

class GradedSlots:
    """K → L 的 degree 次分次映射中允许非零的位置 (k, t, s)"""

    def __init__(self, K: ProjComplex, L: ProjComplex, degree: int = 0):
        self.K, self.L, self.degree = K, L, degree
        self.slots: list[tuple[int, int, int]] = []
        self.index: dict[tuple[int, int, int], int] = {}
        for k in K.degrees():
            src, tgt = K.term(k), L.term(k + degree)
            for t, j in enumerate(tgt):
                for s, i in enumerate(src):
                    if i <= j:
                        self.index[(k, t, s)] = len(self.slots)
                        self.slots.append((k, t, s))

    def __len__(self) -> int:
        return len(self.slots)

    def to_vector(self, comps: dict[int, Matrix]) -> Matrix:
        vec = linalg.zeros(len(self.slots), 1)
        for idx, (k, t, s) in enumerate(self.slots):
            if k in comps:
                vec[idx] = comps[k][t, s]
        return vec

    def to_comps(self, vec: Matrix) -> dict[int, Matrix]:
        comps: dict[int, Matrix] = {}
        for idx, (k, t, s) in enumerate(self.slots):
            if k not in comps:
                comps[k] = linalg.zeros(len(self.L.term(k + self.degree)), len(self.K.term(k)))
            comps[k][t, s] = vec[idx]
        return comps


def _chain_condition(K: ProjComplex, L: ProjComplex, slots: GradedSlots) -> Matrix:
    """d_L f − f d_K = 0 关于 f 的系数矩阵"""
    rows = []
    degrees = sorted(set(K.degrees()) | {k - 1 for k in K.degrees()})
    for k in degrees:
        dK, dL = K.diff(k), L.diff(k)
        for tp in range(len(L.term(k + 1))):
            for s in range(len(K.term(k))):
                row = [0] * len(slots)
                for t in range(len(L.term(k))):
                    idx = slots.index.get((k, t, s))
                    if idx is not None and dL[tp, t] != 0:
                        row[idx] += dL[tp, t]
                for sp in range(len(K.term(k + 1))):
                    idx = slots.index.get((k + 1, tp, sp))
                    if idx is not None and dK[sp, s] != 0:
                        row[idx] -= dK[sp, s]
                if any(row):
                    rows.append(row)
    if not rows:
        return linalg.zeros(0, len(slots))
    return Matrix(rows)


def _homotopy_image(K: ProjComplex, L: ProjComplex, slots: GradedSlots) -> Matrix:
    """所有 d h + h d 张成的子空间（列向量）"""
    hslots = GradedSlots(K, L, -1)
    cols = []
    for (k, t, s) in hslots.slots:
        # h^k[t, s]: K^k[s] → L^{k−1}[t]
        vec = linalg.zeros(len(slots), 1)
        dL = L.diff(k - 1)
        for tp in range(len(L.term(k))):
            idx = slots.index.get((k, tp, s))
            if idx is not None and dL[tp, t] != 0:
                vec[idx] += dL[tp, t]
        dK = K.diff(k - 1)
        for sp in range(len(K.term(k - 1))):
            idx = slots.index.get((k - 1, t, sp))
            if idx is not None and dK[s, sp] != 0:
                vec[idx] += dK[s, sp]
        cols.append(vec)
    return linalg.columns(cols, len(slots))


class ChainHom:
    """Hom_K(K, L)：链映射空间模同伦"""

    def __init__(self, K: ProjComplex, L: ProjComplex):
        self.K, self.L = K, L
        self.slots = GradedSlots(K, L, 0)
        self.cycles = linalg.nullspace(_chain_condition(K, L, self.slots))
        self.boundaries = _homotopy_image(K, L, self.slots)
        picked = linalg.complement_columns(self.boundaries, linalg.columns(self.cycles, len(self.slots)))
        self.basis_vectors = [self.cycles[j] for j in picked]

    @property
    def dim(self) -> int:
        return len(self.basis_vectors)

    def chain(self, vec: Matrix) -> ChainMap:
        return ChainMap(self.K, self.L, self.slots.to_comps(vec))

    def basis(self) -> list[ChainMap]:
        return [self.chain(v) for v in self.basis_vectors]

    def vector(self, f: ChainMap) -> Matrix:
        return self.slots.to_vector(f.comps)

    def coordinates(self, f: ChainMap, basis: Optional[Sequence[ChainMap]] = None) -> list:
        """f 模同伦在给定基（默认自身基）下的坐标"""
        vectors = self.basis_vectors if basis is None else [self.vector(b) for b in basis]
        A = linalg.columns(vectors, len(self.slots)).row_join(self.boundaries)
        x = linalg.solve(A, self.vector(f))
        if x is None:
            raise CyError("链映射不在给定基张成的空间中（模同伦）")
        return list(x[:len(vectors)])

    def is_null_homotopic(self, f: ChainMap) -> bool:
        return linalg.solve(self.boundaries, self.vector(f)) is not None


# ============ 映射锥与上同调 ============

def cone(f: ChainMap) -> tuple[ProjComplex, ChainMap, ChainMap]:
    """Cone^k = K^{k+1} ⊕ L^k，d = [[−d_K, 0], [f, d_L]]

    Returns:
        (锥, 包含 L → Cone, 投影 Cone → K[1])
    """
    K, L = f.source, f.target
    n = K.n
    degrees = sorted({k - 1 for k in K.degrees()} | set(L.degrees()))
    terms, diffs = {}, {}
    for k in degrees:
        terms[k] = K.term(k + 1) + L.term(k)
    for k in degrees:
        nk1, nl = len(K.term(k + 1)), len(L.term(k))
        nk2, nl1 = len(K.term(k + 2)), len(L.term(k + 1))
        D = linalg.zeros(nk2 + nl1, nk1 + nl)
        linalg.place(D, -K.diff(k + 1), 0, 0)
        linalg.place(D, f.comp(k + 1), nk2, 0)
        linalg.place(D, L.diff(k), nk2, nk1)
        diffs[k] = D
    C = ProjComplex(n, {k: t for k, t in terms.items() if t}, diffs)

    inc, proj = {}, {}
    for k in L.degrees():
        m = linalg.zeros(len(C.term(k)), len(L.term(k)))
        linalg.place(m, linalg.eye(len(L.term(k))), len(K.term(k + 1)), 0)
        inc[k] = m
    shifted = K.shift(1)
    for k in shifted.degrees():
        m = linalg.zeros(len(K.term(k + 1)), len(C.term(k)))
        linalg.place(m, linalg.eye(len(K.term(k + 1))), 0, 0)
        proj[k] = m
    return C, ChainMap(L, C, inc), ChainMap(C, shifted, proj)


def _restricted(M: Matrix, rows: list[int], cols: list[int]) -> Matrix:
    if not rows or not cols:
        return linalg.zeros(len(rows), len(cols))
    return M.extract(rows, cols)


def cohomology_intervals(K: ProjComplex, k: int) -> list[Interval]:
    """H^k(K) 的条形码

    顶点 v 处 P_i(v) ≠ 0 当且仅当 v ≤ i，箭头 v+1 → v 是坐标包含，
    于是 H^k 的秩不变量可以直接由子复形算出。
    """
    n = K.n
    src, tgt, prev = K.term(k), K.term(k + 1), K.term(k - 1)
    d_out, d_in = K.diff(k), K.diff(k - 1)

    cycles, bounds, coords = {}, {}, {}
    for v in range(1, n + 1):
        S = [s for s, i in enumerate(src) if i >= v]
        T = [t for t, j in enumerate(tgt) if j >= v]
        U = [u for u, i in enumerate(prev) if i >= v]
        coords[v] = S
        cycles[v] = linalg.columns(linalg.nullspace(_restricted(d_out, T, S)), len(S))
        bounds[v] = _restricted(d_in, S, U)

    def rank_inv(a: int, b: int) -> int:
        if a < 1 or b > n or a > b:
            return 0
        pos = {s: r for r, s in enumerate(coords[a])}
        emb = linalg.zeros(len(coords[a]), cycles[b].cols)
        for r, s in enumerate(coords[b]):
            for c in range(cycles[b].cols):
                emb[pos[s], c] = cycles[b][r, c]
        B = bounds[a]
        return linalg.rank(emb.row_join(B)) - linalg.rank(B)

    bars = []
    for a in range(1, n + 1):
        for b in range(a, n + 1):
            mult = rank_inv(a, b) - rank_inv(a - 1, b) - rank_inv(a, b + 1) + rank_inv(a - 1, b + 1)
            bars.extend([Interval(a, b)] * mult)
    return bars


def normal_form(K: ProjComplex) -> list[tuple[Interval, int]]:
    """K ≅ ⊕_k H^k(K)[−k]，按 (平移, a, b) 排序"""
    out = []
    degrees = sorted({k for d in K.degrees() for k in (d - 1, d)})
    for k in degrees:
        out.extend((x, -k) for x in cohomology_intervals(K, k))
    return sorted(out, key=lambda item: (item[1], item[0].a, item[0].b))


# ============ 同构的求取 ============

def find_iso(A: ProjComplex, B: ProjComplex, seed: int = 0) -> tuple[ChainMap, ChainMap]:
    """在 K^b(proj) 中求同伦等价 φ: A → B 及其逆 ψ

    φ 取链映射空间中的一般元素，ψ 与同伦一起由线性方程组解出。
    """
    rng = random.Random(seed)
    forward = ChainHom(A, B)
    backward = ChainHom(B, A)
    endo = ChainHom(A, A)
    ident = endo.vector(identity_chain(A))
    for attempt in range(MAX_ISO_ATTEMPTS):
        phi = forward.chain(linalg.generic_combination(forward.cycles, rng, len(forward.slots)))
        cols = [endo.vector(compose_chain(phi, backward.chain(z))) for z in backward.cycles]
        M = linalg.columns(cols, len(endo.slots)).row_join(endo.boundaries)
        x = linalg.solve(M, ident)
        if x is not None:
            psi_vec = linalg.zeros(len(backward.slots), 1)
            for c, z in zip(x[:len(cols)], backward.cycles):
                psi_vec += c * z
            return phi, backward.chain(psi_vec)
        logger.debug("同构搜索第 %d 次尝试失败", attempt + 1)
    raise CyError("两个复形在同伦范畴中不同构")


# ============ 函子 F = ν⁻¹[d] 的链层实现 ============

def _coresolution_positions(K: ProjComplex):
    """全复形 T^m 的排布：先放 K^m 各项的 I_1，再放 K^{m−1} 中 i < n 的项的 I_{i+1}"""
    n = K.n
    pos0: dict[int, list[int]] = {}
    pos1: dict[int, list[Optional[int]]] = {}
    terms: dict[int, list[int]] = defaultdict(list)
    for m in sorted({k for d in K.degrees() for k in (d, d + 1)}):
        pos0[m] = []
        for _ in K.term(m):
            pos0[m].append(len(terms[m]))
            terms[m].append(1)
        pos1[m - 1] = []
        for i in K.term(m - 1):
            if i < n:
                pos1[m - 1].append(len(terms[m]))
                terms[m].append(i + 1)
            else:
                pos1[m - 1].append(None)
    return pos0, pos1, terms


def apply_F(K: ProjComplex, d: int) -> ProjComplex:
    """P_i 用 I_1 → I_{i+1} 余分解，全复形 D = J(d) + (−1)^m δ，再作 ν⁻¹ 与平移 [d]"""
    pos0, pos1, terms = _coresolution_positions(K)
    diffs: dict[int, Matrix] = {}
    for m in sorted(terms):
        D = linalg.zeros(len(terms.get(m + 1, ())), len(terms[m]))
        dK = K.diff(m)
        for s in range(len(K.term(m))):
            for t in range(len(K.term(m + 1))):
                if dK[t, s] != 0:
                    D[pos0[m + 1][t], pos0[m][s]] = dK[t, s]
            target = pos1.get(m, [])
            if s < len(target) and target[s] is not None:
                D[target[s], pos0[m][s]] = sign(m)
        dprev = K.diff(m - 1)
        for s in range(len(K.term(m - 1))):
            src_pos = pos1[m - 1][s]
            if src_pos is None:
                continue
            for t in range(len(K.term(m))):
                tgt_pos = pos1.get(m, [])[t] if t < len(pos1.get(m, [])) else None
                if tgt_pos is not None and dprev[t, s] != 0:
                    D[tgt_pos, src_pos] = dprev[t, s]
        diffs[m] = D
    T = ProjComplex(K.n, {m: tuple(v) for m, v in terms.items() if v}, diffs)
    return T.shift(d)


def apply_F_map(f: ChainMap, FK: ProjComplex, FL: ProjComplex, d: int) -> ChainMap:
    """F 作用在链映射上：两份余分解上的分量都等于 f 本身"""
    K, L = f.source, f.target
    pk0, pk1, _ = _coresolution_positions(K)
    pl0, pl1, _ = _coresolution_positions(L)
    comps: dict[int, Matrix] = {}
    for m in sorted(set(pk0) | set(pk1)):
        deg = m - d
        M = linalg.zeros(len(FL.term(deg)), len(FK.term(deg)))
        fm = f.comp(m)
        for s in range(len(K.term(m))):
            for t in range(len(L.term(m))):
                if fm[t, s] != 0:
                    M[pl0[m][t], pk0[m][s]] = fm[t, s]
        fp = f.comp(m - 1)
        for s, sp in enumerate(pk1.get(m - 1, [])):
            if sp is None:
                continue
            for t, tp in enumerate(pl1.get(m - 1, [])):
                if tp is not None and fp[t, s] != 0:
                    M[tp, sp] = fp[t, s]
        if M.rows and M.cols:
            comps[deg] = M
    return ChainMap(FK, FL, comps)


def direct_sum_complexes(parts: Iterable[ProjComplex], n: int) -> ProjComplex:
    parts = list(parts)
    degrees = sorted({k for P in parts for k in P.degrees()})
    terms = {k: tuple(i for P in parts for i in P.term(k)) for k in degrees}
    diffs = {}
    for k in degrees:
        D = linalg.zeros(len(terms.get(k + 1, ())), len(terms[k]))
        row = col = 0
        for P in parts:
            linalg.place(D, P.diff(k), row, col)
            row += len(P.term(k + 1))
            col += len(P.term(k))
        diffs[k] = D
    return ProjComplex(n, terms, diffs)
