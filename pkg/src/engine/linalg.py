"""有理数域上的精确线性代数

矩阵统一用 sympy 的 Matrix 表示，消元走 DomainMatrix（QQ 上），
零尺寸的情形在这里统一兜底。
"""
import random
from typing import Iterable, Optional, Sequence

from sympy import Matrix, Rational
from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix


def zeros(rows: int, cols: int) -> Matrix:
    return Matrix.zeros(rows, cols)


def eye(size: int) -> Matrix:
    return Matrix.eye(size)


def _dm(M: Matrix) -> DomainMatrix:
    return DomainMatrix.from_Matrix(M).convert_to(QQ)


def rref(M: Matrix) -> tuple[Matrix, tuple[int, ...]]:
    """简化行阶梯形，返回 (R, 主元列)"""
    if M.rows == 0 or M.cols == 0:
        return zeros(M.rows, M.cols), ()
    R, pivots = _dm(M).rref()
    return R.to_Matrix(), tuple(pivots)


def rank(M: Matrix) -> int:
    return len(rref(M)[1])


def nullspace(M: Matrix) -> list[Matrix]:
    """零空间的一组基（列向量），在自由变量上取单位向量，顺序固定"""
    ncols = M.cols
    if M.rows == 0:
        return [eye(ncols)[:, j] for j in range(ncols)]
    if ncols == 0:
        return []
    dm = _dm(M)
    _, pivots = dm.rref()
    free = [j for j in range(ncols) if j not in pivots]
    if not free:
        return []
    rows = dm.nullspace()
    on_free = rows.extract(list(range(rows.shape[0])), free)
    N = on_free.inv().matmul(rows).to_Matrix()
    return [N.row(i).T for i in range(N.rows)]


def solve(A: Matrix, b: Matrix) -> Optional[Matrix]:
    """求 A x = b 的一个特解，无解返回 None"""
    if A.cols == 0:
        return zeros(0, 1) if all(x == 0 for x in b) else None
    if A.rows == 0:
        return zeros(A.cols, 1)
    R, pivots = rref(A.row_join(b))
    if A.cols in pivots:
        return None
    x = zeros(A.cols, 1)
    for i, p in enumerate(pivots):
        x[p] = R[i, A.cols]
    return x


def columns(vectors: Sequence[Matrix], rows: int) -> Matrix:
    """把列向量拼成矩阵（允许为空）"""
    M = zeros(rows, 0)
    for v in vectors:
        M = M.row_join(v)
    return M


def complement_columns(B: Matrix, Z: Matrix) -> list[int]:
    """在 Z 的列中贪心选出模 span(B) 线性无关的那些列的下标"""
    if Z.cols == 0:
        return []
    R, pivots = rref(B.row_join(Z))
    return [p - B.cols for p in pivots if p >= B.cols]


def place(M: Matrix, block: Matrix, row: int, col: int) -> None:
    """把 block 写入 M 的 (row, col) 位置"""
    if block.rows == 0 or block.cols == 0:
        return
    M[row:row + block.rows, col:col + block.cols] = block


def is_invertible(M: Matrix) -> bool:
    return M.rows == M.cols and rank(M) == M.rows


def inverse(M: Matrix) -> Matrix:
    if M.rows == 0 and M.cols == 0:
        return zeros(0, 0)
    if not is_invertible(M):
        raise ValueError("矩阵不可逆")
    return _dm(M).inv().to_Matrix()


def generic_combination(vectors: Iterable[Matrix], rng: random.Random, rows: int) -> Matrix:
    """用小整数随机系数取一个“一般”线性组合"""
    total = zeros(rows, 1)
    for v in vectors:
        total += Rational(rng.randint(1, 97)) * v
    return total


def is_zero(M: Matrix) -> bool:
    return all(x == 0 for x in M)
