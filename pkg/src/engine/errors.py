"""异常定义"""
from typing import Any, Optional


class CyError(Exception):
    """所有引擎异常的基类"""


# ============ 表示论层 ============

class InvalidInterval(CyError):
    """区间端点越界"""

    def __init__(self, a: int, b: int, n: int):
        super().__init__(f"区间 [{a},{b}] 不满足 1 ≤ a ≤ b ≤ {n}")
        self.a, self.b, self.n = a, b, n


class CompositionError(CyError):
    """态射无法复合（源/靶不匹配或形状错误）"""


class SerreCheckFailed(CyError):
    """d-Calabi-Yau 维数对称性检验失败（引擎缺陷信号）"""


class LiftError(CyError):
    """轨道范畴中的态射无法提升到导出范畴"""


# ============ 对象命名 ============

class ObjectSyntaxError(CyError):
    """对象名称语法错误"""


class UnknownObject(CyError):
    """对象不在范畴中"""


# ============ 多边形模型 ============

class NoCompatibleBijection(CyError):
    """找不到同时满足交叉 = Ext¹ 与旋转 = 平移的双射"""


class CrossingInput(CyError):
    """输入的弧集合存在交叉"""


# ============ 子范畴演算 ============

class NotRigid(CyError):
    """子范畴不是刚性的"""


class NotInPerp(CyError):
    """对象不在 ⊥(D[1]) 中"""


class NotSubset(CyError):
    """子范畴包含关系不成立"""


class NotAPartition(CyError):
    """给定的分块不是划分"""


class DNotInCore(CyError):
    """变换用的 D 不在核心中"""


class NotClusterTilting(CyError):
    """子范畴不是簇倾斜的"""


class CoreNotContained(CyError):
    """核心不包含于簇倾斜对象"""


# ============ 校验 ============

class SuiteFailure(CyError):
    """校验失败，携带反例"""

    def __init__(self, message: str, counterexample: Optional[dict[str, Any]] = None):
        super().__init__(message)
        self.counterexample = counterexample or {}
