"""
LDP Toolkit Protocol Models
"""
import math
from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, Field, model_validator


class RegimeKind(str, Enum):
    """投影维数规模"""
    CONSTANT = "constant"
    SUBLINEAR = "sublinear"
    LINEAR = "linear"


class QuantityKind(str, Enum):
    """被估计的统计量"""
    NORM = "norm"
    NORM_KN = "norm_kn"
    EMPIRICAL = "empirical"


class MarginalKind(str, Enum):
    """乘积分布的边缘分布"""
    NORMAL = "normal"
    RADEMACHER = "rademacher"
    POINT = "point"
    PGN = "pgn"


class AssumptionTag(str, Enum):
    """范数 LDP 假设类型"""
    A = "A"
    A_STAR = "A*"
    B = "B"
    C = "C"


class ConstantVariant(str, Enum):
    """常数维数情形的变分形式"""
    A_STAR = "AStar"
    B = "B"


class SublinearCase(str, Enum):
    """次线性情形 (r = lim s_n / k_n)"""
    A_STAR = "AStar"
    R0 = "r0"
    R_POS = "rPos"
    R_INF = "rInf"


class SpeedCase(str, Enum):
    """速度 s_n 与 k_n 的比较"""
    FAST = "fast"
    BALANCED = "balanced"
    SLOW = "slow"
    RATIO = "ratio"


class LpCase(str, Enum):
    """p < 2 的 ℓ_p 球投影情形"""
    CONSTANT = "constant"
    SUB_SLOW = "subSlow"
    SUB_CRIT = "subCrit"
    SUB_FAST = "subFast"


class LinearCase(str, Enum):
    """线性情形"""
    FULL = "full"
    SLOW = "slow"


class RegimeSpec(BaseModel):
    """投影维数规模"""
    kind: RegimeKind = Field(..., description="规模类型")
    k: Optional[int] = Field(default=None, ge=1, description="常数维数 k")
    alpha: Optional[float] = Field(default=None, gt=0, lt=1, description="次线性指数, k_n = ⌈n^α⌉")
    lam: Optional[float] = Field(default=None, gt=0, le=1, description="线性比例, k_n = ⌈λn⌉")

    @model_validator(mode="after")
    def check_parameter(self) -> "RegimeSpec":
        required = {
            RegimeKind.CONSTANT: ("k", self.k),
            RegimeKind.SUBLINEAR: ("alpha", self.alpha),
            RegimeKind.LINEAR: ("lam", self.lam),
        }[self.kind]
        if required[1] is None:
            raise ValueError(f"regime {self.kind.value} requires parameter {required[0]}")
        return self

    def k_of(self, n: int) -> int:
        """
        维数 n 下的投影维数

        Args:
            n: 环境维数

        Returns:
            k_n (不超过 n)
        """
        if self.kind == RegimeKind.CONSTANT:
            k = self.k
        elif self.kind == RegimeKind.SUBLINEAR:
            k = math.ceil(n ** self.alpha - 1e-9)
        else:
            k = math.ceil(self.lam * n - 1e-9)
        return max(1, min(int(k), n))

    def label(self) -> str:
        if self.kind == RegimeKind.CONSTANT:
            return f"constant:k={self.k}"
        if self.kind == RegimeKind.SUBLINEAR:
            return f"sublinear:alpha={self.alpha}"
        return f"linear:lambda={self.lam}"


class QuantitySpec(BaseModel):
    """统计量规格"""
    kind: QuantityKind = Field(..., description="统计量类型")
    q: float = Field(default=2.0, ge=1, description="范数指数 q")

    def label(self) -> str:
        if self.kind == QuantityKind.EMPIRICAL:
            return "empirical"
        return f"{self.kind.value}:q={self.q:g}"


# Monte Carlo 结果
class TailEstimate(BaseModel):
    """尾概率估计"""
    n: int = Field(..., ge=1, description="环境维数")
    k: int = Field(..., ge=1, description="投影维数")
    x: float = Field(..., description="阈值")
    trials: int = Field(..., ge=1, description="试验次数")
    hits: int = Field(..., ge=0, description="命中次数")
    p_hat: float = Field(..., ge=0, le=1, description="经验概率")
    ci_lo: float = Field(..., description="99% Clopper-Pearson 下界")
    ci_hi: float = Field(..., description="99% Clopper-Pearson 上界")
    s_n: float = Field(..., gt=0, description="LDP 速度")
    rescaled: float = Field(..., description="-log(p_hat)/s_n, 零命中时为 +inf")
    censored: bool = Field(default=False, description="零命中标记")


class DecaySeries(BaseModel):
    """沿维数阶梯的尾概率序列"""
    estimates: List[TailEstimate] = Field(default_factory=list, description="各 n 的估计")
    rate_prediction: float = Field(..., description="理论速率")
    speed_tag: str = Field(default="", description="速度标签")


class RateCurveRow(BaseModel):
    """速率曲线的一行"""
    x: float = Field(..., description="自变量")
    rate: float = Field(..., description="速率函数值")
    speed_tag: str = Field(..., description="速度标签")


class ShellEstimate(BaseModel):
    """薄壳概率估计"""
    n: int = Field(..., ge=1, description="环境维数")
    eps: float = Field(..., gt=0, description="壳宽度")
    m: float = Field(..., description="壳中心")
    trials: int = Field(..., ge=1, description="试验次数")
    hits: int = Field(..., ge=0, description="壳外次数")
    p_hat: float = Field(..., ge=0, le=1, description="经验概率")
    ci_lo: float = Field(..., description="99% 下界")
    ci_hi: float = Field(..., description="99% 上界")


class W1Row(BaseModel):
    """经验测度 W1 诊断"""
    n: int = Field(..., ge=1, description="环境维数")
    k: int = Field(..., ge=1, description="投影维数")
    replicates: int = Field(..., ge=1, description="重复次数")
    w1_median: float = Field(..., description="W1 中位数")
    w1_min: float = Field(..., description="W1 最小值")
    w1_max: float = Field(..., description="W1 最大值")
