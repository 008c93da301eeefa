"""
Rate function handles
"""
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional, Tuple

INF = math.inf


class RateKind(str, Enum):
    """速率函数类型"""
    CLOSED_FORM = "closed_form"
    VARIATIONAL = "variational"
    DEGENERATE = "degenerate"


@dataclass(frozen=True)
class RateFunctionHandle:
    """
    可求值的扩展实值速率函数

    Attributes:
        func: 一元函数
        kind: 闭式 / 变分 / 退化
        speed_tag: 速度描述 (例如 "n", "n^(2/3)")
        center: 退化情形的 m, 其他情形为已知的唯一极小点
        domain: 有效域 [lo, hi] (用于 inf_c 问题的括号)
        label: 描述
    """
    func: Callable[[float], float]
    kind: RateKind = RateKind.CLOSED_FORM
    speed_tag: str = "n"
    center: Optional[float] = None
    domain: Tuple[float, float] = (0.0, INF)
    label: str = field(default="", compare=False)

    @classmethod
    def degenerate(cls, m: float, speed_tag: str = "n") -> "RateFunctionHandle":
        """退化速率 χ_m: m 处为 0, 其余 +inf"""
        return cls(func=lambda x: 0.0 if x == m else INF, kind=RateKind.DEGENERATE,
                   speed_tag=speed_tag, center=float(m), domain=(float(m), float(m)),
                   label=f"chi_{m:g}")

    @property
    def is_degenerate(self) -> bool:
        return self.kind == RateKind.DEGENERATE

    def __call__(self, x: float) -> float:
        if self.is_degenerate:
            return 0.0 if abs(x - self.center) <= 1e-12 * max(1.0, abs(self.center)) else INF
        lo, hi = self.domain
        if x < lo or x > hi:
            return INF
        try:
            value = float(self.func(x))
        except (ValueError, OverflowError, ZeroDivisionError):
            return INF
        if math.isnan(value):
            return INF
        # 数值噪声下的微小负值截断为 0
        return value if value > 0.0 else 0.0
