"""
Orlicz-ball analytics: log-volume, two-moment conjugate, normalising tilt, norm rate
"""
import math
from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np
from scipy.special import gammaln

from ldp_toolkit.core.convexkit import (
    Fn1D,
    LogIntegrand,
    find_root_bracketed,
    legendre_1d,
    log_moments,
)
from ldp_toolkit.core.distributions import OrliczFunction
from ldp_toolkit.core.ratefn.cramer import TiltCache, conjugate_2d
from ldp_toolkit.errors import Diverging, EmptyDomain, InvalidP, NoBracket, NonIntegrable
from ldp_toolkit.monitoring.logging_config import get_logger
from ldp_toolkit.monitoring.metrics import record_solver_failure

logger = get_logger(__name__)

INF = math.inf
# b* 扫描范围 2^-20 .. 2^20
_B_SCAN = 2.0 ** np.arange(-20, 21)
# 上凸包网格: 点数与覆盖的 V 水平 (u 的倍数)
_HULL_POINTS = 801
_HULL_REACH = 64.0


@dataclass(frozen=True)
class TiltedOrliczMeasure:
    """
    ν_{s,t}(dx) ∝ exp(s V(x) + t x²) dx, x ∈ D_V

    Attributes:
        V: Orlicz 函数
        s: V 的倾斜 (< 0)
        t: x² 的倾斜
        log_z: 对数配分函数
        m_v: E V
        m_2: E x²
    """
    V: OrliczFunction
    s: float
    t: float
    log_z: float
    m_v: float
    m_2: float


def _log_density(V: OrliczFunction, s: float, t: float) -> Callable[[np.ndarray], np.ndarray]:
    def g(x: np.ndarray) -> np.ndarray:
        v = V(x)
        with np.errstate(invalid="ignore"):
            return np.where(np.isinf(v), -INF, s * v + t * x * x)
    return g


def _stats(V: OrliczFunction) -> Callable[[np.ndarray], np.ndarray]:
    return lambda x: np.stack([V(x), x * x])


def tilted_measure(V: OrliczFunction, s: float, t: float = 0.0) -> TiltedOrliczMeasure:
    """
    构造倾斜测度 ν_{s,t} 并计算其矩

    Args:
        V: Orlicz 函数
        s: V 的倾斜 (< 0)
        t: x² 的倾斜

    Returns:
        TiltedOrliczMeasure
    """
    if not s < 0:
        raise InvalidP(f"tilt s must be negative, got {s}", {"s": s})
    integrand = LogIntegrand(_log_density(V, s, t), -V.bound, V.bound)
    log_z, mean, _ = log_moments(integrand, _stats(V))
    return TiltedOrliczMeasure(V, s, t, log_z, float(mean[0]), float(mean[1]))


def _log_partition(V: OrliczFunction) -> Fn1D:
    """s ↦ log ∫ e^{s V}, s < 0, 导数为 E_s V"""
    def func(s: float) -> float:
        return tilted_measure(V, s).log_z if s < 0 else INF

    def deriv(s: float) -> float:
        return tilted_measure(V, s).m_v if s < 0 else INF

    return Fn1D(func, hi=0.0, deriv=deriv)


def orlicz_log_volume(V: OrliczFunction) -> float:
    """
    每维对数体积的极限 lim (1/n) log|B_V^n|

    等于 -sup_{s<0} {s - log ∫ e^{sV}}

    Args:
        V: Orlicz 函数

    Returns:
        极限值
    """
    try:
        value = legendre_1d(_log_partition(V), 1.0)
    except (EmptyDomain, NonIntegrable) as exc:
        record_solver_failure("orlicz_log_volume", Diverging.code)
        raise Diverging("V is not integrably coercive", {"label": V.label}) from exc
    if not math.isfinite(value):
        raise Diverging("volume supremum is not attained", {"label": V.label})
    return -value


def lp_ball_log_volume(p: float, n: int) -> float:
    """
    (1/n) log|n^{1/p} B_p^n|, 由 log-Gamma 精确计算

    Args:
        p: 指数 (>= 1)
        n: 维数

    Returns:
        每维对数体积
    """
    if not p >= 1:
        raise InvalidP(f"p must be >= 1, got {p}", {"p": p})
    return (math.log(2.0) + float(gammaln(1.0 + 1.0 / p)) + math.log(n) / p
            - float(gammaln(1.0 + n / p)) / n)


def orlicz_max_second_moment(V: OrliczFunction, u: float) -> float:
    """
    sup{E x²: E V(x) = u}, 即曲线 a ↦ (V(a), a²) 的上凸包在 u 处的值

    Args:
        V: Orlicz 函数
        u: V 的矩

    Returns:
        可达二阶矩的上端点, u 不可达时为 0
    """
    top = float(V.level_point(np.array([_HULL_REACH * u]))[0])
    a = np.union1d(np.linspace(0.0, top, _HULL_POINTS), V.level_point(np.array([u])))
    x, y = V(a), a * a
    finite = np.isfinite(x)
    x, y = x[finite], y[finite]
    below, above = x <= u, x >= u
    if not np.any(above):
        return 0.0
    xl, yl = x[below][:, None], y[below][:, None]
    xh, yh = x[above][None, :], y[above][None, :]
    span = xh - xl
    with np.errstate(divide="ignore", invalid="ignore"):
        w = np.where(span > 0, (u - xl) / span, 0.0)
    return float(np.max(yl + w * (yh - yl)))


def orlicz_J(V: OrliczFunction, u: float, v: float) -> Tuple[Tuple[float, float], float]:
    """
    𝒥(u, v) = sup_{s<0, t} {s u + t v - log ∫_{D_V} e^{sV + tx²}}

    Args:
        V: Orlicz 函数 (超二次)
        u: V 的矩
        v: 二阶矩

    Returns:
        ((s, t) 极大点, 𝒥 值)
    """
    if not (u > 0 and v > 0):
        raise Diverging("moments outside the attainable cone", {"u": u, "v": v})
    edge = orlicz_max_second_moment(V, u)
    if v >= edge:
        raise Diverging("second moment at or beyond the attainable edge",
                        {"u": u, "v": v, "edge": edge})
    family = TiltCache(lambda s, t: _log_density(V, s, t), _stats(V), -V.bound, V.bound)
    return conjugate_2d(family, (u, v), (0.0, 0.0), (-1.0, 0.0), (True, False))


def orlicz_bstar(V: OrliczFunction) -> Tuple[float, float]:
    """
    使 M_V(μ_{V,b}) = 1 的唯一 b*, 以及 m = √M₂(μ_{V,b*})

    Args:
        V: Orlicz 函数

    Returns:
        (b*, m)
    """
    def phi(b: float) -> float:
        return tilted_measure(V, -b).m_v - 1.0

    values = []
    for b in _B_SCAN:
        try:
            values.append(phi(float(b)))
        except NonIntegrable:
            values.append(math.nan)
    bracket = None
    for i in range(len(_B_SCAN) - 1):
        a, c = values[i], values[i + 1]
        if math.isfinite(a) and math.isfinite(c) and a >= 0.0 >= c:
            bracket = (float(_B_SCAN[i]), float(_B_SCAN[i + 1]))
            break
    if bracket is None:
        record_solver_failure("orlicz_bstar", NoBracket.code)
        raise NoBracket("M_V(mu_b) does not cross 1 on the scan range", {"label": V.label})
    b_star = find_root_bracketed(phi, bracket[0], bracket[1], tol=1e-13)
    m = math.sqrt(tilted_measure(V, -b_star).m_2)
    logger.debug("orlicz_bstar_solved", label=V.label, b_star=b_star, m=m)
    return b_star, m


def orlicz_rate(V: OrliczFunction, z: float) -> float:
    """
    Orlicz 球的范数速率 J_{X,V}(z) = 𝒥(1, z²) + lim (1/n) log|B_V^n|

    Args:
        V: Orlicz 函数 (超二次)
        z: 自变量

    Returns:
        速率值, 不可达时为 +inf
    """
    if not z > 0:
        return INF
    V.require_superquadratic()
    try:
        _, value = orlicz_J(V, 1.0, z * z)
    except Diverging:
        return INF
    return max(value + orlicz_log_volume(V), 0.0)
