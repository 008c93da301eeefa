"""
Projection rate functions in the constant and sublinear regimes
"""
import math
from typing import Callable, NamedTuple, Tuple

from ldp_toolkit.core.convexkit import find_root_bracketed, minimize_unimodal
from ldp_toolkit.core.ratefn.cramer import gaussian_abs_moment, lambda_q_star
from ldp_toolkit.core.ratefn.handles import RateFunctionHandle
from ldp_toolkit.core.ratefn.measures import (
    GaussianMeasure,
    MeasureArg,
    relative_entropy_to_gaussian,
)
from ldp_toolkit.errors import EmptyDomain, InvalidP, InvalidQ
from ldp_toolkit.monitoring.logging_config import get_logger
from ldp_toolkit.protocol.models import ConstantVariant, LpCase, SpeedCase, SublinearCase

logger = get_logger(__name__)

INF = math.inf
# log c 的搜索半宽 (jx 定义域无界时)
_LOG_SPAN = 12.0
# 上界 c < 1 的保护距离
_C_BELOW_ONE = -1e-14


def angular_cost_sphere(c: float) -> float:
    """-½ log(1 - c²), 0 < c < 1"""
    return -0.5 * math.log1p(-c * c) if 0.0 <= c < 1.0 else INF


def angular_cost_gauss(c: float) -> float:
    """c²/2"""
    return 0.5 * c * c


def _log_c_window(jx: RateFunctionHandle, scale: float, below_one: bool) -> Tuple[float, float]:
    """
    jx(scale / c) 有限时 log c 的初始括号

    Args:
        jx: 速率函数
        scale: jx 的自变量为 scale / c
        below_one: 是否约束 c < 1

    Returns:
        (lo, hi), 空区间时 lo >= hi
    """
    y_lo, y_hi = jx.domain
    log_scale = math.log(scale)
    lo = log_scale - math.log(y_hi) if math.isfinite(y_hi) and y_hi > 0 else min(log_scale, 0.0) - _LOG_SPAN
    hi = log_scale - math.log(y_lo) if y_lo > 0 else max(log_scale, 0.0) + _LOG_SPAN
    if below_one:
        hi = min(hi, _C_BELOW_ONE)
    return lo, hi


def _infimum_log(objective: Callable[[float], float], window: Tuple[float, float]) -> float:
    """inf_c objective(c), 在 log c 上极小化"""
    lo, hi = window
    if not lo < hi:
        return INF
    try:
        _, value = minimize_unimodal(lambda u: objective(math.exp(u)), (lo, hi))
    except EmptyDomain:
        return INF
    return max(value, 0.0)


def _radial_infimum(jx: RateFunctionHandle, scale: float, weight: float,
                    cost: Callable[[float], float], below_one: bool) -> float:
    """
    inf_c {cost(c) + weight * jx(scale / c)}

    Args:
        jx: 径向速率
        scale: jx 的自变量系数
        weight: jx 的权重
        cost: 角度代价
        below_one: c 是否限制在 (0, 1)

    Returns:
        下确界
    """
    if jx.is_degenerate:
        if jx.center <= 0:
            return INF
        c = scale / jx.center
        return max(cost(c), 0.0) if (c < 1.0 or not below_one) else INF
    window = _log_c_window(jx, scale, below_one)
    return _infimum_log(lambda c: cost(c) + weight * jx(scale / c), window)


def rate_constant_regime(jx: RateFunctionHandle, variant: ConstantVariant, xnorm: float) -> float:
    """
    常数维数投影的速率 (作为 ‖x‖₂ 的函数)

    AStar: inf_{0<c<1} {jx(‖x‖/c) - ½ log(1-c²)};
    B: inf_{c>0} {jx(‖x‖/c) + c²/2}

    Args:
        jx: 范数速率
        variant: 假设类型
        xnorm: 欧氏范数

    Returns:
        速率值
    """
    if xnorm < 0:
        return INF
    if xnorm == 0.0:
        # 下半连续闭包
        return 0.0
    variant = ConstantVariant(variant)
    if variant == ConstantVariant.A_STAR:
        return _radial_infimum(jx, xnorm, 1.0, angular_cost_sphere, below_one=True)
    return _radial_infimum(jx, xnorm, 1.0, angular_cost_gauss, below_one=False)


def constant_regime_qnorm(jx: RateFunctionHandle, variant: ConstantVariant, q: float,
                          k: int, x: float) -> float:
    """
    常数维数下 n^{-1/2}‖AᵀX‖_q 的速率

    径向速率非降, 在 ‖z‖_q = x 上的最小欧氏半径为 x·k^{min(0, 1/2-1/q)}

    Args:
        jx: 范数速率
        variant: 假设类型
        q: 范数指数
        k: 投影维数
        x: 自变量

    Returns:
        速率值
    """
    if not q >= 1:
        raise InvalidQ(f"q must be >= 1, got {q}", {"q": q})
    if x < 0:
        return INF
    radius = x * k ** min(0.0, 0.5 - 1.0 / q)
    return rate_constant_regime(jx, variant, radius)


def rate_sublinear_norm(case: SublinearCase, jx: RateFunctionHandle, x: float,
                        r: float = 1.0) -> float:
    """
    次线性规模下 n^{-1/2}‖AᵀX‖₂ 的速率

    Args:
        case: AStar / r0 / rPos / rInf
        jx: 范数速率 (J_X 或 J_X^{(r)})
        x: 自变量
        r: rPos 情形的极限比值 s_n/k_n

    Returns:
        速率值
    """
    if x < 0:
        return INF
    case = SublinearCase(case)
    if case == SublinearCase.R0:
        return jx(x)
    if x == 0.0:
        return 0.0
    if case == SublinearCase.A_STAR:
        return _radial_infimum(jx, x, 1.0, angular_cost_sphere, below_one=True)
    if case == SublinearCase.R_INF:
        return _radial_infimum(jx, x, 1.0, angular_cost_gauss, below_one=False)
    if not r > 0:
        raise InvalidP(f"ratio r must be positive, got {r}", {"r": r})

    def cost(c: float) -> float:
        return 0.5 * (c * c - 1.0) - math.log(c)

    return _radial_infimum(jx, math.sqrt(r) * x, r, cost, below_one=False)


def rate_sublinear_qnorm(q: float, case: SpeedCase, jx: RateFunctionHandle, m: float,
                         x: float) -> float:
    """
    次线性规模下 k_n^{-1/q}‖AᵀX‖_q 的速率

    Args:
        q: 范数指数, [1, 2]
        case: fast (s_n ≫ k_n) / balanced (s_n = k_n) / slow (s_n ≪ k_n)
        jx: 范数速率
        m: jx 的唯一极小点
        x: 自变量

    Returns:
        速率值
    """
    if not 1.0 <= q <= 2.0:
        raise InvalidQ(f"q must lie in [1, 2], got {q}", {"q": q})
    if x < 0:
        return INF
    case = SpeedCase(case)
    if case == SpeedCase.FAST:
        if not m > 0:
            raise InvalidP(f"center m must be positive, got {m}", {"m": m})
        return lambda_q_star(q, (x / m) ** q) if x > 0 else INF
    if case == SpeedCase.SLOW:
        return jx(x / gaussian_abs_moment(q) ** (1.0 / q))
    if x == 0.0:
        return jx(0.0)

    def cost(c: float) -> float:
        return lambda_q_star(q, c ** q)

    return _radial_infimum(jx, x, 1.0, cost, below_one=False)


def rate_sublinear_empirical(case: SpeedCase, jx: RateFunctionHandle, m: float,
                             nu: MeasureArg) -> float:
    """
    次线性规模下经验测度 L^n 的速率

    Args:
        case: fast / balanced / slow
        jx: 范数速率
        m: jx 的唯一极小点
        nu: 测度

    Returns:
        速率值
    """
    case = SpeedCase(case)
    if case == SpeedCase.FAST:
        return relative_entropy_to_gaussian(nu, m)
    if case == SpeedCase.SLOW:
        return jx(nu.sigma) if isinstance(nu, GaussianMeasure) else INF
    if jx.is_degenerate:
        return relative_entropy_to_gaussian(nu, jx.center)
    y_lo, y_hi = jx.domain
    lo = math.log(y_lo) if y_lo > 0 else math.log(m) - _LOG_SPAN
    hi = math.log(y_hi) if math.isfinite(y_hi) else math.log(m) + _LOG_SPAN
    return _infimum_log(lambda c: relative_entropy_to_gaussian(nu, c) + jx(c), (lo, hi))


def lp_critical_root(p: float, x: float) -> float:
    """
    c^{p+2} - c^p - x^p = 0 的唯一正根 c̄(x)

    括号 [(1+x^p)^{1/(p+2)}, (1+x^{2p/(p+2)})^{1/2}]

    Args:
        p: 指数, [1, 2)
        x: 自变量 (>= 0)

    Returns:
        c̄(x)
    """
    if not 1.0 <= p < 2.0:
        raise InvalidP(f"p must lie in [1, 2), got {p}", {"p": p})
    if x <= 0.0:
        return 1.0
    xp = x ** p
    lo = (1.0 + xp) ** (1.0 / (p + 2.0))
    hi = math.sqrt(1.0 + x ** (2.0 * p / (p + 2.0)))

    def phi(c: float) -> float:
        return c ** (p + 2.0) - c ** p - xp

    return find_root_bracketed(phi, lo, hi, tol=1e-11)


class LpProjectionRate(NamedTuple):
    """ℓ_p 球投影速率及其速度"""
    value: float
    speed_tag: str


def lp_speed_exponent(p: float) -> float:
    """薄壳速度指数 2p/(2+p)"""
    return 2.0 * p / (2.0 + p)


def rate_lp_projection(p: float, case: LpCase, x: float) -> LpProjectionRate:
    """
    p < 2 的 ℓ_p 球欧氏投影范数的闭式速率

    Args:
        p: 指数, [1, 2)
        case: constant / subSlow / subCrit / subFast
        x: 自变量

    Returns:
        LpProjectionRate(value, speed_tag)
    """
    if not 1.0 <= p < 2.0:
        raise InvalidP(f"p must lie in [1, 2), got {p}", {"p": p})
    case = LpCase(case)
    beta = lp_speed_exponent(p)
    if case == LpCase.SUB_FAST:
        tag = f"n^{p:g}*k_n^-{0.5 * p:g}"
        return LpProjectionRate(x ** p / p if x >= 0 else INF, tag)
    tag = f"n^{beta:.6g}"
    if x < 0:
        return LpProjectionRate(INF, tag)
    if case in (LpCase.CONSTANT, LpCase.SUB_SLOW):
        return LpProjectionRate((p + 2.0) / (2.0 * p) * x ** beta, tag)
    c_bar = lp_critical_root(p, x)
    value = (p + 2.0) / (2.0 * p) * x ** p / c_bar ** p - math.log(c_bar)
    return LpProjectionRate(max(value, 0.0), tag)
