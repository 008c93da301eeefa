"""
Closed-form and Cramér-type rate functions
"""
import math
from typing import Callable, Dict, Tuple

import numpy as np
from scipy.special import gammaln

from ldp_toolkit.core.convexkit import (
    Fn1D,
    LogIntegrand,
    legendre_1d,
    log_integral,
    log_moments,
    maximize_concave_2d,
    minimize_unimodal,
)
from ldp_toolkit.errors import Diverging, EmptyDomain, InvalidP, InvalidQ
from ldp_toolkit.monitoring.logging_config import get_logger

logger = get_logger(__name__)

INF = math.inf
LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)
LOG_2PI_E = math.log(2.0 * math.pi * math.e)


def _check_p(p: float, lo: float = 1.0) -> float:
    if not (p >= lo and math.isfinite(p)):
        raise InvalidP(f"p must be >= {lo:g}, got {p}", {"p": p})
    return float(p)


def _check_q12(q: float) -> float:
    if not (1.0 <= q <= 2.0):
        raise InvalidQ(f"q must lie in [1, 2], got {q}", {"q": q})
    return float(q)


class TiltCache:
    """
    指数族 exp(g_θ(x)) 的对数配分函数与矩, 按参数缓存

    仅在一次求值内部使用, 牛顿步与线搜索共享同一次求积。
    """

    def __init__(self, log_density: Callable[[float, float], Callable[[np.ndarray], np.ndarray]],
                 stats: Callable[[np.ndarray], np.ndarray], lo: float = -INF, hi: float = INF):
        self._log_density = log_density
        self._stats = stats
        self._bounds = (lo, hi)
        self._cache: Dict[Tuple[float, float], Tuple[float, np.ndarray, np.ndarray]] = {}

    def moments(self, a: float, b: float) -> Tuple[float, np.ndarray, np.ndarray]:
        key = (a, b)
        if key not in self._cache:
            self._cache[key] = log_moments(LogIntegrand(self._log_density(a, b), *self._bounds), self._stats)
        return self._cache[key]

    def log_partition(self, a: float, b: float) -> float:
        return self.moments(a, b)[0]


def conjugate_2d(family: TiltCache, y: Tuple[float, float], offset: Tuple[float, float],
                 init: Tuple[float, float], negative: Tuple[bool, bool]) -> Tuple[Tuple[float, float], float]:
    """
    二维 Legendre 共轭 sup_θ {θ·y - log Z(θ)}

    θ 的第 i 个分量为 a_i + offset_i, 其中 a 为优化坐标 (negative 坐标约束为负)。

    Args:
        family: 缓存的指数族
        y: 对偶变量
        offset: 坐标平移
        init: 初始点 (优化坐标)
        negative: 负约束

    Returns:
        (argmax, 共轭值)
    """
    def objective(a: float, b: float) -> float:
        return (a + offset[0]) * y[0] + (b + offset[1]) * y[1] - family.log_partition(a, b)

    def grad_hess(a: float, b: float) -> Tuple[np.ndarray, np.ndarray]:
        _, mean, cov = family.moments(a, b)
        return np.array([y[0] - mean[0], y[1] - mean[1]]), -cov

    return maximize_concave_2d(objective, init, negative=negative, grad_hess=grad_hess)


def chi_square_rate(t: float) -> float:
    """
    χ² Cramér 速率 (t-1)/2 - ½ log t

    Args:
        t: 自变量

    Returns:
        速率值, t <= 0 时为 +inf
    """
    if not t > 0 or math.isinf(t):
        return INF
    return 0.5 * (t - 1.0) - 0.5 * math.log(t)


def gaussian_abs_moment(q: float) -> float:
    """标准高斯的 q 阶绝对矩 2^{q/2} Γ((q+1)/2) / √π"""
    if not q > 0:
        raise InvalidQ(f"q must be positive, got {q}", {"q": q})
    return math.exp(0.5 * q * math.log(2.0) + gammaln(0.5 * (q + 1.0)) - 0.5 * math.log(math.pi))


def mp(p: float) -> float:
    """
    p-广义正态下 ℓ_p 球的薄壳中心 m(p)

    Args:
        p: 指数 (>= 1)

    Returns:
        (p^{2/p} Γ(1+3/p) / (3 Γ(1+1/p)))^{1/2}
    """
    p = _check_p(p)
    log_sq = (2.0 / p) * math.log(p) + gammaln(1.0 + 3.0 / p) - math.log(3.0) - gammaln(1.0 + 1.0 / p)
    return math.exp(0.5 * log_sq)


def pgn_log_norm(p: float) -> float:
    """f_p(x) ∝ e^{-|x|^p/p} 的对数归一化常数"""
    return math.log(2.0) + math.log(p) / p + gammaln(1.0 + 1.0 / p)


def tilted_gaussian_logmgf(q: float, t1: float, t2: float) -> float:
    """
    倾斜高斯的对数矩母函数

    log ∫ exp(t1|x|^q + (t2 - ½)x²) dx/√(2π)

    Args:
        q: 指数, [1, 2]
        t1: |x|^q 的倾斜
        t2: x² 的倾斜

    Returns:
        对数积分, 有限域外返回 +inf
    """
    q = _check_q12(q)
    if q == 2.0:
        s = t1 + t2
        return -0.5 * math.log1p(-2.0 * s) if s < 0.5 else INF
    if not t2 < 0.5:
        return INF
    if t1 == 0.0:
        return -0.5 * math.log1p(-2.0 * t2)
    return log_integral(LogIntegrand(
        lambda x: t1 * np.abs(x) ** q + (t2 - 0.5) * x * x - LOG_SQRT_2PI
    ))


def _abs_q_mean(q: float, t1: float) -> float:
    _, mean, _ = log_moments(
        LogIntegrand(lambda x: t1 * np.abs(x) ** q - 0.5 * x * x - LOG_SQRT_2PI),
        lambda x: np.abs(x) ** q,
    )
    return float(mean[0])


def lambda_q_star(q: float, y: float) -> float:
    """
    Λ_q^*: t ↦ tilted_gaussian_logmgf(q, t, 0) 的 Legendre 变换

    Args:
        q: 指数, [1, 2]
        y: 自变量

    Returns:
        共轭值
    """
    q = _check_q12(q)
    if not y > 0 or math.isinf(y):
        return INF
    if q == 2.0:
        f = Fn1D(lambda t: tilted_gaussian_logmgf(2.0, t, 0.0), hi=0.5,
                 deriv=lambda t: 1.0 / (1.0 - 2.0 * t))
    else:
        f = Fn1D(lambda t: tilted_gaussian_logmgf(q, t, 0.0),
                 deriv=lambda t: _abs_q_mean(q, t))
    return max(legendre_1d(f, y), 0.0)


def lambda_a_star(q: float, y1: float, y2: float) -> float:
    """
    Λ_{A,q}^*(y1, y2): (|x|^q, x²) 在高斯下的二维 Cramér 速率

    Args:
        q: 指数, [1, 2)
        y1: |x|^q 的均值
        y2: x² 的均值

    Returns:
        共轭值, 矩锥外为 +inf
    """
    q = _check_q12(q)
    if q == 2.0:
        return chi_square_rate(y2) if abs(y1 - y2) <= 1e-12 * max(1.0, y2) else INF
    if not (y1 > 0 and y2 > 0) or y1 >= y2 ** (0.5 * q):
        return INF
    family = TiltCache(
        lambda t1, w: (lambda x: t1 * np.abs(x) ** q + w * x * x - LOG_SQRT_2PI),
        lambda x: np.stack([np.abs(x) ** q, x * x]),
    )
    try:
        _, value = conjugate_2d(family, (y1, y2), (0.0, 0.5), (0.0, -0.5), (False, True))
    except Diverging:
        return INF
    return max(value, 0.0)


def rate_product(log_mgf_square: Fn1D, x: float) -> float:
    """
    乘积分布的范数速率 J_X(x) = Λ^*(x²)

    Args:
        log_mgf_square: X_1² 的对数矩母函数 Λ
        x: 自变量

    Returns:
        速率值
    """
    if x < 0:
        return INF
    return max(legendre_1d(log_mgf_square, x * x), 0.0)


def log_mgf_square_pgn(p: float) -> Fn1D:
    """
    ξ² 的对数矩母函数, ξ ~ f_p

    Args:
        p: 指数 (>= 2, 否则 t > 0 时发散)

    Returns:
        Fn1D
    """
    p = _check_p(p, 2.0)
    if p == 2.0:
        return Fn1D(lambda t: -0.5 * math.log1p(-2.0 * t), hi=0.5,
                    deriv=lambda t: 1.0 / (1.0 - 2.0 * t))
    log_norm = pgn_log_norm(p)

    def density(t: float) -> Callable[[np.ndarray], np.ndarray]:
        return lambda x: t * x * x - np.abs(x) ** p / p - log_norm

    def func(t: float) -> float:
        return log_integral(LogIntegrand(density(t)))

    def deriv(t: float) -> float:
        _, mean, _ = log_moments(LogIntegrand(density(t)), lambda x: x * x)
        return float(mean[0])

    return Fn1D(func, deriv=deriv)


def fp_star(p: float, y: float) -> float:
    """
    F_p^*(y) = sup_{t1,t2} {t1 y + t2 - log ∫ e^{t1 x² + t2 |x|^p} f_p(x) dx}

    即 (ξ², |ξ|^p) 的 Cramér 速率在 (y, 1) 处的值。

    Args:
        p: 指数 (> 2)
        y: 二阶矩参数, 需在 (0, 1) 内

    Returns:
        共轭值
    """
    if not (p > 2 and math.isfinite(p)):
        raise InvalidP(f"fp_star requires p > 2, got {p}", {"p": p})
    if not 0.0 < y < 1.0:
        raise Diverging("second moment outside the attainable range (0, 1)", {"p": p, "y": y})
    log_norm = pgn_log_norm(p)
    # w = t2 - 1/p < 0
    family = TiltCache(
        lambda t1, w: (lambda x: t1 * x * x + w * np.abs(x) ** p - log_norm),
        lambda x: np.stack([x * x, np.abs(x) ** p]),
    )
    _, value = conjugate_2d(family, (y, 1.0), (0.0, 1.0 / p), (0.0, -1.0 / p), (False, True))
    return max(value, 0.0)


def rate_lp_norm(p: float, x: float) -> float:
    """
    ℓ_p 球的范数速率 J_{X,p}

    p < 2: x^p/p; p = 2: -log x (0 < x <= 1);
    p > 2: inf_{x <= y < 1} {log(y/x) + F_p^*(y²)}

    Args:
        p: 指数 (>= 1)
        x: 自变量

    Returns:
        速率值
    """
    p = _check_p(p)
    if x < 0:
        return INF
    if p < 2.0:
        return x ** p / p
    if p == 2.0:
        return -math.log(x) if 0.0 < x <= 1.0 else INF
    if not 0.0 < x < 1.0:
        return INF
    log_x = math.log(x)

    def objective(v: float) -> float:
        y = math.exp(v)
        try:
            return (v - log_x) + fp_star(p, y * y)
        except Diverging:
            return INF

    try:
        _, value = minimize_unimodal(objective, (log_x, -1e-9), tol=1e-8, expand=False, grid=16)
    except EmptyDomain:
        return INF
    return max(value, 0.0)


def gaussian_ratio_rate(lam: float, z: float) -> float:
    """
    高斯比值速率 J_{2,λ}(z)

    (λ/2) log(λ/z²) + ((1-λ)/2) log((1-λ)/(1-z²)), 约定 0 log 0 = 0

    Args:
        lam: λ ∈ (0, 1]
        z: 自变量

    Returns:
        速率值
    """
    if not 0.0 < lam <= 1.0:
        raise InvalidP(f"lambda must lie in (0, 1], got {lam}", {"lambda": lam})
    if lam == 1.0:
        return -math.log(z) if 0.0 < z <= 1.0 else INF
    if not 0.0 < z < 1.0:
        return INF
    value = 0.5 * lam * math.log(lam / (z * z)) + 0.5 * (1.0 - lam) * math.log((1.0 - lam) / (1.0 - z * z))
    return max(value, 0.0)


def rate_pgn_partial_sum(p: float, t: float) -> float:
    """
    p-广义正态平方部分和的速率 t^{p/2}/p

    Args:
        p: 指数, [1, 2]
        t: 自变量

    Returns:
        速率值, t < 0 时为 +inf
    """
    if not 1.0 <= p <= 2.0:
        raise InvalidP(f"p must lie in [1, 2], got {p}", {"p": p})
    if t < 0:
        return INF
    return t ** (0.5 * p) / p
