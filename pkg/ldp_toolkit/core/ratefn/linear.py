"""
Linear-regime rate functions
"""
import math
from typing import List, Tuple

import numpy as np

from ldp_toolkit.core.convexkit import maximize_concave_2d, minimize_unimodal
from ldp_toolkit.core.ratefn.cramer import (
    LOG_SQRT_2PI,
    TiltCache,
    gaussian_abs_moment,
    gaussian_ratio_rate,
)
from ldp_toolkit.core.ratefn.handles import RateFunctionHandle
from ldp_toolkit.core.ratefn.measures import GaussianMeasure, MeasureArg, entropy_H_lambda
from ldp_toolkit.errors import Diverging, EmptyDomain, InvalidMeasure, InvalidQ
from ldp_toolkit.monitoring.logging_config import get_logger
from ldp_toolkit.protocol.models import LinearCase

logger = get_logger(__name__)

INF = math.inf
_LOG_SPAN = 12.0


def _check_lambda(lam: float) -> float:
    if not 0.0 < lam <= 1.0:
        raise InvalidMeasure(f"lambda must lie in (0, 1], got {lam}", {"lambda": lam})
    return float(lam)


def rate_linear_empirical(lam: float, jx: RateFunctionHandle, case: LinearCase,
                          mu: MeasureArg) -> float:
    """
    线性规模下经验测度的速率

    full: inf_{c > √(λ M₂(μ))} {H_λ(μ(·×c)) + J_X(c)}; slow: μ = γ_σ 时为 J_X(σ)

    Args:
        lam: λ ∈ (0, 1]
        jx: 范数速率
        case: full (s_n = n) / slow (s_n ≪ n)
        mu: 测度

    Returns:
        速率值
    """
    lam = _check_lambda(lam)
    case = LinearCase(case)
    if case == LinearCase.SLOW:
        return jx(mu.sigma) if isinstance(mu, GaussianMeasure) else INF

    def objective(c: float) -> float:
        return entropy_H_lambda(lam, mu.scaled(c)) + jx(c)

    if jx.is_degenerate:
        return objective(jx.center) if jx.center > 0 else INF
    y_lo, y_hi = jx.domain
    floor = 0.5 * math.log(lam * mu.second_moment())
    lo = max(floor, math.log(y_lo)) if y_lo > 0 else floor
    hi = math.log(y_hi) if math.isfinite(y_hi) else max(lo, 0.0) + _LOG_SPAN
    if not lo < hi:
        return INF
    try:
        _, value = minimize_unimodal(lambda u: objective(math.exp(u)), (lo, hi))
    except EmptyDomain:
        return INF
    return max(value, 0.0)


class _RatioConjugate:
    """
    Ψ*(a, b), Ψ(t1, τ) = λ Λ_A(t1, τ) + (1-λ) Λ_B(τ)

    以 w = τ - ½ < 0 参数化, 上一次的极大点作为下一次的初值。
    """

    def __init__(self, q: float, lam: float):
        self.q = q
        self.lam = lam
        self._warm: List[float] = [0.0, -0.5]
        self._family = TiltCache(
            lambda t1, w: (lambda x: t1 * np.abs(x) ** q + w * x * x - LOG_SQRT_2PI),
            lambda x: np.stack([np.abs(x) ** q, x * x]),
        )

    def __call__(self, a: float, b: float) -> float:
        lam, family = self.lam, self._family

        def objective(t1: float, w: float) -> float:
            value = t1 * a + (w + 0.5) * b - lam * family.log_partition(t1, w)
            if lam < 1.0:
                value += 0.5 * (1.0 - lam) * math.log(-2.0 * w)
            return value

        def grad_hess(t1: float, w: float) -> Tuple[np.ndarray, np.ndarray]:
            _, mean, cov = family.moments(t1, w)
            grad = np.array([a - lam * mean[0], b - lam * mean[1] + (1.0 - lam) / (2.0 * w)])
            hess = -lam * cov
            hess[1, 1] -= (1.0 - lam) / (2.0 * w * w)
            return grad, hess

        init = (self._warm[0], self._warm[1])
        try:
            (t1, w), value = maximize_concave_2d(objective, init, negative=(False, True),
                                                 grad_hess=grad_hess)
        except Diverging:
            return INF
        self._warm = [t1, w]
        return max(value, 0.0)


def rate_J_q_lambda(q: float, lam: float, z: float) -> float:
    """
    线性规模下 ℓ_q 范数比值的速率 J_{q,λ}(z)

    q = 2 为闭式; q < 2 时用
    J(z) = inf_{b>0} Ψ*(z^q b^{q/2}, b), Ψ = λ Λ_A + (1-λ) Λ_B

    Args:
        q: 指数, [1, 2]
        lam: λ ∈ (0, 1]
        z: 自变量

    Returns:
        速率值, 可达锥外为 +inf
    """
    if not 1.0 <= q <= 2.0:
        raise InvalidQ(f"q must lie in [1, 2], got {q}", {"q": q})
    lam = _check_lambda(lam)
    if q == 2.0:
        return gaussian_ratio_rate(lam, z)
    if not 0.0 < z < lam ** (1.0 / q - 0.5):
        return INF
    conjugate = _RatioConjugate(q, lam)
    zq = z ** q

    def objective(u: float) -> float:
        b = math.exp(u)
        return conjugate(zq * b ** (0.5 * q), b)

    try:
        _, value = minimize_unimodal(objective, (-6.0, 6.0), tol=1e-8, grid=24)
    except EmptyDomain:
        return INF
    return max(value, 0.0)


def lln_ratio(q: float, lam: float) -> float:
    """J_{q,λ} 的零点 (λ M_q)^{1/q}"""
    return (lam * gaussian_abs_moment(q)) ** (1.0 / q)


def rate_linear_qnorm(q: float, lam: float, jx: RateFunctionHandle, case: LinearCase,
                      x: float) -> float:
    """
    线性规模下 n^{-1/q}‖AᵀX‖_q 的速率

    full: inf_{y>0} {J_{q,λ}(x/y) + J_X(y)}; slow: J_X(x / (λ M_q)^{1/q})

    Args:
        q: 指数, [1, 2]
        lam: λ ∈ (0, 1]
        jx: 范数速率
        case: full / slow
        x: 自变量

    Returns:
        速率值
    """
    if not 1.0 <= q <= 2.0:
        raise InvalidQ(f"q must lie in [1, 2], got {q}", {"q": q})
    lam = _check_lambda(lam)
    if x < 0:
        return INF
    case = LinearCase(case)
    if case == LinearCase.SLOW:
        return jx(x / lln_ratio(q, lam))
    if x == 0.0:
        return INF
    if jx.is_degenerate:
        return rate_J_q_lambda(q, lam, x / jx.center) if jx.center > 0 else INF

    y_lo, y_hi = jx.domain
    # x/y < λ^{1/q-1/2}
    floor = math.log(x) + (0.5 - 1.0 / q) * math.log(lam)
    lo = max(floor, math.log(y_lo)) if y_lo > 0 else floor
    hi = math.log(y_hi) if math.isfinite(y_hi) else max(lo, 0.0) + _LOG_SPAN
    if not lo < hi:
        return INF

    def objective(u: float) -> float:
        y = math.exp(u)
        return rate_J_q_lambda(q, lam, x / y) + jx(y)

    try:
        _, value = minimize_unimodal(objective, (lo, hi), tol=1e-8, grid=24)
    except EmptyDomain:
        return INF
    return max(value, 0.0)
