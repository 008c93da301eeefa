"""
Dispatch from (distribution, regime, quantity) to the matching rate function
"""
import math
from dataclasses import dataclass
from typing import Callable, Tuple

from ldp_toolkit.core.ratefn.linear import rate_linear_qnorm
from ldp_toolkit.core.ratefn.regimes import (
    constant_regime_qnorm,
    rate_lp_projection,
    rate_sublinear_norm,
    rate_sublinear_qnorm,
)
from ldp_toolkit.errors import InvalidQ, Unsupported
from ldp_toolkit.monitoring.logging_config import get_logger
from ldp_toolkit.monitoring.metrics import record_rate_evaluation
from ldp_toolkit.protocol.models import (
    ConstantVariant,
    LinearCase,
    LpCase,
    QuantityKind,
    QuantitySpec,
    RegimeKind,
    RegimeSpec,
    SpeedCase,
    SublinearCase,
)

logger = get_logger(__name__)

_LP_SUBLINEAR_CASES = {
    SublinearCase.R_INF: LpCase.SUB_SLOW,
    SublinearCase.R_POS: LpCase.SUB_CRIT,
    SublinearCase.R0: LpCase.SUB_FAST,
}


@dataclass(frozen=True)
class RatePlan:
    """
    已解析的速率: 求值函数与速度

    Attributes:
        evaluate: x ↦ 速率值
        speed: n ↦ s_n
        speed_tag: 速度描述
    """
    evaluate: Callable[[float], float]
    speed: Callable[[int], float]
    speed_tag: str


def _small_lp_ball(dist) -> bool:
    from ldp_toolkit.core import distributions

    return isinstance(dist, distributions.LpBall) and dist.p < 2.0


def _constant_plan(dist, regime: RegimeSpec, quantity: QuantitySpec) -> RatePlan:
    from ldp_toolkit.core import distributions

    if quantity.kind != QuantityKind.NORM:
        raise Unsupported("constant regime supports the n^(-1/2)-scaled norm only",
                          {"quantity": quantity.label()})
    meta = distributions.ldp_metadata(dist, regime)
    q, k = quantity.q, regime.k
    if _small_lp_ball(dist) and q == 2.0:
        tag = rate_lp_projection(dist.p, LpCase.CONSTANT, 1.0).speed_tag
        return RatePlan(lambda x: rate_lp_projection(dist.p, LpCase.CONSTANT, x).value,
                        meta.speed, tag)
    variant = ConstantVariant(meta.case)
    return RatePlan(lambda x: constant_regime_qnorm(meta.jx, variant, q, k, x),
                    meta.speed, meta.speed_tag)


def _sublinear_plan(dist, regime: RegimeSpec, quantity: QuantitySpec) -> RatePlan:
    from ldp_toolkit.core import distributions

    if quantity.kind == QuantityKind.NORM:
        if quantity.q != 2.0:
            raise InvalidQ("sublinear norm rate is available for q = 2 only", {"q": quantity.q})
        meta = distributions.ldp_metadata(dist, regime)
        case = SublinearCase(meta.case)
        if _small_lp_ball(dist):
            lp_case = _LP_SUBLINEAR_CASES[case]
            tag = rate_lp_projection(dist.p, lp_case, 1.0).speed_tag
            return RatePlan(lambda x: rate_lp_projection(dist.p, lp_case, x).value,
                            meta.speed, tag)
        r = 1.0 if meta.ratio is None else meta.ratio
        return RatePlan(lambda x: rate_sublinear_norm(case, meta.jx, x, r), meta.speed,
                        meta.speed_tag)

    if quantity.kind == QuantityKind.NORM_KN:
        base = distributions.norm_ldp(dist)
        if base.m is None:
            raise Unsupported("norm LDP has no unique centre", {"family": dist.label()})
        case, ratio = distributions.classify_speed_ratio(base.speed, regime.k_of)
        if case == SpeedCase.RATIO:
            raise Unsupported("s_n / k_n converges to a constant other than 1",
                              {"ratio": ratio, "family": dist.label()})
        q, jx, m = quantity.q, base.jx, base.m
        if case == SpeedCase.SLOW:
            speed, tag = base.speed, base.speed_tag
        else:
            speed, tag = (lambda n: float(regime.k_of(n))), "k_n"
        logger.debug("speed_case_classified", family=dist.label(), case=case.value, ratio=ratio)
        return RatePlan(lambda x: rate_sublinear_qnorm(q, case, jx, m, x), speed, tag)

    raise Unsupported("empirical quantity has a measure-valued rate",
                      {"quantity": quantity.label()})


def _linear_plan(dist, regime: RegimeSpec, quantity: QuantitySpec) -> RatePlan:
    from ldp_toolkit.core import distributions

    if quantity.kind == QuantityKind.EMPIRICAL:
        raise Unsupported("empirical quantity has a measure-valued rate",
                          {"quantity": quantity.label()})
    meta = distributions.ldp_metadata(dist, regime)
    q, lam = quantity.q, regime.lam
    case = LinearCase(meta.case)
    # k_n^{-1/q} = λ^{-1/q} n^{-1/q}
    factor = lam ** (1.0 / q) if quantity.kind == QuantityKind.NORM_KN else 1.0
    return RatePlan(lambda x: rate_linear_qnorm(q, lam, meta.jx, case, x * factor),
                    meta.speed, meta.speed_tag)


def rate_plan(dist, regime: RegimeSpec, quantity: QuantitySpec) -> RatePlan:
    """
    解析 (分布, 规模, 统计量) 对应的速率函数与速度

    Args:
        dist: 分布
        regime: 投影维数规模
        quantity: 统计量

    Returns:
        RatePlan
    """
    if regime.kind == RegimeKind.CONSTANT:
        return _constant_plan(dist, regime, quantity)
    if regime.kind == RegimeKind.SUBLINEAR:
        return _sublinear_plan(dist, regime, quantity)
    return _linear_plan(dist, regime, quantity)


def predict_rate(dist, regime: RegimeSpec, quantity: QuantitySpec, x: float) -> Tuple[float, str]:
    """
    理论速率值

    Args:
        dist: 分布
        regime: 投影维数规模
        quantity: 统计量
        x: 自变量

    Returns:
        (速率值, 速度标签)
    """
    plan = rate_plan(dist, regime, quantity)
    value = plan.evaluate(x)
    record_rate_evaluation(regime.kind.value, quantity.kind.value)
    if math.isnan(value):
        value = math.inf
    return value, plan.speed_tag


def rate_speed(dist, regime: RegimeSpec, quantity: QuantitySpec) -> Tuple[Callable[[int], float], str]:
    """速度 n ↦ s_n 及其描述"""
    plan = rate_plan(dist, regime, quantity)
    return plan.speed, plan.speed_tag
