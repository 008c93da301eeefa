"""
Rate functions: closed forms, variational forms and the regime dispatcher
"""
from ldp_toolkit.core.ratefn.cramer import (
    chi_square_rate,
    fp_star,
    gaussian_abs_moment,
    gaussian_ratio_rate,
    lambda_a_star,
    lambda_q_star,
    log_mgf_square_pgn,
    mp,
    rate_lp_norm,
    rate_pgn_partial_sum,
    rate_product,
    tilted_gaussian_logmgf,
)
from ldp_toolkit.core.ratefn.handles import RateFunctionHandle, RateKind
from ldp_toolkit.core.ratefn.linear import (
    lln_ratio,
    rate_J_q_lambda,
    rate_linear_empirical,
    rate_linear_qnorm,
)
from ldp_toolkit.core.ratefn.measures import (
    GaussianMeasure,
    HistogramMeasure,
    MeasureArg,
    entropy_H_lambda,
    relative_entropy_to_gaussian,
)
from ldp_toolkit.core.ratefn.regimes import (
    LpProjectionRate,
    constant_regime_qnorm,
    lp_critical_root,
    rate_constant_regime,
    rate_lp_projection,
    rate_sublinear_empirical,
    rate_sublinear_norm,
    rate_sublinear_qnorm,
)
from ldp_toolkit.core.ratefn.predict import RatePlan, predict_rate, rate_plan, rate_speed

__all__ = [
    "RateFunctionHandle",
    "RateKind",
    "GaussianMeasure",
    "HistogramMeasure",
    "MeasureArg",
    "LpProjectionRate",
    "RatePlan",
    "chi_square_rate",
    "constant_regime_qnorm",
    "entropy_H_lambda",
    "fp_star",
    "gaussian_abs_moment",
    "gaussian_ratio_rate",
    "lambda_a_star",
    "lambda_q_star",
    "lln_ratio",
    "log_mgf_square_pgn",
    "lp_critical_root",
    "mp",
    "predict_rate",
    "rate_J_q_lambda",
    "rate_constant_regime",
    "rate_linear_empirical",
    "rate_linear_qnorm",
    "rate_lp_norm",
    "rate_lp_projection",
    "rate_pgn_partial_sum",
    "rate_plan",
    "rate_product",
    "rate_speed",
    "rate_sublinear_empirical",
    "rate_sublinear_norm",
    "rate_sublinear_qnorm",
    "relative_entropy_to_gaussian",
    "tilted_gaussian_logmgf",
]
