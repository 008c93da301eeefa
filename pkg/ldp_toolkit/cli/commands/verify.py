"""
verify: Monte Carlo decay ladder against the predicted rate
"""
import argparse

from ldp_toolkit.cli.options import VerifyOptions
from ldp_toolkit.cli.output import write_csv, write_records
from ldp_toolkit.core.mc import decay_series, empirical_w1_series
from ldp_toolkit.errors import UsageError
from ldp_toolkit.monitoring.logging_config import get_logger
from ldp_toolkit.protocol.grammar import parse_distribution, parse_quantity, parse_regime
from ldp_toolkit.protocol.models import QuantityKind

logger = get_logger(__name__)

NAME = "verify"
OPTIONS = VerifyOptions
TAIL_HEADER = ("n", "k", "s_n", "trials", "hits", "p_hat", "ci_lo", "ci_hi", "rescaled",
               "rate_prediction")
W1_HEADER = ("n", "k", "replicates", "w1_median", "w1_min", "w1_max")


def register(subparsers: argparse._SubParsersAction) -> argparse.ArgumentParser:
    """注册 verify 子命令"""
    parser = subparsers.add_parser(NAME, help="Monte Carlo tail estimates along a dimension ladder")
    parser.add_argument("--dist", help="distribution")
    parser.add_argument("--regime", help="projection regime")
    parser.add_argument("--quantity", help="norm:q=Q, norm_kn:q=Q or empirical (default norm:q=2)")
    parser.add_argument("--x", type=float, help="threshold (norm quantities)")
    parser.add_argument("--n", help="comma separated dimension ladder, e.g. 20,40,60")
    parser.add_argument("--trials", type=int, help="trials per dimension")
    parser.add_argument("--replicates", type=int, help="replicates per dimension (empirical)")
    parser.add_argument("--seed", type=int, help="random seed")
    parser.add_argument("--out", help="output path, '-' for stdout")
    return parser


def run(options: VerifyOptions) -> int:
    """写出尾概率阶梯或 W₁ 诊断"""
    dist = parse_distribution(options.dist)
    regime = parse_regime(options.regime)
    quantity = parse_quantity(options.quantity)

    if quantity.kind == QuantityKind.EMPIRICAL:
        rows = empirical_w1_series(dist, regime, options.n, options.replicates, options.seed)
        write_records(options.out, W1_HEADER, rows)
        logger.info("verify_w1_written", family=dist.label(), ladder=options.n)
        return 0

    if options.x is None:
        raise UsageError("--x is required for norm quantities")
    series = decay_series(dist, regime, quantity, options.x, options.n, options.trials,
                          options.seed)
    write_csv(options.out, TAIL_HEADER,
              ([e.n, e.k, e.s_n, e.trials, e.hits, e.p_hat, e.ci_lo, e.ci_hi, e.rescaled,
                series.rate_prediction] for e in series.estimates))
    logger.info("verify_written", family=dist.label(), regime=regime.label(),
                quantity=quantity.label(), ladder=options.n, rate=series.rate_prediction)
    return 0
