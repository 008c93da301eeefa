"""
rate: theoretical rate curve on a grid
"""
import argparse
import math
from typing import List

import numpy as np

from ldp_toolkit.cli.options import RateOptions
from ldp_toolkit.cli.output import write_records
from ldp_toolkit.core.ratefn import predict_rate
from ldp_toolkit.errors import UsageError
from ldp_toolkit.monitoring.logging_config import get_logger
from ldp_toolkit.protocol.grammar import parse_distribution, parse_quantity, parse_regime
from ldp_toolkit.protocol.models import RateCurveRow

logger = get_logger(__name__)

NAME = "rate"
OPTIONS = RateOptions
HEADER = ("x", "rate", "speed_tag")


def register(subparsers: argparse._SubParsersAction) -> argparse.ArgumentParser:
    """注册 rate 子命令"""
    parser = subparsers.add_parser(NAME, help="emit a rate function curve as CSV")
    parser.add_argument("--dist", help="distribution, e.g. lp:p=1")
    parser.add_argument("--regime", help="projection regime, e.g. constant:k=3")
    parser.add_argument("--quantity", help="norm:q=Q, norm_kn:q=Q (default norm:q=2)")
    parser.add_argument("--grid", help="start:stop:step")
    parser.add_argument("--x", help="comma separated points (instead of --grid)")
    parser.add_argument("--out", help="output path, '-' for stdout")
    return parser


def parse_grid(spec: str) -> List[float]:
    """
    解析 start:stop:step 网格 (含端点)

    Args:
        spec: 网格描述

    Returns:
        网格点
    """
    parts = spec.split(":")
    if len(parts) != 3:
        raise UsageError(f"grid must be start:stop:step, got {spec!r}")
    try:
        start, stop, step = (float(p) for p in parts)
    except ValueError:
        raise UsageError(f"grid values must be numbers, got {spec!r}")
    if not (step > 0 and math.isfinite(step) and math.isfinite(start) and stop >= start):
        raise UsageError(f"grid needs step > 0 and stop >= start, got {spec!r}")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return np.linspace(start, start + (count - 1) * step, count).tolist()


def run(options: RateOptions) -> int:
    """计算并写出 x,rate,speed_tag"""
    if (options.grid is None) == (options.x is None):
        raise UsageError("exactly one of --grid and --x is required")
    points = parse_grid(options.grid) if options.grid is not None else list(options.x)
    dist = parse_distribution(options.dist)
    regime = parse_regime(options.regime)
    quantity = parse_quantity(options.quantity)

    rows = []
    for x in points:
        value, tag = predict_rate(dist, regime, quantity, x)
        rows.append(RateCurveRow(x=x, rate=value, speed_tag=tag))
    write_records(options.out, HEADER, rows)
    logger.info("rate_curve_written", family=dist.label(), regime=regime.label(),
                quantity=quantity.label(), points=len(rows), out=options.out)
    return 0
