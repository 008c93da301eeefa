"""
thinshell: probability that ‖X‖₂/√n leaves the shell of width eps
"""
import argparse

import numpy as np

from ldp_toolkit.cli.options import ThinShellOptions
from ldp_toolkit.cli.output import write_records
from ldp_toolkit.core.mc import thin_shell_estimate
from ldp_toolkit.monitoring.logging_config import get_logger
from ldp_toolkit.protocol.grammar import parse_distribution

logger = get_logger(__name__)

NAME = "thinshell"
OPTIONS = ThinShellOptions
HEADER = ("n", "eps", "m", "trials", "hits", "p_hat", "ci_lo", "ci_hi")


def register(subparsers: argparse._SubParsersAction) -> argparse.ArgumentParser:
    """注册 thinshell 子命令"""
    parser = subparsers.add_parser(NAME, help="thin shell probabilities with confidence intervals")
    parser.add_argument("--dist", help="distribution")
    parser.add_argument("--n", help="comma separated dimensions")
    parser.add_argument("--eps", type=float, help="shell width")
    parser.add_argument("--trials", type=int, help="trials per dimension")
    parser.add_argument("--seed", type=int, help="random seed")
    parser.add_argument("--out", help="output path, '-' for stdout")
    return parser


def run(options: ThinShellOptions) -> int:
    dist = parse_distribution(options.dist)
    streams = np.random.SeedSequence(options.seed).spawn(len(options.n))
    rows = [thin_shell_estimate(dist, n, options.eps, options.trials, stream)
            for n, stream in zip(options.n, streams)]
    write_records(options.out, HEADER, rows)
    logger.info("thinshell_written", family=dist.label(), dims=options.n, eps=options.eps)
    return 0
