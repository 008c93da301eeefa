"""
sample: draw vectors, optionally projected through a Haar frame
"""
import argparse

import numpy as np

from ldp_toolkit.cli.options import SampleOptions
from ldp_toolkit.cli.output import write_csv
from ldp_toolkit.core.distributions import sample_vector
from ldp_toolkit.core.stiefel import haar_frame, project
from ldp_toolkit.errors import InvalidDims
from ldp_toolkit.monitoring.logging_config import get_logger
from ldp_toolkit.protocol.grammar import parse_distribution

logger = get_logger(__name__)

NAME = "sample"
OPTIONS = SampleOptions


def register(subparsers: argparse._SubParsersAction) -> argparse.ArgumentParser:
    """注册 sample 子命令"""
    parser = subparsers.add_parser(NAME, help="draw random vectors as CSV rows")
    parser.add_argument("--dist", help="distribution")
    parser.add_argument("--n", type=int, help="dimension")
    parser.add_argument("--count", type=int, help="number of vectors (default 1)")
    parser.add_argument("--seed", type=int, help="random seed")
    parser.add_argument("--project", type=int, metavar="K",
                        help="project each vector through an independent Haar n x K frame")
    parser.add_argument("--out", help="output path, '-' for stdout")
    return parser


def run(options: SampleOptions) -> int:
    """每个向量一行"""
    dist = parse_distribution(options.dist)
    rng = np.random.default_rng(options.seed)
    n, k = options.n, options.project
    if k is not None and k > n:
        raise InvalidDims(f"need 1 <= k <= n, got n={n}, k={k}", {"n": n, "k": k})

    def rows():
        for _ in range(options.count):
            vector = sample_vector(dist, n, rng)
            if k is not None:
                vector = project(haar_frame(n, k, rng), vector)
            yield vector.tolist()

    width, prefix = (n, "x") if k is None else (k, "y")
    header = [f"{prefix}{i + 1}" for i in range(width)]
    written = write_csv(options.out, header, rows())
    logger.info("samples_written", family=dist.label(), n=n, project=k, count=written)
    return 0
