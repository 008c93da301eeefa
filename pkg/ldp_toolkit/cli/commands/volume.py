"""
volume: per-dimension log-volume of an Orlicz ball
"""
import argparse

from ldp_toolkit.cli.options import VolumeOptions
from ldp_toolkit.cli.output import write_json
from ldp_toolkit.core.orlicz import orlicz_log_volume
from ldp_toolkit.monitoring.logging_config import get_logger
from ldp_toolkit.protocol.orlicz_expr import parse_orlicz_function

logger = get_logger(__name__)

NAME = "volume"
OPTIONS = VolumeOptions


def register(subparsers: argparse._SubParsersAction) -> argparse.ArgumentParser:
    """注册 volume 子命令"""
    parser = subparsers.add_parser(NAME, help="limit of (1/n) log vol of the Orlicz ball")
    parser.add_argument("--orlicz", help="Orlicz expression, e.g. 'abs(x)^4'")
    parser.add_argument("--out", help="output path, '-' for stdout")
    return parser


def run(options: VolumeOptions) -> int:
    V = parse_orlicz_function(options.orlicz)
    value = orlicz_log_volume(V)
    write_json(options.out, {"log_volume_per_dim": value})
    logger.info("volume_written", orlicz=V.label, log_volume_per_dim=value)
    return 0
