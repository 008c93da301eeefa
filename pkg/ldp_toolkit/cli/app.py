"""
LDP Toolkit command-line application
"""
import argparse
import sys
from typing import List, Optional

from ldp_toolkit.cli.commands import COMMANDS
from ldp_toolkit.cli.options import build_options, load_manifest
from ldp_toolkit.config import settings
from ldp_toolkit.errors import LdpError, UsageError
from ldp_toolkit.monitoring.logging_config import get_logger, setup_logging
from ldp_toolkit.monitoring.metrics import set_app_info, write_metrics

logger = get_logger(__name__)

PROG = "ldp"
# 不属于子命令选项模型的参数
_GLOBAL_KEYS = {"command", "config", "metrics_out", "log_level"}


class _ArgumentParser(argparse.ArgumentParser):
    """参数错误抛出 UsageError, 由 run 统一输出"""

    def error(self, message: str) -> None:
        raise UsageError(message)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="TOML manifest; the table named after the command supplies defaults")
    parser.add_argument("--metrics-out", help="write Prometheus metrics to this file")
    parser.add_argument("--log-level", help="override LOG_LEVEL")


def build_parser() -> argparse.ArgumentParser:
    """
    构建命令行解析器

    Returns:
        ArgumentParser
    """
    parser = _ArgumentParser(
        prog=PROG,
        description="Large deviations of random projections: rate curves, sampling and "
                    "Monte Carlo verification",
    )
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {settings.APP_VERSION}")
    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)
    for module in COMMANDS:
        sub = module.register(subparsers)
        _add_common(sub)
        sub.set_defaults(command=module)
    return parser


def _report(exc: LdpError) -> None:
    print(f"error: {exc}", file=sys.stderr)


def run(argv: Optional[List[str]] = None) -> int:
    """
    执行一次命令

    Args:
        argv: 参数列表 (缺省为 sys.argv[1:])

    Returns:
        退出码: 0 成功, 2 用法/语法错误, 1 数值失败
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        _report(exc)
        return exc.exit_code
    except SystemExit as exc:
        return int(exc.code or 0)

    setup_logging(
        log_level=args.log_level or settings.LOG_LEVEL,
        json_format=settings.LOG_FORMAT == "json",
    )
    set_app_info(settings.APP_NAME, settings.APP_VERSION)

    command = args.command
    flags = {k: v for k, v in vars(args).items() if k not in _GLOBAL_KEYS}
    try:
        options = build_options(command.OPTIONS, load_manifest(args.config, command.NAME), flags)
        logger.info("command_started", command=command.NAME, options=options.model_dump())
        code = command.run(options)
    except LdpError as exc:
        logger.warning("command_failed", command=command.NAME, **exc.to_dict())
        _report(exc)
        code = exc.exit_code
    except Exception as exc:
        logger.error("command_crashed", command=command.NAME, error=str(exc), exc_info=True)
        print(f"error: {LdpError.code} {exc}", file=sys.stderr)
        code = 1

    if args.metrics_out:
        write_metrics(args.metrics_out)
    return code


def main() -> None:
    """控制台入口"""
    sys.exit(run(sys.argv[1:]))
