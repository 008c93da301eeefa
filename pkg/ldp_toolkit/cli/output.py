"""
CSV / JSON writers for command results
"""
import csv
import json
import math
import sys
from contextlib import contextmanager
from typing import Any, Dict, Iterable, Iterator, Sequence, TextIO

from ldp_toolkit.errors import UsageError

STDOUT = "-"


def format_value(value: Any) -> str:
    """
    单元格格式化: 浮点数保留 17 位有效数字 (可无损回读)

    Args:
        value: 单元格值

    Returns:
        字符串
    """
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


@contextmanager
def open_output(path: str) -> Iterator[TextIO]:
    """打开输出目标, '-' 为标准输出"""
    if path == STDOUT:
        yield sys.stdout
        sys.stdout.flush()
        return
    try:
        fh = open(path, "w", encoding="utf-8", newline="")
    except OSError as exc:
        raise UsageError(f"cannot open output {path!r}: {exc.strerror}", {"path": path})
    with fh:
        yield fh


def write_csv(path: str, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> int:
    """
    写出 CSV

    Args:
        path: 输出路径
        header: 列名
        rows: 行

    Returns:
        写出的行数
    """
    count = 0
    with open_output(path) as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_value(v) for v in row])
            count += 1
    return count


def write_records(path: str, header: Sequence[str], records: Iterable[Any]) -> int:
    """按列名从 pydantic 模型取值写出 CSV"""
    return write_csv(path, header, ([getattr(r, h) for h in header] for r in records))


def write_json(path: str, payload: Dict[str, Any]) -> None:
    """写出单个 JSON 对象 (非有限浮点数写为字符串)"""
    clean = {k: format_value(v) if isinstance(v, float) and not math.isfinite(v) else v
             for k, v in payload.items()}
    with open_output(path) as fh:
        json.dump(clean, fh)
        fh.write("\n")
