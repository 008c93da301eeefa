"""
LDP Toolkit Pytest Configuration
"""
import csv
import io
import json
from typing import Callable, List, Tuple

import numpy as np
import pytest

from ldp_toolkit.cli.app import run
from ldp_toolkit.core.distributions import OrliczFunction


@pytest.fixture
def rng() -> np.random.Generator:
    """固定种子的随机数生成器"""
    return np.random.default_rng(20240601)


@pytest.fixture
def quartic() -> OrliczFunction:
    """V(x) = |x|^4"""
    return OrliczFunction.power(4.0)


@pytest.fixture
def quadratic() -> OrliczFunction:
    """V(x) = x^2 (对应 √n B_2^n)"""
    return OrliczFunction.power(2.0)


@pytest.fixture
def cosh_orlicz() -> OrliczFunction:
    """V(x) = cosh(x) - 1"""
    return OrliczFunction.cosh()


@pytest.fixture
def out_path(tmp_path) -> Callable[[str], str]:
    """临时输出文件路径"""
    return lambda name: str(tmp_path / name)


@pytest.fixture
def cli(capsys) -> Callable[..., Tuple[int, str, str]]:
    """运行 CLI, 返回 (退出码, stdout, stderr)"""
    def invoke(*argv: str) -> Tuple[int, str, str]:
        code = run(list(argv))
        captured = capsys.readouterr()
        return code, captured.out, captured.err
    return invoke


@pytest.fixture
def read_csv() -> Callable[..., List[dict]]:
    """读取 CSV (文件路径或文本) 为字典列表"""
    def reader(source: str, from_text: bool = False) -> List[dict]:
        if from_text:
            return list(csv.DictReader(io.StringIO(source)))
        with open(source, newline="", encoding="utf-8") as fh:
            return list(csv.DictReader(fh))
    return reader


@pytest.fixture
def read_json() -> Callable[[str], dict]:
    """读取 JSON 文件"""
    def reader(path: str) -> dict:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    return reader