"""
Command option models and TOML experiment manifests
"""
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Type, TypeVar

from pydantic import BaseModel, Field, ValidationError, field_validator

from ldp_toolkit.errors import UsageError

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

OptionsT = TypeVar("OptionsT", bound="CommandOptions")


def _int_list(value: Any) -> Any:
    if isinstance(value, str):
        return [int(v) for v in value.split(",") if v.strip()]
    if isinstance(value, int):
        return [value]
    return value


def _float_list(value: Any) -> Any:
    if isinstance(value, str):
        return [float(v) for v in value.split(",") if v.strip()]
    if isinstance(value, (int, float)):
        return [float(value)]
    return value


class CommandOptions(BaseModel):
    """子命令选项基类"""
    out: str = Field(default="-", description="输出路径, '-' 为标准输出")

    model_config = {"extra": "forbid"}


class RateOptions(CommandOptions):
    """rate 子命令"""
    dist: str = Field(..., description="分布, 例如 lp:p=1")
    regime: str = Field(..., description="规模, 例如 constant:k=3")
    quantity: str = Field(default="norm:q=2", description="统计量")
    grid: Optional[str] = Field(default=None, description="网格 start:stop:step")
    x: Optional[List[float]] = Field(default=None, description="显式自变量列表")

    _split_x = field_validator("x", mode="before")(_float_list)


class SampleOptions(CommandOptions):
    """sample 子命令"""
    dist: str = Field(..., description="分布")
    n: int = Field(..., ge=1, description="维数")
    count: int = Field(default=1, ge=1, description="向量个数")
    seed: Optional[int] = Field(default=None, description="种子")
    project: Optional[int] = Field(default=None, ge=1, description="Haar 投影维数")


class VerifyOptions(CommandOptions):
    """verify 子命令"""
    dist: str = Field(..., description="分布")
    regime: str = Field(..., description="规模")
    quantity: str = Field(default="norm:q=2", description="统计量")
    x: Optional[float] = Field(default=None, description="阈值")
    n: List[int] = Field(..., min_length=1, description="维数阶梯")
    trials: int = Field(default=100000, ge=1, description="每个 n 的试验次数")
    replicates: int = Field(default=20, ge=1, description="经验测度诊断的重复次数")
    seed: Optional[int] = Field(default=None, description="种子")

    _split_n = field_validator("n", mode="before")(_int_list)


class VolumeOptions(CommandOptions):
    """volume 子命令"""
    orlicz: str = Field(..., description="Orlicz 表达式")


class ThinShellOptions(CommandOptions):
    """thinshell 子命令"""
    dist: str = Field(..., description="分布")
    n: List[int] = Field(..., min_length=1, description="维数列表")
    eps: float = Field(..., gt=0, description="壳宽度")
    trials: int = Field(default=100000, ge=1, description="试验次数")
    seed: Optional[int] = Field(default=None, description="种子")

    _split_n = field_validator("n", mode="before")(_int_list)


def load_manifest(path: Optional[str], section: str) -> Dict[str, Any]:
    """
    读取 TOML 清单中对应子命令的表

    Args:
        path: 清单路径 (None 时返回空字典)
        section: 子命令名

    Returns:
        键值字典
    """
    if path is None:
        return {}
    try:
        with Path(path).open("rb") as fh:
            document = tomllib.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read config file {path!r}: {exc.strerror}", {"path": path})
    except tomllib.TOMLDecodeError as exc:
        raise UsageError(f"invalid TOML in {path!r}: {exc}", {"path": path})
    table = document.get(section, {})
    if not isinstance(table, dict):
        raise UsageError(f"config section [{section}] must be a table", {"path": path})
    return {key.replace("-", "_"): value for key, value in table.items()}


def build_options(model: Type[OptionsT], file_values: Dict[str, Any],
                  flag_values: Dict[str, Any]) -> OptionsT:
    """
    合并清单与命令行参数 (命令行优先) 并校验

    Args:
        model: 选项模型
        file_values: 清单中的值
        flag_values: 命令行给出的值 (None 表示未给出)

    Returns:
        选项实例
    """
    merged = dict(file_values)
    merged.update({k: v for k, v in flag_values.items() if v is not None})
    try:
        return model(**merged)
    except (ValidationError, ValueError) as exc:
        raise UsageError(f"invalid options: {_first_error(exc)}", {"options": sorted(merged)})


def _first_error(exc: Exception) -> str:
    if isinstance(exc, ValidationError):
        err = exc.errors()[0]
        where = ".".join(str(p) for p in err.get("loc", ()))
        return f"{where}: {err['msg']}" if where else err["msg"]
    return str(exc)
