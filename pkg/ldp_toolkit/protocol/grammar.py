"""
Textual grammar for distributions, regimes and quantities

    dist      := "lp:p=" FLOAT | "product:" ("normal" | "rademacher" | "point" | "pgn:p=" FLOAT)
               | "mixture:v=" FLOATS ";w=" FLOATS | "orlicz:" EXPR
    regime    := "constant:k=" INT | "sublinear:alpha=" FLOAT | "linear:lambda=" FLOAT
    quantity  := ("norm" | "norm_kn") [":q=" FLOAT] | "empirical"
"""
from typing import Dict, List, Tuple

from pydantic import ValidationError

from ldp_toolkit.errors import ParseError, SemanticError
from ldp_toolkit.protocol.models import (
    MarginalKind,
    QuantityKind,
    QuantitySpec,
    RegimeKind,
    RegimeSpec,
)


def _split_head(src: str) -> Tuple[str, str, int]:
    text = src.strip()
    if not text:
        raise ParseError("empty specification", 0)
    lead = len(src) - len(src.lstrip())
    head, sep, body = text.partition(":")
    return head, body, lead + len(head) + len(sep)


def _params(src: str, body: str, offset: int, sep: str = ";") -> Dict[str, Tuple[str, int]]:
    """key=value 列表, 值附带其在 src 中的偏移"""
    params: Dict[str, Tuple[str, int]] = {}
    position = offset
    for part in body.split(sep):
        key, eq, value = part.partition("=")
        if not eq or not key.strip():
            raise ParseError(f"expected key=value, found {part!r}", _bytes(src, position))
        params[key.strip()] = (value.strip(), position + len(key) + 1)
        position += len(part) + len(sep)
    return params


def _bytes(src: str, index: int) -> int:
    return len(src[:index].encode("utf-8"))


def _float(src: str, value: str, offset: int) -> float:
    try:
        return float(value)
    except ValueError:
        raise ParseError(f"invalid number {value!r}", _bytes(src, offset))


def _floats(src: str, value: str, offset: int) -> List[float]:
    out = []
    position = offset
    for item in value.split(","):
        out.append(_float(src, item.strip(), position))
        position += len(item) + 1
    return out


def _require(src: str, params: Dict[str, Tuple[str, int]], keys: Tuple[str, ...],
             offset: int) -> None:
    missing = [k for k in keys if k not in params]
    extra = [k for k in params if k not in keys]
    if missing:
        raise ParseError(f"missing parameter {missing[0]!r}", _bytes(src, offset))
    if extra:
        raise ParseError(f"unknown parameter {extra[0]!r}", _bytes(src, params[extra[0]][1]))


def parse_distribution(src: str):
    """
    解析分布字符串

    Args:
        src: 例如 "lp:p=1", "product:normal", "mixture:v=1,2;w=0.5,0.5", "orlicz:abs(x)^4"

    Returns:
        DistributionSpec
    """
    from ldp_toolkit.core.distributions import GaussianMixture, LpBall, OrliczBall, Product
    from ldp_toolkit.protocol.orlicz_expr import parse_orlicz

    head, body, offset = _split_head(src)
    if head == "lp":
        params = _params(src, body, offset)
        _require(src, params, ("p",), offset)
        value, at = params["p"]
        return LpBall(_float(src, value, at))
    if head == "product":
        if body == MarginalKind.PGN.value or body.startswith(MarginalKind.PGN.value + ":"):
            inner = offset + len(MarginalKind.PGN.value) + 1
            params = _params(src, body[len(MarginalKind.PGN.value) + 1:], inner)
            _require(src, params, ("p",), inner)
            value, at = params["p"]
            return Product(MarginalKind.PGN, _float(src, value, at))
        try:
            marginal = MarginalKind(body.strip())
        except ValueError:
            raise ParseError(f"unknown marginal {body!r}", _bytes(src, offset))
        return Product(marginal)
    if head == "mixture":
        params = _params(src, body, offset)
        _require(src, params, ("v", "w"), offset)
        variances = _floats(src, *params["v"])
        weights = _floats(src, *params["w"])
        return GaussianMixture(tuple(variances), tuple(weights))
    if head == "orlicz":
        try:
            expr = parse_orlicz(body)
        except ParseError as exc:
            raise ParseError(exc.reason, _bytes(src, offset) + exc.offset) from exc
        return OrliczBall(expr.to_orlicz())
    raise ParseError(f"unknown distribution family {head!r}", _bytes(src, len(src) - len(src.lstrip())))


def parse_regime(src: str) -> RegimeSpec:
    """
    解析规模字符串

    Args:
        src: "constant:k=3", "sublinear:alpha=0.6" 或 "linear:lambda=0.5"

    Returns:
        RegimeSpec
    """
    head, body, offset = _split_head(src)
    keys = {RegimeKind.CONSTANT.value: "k", RegimeKind.SUBLINEAR.value: "alpha",
            RegimeKind.LINEAR.value: "lambda"}
    if head not in keys:
        raise ParseError(f"unknown regime {head!r}", 0)
    params = _params(src, body, offset)
    _require(src, params, (keys[head],), offset)
    value, at = params[keys[head]]
    number = _float(src, value, at)
    try:
        if head == RegimeKind.CONSTANT.value:
            if not number.is_integer():
                raise ParseError(f"k must be an integer, got {value!r}", _bytes(src, at))
            return RegimeSpec(kind=RegimeKind.CONSTANT, k=int(number))
        if head == RegimeKind.SUBLINEAR.value:
            return RegimeSpec(kind=RegimeKind.SUBLINEAR, alpha=number)
        return RegimeSpec(kind=RegimeKind.LINEAR, lam=number)
    except ValidationError as exc:
        raise SemanticError(f"invalid regime {src.strip()!r}",
                            {"errors": [e["msg"] for e in exc.errors()]}) from exc


def parse_quantity(src: str) -> QuantitySpec:
    """
    解析统计量字符串

    Args:
        src: "norm:q=2", "norm_kn:q=1" 或 "empirical"

    Returns:
        QuantitySpec
    """
    head, body, offset = _split_head(src)
    try:
        kind = QuantityKind(head)
    except ValueError:
        raise ParseError(f"unknown quantity {head!r}", 0)
    if kind == QuantityKind.EMPIRICAL or not body:
        if body:
            raise ParseError("empirical quantity takes no parameters", _bytes(src, offset))
        return QuantitySpec(kind=kind)
    params = _params(src, body, offset)
    _require(src, params, ("q",), offset)
    value, at = params["q"]
    try:
        return QuantitySpec(kind=kind, q=_float(src, value, at))
    except ValidationError as exc:
        raise SemanticError(f"invalid quantity {src.strip()!r}",
                            {"errors": [e["msg"] for e in exc.errors()]}) from exc
