"""
Orlicz expression parser

Grammar (precedence ^ > unary - > * / > + -):
    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := "-" unary | power
    power  := atom ("^" unary)?
    atom   := NUMBER | "x" | FUNC "(" expr ")" | "(" expr ")"
    FUNC   := abs | cosh | exp
"""
import math
import re
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

import numpy as np

from ldp_toolkit.errors import ParseError, SemanticError

_NUMBER = re.compile(r"(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?")
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_FUNCS: Dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "abs": np.abs,
    "cosh": np.cosh,
    "exp": np.exp,
}
# 对称性与凸性检查的网格
_CHECK_GRID = np.linspace(0.0, 8.0, 81)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    offset: int


class Node:
    """表达式树节点"""

    offset: int = 0

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def has_variable(self) -> bool:
        raise NotImplementedError


@dataclass(frozen=True)
class Num(Node):
    value: float
    offset: int = 0

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        return np.full_like(x, self.value)

    def has_variable(self) -> bool:
        return False


@dataclass(frozen=True)
class Var(Node):
    offset: int = 0

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        return x

    def has_variable(self) -> bool:
        return True


@dataclass(frozen=True)
class Call(Node):
    name: str
    arg: Node
    offset: int = 0

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        return _FUNCS[self.name](self.arg.evaluate(x))

    def has_variable(self) -> bool:
        return self.arg.has_variable()


@dataclass(frozen=True)
class Neg(Node):
    arg: Node
    offset: int = 0

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        return -self.arg.evaluate(x)

    def has_variable(self) -> bool:
        return self.arg.has_variable()


@dataclass(frozen=True)
class BinOp(Node):
    op: str
    left: Node
    right: Node
    offset: int = 0

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        a, b = self.left.evaluate(x), self.right.evaluate(x)
        if self.op == "+":
            return a + b
        if self.op == "-":
            return a - b
        if self.op == "*":
            return a * b
        return a / b

    def has_variable(self) -> bool:
        return self.left.has_variable() or self.right.has_variable()


@dataclass(frozen=True)
class Pow(Node):
    """非整数指数时底数自动取绝对值"""
    base: Node
    exponent: float
    offset: int = 0

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        b = self.base.evaluate(x)
        if float(self.exponent).is_integer():
            return b ** self.exponent
        return np.abs(b) ** self.exponent

    def has_variable(self) -> bool:
        return self.base.has_variable()


def _byte_offset(src: str, index: int) -> int:
    return len(src[:index].encode("utf-8"))


def tokenize(src: str) -> List[Token]:
    """
    词法分析

    Args:
        src: 表达式源码

    Returns:
        Token 列表 (以 "end" 结尾)
    """
    tokens = []
    i = 0
    while i < len(src):
        ch = src[i]
        if ch.isspace():
            i += 1
            continue
        if ch in "+-*/^()":
            tokens.append(Token(ch, ch, i))
            i += 1
            continue
        match = _NUMBER.match(src, i)
        if match:
            tokens.append(Token("number", match.group(0), i))
            i = match.end()
            continue
        match = _NAME.match(src, i)
        if match:
            tokens.append(Token("name", match.group(0), i))
            i = match.end()
            continue
        raise ParseError(f"unexpected character {ch!r}", _byte_offset(src, i))
    tokens.append(Token("end", "", len(src)))
    return tokens


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.tokens = tokenize(src)
        self.pos = 0

    def error(self, message: str, token: Optional[Token] = None) -> ParseError:
        token = token or self.peek()
        return ParseError(message, _byte_offset(self.src, token.offset))

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def take(self, kind: Optional[str] = None) -> Token:
        token = self.peek()
        if kind is not None and token.kind != kind:
            expected = "end of input" if kind == "end" else repr(kind)
            raise self.error(f"expected {expected}, found {token.text or 'end of input'!r}")
        self.pos += 1
        return token

    def parse(self) -> Node:
        try:
            node = self.expr()
        except RecursionError:
            raise ParseError("expression nested too deeply", 0)
        self.take("end")
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.peek().kind in ("+", "-"):
            op = self.take()
            node = BinOp(op.kind, node, self.term(), op.offset)
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.peek().kind in ("*", "/"):
            op = self.take()
            node = BinOp(op.kind, node, self.unary(), op.offset)
        return node

    def unary(self) -> Node:
        if self.peek().kind == "-":
            op = self.take()
            return Neg(self.unary(), op.offset)
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        if self.peek().kind != "^":
            return base
        caret = self.take()
        exponent_start = self.peek()
        exponent = self.unary()
        if exponent.has_variable():
            raise self.error("exponent must be a constant", exponent_start)
        with np.errstate(all="ignore"):
            value = float(exponent.evaluate(np.zeros(1))[0])
        if not math.isfinite(value):
            raise self.error("exponent is not finite", exponent_start)
        return Pow(base, value, caret.offset)

    def atom(self) -> Node:
        token = self.peek()
        if token.kind == "number":
            self.take()
            try:
                return Num(float(token.text), token.offset)
            except ValueError:
                raise self.error(f"invalid number {token.text!r}", token)
        if token.kind == "name":
            self.take()
            if token.text == "x":
                return Var(token.offset)
            if token.text not in _FUNCS:
                raise self.error(f"unknown name {token.text!r}", token)
            self.take("(")
            arg = self.expr()
            self.take(")")
            return Call(token.text, arg, token.offset)
        if token.kind == "(":
            self.take()
            node = self.expr()
            self.take(")")
            return node
        raise self.error(f"unexpected {token.text or 'end of input'!r}", token)


@dataclass(frozen=True)
class OrliczExpr:
    """
    解析后的 Orlicz 表达式

    Attributes:
        source: 源码
        root: 表达式树
    """
    source: str
    root: Node

    def __call__(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        with np.errstate(all="ignore"):
            return np.asarray(self.root.evaluate(x), dtype=float)

    def to_orlicz(self):
        """转换为 OrliczFunction (在 |x| 上求值)"""
        from ldp_toolkit.core.distributions import OrliczFunction

        return OrliczFunction(func=self.__call__, label=self.source.strip())


def _check_semantics(expr: OrliczExpr) -> None:
    plus, minus = expr(_CHECK_GRID), expr(-_CHECK_GRID)
    both = np.isfinite(plus) & np.isfinite(minus)
    if not both[0]:
        raise SemanticError("V(0) is not finite", {"source": expr.source})
    gap = np.abs(plus[both] - minus[both])
    if np.any(gap > 1e-9 * (1.0 + np.abs(plus[both]))):
        raise SemanticError("Orlicz function must be even", {"source": expr.source})
    if np.any(np.isfinite(plus) != np.isfinite(minus)):
        raise SemanticError("Orlicz function must be even", {"source": expr.source})
    expr.to_orlicz().validate()


def parse_orlicz(src: str) -> OrliczExpr:
    """
    解析 Orlicz 表达式并检查 V(0) = 0、对称性与凸性

    Args:
        src: 表达式源码, 例如 "abs(x)^4" 或 "cosh(x) - 1"

    Returns:
        OrliczExpr

    Raises:
        ParseError: 语法错误 (带字节偏移)
        SemanticError: 不是合法的 Orlicz 函数
    """
    if not src or not src.strip():
        raise ParseError("empty expression", 0)
    expr = OrliczExpr(src, _Parser(src).parse())
    _check_semantics(expr)
    return expr


def parse_orlicz_function(src: str):
    """解析并返回 OrliczFunction"""
    return parse_orlicz(src).to_orlicz()

