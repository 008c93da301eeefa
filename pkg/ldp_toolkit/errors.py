"""
LDP Toolkit Errors
"""
from typing import Any, Dict, Optional


class LdpError(Exception):
    """工具包错误基类"""

    code: str = "LDP_000"
    exit_code: int = 1

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def to_dict(self) -> Dict[str, Any]:
        """
        转换为错误信息字典

        Returns:
            包含 code / message / details 的字典
        """
        return {
            "code": self.code,
            "message": self.message,
            "details": self.details,
        }

    def __str__(self) -> str:
        return f"{self.code} {self.message}"


class NumericalError(LdpError):
    """数值计算失败 (CLI 退出码 1)"""
    exit_code = 1


class InputError(LdpError, ValueError):
    """输入参数或语法错误 (CLI 退出码 2)"""
    exit_code = 2


# convexkit
class InvalidTol(InputError):
    code = "LDP_CVX_001"


class NonIntegrable(NumericalError):
    code = "LDP_CVX_002"


class NotConvex(NumericalError):
    code = "LDP_CVX_003"


class BracketFailure(NumericalError):
    code = "LDP_CVX_004"


class Diverging(NumericalError):
    code = "LDP_CVX_005"


class NoSignChange(NumericalError):
    code = "LDP_CVX_006"


class EmptyDomain(NumericalError):
    code = "LDP_CVX_007"


# distributions
class InvalidP(InputError):
    code = "LDP_DIST_001"


class DegenerateBody(NumericalError):
    code = "LDP_DIST_002"


class InvalidSimplex(InputError):
    code = "LDP_DIST_003"


class Unsupported(InputError):
    code = "LDP_DIST_004"


# stiefel
class InvalidDims(InputError):
    code = "LDP_STF_001"


class DimMismatch(InputError):
    code = "LDP_STF_002"


class InvalidQ(InputError):
    code = "LDP_STF_003"


# ratefn
class InvalidMeasure(InputError):
    code = "LDP_RATE_001"


# orlicz
class NoBracket(NumericalError):
    code = "LDP_ORL_001"


class NotSuperquadratic(InputError):
    code = "LDP_ORL_002"


# mc
class EmptyMeasure(NumericalError):
    code = "LDP_MC_001"


# cli
class ParseError(InputError):
    code = "LDP_CLI_001"

    def __init__(self, message: str, offset: int, details: Optional[Dict[str, Any]] = None):
        super().__init__(f"{message} (at byte {offset})", {"offset": offset, **(details or {})})
        self.offset = offset
        self.reason = message


class SemanticError(InputError):
    code = "LDP_CLI_002"


class UsageError(InputError):
    code = "LDP_CLI_003"
