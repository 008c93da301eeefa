"""
Protocol Models
"""
from ldp_toolkit.protocol.models import (
    RegimeKind,
    QuantityKind,
    MarginalKind,
    AssumptionTag,
    ConstantVariant,
    SublinearCase,
    SpeedCase,
    LpCase,
    LinearCase,
    RegimeSpec,
    QuantitySpec,
    TailEstimate,
    DecaySeries,
    RateCurveRow,
    ShellEstimate,
    W1Row
)

__all__ = [
    "RegimeKind",
    "QuantityKind",
    "MarginalKind",
    "AssumptionTag",
    "ConstantVariant",
    "SublinearCase",
    "SpeedCase",
    "LpCase",
    "LinearCase",
    "RegimeSpec",
    "QuantitySpec",
    "TailEstimate",
    "DecaySeries",
    "RateCurveRow",
    "ShellEstimate",
    "W1Row"
]
