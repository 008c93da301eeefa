"""
Measure arguments for empirical-measure rate functions
"""
import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from ldp_toolkit.errors import InvalidMeasure, InvalidSimplex
from ldp_toolkit.monitoring.logging_config import get_logger

logger = get_logger(__name__)

INF = math.inf
LOG_2PI_E = math.log(2.0 * math.pi * math.e)
# 舍入误差范围内的负值截断为 0
ROUNDOFF = 1e-9


@dataclass(frozen=True)
class GaussianMeasure:
    """中心高斯 N(0, σ²)"""
    sigma: float

    def __post_init__(self) -> None:
        if not (self.sigma > 0 and math.isfinite(self.sigma)):
            raise InvalidMeasure(f"sigma must be positive, got {self.sigma}", {"sigma": self.sigma})

    def entropy(self) -> float:
        return 0.5 * LOG_2PI_E + math.log(self.sigma)

    def second_moment(self) -> float:
        return self.sigma * self.sigma

    def scaled(self, c: float) -> "GaussianMeasure":
        """X/c 的分布"""
        return GaussianMeasure(self.sigma / c)


@dataclass(frozen=True, eq=False)
class HistogramMeasure:
    """
    分段常数密度

    Attributes:
        edges: 递增的分箱边界, 长度 K+1
        masses: 各箱质量, 长度 K, 和为 1
    """
    edges: np.ndarray
    masses: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        edges = np.asarray(self.edges, dtype=float)
        masses = np.asarray(self.masses, dtype=float)
        if edges.ndim != 1 or len(edges) != len(masses) + 1 or len(masses) == 0:
            raise InvalidMeasure("histogram needs K+1 edges for K masses",
                                 {"edges": len(edges), "masses": len(masses)})
        if not np.all(np.diff(edges) > 0):
            raise InvalidMeasure("histogram edges must be strictly increasing")
        if np.any(masses < 0) or abs(float(masses.sum()) - 1.0) > 1e-9:
            raise InvalidSimplex("histogram masses must be nonnegative and sum to 1",
                                 {"sum": float(masses.sum())})
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "masses", masses)

    @classmethod
    def from_samples(cls, samples: np.ndarray) -> "HistogramMeasure":
        """Freedman-Diaconis 分箱的经验直方图"""
        samples = np.asarray(samples, dtype=float)
        if samples.size == 0:
            raise InvalidMeasure("cannot build a histogram from an empty sample")
        counts, edges = np.histogram(samples, bins="fd")
        return cls(edges, counts / counts.sum())

    def entropy(self) -> float:
        widths = np.diff(self.edges)
        w = self.masses
        positive = w > 0
        # 0 log 0 = 0
        return float(-np.sum(w[positive] * np.log(w[positive] / widths[positive])))

    def second_moment(self) -> float:
        a, b = self.edges[:-1], self.edges[1:]
        return float(np.sum(self.masses * (a * a + a * b + b * b) / 3.0))

    def scaled(self, c: float) -> "HistogramMeasure":
        return HistogramMeasure(self.edges / c, self.masses)


MeasureArg = Union[GaussianMeasure, HistogramMeasure]


def _rate_value(value: float, nu: MeasureArg, rate: str) -> float:
    """截断舍入误差; 更负的值原样返回并告警 (直方图的离散化偏差)"""
    if value >= -ROUNDOFF:
        return max(value, 0.0)
    logger.warning("negative_measure_rate", rate=rate, value=value, measure=type(nu).__name__)
    return value


def entropy_H_lambda(lam: float, nu: MeasureArg) -> float:
    """
    线性规模下经验测度的速率 H_λ(ν)

    -λ h(ν) + (λ/2) log(2πe) + ((1-λ)/2) log((1-λ)/(1-λ M₂(ν))),
    λ M₂(ν) > 1 时为 +inf (λ < 1 时边界 λ M₂ = 1 也为 +inf)

    Args:
        lam: λ ∈ (0, 1]
        nu: 测度

    Returns:
        速率值
    """
    if not 0.0 < lam <= 1.0:
        raise InvalidMeasure(f"lambda must lie in (0, 1], got {lam}", {"lambda": lam})
    m2 = nu.second_moment()
    value = -lam * nu.entropy() + 0.5 * lam * LOG_2PI_E
    if lam == 1.0:
        if m2 > 1.0:
            return INF
        return _rate_value(value, nu, "H_lambda")
    denom = 1.0 - lam * m2
    if not denom > 0:
        return INF
    value += 0.5 * (1.0 - lam) * math.log((1.0 - lam) / denom)
    return _rate_value(value, nu, "H_lambda")


def relative_entropy_to_gaussian(nu: MeasureArg, c: float) -> float:
    """
    相对熵 H(ν | N(0, c²))

    Args:
        nu: 测度
        c: 参考高斯的标准差

    Returns:
        -h(ν) + ½ log(2πc²) + M₂(ν)/(2c²)
    """
    if not c > 0:
        raise InvalidMeasure(f"reference sigma must be positive, got {c}", {"c": c})
    if isinstance(nu, GaussianMeasure):
        ratio = nu.sigma / c
        return max(0.5 * (ratio * ratio - 1.0) - math.log(ratio), 0.0)
    value = -nu.entropy() + 0.5 * math.log(2.0 * math.pi * c * c) + nu.second_moment() / (2.0 * c * c)
    return _rate_value(value, nu, "relative_entropy")
