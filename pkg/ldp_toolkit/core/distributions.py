"""
High-dimensional measure families, samplers and LDP metadata
"""
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np

from ldp_toolkit.config import settings
from ldp_toolkit.core.ratefn.cramer import (
    chi_square_rate,
    log_mgf_square_pgn,
    mp,
    rate_lp_norm,
    rate_product,
)
from ldp_toolkit.core.ratefn.handles import RateFunctionHandle, RateKind
from ldp_toolkit.core.ratefn.regimes import lp_speed_exponent
from ldp_toolkit.errors import (
    DegenerateBody,
    InvalidP,
    InvalidSimplex,
    NotSuperquadratic,
    SemanticError,
    Unsupported,
)
from ldp_toolkit.monitoring.logging_config import get_logger
from ldp_toolkit.protocol.models import (
    AssumptionTag,
    ConstantVariant,
    LinearCase,
    MarginalKind,
    RegimeKind,
    RegimeSpec,
    SpeedCase,
    SublinearCase,
)

logger = get_logger(__name__)

INF = math.inf
# 单次生成的最大元素数 (行数 × 维数)
_CHUNK_ELEMENTS = 2 ** 22
# 并行 hit-and-run 链数上限
_MAX_CHAINS = 256


class GrowthKind(str, Enum):
    """V(x)/x² 的增长类型"""
    SUPER = "superquadratic"
    BORDERLINE = "borderline"
    SUB = "subquadratic"


@dataclass(frozen=True)
class OrliczFunction:
    """
    对称凸函数 V, V(0) = 0

    Attributes:
        func: 定义在 |x| 上的向量化函数
        bound: D_V = [-bound, bound], 域外为 +inf
        label: 描述 (内置标签或表达式源码)
        inverse: 可选, [0, ∞) 上 V 的解析反函数
    """
    func: Callable[[np.ndarray], np.ndarray]
    bound: float = INF
    label: str = ""
    inverse: Optional[Callable[[np.ndarray], np.ndarray]] = field(default=None, compare=False)

    @classmethod
    def power(cls, p: float) -> "OrliczFunction":
        """V(x) = |x|^p"""
        if not p >= 1:
            raise InvalidP(f"Orlicz power must be >= 1, got {p}", {"p": p})
        return cls(func=lambda a: a ** p, label=f"abs(x)^{p:g}",
                   inverse=lambda level: level ** (1.0 / p))

    @classmethod
    def cosh(cls) -> "OrliczFunction":
        """V(x) = cosh(x) - 1"""
        return cls(func=lambda a: np.cosh(a) - 1.0, label="cosh(x) - 1",
                   inverse=lambda level: np.arccosh(1.0 + level))

    def __call__(self, x: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
        a = np.abs(np.asarray(x, dtype=float))
        with np.errstate(over="ignore", invalid="ignore"):
            v = np.asarray(self.func(a), dtype=float)
        v = np.where(np.isnan(v), INF, v)
        v = np.where(a > self.bound, INF, v)
        return float(v) if v.ndim == 0 else v

    def validate(self) -> "OrliczFunction":
        """
        检查 V(0) = 0 与网格上的凸性

        Returns:
            self

        Raises:
            SemanticError: 不满足 Orlicz 函数的条件
        """
        v0 = self(0.0)
        if not abs(v0) <= 1e-12:
            raise SemanticError(f"V(0) must be 0, got {v0}", {"label": self.label, "v0": v0})
        top = min(self.bound, 8.0)
        grid = np.linspace(-top, top, 161)
        values = self(grid)
        finite = np.isfinite(values)
        if np.any(values[finite] < -1e-12):
            raise SemanticError("V must be nonnegative", {"label": self.label})
        second = values[:-2] + values[2:] - 2.0 * values[1:-1]
        usable = finite[:-2] & finite[2:] & finite[1:-1]
        scale = 1e-9 * (1.0 + np.abs(values[1:-1]))
        if np.any(second[usable] < -scale[usable]):
            raise SemanticError("V is not convex on the sampled grid", {"label": self.label})
        return self

    def growth(self) -> GrowthKind:
        """V(x)/x² 在 x = 1, 2, 4, ..., 2^10 上的增长类型"""
        xs = 2.0 ** np.arange(11)
        ratios = self(xs) / xs ** 2
        if np.isinf(ratios[-1]) or (ratios[-1] > ratios[-2] and ratios[-1] > 1e3):
            return GrowthKind.SUPER
        if ratios[-1] < ratios[-2] * (1.0 - 1e-9):
            return GrowthKind.SUB
        return GrowthKind.BORDERLINE

    def require_superquadratic(self) -> "OrliczFunction":
        """次二次增长时拒绝, 边界情形给出警告"""
        kind = self.growth()
        if kind == GrowthKind.SUB:
            raise NotSuperquadratic("Orlicz function grows slower than x^2",
                                    {"label": self.label})
        if kind == GrowthKind.BORDERLINE:
            logger.warning("orlicz_not_superquadratic", label=self.label)
        return self

    def level_point(self, level: np.ndarray) -> np.ndarray:
        """
        V(t) = level 的非负解 t (截断到 D_V)

        Args:
            level: 非负水平值数组

        Returns:
            t 数组
        """
        level = np.maximum(np.asarray(level, dtype=float), 0.0)
        if self.inverse is not None:
            with np.errstate(over="ignore"):
                return np.minimum(self.inverse(level), self.bound)
        hi = np.ones_like(level) if math.isinf(self.bound) else np.full_like(level, self.bound)
        if math.isinf(self.bound):
            for _ in range(settings.LDP_BRACKET_CAP):
                grow = self(hi) <= level
                if not np.any(grow):
                    break
                hi = np.where(grow, 2.0 * hi, hi)
        lo = np.zeros_like(level)
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            inside = self(mid) <= level
            lo = np.where(inside, mid, lo)
            hi = np.where(inside, hi, mid)
        return lo


# 分布族
@dataclass(frozen=True)
class LpBall:
    """n^{1/p} B_p^n 上的均匀分布"""
    p: float

    def __post_init__(self) -> None:
        if not (self.p >= 1 and math.isfinite(self.p)):
            raise InvalidP(f"p must be >= 1, got {self.p}", {"p": self.p})

    def label(self) -> str:
        return f"lp:p={self.p:g}"


@dataclass(frozen=True)
class Product:
    """i.i.d. 坐标"""
    marginal: MarginalKind
    p: float = 2.0

    def __post_init__(self) -> None:
        if self.marginal == MarginalKind.PGN and not self.p >= 1:
            raise InvalidP(f"p must be >= 1, got {self.p}", {"p": self.p})

    def label(self) -> str:
        if self.marginal == MarginalKind.PGN:
            return f"product:pgn:p={self.p:g}"
        return f"product:{self.marginal.value}"


@dataclass(frozen=True)
class GaussianMixture:
    """每个向量先按权重选一个方差, 再取 n 个 i.i.d. N(0, σ²)"""
    variances: Tuple[float, ...]
    weights: Tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.variances) == 0 or len(self.variances) != len(self.weights):
            raise InvalidSimplex("variances and weights must be non-empty and of equal length",
                                 {"variances": len(self.variances), "weights": len(self.weights)})
        if any(not v > 0 for v in self.variances):
            raise InvalidSimplex("variances must be positive", {"variances": list(self.variances)})
        if any(w < 0 for w in self.weights) or abs(sum(self.weights) - 1.0) > 1e-9:
            raise InvalidSimplex("weights must be nonnegative and sum to 1",
                                 {"weights": list(self.weights)})

    def label(self) -> str:
        v = ",".join(f"{x:g}" for x in self.variances)
        w = ",".join(f"{x:g}" for x in self.weights)
        return f"mixture:v={v};w={w}"


@dataclass(frozen=True)
class OrliczBall:
    """B_V^n = {Σ V(x_i) <= n} 上的均匀分布"""
    V: OrliczFunction

    def __post_init__(self) -> None:
        self.V.validate().require_superquadratic()

    def label(self) -> str:
        return f"orlicz:{self.V.label}"


DistributionSpec = Union[LpBall, Product, GaussianMixture, OrliczBall]


def family_name(dist: DistributionSpec) -> str:
    """指标标签用的族名"""
    return {LpBall: "lp", Product: "product", GaussianMixture: "mixture",
            OrliczBall: "orlicz"}[type(dist)]


# 采样
def _shape(n: int, size: Optional[int]) -> Tuple[int, ...]:
    return (n,) if size is None else (size, n)


def sample_pgn(p: float, n: int, rng: np.random.Generator,
               size: Optional[int] = None) -> np.ndarray:
    """
    p-广义正态 f_p(x) ∝ exp(-|x|^p/p) 的 i.i.d. 样本

    |ξ| = (p G)^{1/p}, G ~ Gamma(1/p, 1), 符号独立

    Args:
        p: 指数 (>= 1)
        n: 维数
        rng: 随机数生成器
        size: 可选的向量个数

    Returns:
        形状 (n,) 或 (size, n)
    """
    if not (p >= 1 and math.isfinite(p)):
        raise InvalidP(f"p must be >= 1, got {p}", {"p": p})
    shape = _shape(n, size)
    magnitude = (p * rng.standard_gamma(1.0 / p, shape)) ** (1.0 / p)
    signs = rng.integers(0, 2, shape) * 2 - 1
    return magnitude * signs


def sample_lp_ball(p: float, n: int, rng: np.random.Generator,
                   size: Optional[int] = None) -> np.ndarray:
    """
    n^{1/p} B_p^n 上的均匀样本

    X = n^{1/p} U^{1/n} ξ / ‖ξ‖_p

    Args:
        p: 指数 (>= 1)
        n: 维数
        rng: 随机数生成器
        size: 可选的向量个数

    Returns:
        形状 (n,) 或 (size, n)
    """
    xi = sample_pgn(p, n, rng, size)
    u = rng.random(() if size is None else (size, 1))
    norm_p = np.sum(np.abs(xi) ** p, axis=-1, keepdims=True) ** (1.0 / p)
    x = n ** (1.0 / p) * u ** (1.0 / n) * xi / norm_p
    radius = np.sum(np.abs(x) ** p, axis=-1) ** (1.0 / p)
    if np.any(radius > n ** (1.0 / p) * (1.0 + 1e-12)):
        raise DegenerateBody("lp sample left the ball", {"p": p, "n": n})
    return x


def sample_orlicz_ball(V: OrliczFunction, n: int, burnin: int, thin: int,
                       rng: np.random.Generator, size: Optional[int] = None) -> np.ndarray:
    """
    B_V^n 上的坐标 hit-and-run

    每一步随机选一个坐标 i, 在 {t : V(t) <= n - Σ_{j≠i} V(x_j)} 上均匀重采样。
    burnin 与 thin 以 sweep (n 次单坐标移动) 计; 多条链并行推进。

    Args:
        V: Orlicz 函数
        n: 维数
        burnin: 预热 sweep 数
        thin: 相邻输出之间的 sweep 数
        rng: 随机数生成器
        size: 可选的向量个数

    Returns:
        形状 (n,) 或 (size, n)
    """
    if burnin < 1 or thin < 1:
        raise InvalidP("burnin and thin must be >= 1", {"burnin": burnin, "thin": thin})
    count = 1 if size is None else size
    chains = min(count, _MAX_CHAINS)
    per_chain = -(-count // chains)
    x = np.zeros((chains, n))
    total = np.zeros(chains)
    rows = np.arange(chains)

    def sweep() -> None:
        nonlocal total
        for _ in range(n):
            i = rng.integers(0, n, chains)
            old = V(x[rows, i])
            residual = n - (total - old)
            if np.any(residual < -1e-9 * n):
                raise DegenerateBody("conditional interval collapsed",
                                     {"n": n, "residual": float(residual.min())})
            half = V.level_point(residual)
            new = rng.uniform(-half, half)
            x[rows, i] = new
            total = total - old + V(new)
        # 重新累加以消除舍入漂移
        total = np.sum(V(x), axis=1)

    for _ in range(burnin):
        sweep()
    out = np.empty((chains * per_chain, n))
    for j in range(per_chain):
        for _ in range(thin):
            sweep()
        out[j * chains:(j + 1) * chains] = x
    out = out[:count]
    if np.any(np.sum(V(out), axis=1) > n * (1.0 + 1e-9)):
        raise DegenerateBody("hit-and-run sample left the Orlicz ball", {"n": n})
    return out[0] if size is None else out


def sample_product(marginal: MarginalKind, n: int, rng: np.random.Generator,
                   size: Optional[int] = None, p: float = 2.0) -> np.ndarray:
    """
    i.i.d. 坐标的向量

    Args:
        marginal: 边缘分布
        n: 维数
        rng: 随机数生成器
        size: 可选的向量个数
        p: pgn 边缘的指数

    Returns:
        形状 (n,) 或 (size, n)
    """
    shape = _shape(n, size)
    marginal = MarginalKind(marginal)
    if marginal == MarginalKind.NORMAL:
        return rng.standard_normal(shape)
    if marginal == MarginalKind.RADEMACHER:
        return (rng.integers(0, 2, shape) * 2 - 1).astype(float)
    if marginal == MarginalKind.POINT:
        return np.ones(shape)
    return sample_pgn(p, n, rng, size)


def sample_gaussian_mixture(variances: Sequence[float], weights: Sequence[float], n: int,
                            rng: np.random.Generator, size: Optional[int] = None) -> np.ndarray:
    """
    高斯尺度混合: 每个向量抽一次分量, 再取 n 个 i.i.d. N(0, σ²)

    Args:
        variances: 各分量方差
        weights: 权重 (单纯形)
        n: 维数
        rng: 随机数生成器
        size: 可选的向量个数

    Returns:
        形状 (n,) 或 (size, n)
    """
    mixture = GaussianMixture(tuple(variances), tuple(weights))
    count = 1 if size is None else size
    component = rng.choice(len(mixture.variances), size=count, p=np.asarray(mixture.weights))
    sigma = np.sqrt(np.asarray(mixture.variances))[component]
    x = sigma[:, None] * rng.standard_normal((count, n))
    return x[0] if size is None else x


def sample_vector(dist: DistributionSpec, n: int, rng: np.random.Generator,
                  size: Optional[int] = None) -> np.ndarray:
    """
    按分布族抽取向量

    Args:
        dist: 分布
        n: 维数
        rng: 随机数生成器
        size: 可选的向量个数

    Returns:
        形状 (n,) 或 (size, n)
    """
    if isinstance(dist, LpBall):
        return sample_lp_ball(dist.p, n, rng, size)
    if isinstance(dist, Product):
        return sample_product(dist.marginal, n, rng, size, p=dist.p)
    if isinstance(dist, GaussianMixture):
        return sample_gaussian_mixture(dist.variances, dist.weights, n, rng, size)
    if isinstance(dist, OrliczBall):
        return sample_orlicz_ball(dist.V, n, settings.LDP_ORLICZ_BURNIN_SWEEPS,
                                  settings.LDP_ORLICZ_THIN_SWEEPS, rng, size)
    raise Unsupported(f"unknown distribution family {type(dist).__name__}")


def sample_norm2(dist: DistributionSpec, n: int, size: int,
                 rng: np.random.Generator) -> np.ndarray:
    """
    ‖X‖₂ 的样本, 有径向表示时不生成整个向量

    Args:
        dist: 分布
        n: 维数
        size: 样本数
        rng: 随机数生成器

    Returns:
        形状 (size,)
    """
    if isinstance(dist, LpBall) and dist.p == 2.0:
        return math.sqrt(n) * rng.random(size) ** (1.0 / n)
    if isinstance(dist, Product):
        if dist.marginal == MarginalKind.NORMAL:
            return np.sqrt(rng.chisquare(n, size))
        if dist.marginal in (MarginalKind.RADEMACHER, MarginalKind.POINT):
            return np.full(size, math.sqrt(n))
    if isinstance(dist, GaussianMixture):
        component = rng.choice(len(dist.variances), size=size, p=np.asarray(dist.weights))
        sigma = np.sqrt(np.asarray(dist.variances))[component]
        return sigma * np.sqrt(rng.chisquare(n, size))
    if isinstance(dist, OrliczBall):
        return np.linalg.norm(sample_vector(dist, n, rng, size), axis=1)
    rows = max(1, _CHUNK_ELEMENTS // n)
    out = np.empty(size)
    for start in range(0, size, rows):
        stop = min(size, start + rows)
        out[start:stop] = np.linalg.norm(sample_vector(dist, n, rng, stop - start), axis=1)
    return out


# LDP 元数据
@dataclass(frozen=True)
class NormLdp:
    """‖X‖₂/√n 的 LDP 数据 (速度, 速率, 中心)"""
    speed: Callable[[int], float]
    speed_tag: str
    jx: RateFunctionHandle
    m: Optional[float]
    assumption_tag: AssumptionTag


@dataclass(frozen=True)
class LdpMetadata:
    """
    给定规模下的 LDP 元数据

    Attributes:
        speed: n ↦ s_n
        speed_tag: 速度描述
        jx: 范数速率 (J_X 或 J_X^{(r)})
        m: jx 的唯一极小点 (若存在)
        assumption_tag: A / A* / B / C
        case: 规模相关的情形 (ConstantVariant / SublinearCase / LinearCase)
        ratio: C 情形的 r = lim s_n / k_n
    """
    speed: Callable[[int], float]
    speed_tag: str
    jx: RateFunctionHandle
    m: Optional[float]
    assumption_tag: AssumptionTag
    case: Optional[str] = None
    ratio: Optional[float] = None


def _linear_speed(n: int) -> float:
    return float(n)


def _power_rate(p: float) -> RateFunctionHandle:
    return RateFunctionHandle(func=lambda x: x ** p / p, speed_tag=f"n^{lp_speed_exponent(p):.6g}",
                              center=0.0, domain=(0.0, INF), label=f"x^{p:g}/{p:g}")


def _recentred_power_rate(p: float) -> RateFunctionHandle:
    m = mp(p)

    def func(x: float) -> float:
        return max(x * x - m * m, 0.0) ** (0.5 * p) / p

    return RateFunctionHandle(func=func, speed_tag=f"n^{0.5 * p:g}", center=m,
                              domain=(m, INF), label=f"recentred_x^{p:g}")


def _chi_norm_rate(sigma: float = 1.0) -> RateFunctionHandle:
    return RateFunctionHandle(func=lambda x: chi_square_rate((x / sigma) ** 2), center=sigma,
                              domain=(0.0, INF), label=f"chi2_sigma={sigma:g}")


def norm_ldp(dist: DistributionSpec) -> NormLdp:
    """
    ‖X‖₂/√n 的 LDP (Assumption A 形式)

    Args:
        dist: 分布

    Returns:
        NormLdp
    """
    if isinstance(dist, LpBall):
        p = dist.p
        if p < 2.0:
            return NormLdp(lambda n: float(n) ** (0.5 * p), f"n^{0.5 * p:g}",
                           _recentred_power_rate(p), mp(p), AssumptionTag.A)
        hi = 1.0
        jx = RateFunctionHandle(func=lambda x: rate_lp_norm(p, x), kind=(
            RateKind.CLOSED_FORM if p == 2.0 else RateKind.VARIATIONAL),
            center=mp(p), domain=(0.0, hi), label=f"J_lp_{p:g}")
        return NormLdp(_linear_speed, "n", jx, mp(p), AssumptionTag.A_STAR)
    if isinstance(dist, Product):
        if dist.marginal == MarginalKind.NORMAL:
            return NormLdp(_linear_speed, "n", _chi_norm_rate(), 1.0, AssumptionTag.A_STAR)
        if dist.marginal in (MarginalKind.RADEMACHER, MarginalKind.POINT):
            return NormLdp(_linear_speed, "n", RateFunctionHandle.degenerate(1.0), 1.0,
                           AssumptionTag.A_STAR)
        if dist.p < 2.0:
            raise Unsupported("squared pgn coordinates with p < 2 have no exponential moment",
                              {"p": dist.p})
        lam = log_mgf_square_pgn(dist.p)
        jx = RateFunctionHandle(func=lambda x: rate_product(lam, x), kind=RateKind.VARIATIONAL,
                                center=mp(dist.p), domain=(0.0, INF),
                                label=f"J_pgn_{dist.p:g}")
        return NormLdp(_linear_speed, "n", jx, mp(dist.p), AssumptionTag.A_STAR)
    if isinstance(dist, GaussianMixture):
        sigmas = sorted(set(math.sqrt(v) for v in dist.variances))
        if len(sigmas) == 1:
            return NormLdp(_linear_speed, "n", _chi_norm_rate(sigmas[0]), sigmas[0], AssumptionTag.A_STAR)

        def func(x: float) -> float:
            return min(chi_square_rate((x / s) ** 2) for s in sigmas)

        jx = RateFunctionHandle(func=func, domain=(0.0, INF), label="chi2_mixture")
        return NormLdp(_linear_speed, "n", jx, None, AssumptionTag.A_STAR)
    if isinstance(dist, OrliczBall):
        from ldp_toolkit.core.orlicz import orlicz_bstar, orlicz_rate

        _, m = orlicz_bstar(dist.V)
        jx = RateFunctionHandle(func=lambda z: orlicz_rate(dist.V, z), kind=RateKind.VARIATIONAL,
                                center=m, domain=(0.0, INF), label=f"J_V[{dist.V.label}]")
        return NormLdp(_linear_speed, "n", jx, m, AssumptionTag.A_STAR)
    raise Unsupported(f"unknown distribution family {type(dist).__name__}")


def _lp_sublinear(p: float, regime: RegimeSpec) -> LdpMetadata:
    beta = lp_speed_exponent(p)
    jx = _power_rate(p)
    alpha = regime.alpha
    if abs(alpha - beta) <= 1e-12:
        return LdpMetadata(lambda n: float(n) ** beta, f"n^{beta:.6g}", jx, 0.0, AssumptionTag.C,
                           SublinearCase.R_POS.value, 1.0)
    if alpha < beta:
        return LdpMetadata(lambda n: float(n) ** beta, f"n^{beta:.6g}", jx, 0.0, AssumptionTag.C,
                           SublinearCase.R_INF.value, INF)

    def speed(n: int) -> float:
        return float(n) ** p * regime.k_of(n) ** (-0.5 * p)

    return LdpMetadata(speed, f"n^{p:g}*k_n^-{0.5 * p:g}", jx, 0.0, AssumptionTag.C,
                       SublinearCase.R0.value, 0.0)


def ldp_metadata(dist: DistributionSpec, regime: RegimeSpec) -> LdpMetadata:
    """
    (分布, 规模) 对应的速度、范数速率与中心

    Args:
        dist: 分布
        regime: 投影维数规模

    Returns:
        LdpMetadata
    """
    if isinstance(dist, LpBall) and dist.p < 2.0:
        p = dist.p
        beta = lp_speed_exponent(p)
        if regime.kind == RegimeKind.CONSTANT:
            return LdpMetadata(lambda n: float(n) ** beta, f"n^{beta:.6g}", _power_rate(p), 0.0,
                               AssumptionTag.B, ConstantVariant.B.value)
        if regime.kind == RegimeKind.SUBLINEAR:
            return _lp_sublinear(p, regime)
        base = norm_ldp(dist)
        return LdpMetadata(base.speed, base.speed_tag, base.jx, base.m, base.assumption_tag,
                           LinearCase.SLOW.value)
    base = norm_ldp(dist)
    case = {
        RegimeKind.CONSTANT: ConstantVariant.A_STAR.value,
        RegimeKind.SUBLINEAR: SublinearCase.A_STAR.value,
        RegimeKind.LINEAR: LinearCase.FULL.value,
    }[regime.kind]
    return LdpMetadata(base.speed, base.speed_tag, base.jx, base.m, base.assumption_tag, case)


def classify_speed_ratio(speed: Callable[[int], float], k_of_n: Callable[[int], int],
                         ladder: Optional[Sequence[int]] = None,
                         tol: Optional[float] = None) -> Tuple[SpeedCase, float]:
    """
    沿维数阶梯比较 s_n 与 k_n

    以 log(s_n/k_n) 对 log n 的平均斜率判断增长; 斜率在 tol 内时比值视为收敛。

    Args:
        speed: n ↦ s_n
        k_of_n: n ↦ k_n
        ladder: 维数阶梯
        tol: 斜率与比值容差

    Returns:
        (情形, 阶梯末端的比值)
    """
    ladder = list(settings.LDP_SPEED_LADDER if ladder is None else ladder)
    tol = settings.LDP_SPEED_RATIO_TOL if tol is None else tol
    if len(ladder) < 2:
        raise Unsupported("speed comparison needs at least two ladder points")
    ratios = [speed(n) / k_of_n(n) for n in ladder]
    slope = math.log(ratios[-1] / ratios[0]) / math.log(ladder[-1] / ladder[0])
    ratio = ratios[-1]
    if abs(slope) <= tol:
        if abs(ratio - 1.0) <= tol:
            return SpeedCase.BALANCED, ratio
        return SpeedCase.RATIO, ratio
    return (SpeedCase.FAST if slope > 0 else SpeedCase.SLOW), ratio


def thin_shell_centers(dist: DistributionSpec) -> List[float]:
    """‖X‖₂/√n 的几乎必然极限 (混合分布每个分量一个)"""
    if isinstance(dist, LpBall):
        return [mp(dist.p)]
    if isinstance(dist, Product):
        return [mp(dist.p) if dist.marginal == MarginalKind.PGN else 1.0]
    if isinstance(dist, GaussianMixture):
        return [math.sqrt(v) for v in dist.variances]
    if isinstance(dist, OrliczBall):
        from ldp_toolkit.core.orlicz import orlicz_bstar

        return [orlicz_bstar(dist.V)[1]]
    raise Unsupported(f"unknown distribution family {type(dist).__name__}")


def thin_shell_center(dist: DistributionSpec) -> float:
    """
    薄壳中心 m

    混合分布取第一个分量, 多个不同方差时给出警告

    Args:
        dist: 分布

    Returns:
        m
    """
    centers = thin_shell_centers(dist)
    if len(set(centers)) > 1:
        logger.warning("thin_shell_center_ambiguous", family=dist.label(), centers=centers)
    return centers[0]
