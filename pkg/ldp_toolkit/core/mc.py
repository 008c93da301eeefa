"""
Monte Carlo verification engine: tail ladders, exact oracles, distances, thin shells
"""
import math
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import stats

from ldp_toolkit.config import settings
from ldp_toolkit.core import distributions
from ldp_toolkit.core.convexkit import LogIntegrand, log_integral
from ldp_toolkit.core.ratefn import GaussianMeasure, predict_rate, rate_speed
from ldp_toolkit.core.stiefel import EmpiricalMeasure, projected_empirical_fast, projected_qnorm_batch
from ldp_toolkit.errors import EmptyMeasure, InvalidQ, Unsupported
from ldp_toolkit.monitoring.logging_config import get_logger
from ldp_toolkit.monitoring.metrics import record_mc_block
from ldp_toolkit.protocol.models import (
    DecaySeries,
    QuantityKind,
    QuantitySpec,
    RegimeKind,
    RegimeSpec,
    ShellEstimate,
    TailEstimate,
    W1Row,
)

logger = get_logger(__name__)

INF = math.inf
CI_LEVEL = 0.99
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(32)
# 正态分位数截断
_Z_CLIP = 12.0

SeedLike = Union[None, int, np.random.SeedSequence]
QuantityLike = Union[float, QuantitySpec]


def _seed_sequence(seed: SeedLike) -> np.random.SeedSequence:
    if isinstance(seed, np.random.SeedSequence):
        return seed
    return np.random.SeedSequence(seed)


def _as_quantity(quantity: QuantityLike) -> QuantitySpec:
    if isinstance(quantity, QuantitySpec):
        return quantity
    return QuantitySpec(kind=QuantityKind.NORM, q=float(quantity))


def clopper_pearson(hits: int, trials: int, level: float = CI_LEVEL) -> Tuple[float, float]:
    """
    二项比例的 Clopper-Pearson 置信区间

    Args:
        hits: 成功次数
        trials: 试验次数
        level: 置信水平

    Returns:
        (下界, 上界)
    """
    alpha = 1.0 - level
    lo = 0.0 if hits == 0 else float(stats.beta.ppf(alpha / 2.0, hits, trials - hits + 1))
    hi = 1.0 if hits == trials else float(stats.beta.ppf(1.0 - alpha / 2.0, hits + 1, trials - hits))
    return lo, hi


def _run_blocks(trials: int, seed: SeedLike, work: Callable[[int, np.random.Generator], int],
                family: str, quantity: str) -> int:
    """
    按固定大小分块运行, 每块一个独立随机流, 结果按块求和

    Args:
        trials: 总试验次数
        seed: 种子
        work: (块大小, rng) -> 命中数
        family: 分布族 (指标标签)
        quantity: 统计量 (指标标签)

    Returns:
        总命中数
    """
    block = settings.LDP_BLOCK_SIZE
    sizes = [min(block, trials - start) for start in range(0, trials, block)]
    streams = _seed_sequence(seed).spawn(len(sizes))

    def run(i: int) -> int:
        start = time.perf_counter()
        hits = int(work(sizes[i], np.random.default_rng(streams[i])))
        duration = time.perf_counter() - start
        record_mc_block(family, quantity, sizes[i], hits, duration)
        logger.debug("tail_block_done", block=i, trials=sizes[i], hits=hits, duration=duration)
        return hits

    workers = min(settings.worker_count, len(sizes))
    if workers <= 1:
        return sum(run(i) for i in range(len(sizes)))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return sum(pool.map(run, range(len(sizes))))


def quantity_scale(regime: RegimeSpec, quantity: QuantitySpec, n: int, k: int) -> float:
    """
    统计量的归一化因子

    norm_kn: k_n^{-1/q}; 常数规模下的 norm: n^{-1/2}; 其他: n^{-1/q}
    """
    if quantity.kind == QuantityKind.NORM_KN:
        return k ** (-1.0 / quantity.q)
    if regime.kind == RegimeKind.CONSTANT:
        return n ** -0.5
    return n ** (-1.0 / quantity.q)


def _speed(dist, regime: RegimeSpec, quantity: QuantitySpec) -> Callable[[int], float]:
    try:
        speed, _ = rate_speed(dist, regime, quantity)
    except Unsupported:
        speed = distributions.ldp_metadata(dist, regime).speed
    return speed


def estimate_tail(dist, regime: RegimeSpec, quantity: QuantityLike, x: float, n: int,
                  trials: int, seed: SeedLike = None) -> TailEstimate:
    """
    尾概率 P(scale · ‖AᵀX‖_q >= x) 的 Monte Carlo 估计

    Args:
        dist: 分布
        regime: 投影维数规模
        quantity: 统计量 (或 q, 表示 norm:q)
        x: 阈值
        n: 环境维数
        trials: 试验次数
        seed: 种子

    Returns:
        TailEstimate
    """
    quantity = _as_quantity(quantity)
    if quantity.kind == QuantityKind.EMPIRICAL:
        raise Unsupported("tail estimation needs a norm quantity", {"quantity": quantity.label()})
    if trials < 1:
        raise Unsupported("trials must be positive", {"trials": trials})
    k = regime.k_of(n)
    q = quantity.q
    scale = quantity_scale(regime, quantity, n, k)

    def work(size: int, rng: np.random.Generator) -> int:
        xnorm2 = distributions.sample_norm2(dist, n, size, rng)
        values = projected_qnorm_batch(n, k, q, xnorm2, rng) * scale
        return int(np.count_nonzero(values >= x))

    hits = _run_blocks(trials, seed, work, distributions.family_name(dist), quantity.kind.value)
    p_hat = hits / trials
    ci_lo, ci_hi = clopper_pearson(hits, trials)
    s_n = float(_speed(dist, regime, quantity)(n))
    rescaled = -math.log(p_hat) / s_n if hits > 0 else INF
    logger.info("tail_estimate_done", family=dist.label(), n=n, k=k, x=x, trials=trials,
                hits=hits, p_hat=p_hat)
    return TailEstimate(n=n, k=k, x=x, trials=trials, hits=hits, p_hat=p_hat, ci_lo=ci_lo,
                        ci_hi=ci_hi, s_n=s_n, rescaled=max(rescaled, 0.0), censored=hits == 0)


def exact_tail_oracle_p2(n: int, x: float, k: int = 1) -> float:
    """
    ℓ_2 球、k = 1 时 P(n^{-1/2}|AᵀX| >= x) 的精确值

    E[(1 - (x/|R|)^n)_+], R² ~ Beta(1/2, (n-1)/2)

    Args:
        n: 环境维数 (>= 2)
        x: 阈值
        k: 投影维数 (仅支持 1)

    Returns:
        概率
    """
    if k != 1:
        raise Unsupported("exact tail oracle covers k = 1 only", {"k": k})
    if x <= 0.0:
        return 1.0
    if x >= 1.0:
        return 0.0
    a, b = 0.5, 0.5 * (n - 1)
    x2 = x * x

    def g(s: np.ndarray) -> np.ndarray:
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.log1p(-np.power(x2 / s, 0.5 * n)) + stats.beta.logpdf(s, a, b)

    return math.exp(log_integral(LogIntegrand(g, x2, 1.0), tol=1e-10))


def decay_series(dist, regime: RegimeSpec, quantity: QuantityLike, x: float,
                 n_ladder: Sequence[int], trials: int, seed: SeedLike = None) -> DecaySeries:
    """
    沿维数阶梯的尾概率估计及理论速率

    Args:
        dist: 分布
        regime: 投影维数规模
        quantity: 统计量
        x: 阈值
        n_ladder: 维数阶梯
        trials: 每个 n 的试验次数
        seed: 种子

    Returns:
        DecaySeries
    """
    ladder = list(n_ladder)
    if not ladder:
        raise Unsupported("dimension ladder is empty")
    quantity = _as_quantity(quantity)
    rate, tag = predict_rate(dist, regime, quantity, x)
    streams = _seed_sequence(seed).spawn(len(ladder))
    estimates = [estimate_tail(dist, regime, quantity, x, n, trials, stream)
                 for n, stream in zip(ladder, streams)]
    return DecaySeries(estimates=estimates, rate_prediction=rate, speed_tag=tag)


def _gaussian_cell_moment(a: np.ndarray, sigma: float, z_lo: np.ndarray, z_hi: np.ndarray,
                          q: float) -> np.ndarray:
    """∫_{z_lo}^{z_hi} |a - σz|^q φ(z) dz, 逐格"""
    lo = np.clip(z_lo, -_Z_CLIP, _Z_CLIP)
    hi = np.clip(z_hi, -_Z_CLIP, _Z_CLIP)
    if q == 1.0:
        # 在 z = a/σ 处分段, 利用 ∫ z φ = -φ
        c = np.clip(a / sigma, lo, hi)
        Phi, phi = stats.norm.cdf, stats.norm.pdf
        left = a * (Phi(c) - Phi(lo)) - sigma * (phi(lo) - phi(c))
        right = sigma * (phi(c) - phi(hi)) - a * (Phi(hi) - Phi(c))
        return left + right
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    z = mid[:, None] + half[:, None] * _GL_NODES[None, :]
    values = np.abs(a[:, None] - sigma * z) ** q * stats.norm.pdf(z)
    return half * (values @ _GL_WEIGHTS)


def wasserstein_1d(q: float, a: EmpiricalMeasure,
                   b: Union[EmpiricalMeasure, GaussianMeasure]) -> float:
    """
    一维 q-Wasserstein 距离, 分位数耦合

    Args:
        q: 阶数 (>= 1)
        a: 经验测度
        b: 经验测度或高斯 γ_σ

    Returns:
        (∫₀¹ |F_a^{-1} - F_b^{-1}|^q du)^{1/q}
    """
    if not (q >= 1 and math.isfinite(q)):
        raise InvalidQ(f"q must lie in [1, inf), got {q}", {"q": q})
    if len(a.atoms) == 0:
        raise EmptyMeasure("first measure has no atoms")
    na = a.atoms.size
    if isinstance(b, GaussianMeasure):
        u = np.arange(na + 1) / na
        z = stats.norm.ppf(u)
        total = float(np.sum(_gaussian_cell_moment(a.atoms, b.sigma, z[:-1], z[1:], q)))
        return max(total, 0.0) ** (1.0 / q)
    if len(b.atoms) == 0:
        raise EmptyMeasure("second measure has no atoms")
    nb = b.atoms.size
    u = np.union1d(np.arange(1, na + 1) / na, np.arange(1, nb + 1) / nb)
    widths = np.diff(np.concatenate([[0.0], u]))
    mid = u - 0.5 * widths
    ia = np.minimum((mid * na).astype(int), na - 1)
    ib = np.minimum((mid * nb).astype(int), nb - 1)
    total = float(np.sum(widths * np.abs(a.atoms[ia] - b.atoms[ib]) ** q))
    return total ** (1.0 / q)


def ks_statistic(sample: EmpiricalMeasure, cdf: Callable) -> float:
    """
    经验分布函数与 cdf 的 Kolmogorov-Smirnov 距离

    Args:
        sample: 经验测度
        cdf: 分布函数 (可向量化)

    Returns:
        sup |F_n - F|
    """
    atoms = sample.atoms
    size = atoms.size
    try:
        values = np.asarray(cdf(atoms), dtype=float)
    except (TypeError, ValueError):
        values = None
    if values is None or values.shape != atoms.shape:
        values = np.array([float(cdf(float(v))) for v in atoms])
    upper = np.arange(1, size + 1) / size - values
    lower = values - np.arange(size) / size
    return float(max(upper.max(), lower.max(), 0.0))


def _shell_hits(dist, n: int, eps: float, m: float, trials: int, seed: SeedLike) -> int:
    root_n = math.sqrt(n)

    def work(size: int, rng: np.random.Generator) -> int:
        radius = distributions.sample_norm2(dist, n, size, rng) / root_n
        return int(np.count_nonzero(np.abs(radius - m) >= eps))

    return _run_blocks(trials, seed, work, distributions.family_name(dist), "shell")


def thin_shell_estimate(dist, n: int, eps: float, trials: int,
                        seed: SeedLike = None) -> ShellEstimate:
    """
    P(|‖X‖₂/√n - m| >= ε) 的估计及置信区间

    Args:
        dist: 分布
        n: 维数
        eps: 壳宽度
        trials: 试验次数
        seed: 种子

    Returns:
        ShellEstimate
    """
    m = distributions.thin_shell_center(dist)
    hits = _shell_hits(dist, n, eps, m, trials, seed)
    ci_lo, ci_hi = clopper_pearson(hits, trials)
    return ShellEstimate(n=n, eps=eps, m=m, trials=trials, hits=hits, p_hat=hits / trials,
                         ci_lo=ci_lo, ci_hi=ci_hi)


def thin_shell_probability(dist, n: int, eps: float, trials: int,
                           seed: SeedLike = None) -> float:
    """P(|‖X‖₂/√n - m| >= ε) 的 Monte Carlo 估计"""
    return thin_shell_estimate(dist, n, eps, trials, seed).p_hat


def exact_shell_oracle_p2(n: int, eps: float) -> float:
    """ℓ_2 球的薄壳概率 (1-ε)^n (ε < 1), 否则为 0"""
    if eps <= 0.0:
        return 1.0
    return (1.0 - eps) ** n if eps < 1.0 else 0.0


def empirical_w1_series(dist, regime: RegimeSpec, n_ladder: Sequence[int], replicates: int,
                        seed: SeedLike = None, center: Optional[float] = None) -> List[W1Row]:
    """
    W₁(L^n, γ_m) 沿维数阶梯的中位数与范围

    Args:
        dist: 分布
        regime: 投影维数规模
        n_ladder: 维数阶梯
        replicates: 每个 n 的重复次数
        seed: 种子
        center: γ 的标准差, 缺省为薄壳中心 m

    Returns:
        每个 n 一行
    """
    m = distributions.thin_shell_center(dist) if center is None else center
    target = GaussianMeasure(m)
    streams = _seed_sequence(seed).spawn(len(n_ladder))
    rows = []
    for n, stream in zip(n_ladder, streams):
        rng = np.random.default_rng(stream)
        k = regime.k_of(n)
        values = []
        for _ in range(replicates):
            xnorm2 = float(distributions.sample_norm2(dist, n, 1, rng)[0])
            values.append(wasserstein_1d(1.0, projected_empirical_fast(n, k, xnorm2, rng), target))
        values = np.array(values)
        rows.append(W1Row(n=n, k=k, replicates=replicates, w1_median=float(np.median(values)),
                          w1_min=float(values.min()), w1_max=float(values.max())))
        logger.info("w1_series_point", family=dist.label(), n=n, k=k,
                    median=rows[-1].w1_median)
    return rows
