"""
Prometheus 指标收集
"""
from prometheus_client import CollectorRegistry, Counter, Histogram, Info, write_to_textfile

# 独立注册表, 由 CLI 的 --metrics-out 写出
registry = CollectorRegistry(auto_describe=True)

# Monte Carlo 试验指标
mc_trials_total = Counter(
    "ldp_mc_trials_total",
    "Total Monte Carlo trials",
    ["family", "quantity"],
    registry=registry,
)

mc_hits_total = Counter(
    "ldp_mc_hits_total",
    "Total Monte Carlo threshold hits",
    ["family", "quantity"],
    registry=registry,
)

# 区块耗时
mc_block_duration_seconds = Histogram(
    "ldp_mc_block_duration_seconds",
    "Monte Carlo block latency",
    ["family"],
    registry=registry,
)

# 求解器失败
solver_failures_total = Counter(
    "ldp_solver_failures_total",
    "Numerical solver failures",
    ["solver", "reason"],
    registry=registry,
)

# 速率函数求值
rate_evaluations_total = Counter(
    "ldp_rate_evaluations_total",
    "Rate function evaluations requested through the dispatcher",
    ["regime", "quantity"],
    registry=registry,
)

# 应用信息
app_info = Info(
    "ldp_toolkit_app",
    "Application information",
    registry=registry,
)


def record_mc_block(family: str, quantity: str, trials: int, hits: int,
                    duration: float) -> None:
    """
    记录一个 Monte Carlo 区块

    Args:
        family: 分布族名称
        quantity: 统计量 (norm / norm_kn / shell)
        trials: 试验次数
        hits: 命中次数
        duration: 区块耗时（秒）
    """
    mc_trials_total.labels(family=family, quantity=quantity).inc(trials)
    mc_hits_total.labels(family=family, quantity=quantity).inc(hits)
    mc_block_duration_seconds.labels(family=family).observe(duration)


def record_solver_failure(solver: str, reason: str) -> None:
    """
    记录求解器失败

    Args:
        solver: 求解器名称
        reason: 错误代码
    """
    solver_failures_total.labels(solver=solver, reason=reason).inc()


def record_rate_evaluation(regime: str, quantity: str) -> None:
    """记录一次速率函数求值"""
    rate_evaluations_total.labels(regime=regime, quantity=quantity).inc()


def set_app_info(name: str, version: str) -> None:
    """
    设置应用信息

    Args:
        name: 应用名称
        version: 应用版本
    """
    app_info.info({
        "name": name,
        "version": version
    })


def write_metrics(path: str) -> None:
    """
    以文本格式写出指标

    Args:
        path: 输出文件路径
    """
    write_to_textfile(path, registry)
