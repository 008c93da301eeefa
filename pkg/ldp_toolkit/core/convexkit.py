"""
Convex analysis kernel: tilted integration, conjugates, 1D/2D optimisation, roots
"""
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from scipy.special import logsumexp

from ldp_toolkit.config import settings
from ldp_toolkit.errors import (
    BracketFailure,
    Diverging,
    EmptyDomain,
    InvalidTol,
    LdpError,
    NoSignChange,
    NonIntegrable,
    NotConvex,
)
from ldp_toolkit.monitoring.logging_config import get_logger
from ldp_toolkit.monitoring.metrics import record_solver_failure

logger = get_logger(__name__)

INF = math.inf
PHI_RATIO = 2 / (1 + math.sqrt(5))
_EPS = float(np.finfo(float).eps)

# Gauss-Legendre 规则, 每个 panel 16 个节点
_GL_ORDER = 16
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(_GL_ORDER)
_LOG_GL_WEIGHTS = np.log(_GL_WEIGHTS)
_MAX_DEPTH = 48
_TAIL_RATIO = math.log(1e-14)


@dataclass(frozen=True)
class Fn1D:
    """
    一元扩展实值函数

    Attributes:
        func: 标量函数, 域外可返回 +inf
        lo: 定义域下界
        hi: 定义域上界
        deriv: 可选的导数 (缺省时用中心差分)
    """
    func: Callable[[float], float]
    lo: float = -INF
    hi: float = INF
    deriv: Optional[Callable[[float], float]] = None

    def __call__(self, t: float) -> float:
        if t < self.lo or t > self.hi:
            return INF
        value = _evaluate(self.func, t)
        return INF if math.isnan(value) else value

    def interior_point(self) -> float:
        """定义域内部的起始点 (优先 0)"""
        if self.lo < 0.0 < self.hi:
            return 0.0
        if math.isinf(self.lo) and math.isinf(self.hi):
            return 0.0
        if math.isinf(self.lo):
            return self.hi - 1.0
        if math.isinf(self.hi):
            return self.lo + 1.0
        return 0.5 * (self.lo + self.hi)


@dataclass(frozen=True)
class LogIntegrand:
    """
    对数被积函数 g, 积分 log ∫ exp(g(x)) dx

    Attributes:
        g: 向量化函数 (numpy 数组输入输出)
        lo: 积分下界
        hi: 积分上界
    """
    g: Callable[[np.ndarray], np.ndarray]
    lo: float = -INF
    hi: float = INF


def _check_tol(tol: float) -> float:
    if not (tol > 0 and math.isfinite(tol)):
        raise InvalidTol(f"tolerance must be positive, got {tol}", {"tol": tol})
    return tol


def _evaluate(fn: Callable[..., float], *args: float) -> float:
    """求值并把数值异常折叠为 nan"""
    try:
        return float(fn(*args))
    except NonIntegrable:
        return math.nan
    except LdpError:
        raise
    except (ValueError, OverflowError, ZeroDivisionError):
        return math.nan


def _eval_log(integrand: LogIntegrand, x: np.ndarray) -> np.ndarray:
    with np.errstate(all="ignore"):
        y = np.asarray(integrand.g(x), dtype=float)
    if y.shape != x.shape:
        y = np.broadcast_to(y, x.shape).astype(float)
    return np.where(np.isnan(y), -INF, y)


def _panel_logs(integrand: LogIntegrand, a: np.ndarray,
                b: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    x = mid[:, None] + half[:, None] * _GL_NODES[None, :]
    with np.errstate(divide="ignore"):
        lw = np.log(half)[:, None] + _LOG_GL_WEIGHTS[None, :] + _eval_log(integrand, x)
    return x, lw


def _panel_log(integrand: LogIntegrand, a: float, b: float) -> float:
    _, lw = _panel_logs(integrand, np.array([a]), np.array([b]))
    return float(logsumexp(lw))


def _grow_tail(integrand: LogIntegrand, start: float, sign: float,
               core_log: float) -> list:
    """沿一个方向倍增截断区间, 直到最外层 panel 可以忽略"""
    cap = settings.LDP_TRUNCATION_CAP
    edges = [start]
    total = core_log
    previous = INF
    width = 1.0
    while True:
        a = start + sign * (width / 2.0 if width > 1.0 else 0.0)
        b = start + sign * width
        lo, hi = (a, b) if sign > 0 else (b, a)
        outer = _panel_log(integrand, lo, hi)
        edges.append(b)
        total = float(np.logaddexp(total, outer))
        if total > -INF and (outer == -INF or (outer - total < _TAIL_RATIO and outer < previous)):
            return edges
        if width >= cap:
            if total == -INF:
                return edges
            raise NonIntegrable(
                "no decaying tail within the truncation span",
                {"span": width, "direction": "right" if sign > 0 else "left"},
            )
        previous = outer
        width *= 2.0


def _initial_panels(integrand: LogIntegrand) -> np.ndarray:
    lo, hi = integrand.lo, integrand.hi
    if lo >= hi:
        return np.empty((0, 2))
    core = [v for v in (lo, 0.0, hi) if math.isfinite(v) and lo <= v <= hi]
    core = sorted(set(core))
    core_log = -INF
    for a, b in zip(core[:-1], core[1:]):
        core_log = float(np.logaddexp(core_log, _panel_log(integrand, a, b)))

    edges = list(core)
    if math.isinf(hi):
        right = _grow_tail(integrand, core[-1], 1.0, core_log)
        edges += right[1:]
    if math.isinf(lo):
        left = _grow_tail(integrand, core[0], -1.0, core_log)
        edges = list(reversed(left[1:])) + edges
    edges = np.array(sorted(edges))
    return np.stack([edges[:-1], edges[1:]], axis=1)


def _quadrature_rule(integrand: LogIntegrand, tol: float) -> Tuple[np.ndarray, np.ndarray]:
    """自适应复合 Gauss-Legendre 规则, 返回节点与 log 权重 (含 g)"""
    pending = _initial_panels(integrand)
    pending = pending[pending[:, 1] > pending[:, 0]]
    nodes, logs = [], []
    accepted_total = -INF
    log_tol = math.log(tol)
    for depth in range(_MAX_DEPTH):
        if len(pending) == 0:
            break
        a, b = pending[:, 0], pending[:, 1]
        m = 0.5 * (a + b)
        _, lw_c = _panel_logs(integrand, a, b)
        x_l, lw_l = _panel_logs(integrand, a, m)
        x_r, lw_r = _panel_logs(integrand, m, b)
        coarse = logsumexp(lw_c, axis=1)
        fine = np.logaddexp(logsumexp(lw_l, axis=1), logsumexp(lw_r, axis=1))
        if np.any(fine == INF):
            raise NonIntegrable("integrand overflows", {"depth": depth})
        total = float(np.logaddexp(accepted_total, logsumexp(fine)))
        hi_ = np.maximum(coarse, fine)
        gap = np.abs(coarse - fine)
        with np.errstate(divide="ignore", invalid="ignore"):
            err = np.where(gap > 0, hi_ + np.log1p(-np.exp(-gap)), -INF)
        err = np.where(np.isnan(err), -INF, err)
        ok = (err <= log_tol + fine) | (err <= log_tol + math.log(1e-3) + total) | (fine == -INF)
        if depth == _MAX_DEPTH - 1:
            ok[:] = True
            logger.debug("quadrature_depth_exhausted", panels=int(len(pending)))
        if np.any(ok):
            nodes.append(np.concatenate([x_l[ok], x_r[ok]], axis=1).ravel())
            logs.append(np.concatenate([lw_l[ok], lw_r[ok]], axis=1).ravel())
            accepted_total = float(np.logaddexp(accepted_total, logsumexp(fine[ok])))
        split = ~ok
        pending = np.concatenate(
            [np.stack([a[split], m[split]], axis=1), np.stack([m[split], b[split]], axis=1)]
        )
    if not nodes:
        return np.zeros(1), np.array([-INF])
    return np.concatenate(nodes), np.concatenate(logs)


def log_integral(integrand: LogIntegrand, tol: Optional[float] = None) -> float:
    """
    计算 log ∫ exp(g(x)) dx

    在截断区间上用自适应复合 Gauss-Legendre panel 积分, 以 log-sum-exp 累加。

    Args:
        integrand: 对数被积函数
        tol: 相对误差容限

    Returns:
        积分的对数 (积分为 0 时返回 -inf)
    """
    tol = _check_tol(settings.LDP_INTEGRAL_TOL if tol is None else tol)
    _, lw = _quadrature_rule(integrand, tol)
    return float(logsumexp(lw))


def log_moments(integrand: LogIntegrand, stats: Callable[[np.ndarray], np.ndarray],
                tol: Optional[float] = None) -> Tuple[float, np.ndarray, np.ndarray]:
    """
    同一求积规则下的 log 配分函数、统计量均值与协方差

    Args:
        integrand: 对数被积函数
        stats: 向量化统计量, 返回形状 (d, N)
        tol: 相对误差容限

    Returns:
        (logZ, mean, cov)
    """
    tol = _check_tol(settings.LDP_INTEGRAL_TOL if tol is None else tol)
    x, lw = _quadrature_rule(integrand, tol)
    logz = float(logsumexp(lw))
    if not math.isfinite(logz):
        raise NonIntegrable("partition function is not finite", {"log_z": logz})
    w = np.exp(lw - logz)
    with np.errstate(all="ignore"):
        s = np.atleast_2d(np.asarray(stats(x), dtype=float))
    s = np.where(w[None, :] > 0, s, 0.0)
    mean = s @ w
    centered = s - mean[:, None]
    cov = (centered * w[None, :]) @ centered.T
    return logz, mean, cov


def _derivative(f: Fn1D, t: float) -> float:
    if f.deriv is not None:
        if not (f.lo <= t <= f.hi):
            return math.nan
        value = _evaluate(f.deriv, t)
        return value if math.isfinite(value) else math.nan
    h = _EPS ** (1.0 / 3.0) * max(1.0, abs(t))
    if math.isfinite(f.lo):
        h = min(h, 0.5 * (t - f.lo))
    if math.isfinite(f.hi):
        h = min(h, 0.5 * (f.hi - t))
    if h <= 0:
        return math.nan
    fp, fm = f(t + h), f(t - h)
    if not (math.isfinite(fp) and math.isfinite(fm)):
        return math.nan
    return (fp - fm) / (2.0 * h)


def _advance(f: Fn1D, t: float, step: float) -> float:
    target = t + step
    if step > 0 and math.isfinite(f.hi) and target >= f.hi:
        return t + 0.5 * (f.hi - t)
    if step < 0 and math.isfinite(f.lo) and target <= f.lo:
        return t - 0.5 * (t - f.lo)
    return target


def _golden_min(f: Callable[[float], float], a: float, b: float, tol: float,
                max_iter: int = 300) -> Tuple[float, float]:
    """黄金分割极小化, 返回 (argmin, min)"""
    x1 = b - PHI_RATIO * (b - a)
    x2 = a + PHI_RATIO * (b - a)
    f1, f2 = f(x1), f(x2)
    for _ in range(max_iter):
        if abs(b - a) <= tol:
            break
        if f2 > f1:
            b, x2, f2 = x2, x1, f1
            x1 = b - PHI_RATIO * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + PHI_RATIO * (b - a)
            f2 = f(x2)
    return (x1, f1) if f1 <= f2 else (x2, f2)


def _check_convexity(f: Fn1D, points: Sequence[float]) -> None:
    for t in points:
        h = 1e-3 * max(1.0, abs(t))
        if math.isfinite(f.lo):
            h = min(h, 0.5 * (t - f.lo))
        if math.isfinite(f.hi):
            h = min(h, 0.5 * (f.hi - t))
        if h <= 0:
            continue
        fm, f0, fp = f(t - h), f(t), f(t + h)
        if not all(math.isfinite(v) for v in (fm, f0, fp)):
            continue
        second = fm + fp - 2.0 * f0
        if second < -1e-8 * (1.0 + abs(f0)):
            record_solver_failure("legendre_1d", NotConvex.code)
            raise NotConvex(
                "negative second difference",
                {"t": t, "step": h, "second_difference": second},
            )


def legendre_1d(f: Fn1D, x: float) -> float:
    """
    Legendre-Fenchel 变换 sup_t {x t - f(t)}

    先扩展区间找到 f'(t) = x 的符号变化, 再用 Illinois 割线法求根,
    割线失败时退回黄金分割。上确界发散时返回 +inf。

    Args:
        f: 凸函数
        x: 对偶变量

    Returns:
        共轭函数值
    """
    def phi(t: float) -> float:
        ft = f(t)
        return -INF if math.isinf(ft) else x * t - ft

    def psi(t: float) -> float:
        return x - _derivative(f, t)

    t0 = f.interior_point()
    if not math.isfinite(f(t0)):
        raise EmptyDomain("conjugate argument has no finite starting point", {"t0": t0})
    s0 = psi(t0)
    if s0 == 0.0:
        _check_convexity(f, [t0])
        return phi(t0)
    if math.isnan(s0):
        raise NotConvex("derivative undefined at the starting point", {"t0": t0})
    direction = 1.0 if s0 > 0 else -1.0

    a, sa, pa = t0, s0, phi(t0)
    step = 1.0
    b = sb = None
    for _ in range(2 * settings.LDP_BRACKET_CAP):
        cand = _advance(f, a, direction * step)
        edge = f.hi if direction > 0 else f.lo
        if math.isfinite(edge) and abs(edge - cand) <= 4 * _EPS * max(1.0, abs(edge)):
            # 上确界在定义域端点
            return max(pa, phi(cand), phi(edge))
        sc = psi(cand)
        if math.isnan(sc) or sc * direction <= 0:
            b, sb = cand, sc
            break
        pc = phi(cand)
        prev_pa = pa
        a, sa, pa = cand, sc, pc
        step *= 2.0
    else:
        increment = pa - prev_pa
        if increment <= 1e-12 * (1.0 + abs(pa)):
            return pa
        return INF

    lo_t, hi_t = (a, b) if a < b else (b, a)
    s_lo, s_hi = (sa, sb) if a < b else (sb, sa)
    root = _illinois(psi, lo_t, hi_t, s_lo, s_hi)
    if root is None:
        t_star, neg = _golden_min(lambda t: -phi(t), lo_t, hi_t, 1e-12 * max(1.0, abs(lo_t)))
        value = -neg
    else:
        t_star, value = root, phi(root)
    _check_convexity(f, [t0, lo_t, t_star])
    # 端点值保护: 有限差分噪声下取已评估的最大值
    return max(value, phi(lo_t) if math.isfinite(s_lo) else -INF,
               phi(hi_t) if s_hi is not None and math.isfinite(s_hi) else -INF)


def _illinois(psi: Callable[[float], float], lo: float, hi: float, s_lo: float,
              s_hi: Optional[float]) -> Optional[float]:
    """递减函数 psi 在 [lo, hi] 上的根"""
    if s_hi is None or math.isnan(s_hi) or math.isnan(s_lo):
        return None
    side = 0
    t = 0.5 * (lo + hi)
    for _ in range(200):
        if s_lo != s_hi:
            t = hi - s_hi * (hi - lo) / (s_hi - s_lo)
        if not (lo < t < hi):
            t = 0.5 * (lo + hi)
        st = psi(t)
        if math.isnan(st):
            return None
        if st == 0.0 or (hi - lo) <= 1e-13 * max(1.0, abs(t)):
            return t
        if st * s_lo > 0:
            lo, s_lo = t, st
            if side == -1:
                s_hi *= 0.5
            side = -1
        else:
            hi, s_hi = t, st
            if side == 1:
                s_lo *= 0.5
            side = 1
    return t


def _safe(g: Callable[[float], float]) -> Callable[[float], float]:
    def wrapped(t: float) -> float:
        v = _evaluate(g, t)
        return INF if math.isnan(v) else v
    return wrapped


def _edge(f: Callable[[float], float], inside: float, outside: float) -> float:
    """二分查找有限域边界, 返回有限一侧的点"""
    for _ in range(200):
        mid = 0.5 * (inside + outside)
        if mid == inside or mid == outside:
            break
        if math.isfinite(f(mid)):
            inside = mid
        else:
            outside = mid
    return inside


def _feasible_window(f: Callable[[float], float], lo: float, hi: float,
                     grid: int) -> Tuple[float, float]:
    ts = np.linspace(lo, hi, grid + 1)
    finite = [i for i, t in enumerate(ts) if math.isfinite(f(float(t)))]
    if not finite:
        raise EmptyDomain("objective is infinite on the whole bracket", {"bracket": [lo, hi]})
    i0, i1 = finite[0], finite[-1]
    a = float(ts[i0]) if i0 == 0 else _edge(f, float(ts[i0]), float(ts[i0 - 1]))
    b = float(ts[i1]) if i1 == grid else _edge(f, float(ts[i1]), float(ts[i1 + 1]))
    return a, b


def minimize_unimodal(g: Callable[[float], float], bracket: Tuple[float, float],
                      tol: Optional[float] = None, *, expand: bool = True,
                      grid: int = 32) -> Tuple[float, float]:
    """
    单峰函数极小化

    先用网格和二分过滤出 g 有限的窗口, 若极小点落在括号端点且 g 向外递减则几何扩展,
    最后在最佳网格点的邻域内做黄金分割。

    Args:
        g: 目标函数 (+inf 表示不可行)
        bracket: 初始括号 (有限端点)
        tol: 极小点位置容差
        expand: 是否允许扩展括号
        grid: 粗网格段数

    Returns:
        (argmin, min)
    """
    tol = _check_tol(settings.LDP_ROOT_TOL if tol is None else tol)
    lo, hi = float(bracket[0]), float(bracket[1])
    if not (lo < hi and math.isfinite(lo) and math.isfinite(hi)):
        raise BracketFailure("bracket must be a finite interval", {"bracket": [lo, hi]})
    f = _safe(g)
    a, b = _feasible_window(f, lo, hi, grid)

    if expand:
        a = _expand(f, a, b, -1.0, at_bracket_end=(a == lo))
        b = _expand(f, b, a, 1.0, at_bracket_end=(b == hi))

    if b - a <= tol:
        v = f(a)
        return a, v

    ts = np.linspace(a, b, grid + 1)
    vals = np.array([f(float(t)) for t in ts])
    i = int(np.argmin(vals))
    left = float(ts[max(i - 1, 0)])
    right = float(ts[min(i + 1, grid)])
    x_star, v_star = _golden_min(f, left, right, tol)
    candidates = [(x_star, v_star), (float(ts[i]), float(vals[i])), (a, f(a)), (b, f(b))]
    return min(candidates, key=lambda c: c[1])


def _expand(f: Callable[[float], float], end: float, other: float, sign: float,
            at_bracket_end: bool) -> float:
    if not at_bracket_end:
        return end
    width = abs(other - end)
    inner = end - sign * min(width / 32.0, 1.0)
    f_end = f(end)
    if not (f(inner) > f_end):
        return end
    for j in range(settings.LDP_BRACKET_CAP):
        cand = end + sign * width * 2.0 ** j
        fc = f(cand)
        if not math.isfinite(fc):
            return _edge(f, end, cand)
        if fc >= f_end:
            logger.debug("bracket_expanded", end=cand, expansions=j + 1)
            return cand
        end, f_end = cand, fc
    record_solver_failure("minimize_unimodal", BracketFailure.code)
    raise BracketFailure("objective keeps decreasing past the expansion cap",
                         {"last_point": end, "last_value": f_end})


def find_root_bracketed(phi: Callable[[float], float], lo: float, hi: float,
                        tol: Optional[float] = None) -> float:
    """
    二分法求根

    Args:
        phi: 连续函数, phi(lo) * phi(hi) <= 0
        lo: 左端点
        hi: 右端点
        tol: |phi(root)| 容差

    Returns:
        根
    """
    tol = _check_tol(settings.LDP_ROOT_TOL if tol is None else tol)
    f_lo, f_hi = float(phi(lo)), float(phi(hi))
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if math.isnan(f_lo) or math.isnan(f_hi) or f_lo * f_hi > 0:
        raise NoSignChange("no sign change on the bracket",
                           {"lo": lo, "hi": hi, "phi_lo": f_lo, "phi_hi": f_hi})
    for _ in range(2000):
        mid = 0.5 * (lo + hi)
        f_mid = float(phi(mid))
        if abs(f_mid) <= tol:
            return mid
        if mid <= lo or mid >= hi:
            break
        if (f_mid < 0) == (f_lo < 0):
            lo, f_lo = mid, f_mid
        else:
            hi, f_hi = mid, f_mid
    return lo if abs(f_lo) <= abs(f_hi) else hi


def _line_max(phi: Callable[[float], float], x0: float, f0: float, tol: float,
              lower: float, upper: float) -> Tuple[float, float]:
    """沿一个坐标极大化 (凹或拟凹), 返回 (argmax, max)"""
    step = 0.125 * max(1.0, abs(x0))
    f_plus = phi(min(x0 + step, upper))
    f_minus = phi(max(x0 - step, lower))
    if f_plus <= f0 and f_minus <= f0:
        a, b = max(x0 - step, lower), min(x0 + step, upper)
    else:
        direction = 1.0 if f_plus > f_minus else -1.0
        prev_x, prev_f = x0, f0
        x, fx = x0 + direction * step, max(f_plus, f_minus)
        while True:
            step *= 2.0
            nxt = x + direction * step
            if nxt >= upper or nxt <= lower:
                nxt = upper if direction > 0 else lower
                fn = phi(nxt)
                if fn > fx:
                    if fn - fx <= tol:
                        return nxt, fn
                    record_solver_failure("maximize_concave_2d", Diverging.code)
                    raise Diverging("line search escapes every bounded region",
                                    {"coordinate": nxt, "value": fn})
                a, b = (prev_x, nxt) if direction > 0 else (nxt, prev_x)
                break
            fn = phi(nxt)
            if fn <= fx:
                a, b = (prev_x, nxt) if direction > 0 else (nxt, prev_x)
                break
            prev_x, x, fx = x, nxt, fn
    xs, neg = _golden_min(lambda v: -phi(v), a, b, 1e-11 * max(1.0, abs(x0)))
    best = max([(xs, -neg), (x0, f0)], key=lambda c: c[1])
    return best


def maximize_concave_2d(h: Callable[[float, float], float], init: Tuple[float, float],
                        tol: Optional[float] = None, *,
                        negative: Tuple[bool, bool] = (False, False),
                        grad_hess: Optional[Callable[[float, float], Tuple[np.ndarray, np.ndarray]]] = None,
                        radius: float = 1e6, max_sweeps: int = 2000
                        ) -> Tuple[Tuple[float, float], float]:
    """
    二维凹函数极大化

    交替的一维黄金分割坐标上升; 标记为 negative 的坐标以 s = -exp(u) 重新参数化。
    提供 grad_hess 时优先使用带回溯的 Newton 步。

    Args:
        h: 目标函数 (不可行处 -inf)
        init: 初始点 (须在有效域内)
        tol: 相邻目标值差的停止容差
        negative: 各坐标是否约束为负
        grad_hess: 可选, 返回 (梯度, Hessian)
        radius: 视为发散的迭代半径
        max_sweeps: 最大迭代次数

    Returns:
        ((s, t), max)
    """
    tol = _check_tol(settings.LDP_ROOT_TOL if tol is None else tol)

    def external(u: np.ndarray) -> np.ndarray:
        return np.array([-math.exp(u[i]) if negative[i] else u[i] for i in range(2)])

    def internal(p: Sequence[float]) -> np.ndarray:
        if any(negative[i] and not p[i] < 0 for i in range(2)):
            raise EmptyDomain("initial point violates a sign constraint", {"init": list(p)})
        return np.array([math.log(-p[i]) if negative[i] else float(p[i]) for i in range(2)])

    def value_at(p: np.ndarray) -> float:
        v = _evaluate(h, float(p[0]), float(p[1]))
        return -INF if math.isnan(v) else v

    u = internal(init)
    value = value_at(external(u))
    if not math.isfinite(value):
        raise EmptyDomain("initial point outside the effective domain", {"init": list(init)})

    log_radius = math.log(radius)
    bounds = [(-745.0, log_radius) if negative[i] else (-radius, radius) for i in range(2)]
    prev_u = u.copy()
    for sweep in range(max_sweeps):
        old = value
        if grad_hess is not None:
            p = external(u)
            newton_ok, p_new, v_new, decrement = _newton_step(value_at, grad_hess, p, value, negative)
            if newton_ok:
                u, value = internal(p_new), v_new
                if decrement <= tol:
                    return (float(p_new[0]), float(p_new[1])), value
                if np.any(np.abs(p_new) > radius):
                    record_solver_failure("maximize_concave_2d", Diverging.code)
                    raise Diverging("Newton iterates escape every bounded region",
                                    {"point": p_new.tolist(), "value": value})
                continue
        for i in range(2):
            def along(v: float, i: int = i) -> float:
                w = u.copy()
                w[i] = v
                return value_at(external(w))
            u[i], value = _line_max(along, u[i], value, tol, bounds[i][0], bounds[i][1])
        # 模式移动加速相关坐标上的锯齿
        pattern = u + (u - prev_u)
        pattern_value = value_at(external(pattern)) if np.all(np.isfinite(pattern)) else -INF
        if pattern_value > value:
            u, value = pattern, pattern_value
        prev_u = u.copy()
        if abs(value - old) <= tol:
            p = external(u)
            return (float(p[0]), float(p[1])), value
    record_solver_failure("maximize_concave_2d", "no_convergence")
    raise Diverging("coordinate ascent did not settle", {"sweeps": max_sweeps, "value": value})


def _newton_step(value_at: Callable[[np.ndarray], float],
                 grad_hess: Callable[[float, float], Tuple[np.ndarray, np.ndarray]],
                 p: np.ndarray, value: float, negative: Tuple[bool, bool]
                 ) -> Tuple[bool, np.ndarray, float, float]:
    try:
        grad, hess = grad_hess(float(p[0]), float(p[1]))
    except (NonIntegrable, OverflowError, ZeroDivisionError, np.linalg.LinAlgError):
        return False, p, value, INF
    grad = np.asarray(grad, dtype=float)
    hess = np.asarray(hess, dtype=float)
    if not (np.all(np.isfinite(grad)) and np.all(np.isfinite(hess))):
        return False, p, value, INF
    if not (hess[0, 0] < 0 and np.linalg.det(hess) > 0):
        return False, p, value, INF
    step = -np.linalg.solve(hess, grad)
    decrement = float(grad @ step)
    if decrement <= 0:
        return False, p, value, INF
    if 0.5 * decrement <= 1e-14 * (1.0 + abs(value)):
        return True, p, value, 0.0
    alpha = 1.0
    while alpha > 1e-10:
        cand = p + alpha * step
        if not any(negative[i] and not cand[i] < 0 for i in range(2)):
            v = value_at(cand)
            if v >= value + 1e-4 * alpha * decrement:
                return True, cand, v, 0.5 * decrement
        alpha *= 0.5
    return False, p, value, INF
