"""
Haar frames on the Stiefel manifold and projected-vector representations
"""
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from ldp_toolkit.errors import DimMismatch, EmptyMeasure, InvalidDims, InvalidQ
from ldp_toolkit.monitoring.logging_config import get_logger

logger = get_logger(__name__)

ORTHONORMAL_TOL = 1e-10
# 单次生成的最大高斯数
_CHUNK_ELEMENTS = 2 ** 22


def _check_dims(n: int, k: int) -> None:
    if not (isinstance(n, (int, np.integer)) and isinstance(k, (int, np.integer)) and 1 <= k <= n):
        raise InvalidDims(f"need 1 <= k <= n, got n={n}, k={k}", {"n": n, "k": k})


def _check_q(q: float) -> float:
    if not (q >= 1 and math.isfinite(q)):
        raise InvalidQ(f"q must lie in [1, inf), got {q}", {"q": q})
    return float(q)


@dataclass(frozen=True, eq=False)
class Frame:
    """
    n×k 正交标架, AᵀA = I_k

    Attributes:
        entries: n×k 矩阵
    """
    entries: np.ndarray

    def __post_init__(self) -> None:
        entries = np.asarray(self.entries, dtype=float)
        if entries.ndim != 2 or entries.shape[1] > entries.shape[0]:
            raise InvalidDims("frame must be an n x k matrix with k <= n",
                              {"shape": list(entries.shape)})
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)
        error = self.orthonormality_error()
        if error > ORTHONORMAL_TOL:
            raise InvalidDims("columns are not orthonormal", {"frobenius_error": error})

    @property
    def n(self) -> int:
        return int(self.entries.shape[0])

    @property
    def k(self) -> int:
        return int(self.entries.shape[1])

    def orthonormality_error(self) -> float:
        """‖AᵀA - I_k‖_F"""
        gram = self.entries.T @ self.entries
        return float(np.linalg.norm(gram - np.eye(self.entries.shape[1])))


def haar_frame(n: int, k: int, rng: np.random.Generator) -> Frame:
    """
    Haar 分布的 n×k 正交标架

    高斯矩阵的薄 QR 分解, R 对角线取正号。

    Args:
        n: 环境维数
        k: 标架维数
        rng: 随机数生成器

    Returns:
        Frame
    """
    _check_dims(n, k)
    q, r = np.linalg.qr(rng.standard_normal((n, k)))
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    return Frame(q * signs[None, :])


def project(A: Frame, x: np.ndarray) -> np.ndarray:
    """
    Aᵀx

    Args:
        A: 标架
        x: 形状 (n,) 或 (size, n)

    Returns:
        形状 (k,) 或 (size, k)
    """
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != A.n:
        raise DimMismatch(f"vector length {x.shape[-1]} does not match frame dimension {A.n}",
                          {"n": A.n, "length": int(x.shape[-1])})
    return x @ A.entries


def _gaussian_ratio_parts(n: int, k: int, rng: np.random.Generator,
                          size: int) -> Tuple[np.ndarray, np.ndarray]:
    """ζ^{(k)} 与 ‖ζ^{(n)}‖₂, 剩余 n-k 个坐标只以 χ² 形式出现"""
    head = rng.standard_normal((size, k))
    rest = rng.chisquare(n - k, size) if k < n else np.zeros(size)
    return head, np.sqrt(np.einsum("ij,ij->i", head, head) + rest)


def projected_qnorm_fast(n: int, k: int, q: float, xnorm2: float,
                         rng: np.random.Generator) -> float:
    """
    给定 ‖X‖₂ 时 n^{-1/q}‖AᵀX‖_q 的一次抽样, 不生成标架

    n^{1/2-1/q} · ‖ζ^{(k)}‖_q / ‖ζ^{(n)}‖₂ · ‖X‖₂/√n

    Args:
        n: 环境维数
        k: 投影维数
        q: 范数指数
        xnorm2: ‖X‖₂
        rng: 随机数生成器

    Returns:
        抽样值
    """
    _check_dims(n, k)
    q = _check_q(q)
    if xnorm2 == 0.0:
        return 0.0
    if q == 2.0 and k == n:
        return xnorm2 / math.sqrt(n)
    head, total = _gaussian_ratio_parts(n, k, rng, 1)
    ratio = float(np.linalg.norm(head[0], ord=q)) / float(total[0])
    return n ** (0.5 - 1.0 / q) * ratio * xnorm2 / math.sqrt(n)


def projected_qnorm_batch(n: int, k: int, q: float, xnorm2: np.ndarray,
                          rng: np.random.Generator) -> np.ndarray:
    """
    ‖AᵀX‖_q 的批量抽样 (未归一化), 每个 ‖X‖₂ 对应独立的标架

    Args:
        n: 环境维数
        k: 投影维数
        q: 范数指数
        xnorm2: ‖X‖₂ 样本
        rng: 随机数生成器

    Returns:
        与 xnorm2 同长度的数组
    """
    _check_dims(n, k)
    q = _check_q(q)
    xnorm2 = np.asarray(xnorm2, dtype=float)
    if q == 2.0 and k == n:
        return xnorm2.copy()
    out = np.empty(xnorm2.shape[0])
    rows = max(1, _CHUNK_ELEMENTS // k)
    for start in range(0, out.shape[0], rows):
        stop = min(out.shape[0], start + rows)
        head, total = _gaussian_ratio_parts(n, k, rng, stop - start)
        out[start:stop] = np.linalg.norm(head, ord=q, axis=1) / total * xnorm2[start:stop]
    return out


@dataclass(frozen=True, eq=False)
class EmpiricalMeasure:
    """
    有限原子的均匀经验测度

    Attributes:
        atoms: 升序排列的有限实数
    """
    atoms: np.ndarray

    def __post_init__(self) -> None:
        atoms = np.sort(np.asarray(self.atoms, dtype=float).ravel())
        if atoms.size == 0:
            raise EmptyMeasure("empirical measure has no atoms")
        if not np.all(np.isfinite(atoms)):
            raise EmptyMeasure("empirical measure has non-finite atoms",
                               {"non_finite": int(np.sum(~np.isfinite(atoms)))})
        atoms.setflags(write=False)
        object.__setattr__(self, "atoms", atoms)

    def __len__(self) -> int:
        return int(self.atoms.size)

    def mean(self) -> float:
        return float(self.atoms.mean())

    def second_moment(self) -> float:
        return float(np.mean(self.atoms * self.atoms))

    def cdf(self, x: np.ndarray) -> np.ndarray:
        """右连续经验分布函数"""
        return np.searchsorted(self.atoms, x, side="right") / self.atoms.size


def projected_empirical(A: Frame, x: np.ndarray) -> EmpiricalMeasure:
    """
    AᵀX 坐标的经验测度 L^n (直接投影)

    Args:
        A: 标架
        x: 长度 n 的向量

    Returns:
        EmpiricalMeasure
    """
    return EmpiricalMeasure(project(A, x))


def projected_empirical_fast(n: int, k: int, xnorm2: float,
                             rng: np.random.Generator) -> EmpiricalMeasure:
    """
    给定 ‖X‖₂ 时 L^n 的同分布表示

    原子为 ‖X‖₂ · ζ_j / ‖ζ^{(n)}‖₂, j = 1..k

    Args:
        n: 环境维数
        k: 投影维数
        xnorm2: ‖X‖₂
        rng: 随机数生成器

    Returns:
        EmpiricalMeasure
    """
    _check_dims(n, k)
    head, total = _gaussian_ratio_parts(n, k, rng, 1)
    return EmpiricalMeasure(xnorm2 * head[0] / total[0])
