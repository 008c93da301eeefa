"""
LDP Toolkit Configuration
"""
import os
from typing import List, Optional

from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """应用配置"""

    # 应用配置
    APP_NAME: str = "ldp-toolkit"
    APP_VERSION: str = "0.1.0"

    # 日志配置
    LOG_LEVEL: str = "WARNING"
    LOG_FORMAT: str = "console"

    # 并行配置
    LDP_THREADS: Optional[int] = None
    LDP_BLOCK_SIZE: int = 65536

    # 数值容差
    LDP_ROOT_TOL: float = 1e-10
    LDP_INTEGRAL_TOL: float = 1e-8
    LDP_BRACKET_CAP: int = 60
    LDP_TRUNCATION_CAP: float = 2.0 ** 30

    # Orlicz hit-and-run (以 n 次单坐标移动为一个 sweep)
    LDP_ORLICZ_BURNIN_SWEEPS: int = 10
    LDP_ORLICZ_THIN_SWEEPS: int = 1

    # 速度比较
    LDP_SPEED_LADDER: List[int] = [100, 1000, 10000, 100000, 1000000]
    LDP_SPEED_RATIO_TOL: float = 0.05

    @property
    def worker_count(self) -> int:
        """实际使用的 worker 数"""
        if self.LDP_THREADS is not None and self.LDP_THREADS > 0:
            return self.LDP_THREADS
        return os.cpu_count() or 1

    class Config:
        env_file = ".env"
        case_sensitive = True


settings = Settings()
