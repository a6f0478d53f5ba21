"""
应用程序配置设置
"""
import logging
import sys

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """应用程序设置"""

    # 配置模型以忽略额外的环境变量
    model_config = SettingsConfigDict(
        env_file=".env",
        case_sensitive=False,
        extra='ignore'
    )

    # 有限域配置
    max_field_order: int = 1 << 16  # 查表实现支持的最大域大小 p^k
    search_ext: int = 8  # 判别式求根时允许的最大绝对扩张次数

    # 符号消元配置
    branch_budget: int = 64  # eliminate 的分支上限

    # 扫描配置
    scan_min_valuation: int = 13  # 预筛选阈值：有理点与∞处 vΔ 均低于此值时不做完整分类
    scan_sample_size: int = 1_000_000  # 抽样模式下的样本数
    scan_seed: int = 20240601  # 抽样随机种子
    scan_jobs: int = 1  # 默认并行进程数
    scan_chunk_size: int = 4096  # 每个任务块的参数元组数量
    scan_exhaustive_limit: int = 1 << 22  # 超过此数量的参数空间默认改为抽样

    # 格与同余证明配置
    height_po_max: int = 10  # (P.O) 的枚举上界
    artin_sigma_max: int = 10  # Artin 不变量 σ₀ 的上界

    # 文件目录配置
    fixture_dir: str = "fixtures"
    witness_dir: str = "fixtures/witnesses"
    transcript_dir: str = "transcripts"

    # 日志配置
    log_level: str = "INFO"


# 全局设置实例
settings = Settings()


# 配置日志系统
def setup_logging():
    """设置日志配置"""
    # 配置日志格式
    formatter = logging.Formatter(
        "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    )

    # 日志写到标准错误，标准输出只留给报告
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(formatter)

    # 配置根日志记录器
    logging.basicConfig(
        level=settings.log_level.upper(),
        handlers=[console_handler],
        force=True  # 强制重新配置
    )
