"""
命令行路由集合
"""
import argparse
import logging
import sys
from typing import Optional, Sequence

from app.cli.commands import classify, lattice, scan, verify
from app.core.config import setup_logging
from app.core.errors import ToolkitError

# 配置日志记录器
logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="k3-fibre-toolkit",
        description="椭圆 K3 曲面奇异纤维的分类与最大纤维定理的机械验证",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    # 包含纤维分类命令
    classify.register(subparsers)

    # 包含参数族扫描命令
    scan.register(subparsers)

    # 包含定理验证命令
    verify.register(subparsers)

    # 包含格判别式命令
    lattice.register(subparsers)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    解析参数并分派到子命令

    Returns:
        int: 进程退出码；0 成功，1 验证未通过，2 输入错误
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2

    try:
        return args.handler(args)
    except ToolkitError as exc:
        logger.error(f"{args.command} 失败: {exc.detail}")
        print(f"error: {exc.detail}")
        return exc.exit_code


def run() -> None:
    """控制台入口：配置日志后运行并以退出码结束进程"""
    setup_logging()
    sys.exit(main(sys.argv[1:]))
