"""
定理验证命令
"""
import argparse
import logging

from app.services.verify_service import VERIFICATION_NAMES, verify_service

# 配置日志记录器
logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("verify", help="运行一个命名的定理验证")
    parser.add_argument("name", choices=VERIFICATION_NAMES, help="验证名称")
    parser.add_argument("--model", default=None, help="corollary 使用的特征 0 模型文件")
    parser.add_argument("--json", action="store_true", help="输出 JSON")
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    """
    运行验证并写出记录文件

    Returns:
        int: PASS 或 SKIPPED 返回 0，FAIL 或 INCONCLUSIVE 返回 1
    """
    result = verify_service.run_and_record(args.name, args.model)

    if args.json:
        print(result.model_dump_json(indent=2))
    else:
        for check in result.checks:
            print(f"[{check.status.upper()}] {check.name}")
        print(f"verify {result.name}: {result.verdict}")
        print(f"transcript: {result.transcript_path}")
    return 0 if result.ok else 1
