"""
参数族扫描命令
"""
import argparse
import logging
from typing import Dict, List

from app.core.errors import ModelFormatError
from app.services.families import FAMILY_NAMES
from app.services.scan_service import scan_service
from app.utils.field import FiniteField, parse_field_spec

# 配置日志记录器
logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("scan", help="穷举或抽样扫描特征 2 的规范形族")
    parser.add_argument("--family", required=True, choices=FAMILY_NAMES, help="族名称")
    parser.add_argument("--field", default="2", help="系数域 p^k，例如 2 或 2^2")
    parser.add_argument("--exhaustive", action="store_true", help="强制穷举整个参数空间")
    parser.add_argument("--sample-size", type=int, default=None, help="抽样模式的样本数")
    parser.add_argument("--seed", type=int, default=None, help="抽样随机种子")
    parser.add_argument("--jobs", type=int, default=None, help="并行进程数")
    parser.add_argument(
        "--target",
        choices=("max_multiplicative", "max_additive", "any"),
        default="any",
        help="冻结见证时关注的目标",
    )
    parser.add_argument("--fix", action="append", default=[], metavar="NAME=VALUE", help="固定一个参数的取值")
    parser.add_argument("--collect", default=None, metavar="TYPE", help="收集含此纤维型的元组，例如 I13*")
    parser.add_argument("--min-valuation", type=int, default=None, help="预筛选阈值，0 表示完整分类每个元组")
    parser.add_argument("--no-freeze", action="store_true", help="不把见证写成模型文件")
    parser.add_argument("--json", action="store_true", help="输出 JSON")
    parser.set_defaults(handler=handle)


def parse_fixed(items: List[str], field: FiniteField) -> Dict[str, int]:
    """
    解析 `--fix name=value`

    Raises:
        ModelFormatError: 缺少 '=' 或取值无法解析
    """
    fixed = {}
    for item in items:
        name, sep, value = item.partition("=")
        if not sep or not name.strip():
            raise ModelFormatError(f"--fix 应为 name=value，遇到 '{item}'")
        fixed[name.strip()] = field.parse_coefficient(value)
    return fixed


def handle(args: argparse.Namespace) -> int:
    field = parse_field_spec(args.field)
    fixed = parse_fixed(args.fix, field)
    report = scan_service.scan_family_sync(
        args.family,
        field,
        target=args.target,
        exhaustive=True if args.exhaustive else None,
        fixed=fixed,
        jobs=args.jobs,
        sample_size=args.sample_size,
        seed=args.seed,
        min_valuation=args.min_valuation,
        collect=args.collect,
        freeze=not args.no_freeze,
    )

    if args.json:
        print(report.model_dump_json(indent=2))
        return 0

    print(report.summary())
    for label, witness in (("max I_n", report.max_multiplicative_witness), ("max additive", report.max_additive_witness)):
        if witness is None:
            continue
        params = ", ".join(f"{k}={v}" for k, v in witness.parameters.items() if v != "0") or "all 0"
        print(f"{label}: {witness.symbol} at #{witness.index} ({params}) [{', '.join(witness.configuration)}]")
        if witness.path:
            print(f"  frozen: {witness.path}")
    if args.collect:
        print(f"collected {len(report.collected)} tuples with {args.collect}")
    return 0
