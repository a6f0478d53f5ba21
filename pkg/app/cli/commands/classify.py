"""
纤维分类命令
"""
import argparse
import json
import logging

from app.services.tate_service import classify_all
from app.services.weierstrass_service import k3_from_report, load_model

# 配置日志记录器
logger = logging.getLogger(__name__)

HEADER = "place | type | vΔ | m | δ"


def register(subparsers) -> None:
    parser = subparsers.add_parser("classify", help="对模型文件的所有奇异纤维运行 Tate 算法")
    parser.add_argument("model", help="模型文件路径")
    parser.add_argument("--ext", type=int, default=None, help="判别式求根允许的最大扩张次数")
    parser.add_argument("--json", action="store_true", help="输出 JSON")
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    """
    分类模型文件中的纤维

    处理流程：
    1. 读取并解析模型文件
    2. 分解判别式，在每个奇异点上运行 Tate 算法
    3. 输出逐点表格、汇总与 K3 判定
    """
    logger.info(f"开始分类 {args.model}")
    model = load_model(args.model)
    report = classify_all(model, search_ext=args.ext)
    k3 = k3_from_report(model, report)

    if args.json:
        payload = report.model_dump(mode="json")
        payload["k3"] = k3.model_dump(mode="json")
        print(json.dumps(payload, ensure_ascii=False, indent=2))
        return 0

    if model.name:
        print(f"# {model.name}")
    print(HEADER)
    for fibre in report.fibres:
        print(fibre.line())
    print(report.summary())
    print(f"K3: {'yes' if k3.value else 'no'} ({k3.reason})")
    return 0
