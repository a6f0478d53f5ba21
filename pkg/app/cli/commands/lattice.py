"""
格判别式命令
"""
import argparse
import json
import logging
from pathlib import Path

from app.core.config import settings
from app.services.lattice_service import compatible_primes, describe_artin, load_config, shioda_tate_discr

# 配置日志记录器
logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("lattice", help="由纤维构形计算 Néron–Severi 判别式并检查 Artin 相容性")
    parser.add_argument("--config", required=True, help="JSON 格配置文件；找不到时在夹具目录中查找")
    parser.add_argument("--json", action="store_true", help="输出 JSON")
    parser.set_defaults(handler=handle)


def resolve_config(name: str) -> Path:
    path = Path(name)
    if not path.exists() and (Path(settings.fixture_dir) / name).exists():
        return Path(settings.fixture_dir) / name
    return path


def handle(args: argparse.Namespace) -> int:
    cfg = load_config(resolve_config(args.config))
    value = shioda_tate_discr(cfg)

    if args.json:
        payload = {
            "config": cfg.model_dump(mode="json"),
            "discriminant": value.model_dump(mode="json"),
            "compatible": [c.model_dump(mode="json") for c in compatible_primes(value)],
        }
        print(json.dumps(payload, ensure_ascii=False, indent=2))
        return 0

    print(describe_artin(value))
    return 0
