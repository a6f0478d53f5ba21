"""
参数族扫描服务
在有限域上枚举（或抽样）规范形族的参数元组，逐个分类并记录最大纤维与见证
"""
import asyncio
import logging
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from pathlib import Path
from typing import List, Mapping, Optional, Sequence, Tuple

from app.core.config import settings
from app.core.errors import FieldTooLargeError, SymbolicError, ToolkitError
from app.schemas.scan import ScanReport, ScanTarget, ScanWitness
from app.services.families import get_template, get_family
from app.services.tate_service import classify_all
from app.services.weierstrass_service import (
    WeierstrassModel,
    discriminant,
    k3_from_report,
    save_model,
)
from app.utils.field import FiniteField, get_field
from app.utils.poly import UniPoly

# 配置日志记录器
logger = logging.getLogger(__name__)

# 收集命中元组的上限
COLLECT_LIMIT = 256

# (值, 元组编号, 纤维型, 构形)
Best = Optional[Tuple[int, int, str, Tuple[str, ...]]]


@dataclass
class ChunkResult:
    """一个任务块的扫描结果，可按结合律合并"""

    tested: int = 0
    skipped_singular: int = 0
    skipped_prefilter: int = 0
    non_k3: int = 0
    incomplete: int = 0
    k3_models: int = 0
    best_multiplicative: Best = None
    best_additive: Best = None
    collected: List[Tuple[int, str, Tuple[str, ...]]] = dc_field(default_factory=list)

    def merge(self, other: "ChunkResult") -> "ChunkResult":
        return ChunkResult(
            tested=self.tested + other.tested,
            skipped_singular=self.skipped_singular + other.skipped_singular,
            skipped_prefilter=self.skipped_prefilter + other.skipped_prefilter,
            non_k3=self.non_k3 + other.non_k3,
            incomplete=self.incomplete + other.incomplete,
            k3_models=self.k3_models + other.k3_models,
            best_multiplicative=_better(self.best_multiplicative, other.best_multiplicative),
            best_additive=_better(self.best_additive, other.best_additive),
            collected=sorted(self.collected + other.collected)[:COLLECT_LIMIT],
        )


def _better(a: Best, b: Best) -> Best:
    """值大者优先，值相同取编号小者"""
    if a is None:
        return b
    if b is None:
        return a
    return a if (a[0], -a[1]) >= (b[0], -b[1]) else b


def _digits(index: int, base: int, width: int) -> List[int]:
    """元组编号的大端序 base 进制展开"""
    out = [0] * width
    for i in range(width - 1, -1, -1):
        index, out[i] = divmod(index, base)
    return out


def _root_multiplicity(f: UniPoly, c: int) -> int:
    """f 在 t=c 处的重数（综合除法）"""
    ring = f.ring
    if c == 0:
        return f.low_valuation()
    coeffs = list(f.coeffs)
    count = 0
    while len(coeffs) > 1:
        quotient = [0] * (len(coeffs) - 1)
        acc = ring.zero
        for i in range(len(coeffs) - 1, 0, -1):
            acc = ring.add(ring.mul(acc, c), coeffs[i])
            quotient[i - 1] = acc
        remainder = ring.add(ring.mul(acc, c), coeffs[0])
        if remainder:
            break
        count += 1
        coeffs = quotient
    return count


def _max_rational_valuation(delta: UniPoly, field: FiniteField) -> int:
    """
    有理点与 ∞ 处 vΔ 的最大值

    vΔ ≥ 13 的点必定是有理点：其共轭点的 vΔ 相同，而 Σ vΔ = 24。
    """
    best = 24 - delta.degree
    for c in range(field.order):
        best = max(best, _root_multiplicity(delta, c))
    return best


def _values_for(index: int, q: int, free: Sequence[int], fixed: Mapping[int, int], size: int) -> List[int]:
    values = [0] * size
    for pos, raw in fixed.items():
        values[pos] = raw
    for pos, raw in zip(free, _digits(index, q, len(free))):
        values[pos] = raw
    return values


def _scan_chunk(
    family: str,
    p: int,
    k: int,
    free: Tuple[int, ...],
    fixed: Tuple[Tuple[int, int], ...],
    indices: Sequence[int],
    min_valuation: int,
    collect: Optional[str],
) -> ChunkResult:
    """
    扫描一个任务块（在工作进程中运行，参数均可序列化）
    """
    field = get_field(p, k)
    template = get_template(family)
    fixed_map = dict(fixed)
    size = len(template.family.parameters)
    result = ChunkResult()

    for index in indices:
        result.tested += 1
        values = _values_for(index, field.order, free, fixed_map, size)
        model = WeierstrassModel.from_coefficients(template.specialize(values, field))

        # 1. Δ ≡ 0 与预筛选
        delta = discriminant(model)
        if delta.is_zero():
            result.skipped_singular += 1
            continue
        if _max_rational_valuation(delta, field) < min_valuation:
            result.skipped_prefilter += 1
            continue

        # 2. 完整分类与 K3 判定
        try:
            report = classify_all(model)
        except ToolkitError as exc:
            logger.debug(f"元组 {index} 分类失败: {exc.detail}")
            result.non_k3 += 1
            continue
        if not report.complete:
            result.incomplete += 1
            continue
        if not k3_from_report(model, report).value:
            result.non_k3 += 1
            continue
        result.k3_models += 1

        # 3. 更新最大值
        config = tuple(report.configuration)
        if report.max_multiplicative:
            candidate = (report.max_multiplicative, index, f"I{report.max_multiplicative}", config)
            result.best_multiplicative = _better(result.best_multiplicative, candidate)
        if report.max_additive:
            candidate = (report.max_additive_components, index, report.max_additive, config)
            result.best_additive = _better(result.best_additive, candidate)
        if collect and collect in config and len(result.collected) < COLLECT_LIMIT:
            result.collected.append((index, collect, config))
    return result


class ScanService:
    """参数族扫描服务"""

    async def scan_family(
        self,
        family: str,
        field: FiniteField,
        target: ScanTarget = "any",
        exhaustive: Optional[bool] = None,
        fixed: Optional[Mapping[str, int]] = None,
        jobs: Optional[int] = None,
        sample_size: Optional[int] = None,
        seed: Optional[int] = None,
        min_valuation: Optional[int] = None,
        collect: Optional[str] = None,
        freeze: bool = False,
    ) -> ScanReport:
        """
        扫描一个特征 2 规范形族

        Args:
            family: 族名称
            field: 系数域 GF(2^k)
            target: 冻结见证时关注的最大值类型
            exhaustive: 强制穷举（True）或抽样（False），默认按参数空间大小决定
            fixed: 固定的参数取值（原始域编码）
            jobs: 并行进程数
            sample_size: 抽样数量
            seed: 抽样种子
            min_valuation: 预筛选阈值，0 表示不筛选
            collect: 收集含此纤维型的元组
            freeze: 是否把见证写成模型文件

        Returns:
            ScanReport: 扫描报告

        Raises:
            SymbolicError: 族或域不合法
            FieldTooLargeError: k > 4 时要求穷举
        """
        start_time = time.time()
        if field.p != 2:
            raise SymbolicError("规范形族仅定义在特征 2")
        spec = get_family(family)
        fixed = dict(fixed or {})
        unknown = [name for name in fixed if name not in spec.parameters]
        if unknown:
            raise SymbolicError(f"族 {family} 没有参数 {', '.join(unknown)}")

        # 1. 参数空间与模式
        positions = {name: i for i, name in enumerate(spec.parameters)}
        free = tuple(i for i, name in enumerate(spec.parameters) if name not in fixed)
        fixed_items = tuple((positions[name], value) for name, value in fixed.items())
        total = field.order ** len(free)
        if exhaustive is None:
            exhaustive = field.k <= 4 and total <= settings.scan_exhaustive_limit
        elif exhaustive and field.k > 4:
            raise FieldTooLargeError(f"穷举模式要求 k ≤ 4，当前为 GF(2^{field.k})")

        if exhaustive:
            indices: Sequence[int] = range(total)
        else:
            rng = random.Random(settings.scan_seed if seed is None else seed)
            count = min(sample_size or settings.scan_sample_size, total)
            indices = sorted(rng.sample(range(total), count))
        jobs = max(1, jobs or settings.scan_jobs)
        min_valuation = settings.scan_min_valuation if min_valuation is None else min_valuation
        logger.info(
            f"开始扫描 {family} over {field}: {'穷举' if exhaustive else '抽样'} {len(indices)}/{total} 个元组，{jobs} 个进程"
        )

        # 2. 分块执行
        chunk = settings.scan_chunk_size
        chunks = [indices[i:i + chunk] for i in range(0, len(indices), chunk)]
        args = [(family, field.p, field.k, free, fixed_items, c, min_valuation, collect) for c in chunks]
        if jobs == 1:
            results = [_scan_chunk(*a) for a in args]
        else:
            loop = asyncio.get_running_loop()
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                results = await asyncio.gather(*(loop.run_in_executor(pool, _scan_chunk, *a) for a in args))
        merged = ChunkResult()
        for part in results:
            merged = merged.merge(part)

        # 3. 组装报告并冻结见证
        size = len(spec.parameters)
        fixed_map = dict(fixed_items)

        def witness(best: Best) -> Optional[ScanWitness]:
            if best is None:
                return None
            _, index, symbol, config = best
            return self._witness(spec.parameters, field, index, free, fixed_map, size, symbol, config)

        report = ScanReport(
            family=family,
            field=str(field),
            mode="exhaustive" if exhaustive else "sampled",
            target=target,
            parameters=[spec.parameters[i] for i in free],
            fixed={name: field.format(value) for name, value in fixed.items()},
            total=total,
            tested=merged.tested,
            skipped_singular=merged.skipped_singular,
            skipped_prefilter=merged.skipped_prefilter,
            non_k3=merged.non_k3,
            incomplete=merged.incomplete,
            k3_models=merged.k3_models,
            max_multiplicative=merged.best_multiplicative[0] if merged.best_multiplicative else 0,
            max_multiplicative_witness=witness(merged.best_multiplicative),
            max_additive=merged.best_additive[2] if merged.best_additive else None,
            max_additive_components=merged.best_additive[0] if merged.best_additive else 0,
            max_additive_witness=witness(merged.best_additive),
            collected=[
                self._witness(spec.parameters, field, index, free, fixed_map, size, symbol, config)
                for index, symbol, config in merged.collected
            ],
            jobs=jobs,
        )
        if freeze:
            await self._freeze(report, field, free, fixed_map, size)
        logger.info(f"扫描完成，耗时 {time.time() - start_time:.2f}s: {report.summary()}")
        return report

    def _witness(self, names, field, index, free, fixed_map, size, symbol, config) -> ScanWitness:
        values = _values_for(index, field.order, free, fixed_map, size)
        return ScanWitness(
            index=index,
            parameters={name: field.format(v) for name, v in zip(names, values)},
            symbol=symbol,
            configuration=list(config),
        )

    def witness_model(self, family: str, field: FiniteField, witness: ScanWitness) -> WeierstrassModel:
        """由见证的参数重建模型"""
        values = [field.parse_coefficient(witness.parameters[name]) for name in get_family(family).parameters]
        coefficients = get_template(family).specialize(values, field)
        return WeierstrassModel.from_coefficients(coefficients, name=f"{family}#{witness.index}")

    async def _freeze(self, report: ScanReport, field: FiniteField, free, fixed_map, size) -> None:
        targets = []
        if report.target in ("max_multiplicative", "any") and report.max_multiplicative_witness:
            targets.append(report.max_multiplicative_witness)
        if report.target in ("max_additive", "any") and report.max_additive_witness:
            targets.append(report.max_additive_witness)
        directory = Path(settings.witness_dir)
        for item in targets:
            model = self.witness_model(report.family, field, item)
            symbol = item.symbol.replace("*", "star")
            path = directory / f"{report.family}_{field.p}^{field.k}_{symbol}.model"
            header = [
                f"{report.family} 元组 #{item.index}: "
                + ", ".join(f"{k}={v}" for k, v in item.parameters.items() if v != "0"),
                f"configuration: [{', '.join(item.configuration)}]",
            ]
            item.path = await save_model(model, path, header=header)

    def scan_family_sync(self, *args, **kwargs) -> ScanReport:
        """同步包装"""
        return asyncio.run(self.scan_family(*args, **kwargs))


# 全局服务实例
scan_service = ScanService()
