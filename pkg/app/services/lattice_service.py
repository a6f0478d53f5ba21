"""
Néron–Severi 判别式、高度配对贡献、Artin 相容性与同余证明
"""
import json
import logging
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Tuple, Union

import galois
from pydantic import ValidationError

from app.core.config import settings
from app.core.errors import LatticeInputError, ModelFormatError
from app.schemas.fibre import KodairaType
from app.schemas.lattice import (
    ArtinCertificate,
    Contact,
    DiscriminantValue,
    LatticeConfig,
    ProofTranscript,
)

# 配置日志记录器
logger = logging.getLogger(__name__)

# 例外型根格的判别式
_EXCEPTIONAL_DISCR = {"E6": 3, "E7": 2, "E8": 1}

# 例外型纤维：单重分支个数与非恒等单重分支的贡献（标准表）
_EXCEPTIONAL_CONTRIBUTION = {
    "II": (1, None),
    "III": (2, Fraction(1, 2)),
    "IV": (3, Fraction(2, 3)),
    "IV*": (3, Fraction(4, 3)),
    "III*": (2, Fraction(3, 2)),
    "II*": (1, None),
}

SCENARIOS = ("I20_odd_char", "I15star_far_odd_char")


def root_discriminant(kodaira: KodairaType) -> int:
    """
    可约纤维对应根格的判别式绝对值

    Raises:
        LatticeInputError: 纤维不可约
    """
    lattice = kodaira.root_lattice
    if lattice is None:
        raise LatticeInputError(f"{kodaira.symbol} 是不可约纤维，没有根格")
    kind, rank = lattice[0], int(lattice[1:])
    if kind == "A":
        return rank + 1
    if kind == "D":
        return 4
    return _EXCEPTIONAL_DISCR[lattice]


def contribution_is_extension(kodaira: KodairaType) -> bool:
    """I_n 与 I_n* 以外的贡献值取自标准表"""
    return kodaira.family not in ("I", "I*")


def contribution(kodaira: KodairaType, contact: Optional[Contact]) -> Fraction:
    """
    截面 P 与纤维相交于给定分支时，对高度 <P,P> 的修正项

    Args:
        kodaira: 纤维型
        contact: I_n 用 0…n−1；I_n* 用 identity / near / far；其它型用单重分支编号

    Returns:
        Fraction: 贡献值

    Raises:
        LatticeInputError: 分支编号不合法
    """
    if contact is None or contact == "identity" or contact == 0:
        return Fraction(0)

    if kodaira.family == "I":
        n = kodaira.n
        if not isinstance(contact, int) or not 0 <= contact < max(n, 1):
            raise LatticeInputError(f"{kodaira.symbol} 的分支编号应在 0…{n - 1} 中，得到 {contact!r}")
        return Fraction(contact * (n - contact), n)

    if kodaira.family == "I*":
        if contact == "near":
            return Fraction(1)
        if contact == "far":
            return 1 + Fraction(kodaira.n, 4)
        raise LatticeInputError(f"{kodaira.symbol} 的分支应为 identity / near / far，得到 {contact!r}")

    simple, value = _EXCEPTIONAL_CONTRIBUTION[kodaira.family]
    if not isinstance(contact, int) or not 0 < contact < simple:
        raise LatticeInputError(f"{kodaira.symbol} 没有编号为 {contact!r} 的单重分支")
    return value


def shioda_tate_discr(cfg: LatticeConfig) -> DiscriminantValue:
    """
    由纤维根格、挠子群与（秩 1 时）生成元高度计算 |discr NS|

    Raises:
        LatticeInputError: 秩 1 缺少截面数据，或高度不为正
    """
    product = 1
    for kodaira in cfg.fibres:
        if kodaira.components >= 2:
            product *= root_discriminant(kodaira)
    torsion_sq = cfg.torsion_order ** 2

    if cfg.mw_rank == 0:
        return DiscriminantValue.of(Fraction(product, torsion_sq))

    # 秩 1：<P,P> = 4 + 2(P.O) − Σ contr
    if cfg.p_o is None:
        raise LatticeInputError("秩 1 需要给出 (P.O)")
    contacts = cfg.section_contact or [None] * len(cfg.fibres)
    correction = sum((contribution(k, c) for k, c in zip(cfg.fibres, contacts)), Fraction(0))
    height = 4 + 2 * cfg.p_o - correction
    if height <= 0:
        raise LatticeInputError(f"高度 <P,P> = {height} 不为正")
    extension = any(contribution_is_extension(k) and c not in (None, 0, "identity") for k, c in zip(cfg.fibres, contacts))
    return DiscriminantValue.of(
        product * height / torsion_sq,
        height=str(height),
        uses_extension=extension,
    )


def artin_compatible(d: Union[Fraction, int, DiscriminantValue], p: int) -> ArtinCertificate:
    """
    检查 |discr| 是否可能等于 p^{2σ₀}（允许相差 p 的偶次幂）

    Args:
        d: 正的判别式绝对值
        p: 素数

    Returns:
        ArtinCertificate: 相容时给出 (σ₀, k)，否则给出障碍
    """
    if isinstance(d, DiscriminantValue):
        d = d.value
    d = Fraction(d)
    text = str(d)
    if d <= 0:
        return ArtinCertificate(compatible=False, p=p, discriminant=text, obstruction="判别式不为正")
    if d.denominator != 1:
        return ArtinCertificate(compatible=False, p=p, discriminant=text, obstruction="判别式不是整数")

    n = d.numerator
    if n == 1:
        j = 0
    else:
        primes, exponents = galois.factors(n)
        others = [q for q in primes if q != p]
        if others:
            return ArtinCertificate(
                compatible=False, p=p, discriminant=text, obstruction=f"素数 {others[0]} ≠ {p} 整除判别式"
            )
        e = exponents[0]
        if e % 2:
            return ArtinCertificate(
                compatible=False, p=p, discriminant=text, obstruction=f"{p} 的指数 {e} 是奇数"
            )
        j = e // 2

    sigma0 = min(max(j, 1), settings.artin_sigma_max)
    return ArtinCertificate(compatible=True, p=p, discriminant=text, sigma0=sigma0, k=sigma0 - j)


def compatible_primes(d: Union[Fraction, int, DiscriminantValue]) -> List[ArtinCertificate]:
    """
    列出使判别式相容的全部素数；判别式为 1 时对所有 p 相容，返回空列表并由调用方说明
    """
    if isinstance(d, DiscriminantValue):
        d = d.value
    d = Fraction(d)
    if d <= 0 or d.denominator != 1 or d.numerator == 1:
        return []
    primes, _ = galois.factors(d.numerator)
    return [cert for cert in (artin_compatible(d, q) for q in primes) if cert.compatible]


def describe_artin(d: DiscriminantValue) -> str:
    """命令行输出用的一行结论"""
    value = d.value
    if value == 1:
        return f"|discr| = 1 (up to p^{{2k}}); artin: compatible for every p, σ₀=1"
    certs = compatible_primes(value)
    if not certs:
        obstruction = artin_compatible(value, 2).obstruction if value.denominator == 1 else "判别式不是整数"
        return f"|discr| = {value} (up to p^{{2k}}); artin: incompatible for every p ({obstruction})"
    parts = ", ".join(f"p={c.p}, σ₀={c.sigma0}" for c in certs)
    head = certs[0].p if len(certs) == 1 else "p"
    return f"|discr| = {value} (up to {head}^{{2k}}); artin: compatible only for {parts}"


def odd_prime_powers_mod8(sigma_max: Optional[int] = None) -> List[Tuple[int, int, int]]:
    """对 p mod 8 ∈ {1,3,5,7} 与 σ₀ ≤ sigma_max 穷举 p^{2σ₀} mod 8"""
    sigma_max = sigma_max or settings.artin_sigma_max
    return [(r, s, pow(r, 2 * s, 8)) for r in (1, 3, 5, 7) for s in range(1, sigma_max + 1)]


def _modular_preamble(lines: List[str]) -> bool:
    """
    记录两条与 (P.O) 无关的事实：奇素数的偶次幂 ≡ 1 mod 8，8(P.O) ≡ 0 mod 8
    """
    residues = odd_prime_powers_mod8()
    ok = all(value == 1 for _, _, value in residues)
    lines.append(f"[FACT] p^{{2σ₀}} mod 8 = 1 对 p mod 8 ∈ {{1,3,5,7}}、σ₀ ∈ 1…{settings.artin_sigma_max} 全部成立: {ok}")
    lines.append("[FACT] (P.O) 的系数 40 与 8 模 8 分别为 0 与 0，同余类与 (P.O) 无关")
    return ok and 40 % 8 == 0 and 8 % 8 == 0


def _i20_proof() -> ProofTranscript:
    lines: List[str] = []
    surviving: List[str] = []
    cases = excluded = 0
    preamble = _modular_preamble(lines)
    for i in range(20):
        for po in range(settings.height_po_max + 1):
            cases += 1
            d = 80 + 40 * po - i * (20 - i)
            label = f"i={i}, (P.O)={po}"
            if d <= 0:
                reason = f"|discr| = {d} ≤ 0，高度不为正"
            elif d % 2 == 0:
                reason = f"|discr| = {d} 为偶数，与奇数 p^{{2σ₀}} 矛盾"
            elif d % 8 != 1 and preamble:
                reason = f"|discr| = {d} ≡ {d % 8} mod 8（i²−4i ≡ {(i * i - 4 * i) % 8}），而 p^{{2σ₀}} ≡ 1 mod 8"
            else:
                surviving.append(label)
                lines.append(f"[OPEN] {label}: |discr| = {d}")
                continue
            excluded += 1
            lines.append(f"[EXCLUDED] {label}: {reason}")
    return ProofTranscript(scenario="I20_odd_char", lines=lines, cases=cases, excluded=excluded, surviving=surviving)


def _i15star_proof() -> ProofTranscript:
    lines: List[str] = []
    surviving: List[str] = []
    cases = excluded = 0
    preamble = _modular_preamble(lines)
    fibre = KodairaType(family="I*", n=15)
    for contact in ("identity", "near", "far"):
        for po in range(settings.height_po_max + 1):
            cases += 1
            height = 4 + 2 * po - contribution(fibre, contact)
            d = 4 * height
            label = f"{contact}, (P.O)={po}"
            if d <= 0:
                reason = f"|discr| = {d} ≤ 0，高度不为正"
            elif d.denominator != 1:
                reason = f"|discr| = {d} 不是整数"
            elif d.numerator % 2 == 0:
                reason = f"|discr| = {d} 为偶数，与奇数 p^{{2σ₀}} 矛盾"
            elif d.numerator % 8 != 1 and preamble:
                reason = f"|discr| = 16+8(P.O)−4−15 = {d} ≡ {d.numerator % 8} mod 8，而 p^{{2σ₀}} ≡ 1 mod 8"
            else:
                surviving.append(label)
                lines.append(f"[OPEN] {label}: |discr| = {d}")
                continue
            excluded += 1
            lines.append(f"[EXCLUDED] {label}: {reason}")
    return ProofTranscript(
        scenario="I15star_far_odd_char", lines=lines, cases=cases, excluded=excluded, surviving=surviving
    )


def congruence_proof(scenario: str) -> ProofTranscript:
    """
    穷举式同余证明

    Args:
        scenario: I20_odd_char 或 I15star_far_odd_char

    Returns:
        ProofTranscript: 每个 (分支, (P.O)) 一行的排除记录

    Raises:
        LatticeInputError: 未知情形
    """
    if scenario == "I20_odd_char":
        proof = _i20_proof()
    elif scenario == "I15star_far_odd_char":
        proof = _i15star_proof()
    else:
        raise LatticeInputError(f"未知的同余证明情形 '{scenario}'，可选: {', '.join(SCENARIOS)}")
    logger.info(f"同余证明 {scenario}: {proof.excluded}/{proof.cases} 个情形被排除")
    return proof


def load_config(path: Union[str, Path]) -> LatticeConfig:
    """
    读取 JSON 格式的格配置文件

    Raises:
        ModelFormatError: 文件无法读取或 JSON 语法错误
        LatticeInputError: 内容不合法
    """
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ModelFormatError(f"无法读取配置文件 {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise ModelFormatError(exc.msg, exc.lineno, exc.colno)
    try:
        return LatticeConfig.model_validate(raw)
    except ValidationError as exc:
        raise LatticeInputError(f"配置文件 {path} 不合法: {exc.errors()[0]['msg']}")
