"""
射影直线上椭圆曲面的 Weierstrass 模型：不变量、判别式、坐标变换与规范形
"""
import logging
from dataclasses import dataclass, replace
from fractions import Fraction
from pathlib import Path
from typing import List, Literal, Optional, Tuple, Union

import aiofiles

from app.core.errors import (
    DegreeBoundError,
    FieldArithmeticError,
    ModelFormatError,
    NonMinimalModelError,
    SymbolicError,
)
from app.schemas.fibre import K3Check
from app.services.symbolic_service import char2_discriminant
from app.utils.field import QQ, FiniteField, Ring, get_field
from app.utils.poly import (
    WEIGHTS,
    Place,
    UniPoly,
    lift_poly,
    mobius_substitute,
    parse_poly,
    split_places,
)

# 配置日志记录器
logger = logging.getLogger(__name__)

COEFFICIENT_NAMES = ("a1", "a2", "a3", "a4", "a6")


@dataclass(frozen=True)
class WeierstrassModel:
    """y² + a1xy + a3y = x³ + a2x² + a4x + a6，系数为参数 var 的多项式"""

    a1: UniPoly
    a2: UniPoly
    a3: UniPoly
    a4: UniPoly
    a6: UniPoly
    var: str = "t"
    name: Optional[str] = None

    @classmethod
    def from_coefficients(cls, coefficients, var: str = "t", name: Optional[str] = None) -> "WeierstrassModel":
        a1, a2, a3, a4, a6 = coefficients
        return cls(a1, a2, a3, a4, a6, var=var, name=name)

    @classmethod
    def from_lists(
        cls, ring: Ring, lists, var: str = "t", name: Optional[str] = None, raw: bool = False
    ) -> "WeierstrassModel":
        """
        由五个小端序系数列表构造

        Args:
            raw: 为 True 时整数视为域元素的原始编码（如 GF(4) 的 ω = 2），否则经 from_int 映入环中
        """
        if raw:
            polys = [UniPoly(ring, coeffs) for coeffs in lists]
        else:
            polys = [UniPoly(ring, [ring.from_int(c) if isinstance(c, int) else c for c in coeffs]) for coeffs in lists]
        return cls.from_coefficients(polys, var=var, name=name)

    @property
    def ring(self) -> Ring:
        return self.a1.ring

    @property
    def characteristic(self) -> int:
        return self.ring.characteristic

    @property
    def coefficients(self) -> Tuple[UniPoly, UniPoly, UniPoly, UniPoly, UniPoly]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    def with_coefficients(self, coefficients) -> "WeierstrassModel":
        a1, a2, a3, a4, a6 = coefficients
        return replace(self, a1=a1, a2=a2, a3=a3, a4=a4, a6=a6)

    def lift(self, ring: Ring) -> "WeierstrassModel":
        """把系数嵌入到扩域"""
        return self.with_coefficients([lift_poly(a, ring) for a in self.coefficients])

    def degree_violations(self) -> List[str]:
        return [
            f"deg {name} = {a.degree} > {2 * w}"
            for name, a, w in zip(COEFFICIENT_NAMES, self.coefficients, WEIGHTS)
            if a.degree > 2 * w
        ]

    def to_text(self) -> str:
        """序列化为模型文件格式"""
        ring = self.ring
        ext = ring.degree if isinstance(ring, FiniteField) else 1
        header = f"char={ring.characteristic} ext={ext} var={self.var}"
        lines = [f"# {self.name}"] if self.name else []
        lines.append(header)
        lines.extend(f"{name}={a.to_literal(self.var)}" for name, a in zip(COEFFICIENT_NAMES, self.coefficients))
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class CoordChange:
    """x ↦ u²x + r, y ↦ u³y + u²s·x + w"""

    u: object
    r: UniPoly
    s: UniPoly
    w: UniPoly

    @classmethod
    def identity(cls, ring: Ring) -> "CoordChange":
        zero = UniPoly.zero(ring)
        return cls(ring.one, zero, zero, zero)

    @classmethod
    def translation(cls, ring: Ring, r=None, s=None, w=None) -> "CoordChange":
        zero = UniPoly.zero(ring)
        return cls(ring.one, r or zero, s or zero, w or zero)


# ----------------------------------------------------------------------
# 不变量与判别式
# ----------------------------------------------------------------------

def b_invariants(m: WeierstrassModel) -> Tuple[UniPoly, UniPoly, UniPoly, UniPoly]:
    a1, a2, a3, a4, a6 = m.coefficients
    b2 = a1 * a1 + a2 * 4
    b4 = a4 * 2 + a1 * a3
    b6 = a3 * a3 + a6 * 4
    b8 = a1 * a1 * a6 + a2 * a6 * 4 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    return b2, b4, b6, b8


def c_invariants(m: WeierstrassModel) -> Tuple[UniPoly, UniPoly]:
    b2, b4, b6, _ = b_invariants(m)
    c4 = b2 * b2 - b4 * 24
    c6 = -(b2 * b2 * b2) + b2 * b4 * 36 - b6 * 216
    return c4, c6


def universal_discriminant(m: WeierstrassModel) -> UniPoly:
    """Δ = −b2²b8 − 8b4³ − 27b6² + 9b2b4b6"""
    b2, b4, b6, b8 = b_invariants(m)
    return -(b2 * b2 * b8) - b4 * b4 * b4 * 8 - b6 * b6 * 27 + b2 * b4 * b6 * 9


def discriminant(m: WeierstrassModel) -> UniPoly:
    """
    模型的判别式；特征 2 中使用 Δ = a1⁴(a1²a6 + a1a3a4 + a2a3² + a4²) + a1³a3³ + a3⁴
    """
    if m.characteristic == 2:
        return char2_discriminant(*m.coefficients)
    return universal_discriminant(m)


def apply_change(m: WeierstrassModel, change: CoordChange, require_k3_shape: bool = False) -> WeierstrassModel:
    """
    施加坐标变换

    Args:
        m: 原模型
        change: 坐标变换 (u, r, s, w)
        require_k3_shape: 是否要求结果满足 deg a_i ≤ 2i

    Returns:
        WeierstrassModel: 新模型，Δ' = u⁻¹²Δ

    Raises:
        FieldArithmeticError: u = 0
        DegreeBoundError: 要求 K3 形状时次数越界
    """
    ring = m.ring
    if not change.u:
        raise FieldArithmeticError("坐标变换的缩放因子 u 不能为零")
    a1, a2, a3, a4, a6 = m.coefficients
    r, s, w = change.r, change.s, change.w

    n1 = a1 + s * 2
    n2 = a2 - s * a1 + r * 3 - s * s
    n3 = a3 + r * a1 + w * 2
    n4 = a4 - s * a3 + r * a2 * 2 - (w + r * s) * a1 + r * r * 3 - s * w * 2
    n6 = a6 + r * a4 + r * r * a2 + r * r * r - w * a3 - w * w - r * w * a1

    if change.u != ring.one:
        u_inv = ring.inv(change.u)
        n1, n2, n3, n4, n6 = (
            poly.scale(ring.pow(u_inv, weight)) for poly, weight in zip((n1, n2, n3, n4, n6), WEIGHTS)
        )
    result = m.with_coefficients((n1, n2, n3, n4, n6))
    if require_k3_shape:
        violations = result.degree_violations()
        if violations:
            raise DegreeBoundError(f"坐标变换破坏了 K3 次数约束: {'; '.join(violations)}")
    return result


def mobius_model(m: WeierstrassModel, matrix) -> WeierstrassModel:
    """参数的分式线性变换 t ↦ (αt+β)/(γt+δ)，a_i 作为 2i 次二元形式变换"""
    return m.with_coefficients([mobius_substitute(a, 2 * w, matrix) for a, w in zip(m.coefficients, WEIGHTS)])


# ----------------------------------------------------------------------
# 特征 2 的三分情形
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class A1Case:
    """a1 的零点情形与把零点移到标准位置后的模型"""

    kind: Literal["case_i", "case_ii", "case_iii"]
    zeros: Tuple[Place, ...]
    normalized: WeierstrassModel
    mobius: Optional[tuple] = None
    change: Optional[CoordChange] = None


def a1_case(m: WeierstrassModel) -> A1Case:
    """
    按 a1 的零点把特征 2 模型分为三种情形，并规范化为 a1 = 0、t² 或 t

    Raises:
        SymbolicError: 特征不是 2
        DegreeBoundError: deg a1 > 2
    """
    if m.characteristic != 2:
        raise SymbolicError("a1 三分情形仅适用于特征 2")
    ring = m.ring
    if m.a1.degree > 2:
        raise DegreeBoundError(f"deg a1 = {m.a1.degree} > 2")
    if m.a1.is_zero():
        return A1Case("case_i", (), m)

    gamma, beta, alpha = (m.a1.coefficient(i) for i in range(3))
    one, zero = ring.one, ring.zero

    # 1. 选取把零点送到 0（及 ∞）的分式线性变换
    if not beta:
        kind = "case_ii"
        if alpha:
            t0 = ring.pth_root(ring.div(gamma, alpha))
            zeros = (Place(ring, t0),)
            matrix = (one, t0, zero, one)
        else:
            zeros = (Place.infinity(ring),)
            matrix = (zero, one, one, zero)
        base = m
    else:
        kind = "case_iii"
        if not alpha:
            z1 = ring.div(gamma, beta)
            zeros = (Place(ring, z1), Place.infinity(ring))
            matrix = (one, z1, zero, one)
            base = m
        else:
            split = split_places(m.a1, search_ext=2 * ring.degree)
            places = [place for group in split.groups for place in group.places]
            target = places[0].ring
            z1, z2 = sorted(place.value for place in places)
            zeros = (Place(target, z1), Place(target, z2))
            matrix = (z2, z1, target.one, target.one)
            base = m.lift(target)
            ring = target

    moved = mobius_model(base, matrix)

    # 2. 用常数缩放把 a1 规范为首一
    u = moved.a1.leading
    change = CoordChange(u, UniPoly.zero(ring), UniPoly.zero(ring), UniPoly.zero(ring))
    normalized = apply_change(moved, change)
    logger.debug(f"a1 情形 {kind}，零点 {[z.label(m.var) for z in zeros]}")
    return A1Case(kind, zeros, normalized, matrix, change)


def _low_part(f: UniPoly, start: int, stop: int) -> UniPoly:
    """Σ_{start ≤ j ≤ stop} f_j t^(j−start)"""
    return UniPoly(f.ring, [f.coefficient(j) for j in range(start, stop + 1)])


def normalize_case_ii(m: WeierstrassModel) -> Tuple[WeierstrassModel, List[CoordChange]]:
    """
    a1 = t² 时依次做 x ↦ x+α, y ↦ y+β, y ↦ y+γx，得到 a3 = at+b, a4 = ct+d, a2 = t·ã2
    """
    ring = m.ring
    t2 = UniPoly.monomial(ring, ring.one, 2)
    if m.a1 != t2:
        raise SymbolicError("normalize_case_ii 要求 a1 = t²")
    changes = []

    # 1. x ↦ x+α 消去 a3 的 t²…t⁶ 项
    alpha = -_low_part(m.a3, 2, 6)
    changes.append(CoordChange.translation(ring, r=alpha))
    m = apply_change(m, changes[-1])

    # 2. y ↦ y+β 消去 a4 的 t²…t⁸ 项
    beta = _low_part(m.a4, 2, 8)
    changes.append(CoordChange.translation(ring, w=beta))
    m = apply_change(m, changes[-1])

    # 3. y ↦ y+γx 消去 a2 的常数项
    gamma = UniPoly.constant(ring, ring.pth_root(m.a2.coefficient(0)))
    changes.append(CoordChange.translation(ring, s=gamma))
    m = apply_change(m, changes[-1])
    return m, changes


def normalize_case_iii(m: WeierstrassModel) -> Tuple[WeierstrassModel, List[CoordChange]]:
    """
    a1 = t 时做 x ↦ x+α, y ↦ y+β，得到 a3 = at⁶+b, a4 = ct⁸+d
    """
    ring = m.ring
    if m.a1 != UniPoly.gen(ring):
        raise SymbolicError("normalize_case_iii 要求 a1 = t")
    changes = []
    alpha = -_low_part(m.a3, 1, 5)
    changes.append(CoordChange.translation(ring, r=alpha))
    m = apply_change(m, changes[-1])
    beta = _low_part(m.a4, 1, 7)
    changes.append(CoordChange.translation(ring, w=beta))
    m = apply_change(m, changes[-1])
    return m, changes


# ----------------------------------------------------------------------
# K3 判定
# ----------------------------------------------------------------------

def k3_from_report(m: WeierstrassModel, report) -> K3Check:
    """用已有的全局分类报告判定 K3（不抛出非极小错误）"""
    shape = _shape_check(m)
    if shape is not None:
        return shape
    if report.minimality_reductions:
        return K3Check(value=False, reason=f"模型非极小（共 {report.minimality_reductions} 次约化）")
    if not report.complete:
        return K3Check(value=False, reason="判别式未完全分裂，无法确认")
    if report.total_v_delta != 24:
        return K3Check(value=False, reason=f"Σ vΔ = {report.total_v_delta} ≠ 24")
    return K3Check(value=True, reason="次数约束、极小性与 Σ vΔ = 24 均满足")


def _shape_check(m: WeierstrassModel) -> Optional[K3Check]:
    violations = m.degree_violations()
    if violations:
        return K3Check(value=False, reason="; ".join(violations))
    if all(a.degree <= w for a, w in zip(m.coefficients, WEIGHTS)):
        return K3Check(value=False, reason="所有 deg a_i ≤ i，曲面是有理椭圆曲面")
    if discriminant(m).is_zero():
        return K3Check(value=False, reason="Δ ≡ 0，纤维化奇异")
    return None


def is_k3(m: WeierstrassModel, search_ext: Optional[int] = None) -> K3Check:
    """
    K3 判定：次数约束、某个 deg a_i > i、Δ ≢ 0、全局极小且 Σ vΔ = 24

    Raises:
        NonMinimalModelError: 模型在某点非极小
    """
    shape = _shape_check(m)
    if shape is not None:
        return shape

    from app.services.tate_service import classify_all

    report = classify_all(m, search_ext)
    if report.minimality_reductions:
        places = [f.place for f in report.fibres if f.minimality_reductions]
        raise NonMinimalModelError(f"模型在 {', '.join(places)} 处非极小")
    return k3_from_report(m, report)


def reduce_mod(m: WeierstrassModel, p: int) -> WeierstrassModel:
    """
    把 p 整的特征 0 模型约化到 GF(p)

    Raises:
        FieldArithmeticError: 系数分母被 p 整除
    """
    if m.ring != QQ:
        raise FieldArithmeticError("只能约化特征 0 模型")
    field = get_field(p)

    def reduce_coefficient(c: Fraction) -> int:
        if c.denominator % p == 0:
            raise FieldArithmeticError(f"系数 {c} 在 p={p} 处不是整的")
        return field.div(field.from_int(c.numerator), field.from_int(c.denominator))

    polys = [UniPoly(field, [reduce_coefficient(c) for c in a.coeffs]) for a in m.coefficients]
    name = f"{m.name} mod {p}" if m.name else None
    return WeierstrassModel.from_coefficients(polys, var=m.var, name=name)


# ----------------------------------------------------------------------
# 模型文件
# ----------------------------------------------------------------------

def parse_model(text: str) -> WeierstrassModel:
    """
    解析模型文件文本：头部 `char=p ext=k [var=t]`，之后五行 `a1=…` … `a6=…`

    Raises:
        ModelFormatError: 格式错误，附带行列号
    """
    ring: Optional[Ring] = None
    var = "t"
    name = None
    polys = {}
    last_line = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        last_line = lineno
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            if raw.strip().startswith("#") and name is None and ring is None:
                name = raw.strip().lstrip("#").strip() or None
            continue
        stripped = line.lstrip()
        indent = len(line) - len(stripped)

        if ring is None:
            # 1. 头部
            fields = {}
            column = indent + 1
            for token in stripped.split():
                key, sep, value = token.partition("=")
                if not sep or key not in ("char", "ext", "var"):
                    raise ModelFormatError(f"无法识别的头部字段 '{token}'", lineno, column)
                fields[key] = value
                column += len(token) + 1
            if "char" not in fields:
                raise ModelFormatError("头部缺少 char=p", lineno, indent + 1)
            try:
                p = int(fields["char"])
                k = int(fields.get("ext", "1"))
            except ValueError:
                raise ModelFormatError("char 与 ext 必须是整数", lineno, indent + 1)
            var = fields.get("var", "t")
            ring = QQ if p == 0 else get_field(p, k)
            continue

        # 2. 系数行
        key, sep, body = stripped.partition("=")
        key = key.strip()
        if not sep or key not in COEFFICIENT_NAMES:
            raise ModelFormatError(f"应为 a1=… 到 a6=… 的系数行，遇到 '{stripped}'", lineno, indent + 1)
        if key in polys:
            raise ModelFormatError(f"系数 {key} 重复定义", lineno, indent + 1)
        column = indent + len(stripped) - len(body) + 1
        polys[key] = parse_poly(body, ring, var, line=lineno, column=column)

    if ring is None:
        raise ModelFormatError("缺少头部 char=p ext=k", last_line or 1, 1)
    missing = [n for n in COEFFICIENT_NAMES if n not in polys]
    if missing:
        raise ModelFormatError(f"缺少系数 {', '.join(missing)}", last_line, 1)
    return WeierstrassModel.from_coefficients([polys[n] for n in COEFFICIENT_NAMES], var=var, name=name)


def load_model(path: Union[str, Path]) -> WeierstrassModel:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ModelFormatError(f"无法读取模型文件 {path}: {exc}")
    model = parse_model(text)
    return model if model.name else replace(model, name=path.stem)


async def save_model(m: WeierstrassModel, path: Union[str, Path], header: Optional[List[str]] = None) -> str:
    """异步写出模型文件，返回路径"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    comments = "".join(f"# {line}\n" for line in header or [])
    async with aiofiles.open(path, "w", encoding="utf-8") as out:
        await out.write(comments + m.to_text())
    logger.info(f"模型已写入 {path}")
    return str(path)
