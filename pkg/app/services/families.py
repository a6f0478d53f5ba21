"""
特征 2 中的规范形族：以符号多项式给出 a1, a2, a3, a4, a6
"""
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Sequence, Tuple

from app.core.errors import SymbolicError
from app.utils.field import FiniteField
from app.utils.poly import UniPoly
from app.utils.symbolic import SymPoly, sym_sum

# 配置日志记录器
logger = logging.getLogger(__name__)

VAR = "t"
_T = SymPoly.symbol(VAR)


def _dense(prefix: str, degree: int, shift: int = 0) -> Tuple[SymPoly, List[str]]:
    """Σ_{j ≤ degree} prefix_j · t^(j+shift)"""
    names = [f"{prefix}_{j}" for j in range(degree + 1)]
    poly = sym_sum(SymPoly.symbol(n) * _T ** (j + shift) for j, n in enumerate(names))
    return poly, names


@dataclass(frozen=True)
class Family:
    """一个参数化的 Weierstrass 族"""

    name: str
    parameters: Tuple[str, ...]
    coefficients: Tuple[SymPoly, SymPoly, SymPoly, SymPoly, SymPoly]
    description: str = ""

    def template(self) -> "FamilyTemplate":
        return get_template(self.name)


class FamilyTemplate:
    """编译后的族：对参数取值直接生成具体系数"""

    def __init__(self, family: Family):
        self.family = family
        index = {name: i for i, name in enumerate(family.parameters)}
        self._plan: List[List[Tuple[int, Tuple[Tuple[int, int], ...]]]] = []
        for coefficient in family.coefficients:
            plan = []
            for m in coefficient.terms:
                power = 0
                factors = []
                for name, e in m:
                    if name == VAR:
                        power = e
                    else:
                        factors.append((index[name], e))
                plan.append((power, tuple(factors)))
            plan.sort()
            self._plan.append(plan)

    def specialize(self, values: Sequence[int], field: FiniteField) -> Tuple[UniPoly, ...]:
        """
        按参数顺序代入原始域元素，得到 (a1, a2, a3, a4, a6)
        """
        out = []
        for plan in self._plan:
            coeffs: Dict[int, int] = {}
            for power, factors in plan:
                c = field.one
                for idx, e in factors:
                    v = values[idx]
                    if not v:
                        c = 0
                        break
                    c = field.mul(c, v if e == 1 else field.pow(v, e))
                if c:
                    coeffs[power] = field.add(coeffs.get(power, 0), c)
            size = max(coeffs) + 1 if coeffs else 0
            out.append(UniPoly(field, [coeffs.get(i, 0) for i in range(size)]))
        return tuple(out)


def _case_ii() -> Family:
    a, b, c, d = (SymPoly.symbol(n) for n in "abcd")
    a2, a2_names = _dense("a2t", 3, shift=1)
    a6, a6_names = _dense("a6", 12)
    return Family(
        name="case_ii",
        parameters=("a", "b", "c", "d", *a2_names, *a6_names),
        coefficients=(_T ** 2, a2, a * _T + b, c * _T + d, a6),
        description="a1 = t², a3 = at+b, a4 = ct+d, a2 = t·ã2",
    )


def _case_iii() -> Family:
    a, b, c, d = (SymPoly.symbol(n) for n in "abcd")
    a2, a2_names = _dense("a2", 4)
    a6, a6_names = _dense("a6", 12)
    return Family(
        name="case_iii",
        parameters=("a", "b", "c", "d", *a2_names, *a6_names),
        coefficients=(_T, a2, a * _T ** 6 + b, c * _T ** 8 + d, a6),
        description="a1 = t, a3 = at⁶+b, a4 = ct⁸+d",
    )


def _general_char2() -> Family:
    coefficients = []
    names: List[str] = []
    for weight in (1, 2, 3, 4, 6):
        poly, part = _dense(f"a{weight}", 2 * weight)
        coefficients.append(poly)
        names.extend(part)
    return Family(
        name="general_char2",
        parameters=tuple(names),
        coefficients=tuple(coefficients),
        description="deg a_i ≤ 2i 的一般模型",
    )


def _case_i_star() -> Family:
    """
    a1 = 0 时 Δ = a3⁴，(a, b) ≠ (0, 0) 时 a3 = at⁵ + bt⁶ 使 v0(Δ) ∈ {20, 24}，与 a2、a4、a6 无关。
    a2、a4、a6 只保留 2、2、3 次以内的部分：参数共 12 个，GF(2) 上 2¹² 个元组，
    是对 Tate 终止型（I7* 与 I9*）的旁证切片而不是完整参数空间
    """
    a, b = SymPoly.symbol("a"), SymPoly.symbol("b")
    a2, a2_names = _dense("a2", 2)
    a4, a4_names = _dense("a4", 2)
    a6, a6_names = _dense("a6", 3)
    return Family(
        name="case_i_star",
        parameters=("a", "b", *a2_names, *a4_names, *a6_names),
        coefficients=(SymPoly.zero(), a2, a * _T ** 5 + b * _T ** 6, a4, a6),
        description="a1 = 0, a3 = at⁵+bt⁶，其余系数取低次部分",
    )


def _case_ii_star() -> Family:
    a2, a2_names = _dense("a2t", 3, shift=1)
    a6, a6_names = _dense("a6t", 4, shift=8)
    return Family(
        name="case_ii_star",
        parameters=(*a2_names, *a6_names),
        coefficients=(_T ** 2, a2, SymPoly.zero(), SymPoly.zero(), a6),
        description="a1 = t², a2 = t·ã2, a3 = a4 = 0, a6 = t⁸·ã6",
    )


def _case_iii_star() -> Family:
    e, c = SymPoly.symbol("e"), SymPoly.symbol("c")
    tail, tail_names = _dense("a6t", 2)
    return Family(
        name="case_iii_star",
        parameters=("e", "c", *tail_names),
        coefficients=(_T, e * _T ** 4 + c * _T ** 3 + tail, _T ** 6, c * _T ** 8, tail * _T ** 10),
        description="y²+txy+t⁶y = x³+(et⁴+ct³+ã6)x²+ct⁸x+t¹⁰ã6",
    )


_BUILDERS = {
    "case_ii": _case_ii,
    "case_iii": _case_iii,
    "general_char2": _general_char2,
    "case_i_star": _case_i_star,
    "case_ii_star": _case_ii_star,
    "case_iii_star": _case_iii_star,
}

FAMILY_NAMES = tuple(_BUILDERS)


@lru_cache(maxsize=None)
def get_family(name: str) -> Family:
    """按名称获取族"""
    try:
        return _BUILDERS[name]()
    except KeyError:
        raise SymbolicError(f"未知的族 '{name}'，可选: {', '.join(FAMILY_NAMES)}")


@lru_cache(maxsize=None)
def get_template(name: str) -> FamilyTemplate:
    return FamilyTemplate(get_family(name))
