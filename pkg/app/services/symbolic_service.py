"""
特征 2 判别式的符号计算与分支消元
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple, Union

from app.core.config import settings
from app.core.errors import SymbolicError
from app.schemas.symbolic import ElimLeaf, ElimVerdict
from app.services.families import VAR, Family, get_family
from app.utils.field import FiniteField, FiniteFieldElement
from app.utils.poly import UniPoly
from app.utils.symbolic import Monomial, SymPoly, monomial_key

# 配置日志记录器
logger = logging.getLogger(__name__)


def char2_discriminant(a1, a2, a3, a4, a6):
    """Δ = a1⁴(a1²a6 + a1a3a4 + a2a3² + a4²) + a1³a3³ + a3⁴，对 SymPoly 与 GF(2^k) 上的 UniPoly 都成立"""
    a1_sq = a1 * a1
    a3_sq = a3 * a3
    inner = a1_sq * a6 + a1 * a3 * a4 + a2 * a3_sq + a4 * a4
    return a1_sq * a1_sq * inner + a1_sq * a1 * a3_sq * a3 + a3_sq * a3_sq


def symbolic_discriminant(family: Union[str, Family]) -> SymPoly:
    """
    计算族的符号判别式

    Args:
        family: 族名（case_ii / case_iii / general_char2 / ...）或族对象

    Returns:
        SymPoly: 以 t 与参数符号为变量的判别式
    """
    if isinstance(family, str):
        family = get_family(family)
    return char2_discriminant(*family.coefficients)


def symbolic_c4(family: Union[str, Family]) -> SymPoly:
    """
    族的符号 c4 = b2² − 24b4（b2 = a1² + 4a2, b4 = 2a4 + a1a3），特征 2 中化为 a1⁴
    """
    if isinstance(family, str):
        family = get_family(family)
    a1, a2, a3, a4, _ = family.coefficients
    b2 = a1 * a1 + a2 * 4
    b4 = a4 * 2 + a1 * a3
    return b2 * b2 - b4 * 24


@dataclass
class Equation:
    """带标签的方程 poly = 0"""

    label: str
    poly: SymPoly


@dataclass
class ConstraintSystem:
    """方程组、已有赋值与非零符号"""

    equations: List[Equation]
    assignments: Dict[str, SymPoly] = field(default_factory=dict)
    nonvanishing: FrozenSet[str] = frozenset()
    universe: FrozenSet[str] = frozenset()

    def copy(self) -> "ConstraintSystem":
        return ConstraintSystem(
            equations=list(self.equations),
            assignments=dict(self.assignments),
            nonvanishing=self.nonvanishing,
            universe=self.universe,
        )

    def with_assignments(self, extra: Mapping[str, SymPoly]) -> "ConstraintSystem":
        """预先代入一组赋值（例如把 a 规范化为 1）"""
        system = self.copy()
        for name, value in extra.items():
            system.equations = [Equation(eq.label, eq.poly.substitute({name: value})) for eq in system.equations]
            system.equations = [eq for eq in system.equations if not eq.poly.is_zero()]
            system.universe = system.universe - {name}
        return system

    def describe(self) -> List[str]:
        return [f"{eq.label}: {eq.poly} = 0" for eq in self.equations]


def _translate_by_one(coeffs: Dict[int, SymPoly]) -> Dict[int, SymPoly]:
    """特征 2 中 t ↦ t+1：E_k = Σ_{j ⊇ k} D_j（Lucas 定理）"""
    top = max(coeffs, default=0)
    out: Dict[int, SymPoly] = {}
    for k in range(top + 1):
        acc = SymPoly.zero()
        for j, dj in coeffs.items():
            if j & k == k:
                acc = acc + dj
        if not acc.is_zero():
            out[k] = acc
    return out


def impose_valuation(delta: SymPoly, place: Union[str, int], n: int, var: str = VAR) -> ConstraintSystem:
    """
    把 v_place(Δ) ≥ n 翻译为系数方程组

    Args:
        delta: 符号判别式
        place: "0"、"1" 或 "inf"
        n: 赋值下界

    Raises:
        SymbolicError: n > 24 或点不支持
    """
    if n > 24 or n < 0:
        raise SymbolicError(f"赋值下界 {n} 超出 0…24")
    place = str(place)
    coeffs = delta.as_poly_in(var)

    if place == "0":
        indices, prefix = range(n), "d"
    elif place in ("inf", "∞"):
        indices, prefix = range(25 - n, 25), "d"
    elif place == "1":
        coeffs = _translate_by_one(coeffs)
        indices, prefix = range(n), "e"
    else:
        raise SymbolicError(f"不支持的点 '{place}'，可选 0 / 1 / inf")

    equations = [Equation(f"{prefix}{i}", coeffs[i]) for i in indices if i in coeffs and not coeffs[i].is_zero()]
    universe = delta.symbols() - {var}
    logger.debug(f"v_{place}(Δ) ≥ {n} 产生 {len(equations)} 个方程")
    return ConstraintSystem(equations=equations, universe=frozenset(universe))


# ----------------------------------------------------------------------
# 消元
# ----------------------------------------------------------------------

def _interreduce(equations: List[Equation]) -> List[Equation]:
    """GF(2) 上按单项式坐标做约化行阶梯化，保持原有顺序"""
    rows: List[Tuple[str, set, Monomial]] = []
    for eq in equations:
        support = set(eq.poly.terms)
        for _, row_support, pivot in rows:
            if pivot in support:
                support ^= row_support
        if not support:
            continue
        pivot = max(support, key=monomial_key)
        for i, (label, row_support, row_pivot) in enumerate(rows):
            if pivot in row_support:
                rows[i] = (label, row_support ^ support, row_pivot)
        rows.append((eq.label, support, pivot))
    return [Equation(label, SymPoly(frozenset(support))) for label, support, _ in rows]


class _Search:
    """深度优先的分支消元"""

    def __init__(self, budget: int):
        self.budget = budget
        self.used = 0
        self.exhausted = False
        self.leaves: List[ElimLeaf] = []
        self.transcript: List[str] = []

    def log(self, branch: str, line: str) -> None:
        prefix = "" if branch == "root" else f"{{{branch}}} "
        self.transcript.append(prefix + line)
        logger.debug(prefix + line)

    def assign(self, system: ConstraintSystem, name: str, value: SymPoly) -> None:
        system.assignments = {k: v.substitute({name: value}) for k, v in system.assignments.items()}
        system.assignments[name] = value

    def leaf(self, branch: str, status: str, system: ConstraintSystem) -> None:
        survivors = sorted(system.universe - system.assignments.keys())
        residual = [f"{eq.label}: {eq.poly}" for eq in system.equations]
        self.leaves.append(ElimLeaf(
            branch=branch,
            status=status,
            assignments=dict(system.assignments),
            survivors=survivors,
            residual=residual,
        ))
        self.log(branch, f"[END] {status}; survivors: {', '.join(survivors) or '-'}")

    def run(self, system: ConstraintSystem, branch: str) -> None:
        while True:
            # 1. 按当前赋值约化方程并去重
            reduced: List[Equation] = []
            seen = set()
            for eq in system.equations:
                poly = eq.poly.substitute(system.assignments)
                if poly.is_zero() or poly in seen:
                    continue
                seen.add(poly)
                reduced.append(Equation(eq.label, poly))
            if any(eq.poly.is_one() for eq in reduced):
                system.equations = reduced
                return self.leaf(branch, "inconsistent", system)

            # 2. R0: 线性互约化
            interreduced = _interreduce(reduced)
            if [eq.poly for eq in interreduced] != [eq.poly for eq in reduced]:
                self.log(branch, f"[R0] interreduce {len(reduced)} → {len(interreduced)} equations")
            system.equations = interreduced
            if any(eq.poly.is_one() for eq in interreduced):
                return self.leaf(branch, "inconsistent", system)
            if not interreduced:
                return self.leaf(branch, "solved", system)

            # 3. R1: x^m = 0 ⇒ x := 0
            applied = False
            for eq in interreduced:
                power = eq.poly.single_symbol_power()
                if power:
                    name, _ = power
                    self.log(branch, f"[R1] {eq.label}: {eq.poly} = 0 ⇒ {name} := 0")
                    if name in system.nonvanishing:
                        self.log(branch, f"[R1] {name} 被声明为非零，矛盾")
                        return self.leaf(branch, "inconsistent", system)
                    self.assign(system, name, SymPoly.zero())
                    applied = True
                    break
            if applied:
                continue

            # 4. R2: v + q = 0 ⇒ v := q
            candidates = [(len(eq.poly.terms), i, eq) for i, eq in enumerate(interreduced) if eq.poly.linear_symbols()]
            if candidates:
                _, _, eq = min(candidates, key=lambda c: (c[0], c[1]))
                name = eq.poly.linear_symbols()[0]
                value = eq.poly + SymPoly.symbol(name)
                self.log(branch, f"[R2] {eq.label}: {eq.poly} = 0 ⇒ {name} := {value}")
                self.assign(system, name, value)
                continue

            # 5. R3: v^(2^j) + q = 0，q 为 2^j 次幂 ⇒ v := q^(1/2^j)
            if self._apply_frobenius_rule(system, interreduced, branch):
                continue

            # 6. R4: 多符号单项式 ⇒ 分支
            monomials = [eq for eq in interreduced if eq.poly.is_monomial()]
            if monomials:
                eq = monomials[0]
                names = sorted(eq.poly.symbols() - system.nonvanishing)
                if not names:
                    self.log(branch, f"[R4] {eq.label}: {eq.poly} 的因子均非零，矛盾")
                    return self.leaf(branch, "inconsistent", system)
                self.log(branch, f"[R4] {eq.label}: {eq.poly} = 0 ⇒ branch on {', '.join(names)}")
                for name in names:
                    if self.used >= self.budget:
                        self.exhausted = True
                        self.log(branch, f"[R4] 分支预算 {self.budget} 已耗尽")
                        return self.leaf(branch, "exhausted", system)
                    self.used += 1
                    child = system.copy()
                    self.assign(child, name, SymPoly.zero())
                    self.run(child, f"{branch}/{name}=0")
                return None

            return self.leaf(branch, "stuck", system)

    def _apply_frobenius_rule(self, system: ConstraintSystem, equations: Sequence[Equation], branch: str) -> bool:
        for eq in equations:
            for name in sorted(eq.poly.symbols()):
                for m in eq.poly.terms:
                    if len(m) != 1 or m[0][0] != name:
                        continue
                    e = m[0][1]
                    if e < 2 or e & (e - 1):
                        continue
                    rest = eq.poly + SymPoly(frozenset({m}))
                    if name in rest.symbols():
                        continue
                    root = rest.frobenius_root(e.bit_length() - 1)
                    if root is None:
                        continue
                    self.log(branch, f"[R3] {eq.label}: {eq.poly} = 0 ⇒ {name} := {root}")
                    self.assign(system, name, root)
                    return True
        return False


def eliminate(system: ConstraintSystem, budget: Optional[int] = None) -> ElimVerdict:
    """
    以规则 R0–R4 对方程组做分支消元

    Args:
        system: 待消元的方程组
        budget: 分支预算，默认取配置

    Returns:
        ElimVerdict: 全部参数被消去（列出幸存符号）或残余方程组

    Raises:
        SymbolicError: 预算小于 1
    """
    budget = settings.branch_budget if budget is None else budget
    if budget < 1:
        raise SymbolicError("分支预算必须至少为 1")

    search = _Search(budget)
    for line in system.describe():
        search.transcript.append(f"[EQ] {line}")
    search.run(system.copy(), "root")

    open_leaves = [leaf for leaf in search.leaves if leaf.status in ("stuck", "exhausted")]
    survivors = sorted({s for leaf in search.leaves if leaf.status == "solved" for s in leaf.survivors})
    status = "residual" if open_leaves or search.exhausted else "all_parameters_killed"
    search.transcript.append(f"[VERDICT] {status}; survivors: {', '.join(survivors) or '-'}")
    logger.info(f"消元完成: {status}，叶子 {len(search.leaves)} 个，分支 {search.used} 个")
    return ElimVerdict(
        status=status,
        survivors=survivors,
        leaves=search.leaves,
        branches_used=search.used,
        exhausted=search.exhausted,
        transcript=search.transcript,
    )


def residual_discriminants(delta: SymPoly, verdict: ElimVerdict) -> List[SymPoly]:
    """把每个已解分支的赋值代入 Δ"""
    return [delta.substitute(leaf.assignments) for leaf in verdict.solved_leaves]


def sym_specialize(
    f: SymPoly,
    assignment: Mapping[str, Union[FiniteFieldElement, int]],
    field: Optional[FiniteField] = None,
    var: str = VAR,
) -> UniPoly:
    """
    在特征 2 的有限域中对参数符号求值，得到 t 的多项式

    Args:
        f: 符号多项式
        assignment: 符号到域元素（或原始编码）的映射
        field: 目标域；缺省时由赋值中的元素推断

    Raises:
        SymbolicError: 有未覆盖的符号或域特征不是 2
    """
    if field is None:
        field = next((v.field for v in assignment.values() if isinstance(v, FiniteFieldElement)), None)
    if field is None or field.characteristic != 2:
        raise SymbolicError("sym_specialize 需要特征 2 的有限域")
    missing = sorted(f.symbols() - {var} - assignment.keys())
    if missing:
        raise SymbolicError(f"未覆盖的符号: {', '.join(missing)}")
    values = {}
    for name, value in assignment.items():
        if isinstance(value, FiniteFieldElement):
            if value.field != field:
                raise SymbolicError(f"符号 {name} 的取值不在 {field} 中")
            values[name] = value.value
        else:
            values[name] = int(value)
    coeffs = f.evaluate_terms(values, field, keep=var)
    size = max(coeffs) + 1 if coeffs else 0
    return UniPoly(field, [coeffs.get(i, 0) for i in range(size)])
