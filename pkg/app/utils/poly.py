"""
参数 t 上的一元多项式、射影直线上的点与赋值
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

import galois

from app.core.config import settings
from app.core.errors import DegreeBoundError, ModelFormatError, ValuationError
from app.utils.field import FiniteField, Ring, get_field

# 配置日志记录器
logger = logging.getLogger(__name__)

# 零多项式的次数与赋值哨兵
DEGREE_NEG_INF = -1
VAL_INF = 1 << 30

# Weierstrass 系数的权重 a1, a2, a3, a4, a6
WEIGHTS = (1, 2, 3, 4, 6)


def _is_gf2(ring: Ring) -> bool:
    return isinstance(ring, FiniteField) and ring.order == 2


class UniPoly:
    """小端序稠密多项式，系数为环的原始编码，末尾零已去除"""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: Ring, coeffs: Iterable = ()):
        coeffs = list(coeffs)
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        self.ring = ring
        self.coeffs = tuple(coeffs)

    # ------------------------------------------------------------------
    # 构造
    # ------------------------------------------------------------------

    @classmethod
    def zero(cls, ring: Ring) -> "UniPoly":
        return cls(ring, ())

    @classmethod
    def one(cls, ring: Ring) -> "UniPoly":
        return cls(ring, (ring.one,))

    @classmethod
    def constant(cls, ring: Ring, c) -> "UniPoly":
        return cls(ring, (c,))

    @classmethod
    def monomial(cls, ring: Ring, c, n: int) -> "UniPoly":
        if not c:
            return cls(ring, ())
        return cls(ring, [ring.zero] * n + [c])

    @classmethod
    def gen(cls, ring: Ring) -> "UniPoly":
        return cls(ring, (ring.zero, ring.one))

    # ------------------------------------------------------------------
    # 基本属性
    # ------------------------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, i: int):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.ring.zero

    @property
    def leading(self):
        return self.coeffs[-1] if self.coeffs else self.ring.zero

    def low_valuation(self) -> int:
        """在 t=0 处的赋值"""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return VAL_INF

    # ------------------------------------------------------------------
    # 运算
    # ------------------------------------------------------------------

    def _lift(self, other) -> "UniPoly":
        if isinstance(other, UniPoly):
            if other.ring != self.ring:
                raise ValuationError(f"多项式系数环不一致: {self.ring} 与 {other.ring}")
            return other
        if isinstance(other, int):
            return UniPoly(self.ring, (self.ring.from_int(other),))
        return UniPoly(self.ring, (other,))

    def __add__(self, other) -> "UniPoly":
        other = self._lift(other)
        add = self.ring.add
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = add(out[i], c)
        return UniPoly(self.ring, out)

    __radd__ = __add__

    def __neg__(self) -> "UniPoly":
        neg = self.ring.neg
        return UniPoly(self.ring, [neg(c) for c in self.coeffs])

    def __sub__(self, other) -> "UniPoly":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "UniPoly":
        return self._lift(other) - self

    def __mul__(self, other) -> "UniPoly":
        other = self._lift(other)
        if not self.coeffs or not other.coeffs:
            return UniPoly(self.ring, ())
        if _is_gf2(self.ring):
            return _gf2_mul(self, other)
        ring = self.ring
        add, mul = ring.add, ring.mul
        out = [ring.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    out[i + j] = add(out[i + j], mul(a, b))
        return UniPoly(ring, out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "UniPoly":
        if e < 0:
            raise ValuationError("多项式不能取负次幂")
        result = UniPoly.one(self.ring)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __divmod__(self, other: "UniPoly") -> Tuple["UniPoly", "UniPoly"]:
        """带余除法（系数环须为域）"""
        other = self._lift(other)
        if other.is_zero():
            raise ValuationError("多项式除数为零")
        ring = self.ring
        lead_inv = ring.inv(other.leading)
        rem = list(self.coeffs)
        quot = [ring.zero] * max(len(rem) - other.degree, 0)
        for i in range(len(rem) - 1, other.degree - 1, -1):
            c = rem[i]
            if not c:
                continue
            q = ring.mul(c, lead_inv)
            shift = i - other.degree
            quot[shift] = q
            for j, b in enumerate(other.coeffs):
                rem[shift + j] = ring.sub(rem[shift + j], ring.mul(q, b))
        return UniPoly(ring, quot), UniPoly(ring, rem)

    def monic(self) -> "UniPoly":
        if self.is_zero():
            return self
        return self.scale(self.ring.inv(self.leading))

    def gcd(self, other: "UniPoly") -> "UniPoly":
        """首一最大公因式"""
        a, b = self, self._lift(other)
        while not b.is_zero():
            a, b = b, divmod(a, b)[1]
        return a.monic()

    def scale(self, c) -> "UniPoly":
        mul = self.ring.mul
        return UniPoly(self.ring, [mul(c, a) for a in self.coeffs])

    def shift(self, n: int) -> "UniPoly":
        """乘以 t^n；n 为负时做精确除法"""
        if not self.coeffs or n == 0:
            return self
        if n > 0:
            return UniPoly(self.ring, [self.ring.zero] * n + list(self.coeffs))
        if self.low_valuation() < -n:
            raise ValuationError(f"多项式不能被 t^{-n} 整除")
        return UniPoly(self.ring, self.coeffs[-n:])

    def __call__(self, x):
        ring = self.ring
        acc = ring.zero
        for c in reversed(self.coeffs):
            acc = ring.add(ring.mul(acc, x), c)
        return acc

    def derivative(self) -> "UniPoly":
        ring = self.ring
        return UniPoly(ring, [ring.mul(ring.from_int(i), c) for i, c in enumerate(self.coeffs)][1:])

    def map_coefficients(self, table, ring: Ring) -> "UniPoly":
        """按嵌入表（可下标访问）把系数映到另一个环"""
        return UniPoly(ring, [table[c] for c in self.coeffs])

    def __eq__(self, other) -> bool:
        if isinstance(other, UniPoly):
            return self.ring == other.ring and self.coeffs == other.coeffs
        if isinstance(other, int):
            return self == self._lift(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.ring, self.coeffs))

    def to_literal(self, var: str = "t") -> str:
        if not self.coeffs:
            return "0"
        ring = self.ring
        out = ""
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            negative = isinstance(c, Fraction) and c < 0
            if negative:
                c = -c
            text = ring.format(c)
            if i > 0:
                power = var if i == 1 else f"{var}^{i}"
                text = power if c == ring.one else f"{text}*{power}"
            if not out:
                out = f"-{text}" if negative else text
            else:
                out += f" - {text}" if negative else f" + {text}"
        return out

    def __repr__(self) -> str:
        return self.to_literal()


def _gf2_mul(f: UniPoly, g: UniPoly) -> UniPoly:
    a = sum(1 << i for i, c in enumerate(f.coeffs) if c)
    b = sum(1 << i for i, c in enumerate(g.coeffs) if c)
    if a.bit_count() > b.bit_count():
        a, b = b, a
    product = 0
    while a:
        low = a & -a
        product ^= b * low
        a ^= low
    return UniPoly(f.ring, [(product >> i) & 1 for i in range(product.bit_length())])


@dataclass(frozen=True)
class Place:
    """射影直线上的点：域中（或扩域中）的有限点，或 value=None 表示 ∞"""

    ring: Ring
    value: Optional[object] = None

    @classmethod
    def infinity(cls, ring: Ring) -> "Place":
        return cls(ring, None)

    @property
    def is_infinite(self) -> bool:
        return self.value is None

    @property
    def degree(self) -> int:
        """点所在域的绝对扩张次数"""
        return self.ring.degree

    def label(self, var: str = "t") -> str:
        if self.value is None:
            return f"{var}=∞"
        return f"{var}={self.ring.format(self.value)}"


def lift_poly(f: UniPoly, ring: Ring) -> UniPoly:
    """把多项式系数嵌入到更大的有限域"""
    if f.ring == ring:
        return f
    if not isinstance(f.ring, FiniteField) or not isinstance(ring, FiniteField):
        raise ValuationError(f"{f.ring} 不能嵌入 {ring}")
    return f.map_coefficients(f.ring.embed_table(ring), ring)


def translate_parameter(f: UniPoly, c) -> UniPoly:
    """
    返回 f(t + c)

    Args:
        f: 多项式
        c: 平移量（f 的系数环中的原始编码）
    """
    ring = f.ring
    shift = UniPoly(ring, (c, ring.one))
    result = UniPoly.zero(ring)
    for coef in reversed(f.coeffs):
        result = result * shift + UniPoly.constant(ring, coef)
    return result


def reverse_form(f: UniPoly, weight: int) -> UniPoly:
    """t^weight · f(1/t)，要求 deg f ≤ weight"""
    if f.degree > weight:
        raise DegreeBoundError(f"次数 {f.degree} 超过上界 {weight}")
    padded = list(f.coeffs) + [f.ring.zero] * (weight + 1 - len(f.coeffs))
    return UniPoly(f.ring, reversed(padded))


def chart_at_infinity(coefficients: Sequence[UniPoly]) -> Tuple[UniPoly, ...]:
    """
    换到 ∞ 处的坐标卡 s = 1/t：a_i^∞(s) = s^{2i} a_i(1/s)

    Args:
        coefficients: (a1, a2, a3, a4, a6)

    Raises:
        DegreeBoundError: 某个 deg a_i > 2i
    """
    return tuple(reverse_form(a, 2 * w) for a, w in zip(coefficients, WEIGHTS))


def mobius_substitute(f: UniPoly, weight: int, matrix: Sequence) -> UniPoly:
    """
    以权重 weight 的二元形式作用 t ↦ (αt+β)/(γt+δ)：

        Σ_j c_j (αt+β)^j (γt+δ)^(weight−j)
    """
    if f.degree > weight:
        raise DegreeBoundError(f"次数 {f.degree} 超过形式权重 {weight}")
    ring = f.ring
    alpha, beta, gamma, delta = matrix
    num = UniPoly(ring, (beta, alpha))
    den = UniPoly(ring, (delta, gamma))
    num_powers = [UniPoly.one(ring)]
    den_powers = [UniPoly.one(ring)]
    for _ in range(weight):
        num_powers.append(num_powers[-1] * num)
        den_powers.append(den_powers[-1] * den)
    result = UniPoly.zero(ring)
    for j, c in enumerate(f.coeffs):
        if c:
            result = result + (num_powers[j] * den_powers[weight - j]).scale(c)
    return result


def valuation(f: UniPoly, place: Place, ambient_degree: Optional[int] = None) -> int:
    """
    多项式在点处的赋值

    Args:
        f: 多项式
        place: 有限点或 ∞
        ambient_degree: ∞ 处必须给出的次数上界

    Returns:
        int: 赋值，零多项式返回 VAL_INF

    Raises:
        ValuationError: 在 ∞ 处查询但未给出次数上界
    """
    if f.is_zero():
        return VAL_INF
    if place.is_infinite:
        if ambient_degree is None:
            raise ValuationError("在 ∞ 处计算赋值需要给出次数上界")
        if f.degree > ambient_degree:
            raise DegreeBoundError(f"次数 {f.degree} 超过上界 {ambient_degree}")
        return ambient_degree - f.degree
    lifted = lift_poly(f, place.ring)
    return translate_parameter(lifted, place.value).low_valuation()


@dataclass
class PlaceGroup:
    """同一个不可约因子的全部共轭根"""

    places: List[Place]
    factor_degree: int
    multiplicity: int


@dataclass
class SplitResult:
    """判别式在有限扩域上的分解结果"""

    groups: List[PlaceGroup]
    unsplit: List[Tuple[int, int]]  # (因子次数, 重数)

    @property
    def complete(self) -> bool:
        return not self.unsplit


def split_places(f: UniPoly, search_ext: Optional[int] = None) -> SplitResult:
    """
    求 f 在 GF(p^K)（K ≤ search_ext）中的全部根，按不可约因子分组

    Args:
        f: 有限域上的非零多项式
        search_ext: 绝对扩张次数上界，默认取配置

    Returns:
        SplitResult: 可分裂因子的根与无法分裂的因子
    """
    ring = f.ring
    if not isinstance(ring, FiniteField):
        raise ValuationError("仅能在有限域上求根")
    if f.is_zero():
        raise ValuationError("零多项式没有有限根集合")
    search_ext = search_ext or settings.search_ext
    if f.degree < 1:
        return SplitResult([], [])

    # 1. 首一化并转成 galois 多项式
    lead_inv = ring.inv(f.leading)
    monic = [ring.mul(c, lead_inv) for c in f.coeffs]
    g = galois.Poly(list(reversed(monic)), field=ring.galois_field)

    # 2. 因式分解，逐个因子在扩域中求根
    groups: List[PlaceGroup] = []
    unsplit: List[Tuple[int, int]] = []
    factors, multiplicities = g.factors()
    for phi, mult in zip(factors, multiplicities):
        d = int(phi.degree)
        total = ring.k * d
        if total > search_ext or ring.p ** total > settings.max_field_order:
            logger.warning(f"次数 {d} 的不可约因子超出扩张上界 {search_ext}，未分裂")
            unsplit.append((d, int(mult)))
            continue
        target = get_field(ring.p, total)
        table = ring.embed_table(target)
        phi_coeffs = [table[int(c)] for c in phi.coeffs]
        phi_target = galois.Poly(phi_coeffs, field=target.galois_field)
        roots = sorted(int(r) for r in phi_target.roots())
        groups.append(PlaceGroup([Place(target, r) for r in roots], d, int(mult)))

    groups.sort(key=lambda grp: (grp.factor_degree, grp.places[0].value))
    return SplitResult(groups, unsplit)


# ----------------------------------------------------------------------
# 多项式字面量
# ----------------------------------------------------------------------

def _scan_coefficient(text: str, pos: int) -> int:
    """返回系数字面量的结束位置"""
    n = len(text)
    end = pos
    while end < n and (text[end].isdigit() or text[end] in "^:,/"):
        end += 1
    return end


def parse_poly(text: str, ring: Ring, var: str = "t", line: int = 0, column: int = 1) -> UniPoly:
    """
    解析 `c0 + c1*t + c2*t^2 + ...` 形式的多项式字面量

    Args:
        text: 字面量
        ring: 系数环
        var: 参数名
        line: 行号，用于错误诊断
        column: text 在行中的起始列

    Raises:
        ModelFormatError: 语法错误，附带行列号
    """
    result: dict = {}
    pos = 0
    n = len(text)

    def fail(message: str, at: int):
        raise ModelFormatError(message, line, column + at)

    def skip_ws(i: int) -> int:
        while i < n and text[i].isspace():
            i += 1
        return i

    pos = skip_ws(pos)
    if pos >= n:
        fail("多项式为空", pos)
    first = True
    while pos < n:
        # 1. 符号
        sign = 1
        if text[pos] in "+-":
            sign = -1 if text[pos] == "-" else 1
            pos = skip_ws(pos + 1)
        elif not first:
            fail(f"缺少 '+' 或 '-'，遇到 '{text[pos]}'", pos)
        first = False

        # 2. 系数
        coef = ring.one
        has_coef = False
        if pos < n and text[pos].isdigit():
            end = _scan_coefficient(text, pos)
            try:
                coef = ring.parse_coefficient(text[pos:end])
            except ModelFormatError as exc:
                fail(exc.detail, pos)
            has_coef = True
            pos = skip_ws(end)
            if pos < n and text[pos] == "*":
                pos = skip_ws(pos + 1)
                if not text.startswith(var, pos):
                    fail(f"'*' 之后应为参数 {var}", pos)

        # 3. 参数幂次
        exponent = 0
        if text.startswith(var, pos):
            pos += len(var)
            exponent = 1
            pos = skip_ws(pos)
            if pos < n and text[pos] == "^":
                pos = skip_ws(pos + 1)
                start = pos
                while pos < n and text[pos].isdigit():
                    pos += 1
                if start == pos:
                    fail("'^' 之后应为非负整数", start)
                exponent = int(text[start:pos])
                pos = skip_ws(pos)
        elif not has_coef:
            fail(f"无法识别的记号 '{text[pos]}'" if pos < n else "项不完整", pos)

        if sign < 0:
            coef = ring.neg(coef)
        result[exponent] = ring.add(result.get(exponent, ring.zero), coef)

    size = max(result) + 1 if result else 0
    return UniPoly(ring, [result.get(i, ring.zero) for i in range(size)])


def rational_roots(f: UniPoly) -> List[Fraction]:
    """
    有理系数多项式的全部有理根（有理根定理）

    Raises:
        ValuationError: 系数环不是 Q 或多项式为零
    """
    if f.ring.characteristic != 0:
        raise ValuationError("有理根仅对特征 0 多项式定义")
    if f.is_zero():
        raise ValuationError("零多项式没有有限根集合")
    roots: List[Fraction] = []
    if f.low_valuation() > 0:
        roots.append(Fraction(0))
        f = f.shift(-f.low_valuation())
    if f.degree < 1:
        return roots

    # 1. 清分母得到整系数
    scale = math.lcm(*(Fraction(c).denominator for c in f.coeffs))
    ints = [int(Fraction(c) * scale) for c in f.coeffs]

    # 2. 候选 ±p/q，p | 常数项，q | 首项系数
    candidates = {
        Fraction(sign * num, den)
        for num in galois.divisors(abs(ints[0]))
        for den in galois.divisors(abs(ints[-1]))
        for sign in (1, -1)
    }
    roots.extend(c for c in sorted(candidates) if f(c) == 0)
    return sorted(roots)
