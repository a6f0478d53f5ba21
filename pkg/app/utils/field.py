"""
有限域 GF(p^k) 与有理数域的精确算术

域元素在内部以整数编码：系数向量 (c0, c1, ..., c_{k-1}) 按小端序写成 Σ c_i p^i，
与 galois 库的整数表示一致。乘法、求逆与开 p 次方通过 Conway 生成元的
指数/对数表完成，奇特征下的加法使用 Zech 对数表。
"""
import logging
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import List, Sequence, Union

import galois

from app.core.config import settings
from app.core.errors import FieldArithmeticError, FieldTooLargeError, ModelFormatError

# 配置日志记录器
logger = logging.getLogger(__name__)

# 精确有理数
ExactRational = Fraction


class FiniteField:
    """有限域 GF(p^k)，构造后不可变，可在扫描进程间安全共享"""

    def __init__(self, p: int, k: int = 1):
        """
        构造有限域并建立运算表

        Args:
            p: 素数特征
            k: 扩张次数

        Raises:
            FieldArithmeticError: p 不是素数或 k < 1
            FieldTooLargeError: p^k 超过查表上限
        """
        if k < 1 or not galois.is_prime(p):
            raise FieldArithmeticError(f"无效的有限域参数 p={p}, k={k}")
        order = p ** k
        if order > settings.max_field_order:
            raise FieldTooLargeError(f"GF({p}^{k}) 过大，上限为 {settings.max_field_order} 个元素")

        self.p = p
        self.k = k
        self.order = order
        self._n = order - 1

        # 1. 选取定义多项式与生成元
        if k == 1:
            generator = 1 if p == 2 else int(galois.primitive_root(p))
            self.modulus = ((-generator) % p, 1)
        else:
            conway = galois.conway_poly(p, k)
            if not conway.is_irreducible():
                raise FieldArithmeticError(f"GF({p}^{k}) 的定义多项式不可约性检查失败")
            self.modulus = tuple(int(c) for c in conway.coeffs[::-1])
            generator = p
        self.generator = generator

        # 2. 建立指数/对数表
        self._exp: List[int] = [0] * (2 * self._n if self._n else 2)
        self._log: List[int] = [-1] * order
        self._build_tables()

        # 3. 奇特征扩域的 Zech 对数表
        self._zech: List[int] = []
        if p != 2 and k > 1:
            self._build_zech()

        logger.debug(f"已构造有限域 GF({p}^{k})，定义多项式系数 {self.modulus}")

    def _mul_by_x(self, value: int) -> int:
        """将元素乘以 x 并按定义多项式约化（仅用于建表）"""
        p, k = self.p, self.k
        top_weight = p ** (k - 1)
        top = value // top_weight
        shifted = (value % top_weight) * p
        if top == 0:
            return shifted
        # x^k = -Σ m_i x^i
        result = 0
        weight = 1
        for i in range(k):
            digit = (shifted // weight) % p
            digit = (digit - top * self.modulus[i]) % p
            result += digit * weight
            weight *= p
        return result

    def _build_tables(self) -> None:
        value = 1
        for i in range(self._n):
            if self._log[value] != -1:
                raise FieldArithmeticError(f"GF({self.p}^{self.k}) 的生成元不是本原元")
            self._exp[i] = value
            self._log[value] = i
            if self.k == 1:
                value = (value * self.generator) % self.p
            else:
                value = self._mul_by_x(value)
        for i in range(self._n, 2 * self._n):
            self._exp[i] = self._exp[i - self._n]

    def _build_zech(self) -> None:
        p = self.p
        self._zech = [-1] * self._n
        for i in range(self._n):
            value = self._exp[i]
            c0 = value % p
            shifted = value - c0 + (c0 + 1) % p
            self._zech[i] = self._log[shifted] if shifted else -1

    # ------------------------------------------------------------------
    # 原始整数编码上的运算
    # ------------------------------------------------------------------

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def degree(self) -> int:
        return self.k

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    def from_int(self, n: int) -> int:
        """整数在素子域中的像"""
        return n % self.p

    def is_zero(self, a: int) -> bool:
        return a == 0

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self.k == 1:
            return (a + b) % self.p
        if a == 0:
            return b
        if b == 0:
            return a
        la = self._log[a]
        z = self._zech[(self._log[b] - la) % self._n]
        return 0 if z < 0 else self._exp[la + z]

    def neg(self, a: int) -> int:
        if self.p == 2 or a == 0:
            return a
        if self.k == 1:
            return self.p - a
        return self._exp[self._log[a] + self._n // 2]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise FieldArithmeticError("有限域中除数为零")
        return self._exp[(self._n - self._log[a]) % self._n]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise FieldArithmeticError("零元素不能取负次幂")
            return 1 if e == 0 else 0
        return self._exp[(self._log[a] * e) % self._n]

    def pth_root(self, a: int) -> int:
        """唯一的 p 次方根 x^(p^(k-1))"""
        if a == 0:
            return 0
        return self._exp[(self._log[a] * self.p ** (self.k - 1)) % self._n]

    def digits(self, a: int) -> List[int]:
        """小端序系数向量"""
        out = []
        for _ in range(self.k):
            out.append(a % self.p)
            a //= self.p
        return out

    def format(self, a: int) -> str:
        if self.k == 1:
            return str(a)
        return f"{self.p}^{self.k}:" + ",".join(str(c) for c in self.digits(a))

    def parse_coefficient(self, text: str) -> int:
        """
        解析系数字面量：整数、a/b 或 `p^k:c0,c1,...`

        Raises:
            ModelFormatError: 字面量不合法或与本域不匹配
        """
        text = text.strip()
        if ":" in text:
            head, _, body = text.partition(":")
            try:
                base, _, ext = head.partition("^")
                p, k = int(base), int(ext or "1")
                coeffs = [int(c) for c in body.split(",")] if body else []
            except ValueError:
                raise ModelFormatError(f"无法解析域元素字面量 '{text}'")
            if p != self.p or k != self.k:
                raise ModelFormatError(f"域元素字面量 '{text}' 不属于 GF({self.p}^{self.k})")
            if len(coeffs) > k or any(c < 0 or c >= p for c in coeffs):
                raise ModelFormatError(f"域元素字面量 '{text}' 的系数越界")
            return sum(c * p ** i for i, c in enumerate(coeffs))
        try:
            if "/" in text:
                num, _, den = text.partition("/")
                return self.div(self.from_int(int(num)), self.from_int(int(den)))
            return self.from_int(int(text))
        except ValueError:
            raise ModelFormatError(f"无法解析系数 '{text}'")

    # ------------------------------------------------------------------
    # 元素对象与嵌入
    # ------------------------------------------------------------------

    def element(self, value: Union[int, Sequence[int]]) -> "FiniteFieldElement":
        """由整数编码或系数向量构造元素"""
        if not isinstance(value, int):
            value = sum((c % self.p) * self.p ** i for i, c in enumerate(value))
        if not 0 <= value < self.order:
            raise FieldArithmeticError(f"元素编码 {value} 超出 GF({self.p}^{self.k})")
        return FiniteFieldElement(self, value)

    @property
    def gen(self) -> "FiniteFieldElement":
        """Conway 生成元"""
        return FiniteFieldElement(self, self.generator)

    def embed_table(self, target: "FiniteField") -> List[int]:
        """
        与 Conway 多项式相容的嵌入 GF(p^k) → GF(p^K)

        Args:
            target: 目标扩域，要求同特征且 k | K

        Returns:
            List[int]: 按本域整数编码索引的像
        """
        return _embed_table(self, target)

    @cached_property
    def galois_field(self):
        """对应的 galois.GF 类，整数表示与本域一致"""
        if self.k == 1:
            return galois.GF(self.p)
        return galois.GF(self.order, irreducible_poly=galois.conway_poly(self.p, self.k))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FiniteField) and (self.p, self.k) == (other.p, other.k)

    def __hash__(self) -> int:
        return hash(("GF", self.p, self.k))

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.k})" if self.k > 1 else f"GF({self.p})"

    def __reduce__(self):
        return (get_field, (self.p, self.k))


class FiniteFieldElement:
    """有限域元素，父域引用加整数编码"""

    __slots__ = ("field", "value")

    def __init__(self, field: FiniteField, value: int):
        self.field = field
        self.value = value

    def _coerce(self, other) -> int:
        if isinstance(other, FiniteFieldElement):
            if other.field != self.field:
                raise FieldArithmeticError(f"父域不一致: {self.field} 与 {other.field}")
            return other.value
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented

    def __add__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FiniteFieldElement(self.field, self.field.add(self.value, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FiniteFieldElement(self.field, self.field.sub(self.value, b))

    def __rsub__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FiniteFieldElement(self.field, self.field.sub(b, self.value))

    def __mul__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FiniteFieldElement(self.field, self.field.mul(self.value, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FiniteFieldElement(self.field, self.field.div(self.value, b))

    def __rtruediv__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FiniteFieldElement(self.field, self.field.div(b, self.value))

    def __neg__(self):
        return FiniteFieldElement(self.field, self.field.neg(self.value))

    def __pow__(self, e: int):
        return FiniteFieldElement(self.field, self.field.pow(self.value, e))

    def inverse(self) -> "FiniteFieldElement":
        return FiniteFieldElement(self.field, self.field.inv(self.value))

    def pth_root(self) -> "FiniteFieldElement":
        return FiniteFieldElement(self.field, self.field.pth_root(self.value))

    @property
    def digits(self) -> List[int]:
        return self.field.digits(self.value)

    def is_zero(self) -> bool:
        return self.value == 0

    def __bool__(self) -> bool:
        return self.value != 0

    def __eq__(self, other) -> bool:
        if isinstance(other, FiniteFieldElement):
            return self.field == other.field and self.value == other.value
        if isinstance(other, int):
            return self.value == self.field.from_int(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.field.p, self.field.k, self.value))

    def __repr__(self) -> str:
        return self.field.format(self.value)


class RationalField:
    """有理数域 Q，仅用于特征 0 模型的约化交叉检验"""

    characteristic = 0
    degree = 1
    p = 0
    zero = Fraction(0)
    one = Fraction(1)

    def from_int(self, n: int) -> Fraction:
        return Fraction(n)

    def is_zero(self, a: Fraction) -> bool:
        return a == 0

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise FieldArithmeticError("有理数除数为零")
        return 1 / Fraction(a)

    def div(self, a, b):
        return Fraction(a) * self.inv(b)

    def pow(self, a, e: int):
        if a == 0 and e < 0:
            raise FieldArithmeticError("零元素不能取负次幂")
        return Fraction(a) ** e

    def pth_root(self, a):
        raise FieldArithmeticError("特征 0 中没有 p 次方根运算")

    def format(self, a) -> str:
        return str(a)

    def parse_coefficient(self, text: str) -> Fraction:
        try:
            return Fraction(text.strip())
        except ValueError:
            raise ModelFormatError(f"无法解析有理数系数 '{text}'")

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RationalField)

    def __hash__(self) -> int:
        return hash("QQ")

    def __repr__(self) -> str:
        return "QQ"


QQ = RationalField()

# 多项式系数环：有限域或有理数域
Ring = Union[FiniteField, RationalField]


@lru_cache(maxsize=None)
def get_field(p: int, k: int = 1) -> FiniteField:
    """获取（缓存的）有限域实例"""
    return FiniteField(p, k)


@lru_cache(maxsize=256)
def _embed_table(source: FiniteField, target: FiniteField) -> List[int]:
    if source.p != target.p or target.k % source.k != 0:
        raise FieldArithmeticError(f"{source} 不能嵌入 {target}")
    if source.k == 1 or source == target:
        return list(range(source.order))
    factor = (target.order - 1) // (source.order - 1)
    table = [0] * source.order
    for a in range(1, source.order):
        table[a] = target._exp[(source._log[a] * factor) % target._n]
    return table


def parse_field_spec(text: str) -> FiniteField:
    """解析 `p^k` 或 `p` 形式的域说明"""
    base, _, ext = text.strip().partition("^")
    try:
        return get_field(int(base), int(ext or "1"))
    except ValueError:
        raise ModelFormatError(f"无法解析域说明 '{text}'")


def parse_field_literal(text: str) -> FiniteFieldElement:
    """解析自带域信息的字面量 `p^k:c0,c1,...`"""
    head, sep, _ = text.partition(":")
    if not sep:
        raise ModelFormatError(f"域元素字面量缺少 ':'，遇到 '{text}'")
    field = parse_field_spec(head)
    return field.element(field.parse_coefficient(text))


def ff_arith(a: FiniteFieldElement, b, op: str) -> FiniteFieldElement:
    """
    单步域运算

    Args:
        a: 左操作数
        b: 右操作数；pow 时为整数指数，pth_root 时被忽略
        op: add / mul / inv（即 a·b⁻¹）/ pow / pth_root

    Returns:
        FiniteFieldElement: 运算结果

    Raises:
        FieldArithmeticError: 除零或父域不一致
    """
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "inv":
        return a * b.inverse() if isinstance(b, FiniteFieldElement) else a / b
    if op == "pow":
        return a ** int(b)
    if op == "pth_root":
        return a.pth_root()
    raise FieldArithmeticError(f"未知运算 '{op}'")


def enumerate_field(field: FiniteField) -> List[FiniteFieldElement]:
    """
    按整数编码（即大端系数向量的字典序）列出全部元素

    Raises:
        FieldTooLargeError: 域过大
    """
    if field.order > settings.max_field_order:
        raise FieldTooLargeError(f"{field} 过大，无法枚举")
    return [FiniteFieldElement(field, v) for v in range(field.order)]


