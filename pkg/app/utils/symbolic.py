"""
GF(2) 上以命名符号为变量的多元多项式
"""
from functools import reduce
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple

# 单项式：按名字排序的 (符号, 指数) 元组，常数 1 为空元组
Monomial = Tuple[Tuple[str, int], ...]


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    exps: Dict[str, int] = dict(m1)
    for name, e in m2:
        exps[name] = exps.get(name, 0) + e
    return tuple(sorted(exps.items()))


def monomial_key(m: Monomial):
    """单项式全序：先比总次数，再比元组"""
    return (sum(e for _, e in m), m)


class SymPoly:
    """GF(2) 系数的多元多项式，以单项式集合表示；加法即对称差"""

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[Monomial] = ()):
        if isinstance(terms, frozenset):
            self.terms: FrozenSet[Monomial] = terms
        else:
            acc = set()
            for m in terms:
                acc ^= {m}
            self.terms = frozenset(acc)

    # ------------------------------------------------------------------
    # 构造
    # ------------------------------------------------------------------

    @classmethod
    def zero(cls) -> "SymPoly":
        return cls(frozenset())

    @classmethod
    def one(cls) -> "SymPoly":
        return cls(frozenset({()}))

    @classmethod
    def symbol(cls, name: str) -> "SymPoly":
        return cls(frozenset({((name, 1),)}))

    @classmethod
    def constant(cls, c: int) -> "SymPoly":
        return cls.one() if c % 2 else cls.zero()

    # ------------------------------------------------------------------
    # 运算
    # ------------------------------------------------------------------

    @staticmethod
    def _coerce(other) -> "SymPoly":
        if isinstance(other, SymPoly):
            return other
        if isinstance(other, int):
            return SymPoly.constant(other)
        return NotImplemented

    def __add__(self, other) -> "SymPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return SymPoly(self.terms ^ other.terms)

    __radd__ = __add__
    __sub__ = __add__
    __rsub__ = __add__

    def __neg__(self) -> "SymPoly":
        return self

    def __mul__(self, other) -> "SymPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        acc = set()
        for m1 in self.terms:
            for m2 in other.terms:
                acc ^= {_mono_mul(m1, m2)}
        return SymPoly(frozenset(acc))

    __rmul__ = __mul__

    def square(self) -> "SymPoly":
        """Frobenius：指数加倍"""
        return SymPoly(frozenset(tuple((n, 2 * e) for n, e in m) for m in self.terms))

    def __pow__(self, e: int) -> "SymPoly":
        if e < 0:
            raise ValueError("符号多项式不能取负次幂")
        result = SymPoly.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base.square()
        return result

    # ------------------------------------------------------------------
    # 查询
    # ------------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        return self.terms == frozenset({()})

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def symbols(self) -> FrozenSet[str]:
        return frozenset(name for m in self.terms for name, _ in m)

    def degree_in(self, name: str) -> int:
        return max((dict(m).get(name, 0) for m in self.terms), default=-1)

    def as_poly_in(self, name: str) -> Dict[int, "SymPoly"]:
        """按符号 name 的幂次展开为 {i: 系数}"""
        buckets: Dict[int, set] = {}
        for m in self.terms:
            exps = dict(m)
            i = exps.pop(name, 0)
            buckets.setdefault(i, set()).add(tuple(sorted(exps.items())))
        return {i: SymPoly(frozenset(ms)) for i, ms in buckets.items()}

    def coefficient_in(self, name: str, i: int) -> "SymPoly":
        return self.as_poly_in(name).get(i, SymPoly.zero())

    def single_symbol_power(self) -> Optional[Tuple[str, int]]:
        """若本身是 x^m（单个符号的幂）则返回 (x, m)"""
        if len(self.terms) != 1:
            return None
        (m,) = self.terms
        if len(m) != 1:
            return None
        return m[0]

    def linear_symbols(self) -> List[str]:
        """以单项式 v 出现、且不出现在其它单项式中的符号 v"""
        out = []
        for m in self.terms:
            if len(m) == 1 and m[0][1] == 1:
                name = m[0][0]
                if all(m2 == m or name not in dict(m2) for m2 in self.terms):
                    out.append(name)
        return sorted(out)

    def frobenius_root(self, j: int) -> Optional["SymPoly"]:
        """2^j 次方根（所有指数可被 2^j 整除时存在）"""
        q = 1 << j
        if any(e % q for m in self.terms for _, e in m):
            return None
        return SymPoly(frozenset(tuple((n, e // q) for n, e in m) for m in self.terms))

    # ------------------------------------------------------------------
    # 代入与求值
    # ------------------------------------------------------------------

    def substitute(self, mapping: Mapping[str, "SymPoly"]) -> "SymPoly":
        """把符号替换为符号多项式"""
        if not mapping or not (self.symbols() & mapping.keys()):
            return self
        powers: Dict[Tuple[str, int], SymPoly] = {}

        def power(name: str, e: int) -> SymPoly:
            key = (name, e)
            if key not in powers:
                powers[key] = mapping[name] ** e
            return powers[key]

        acc = set()
        for m in self.terms:
            kept = tuple((n, e) for n, e in m if n not in mapping)
            part = SymPoly(frozenset({kept}))
            for n, e in m:
                if n in mapping:
                    part = part * power(n, e)
                    if part.is_zero():
                        break
            acc ^= set(part.terms)
        return SymPoly(frozenset(acc))

    def evaluate_terms(self, values: Mapping[str, int], field, keep: str) -> Dict[int, int]:
        """
        在有限域中对除 keep 以外的符号求值，返回 {keep 的幂次: 系数}
        """
        out: Dict[int, int] = {}
        for m in self.terms:
            coef = field.one
            power = 0
            for name, e in m:
                if name == keep:
                    power = e
                else:
                    coef = field.mul(coef, field.pow(values[name], e))
            if coef:
                out[power] = field.add(out.get(power, field.zero), coef)
        return out

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(self.terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=monomial_key, reverse=True):
            if not m:
                parts.append("1")
            else:
                parts.append("*".join(n if e == 1 else f"{n}^{e}" for n, e in m))
        return " + ".join(parts)

    __repr__ = __str__


def symbols(*names: str) -> List[SymPoly]:
    return [SymPoly.symbol(n) for n in names]


def sym_sum(polys: Iterable[SymPoly]) -> SymPoly:
    return reduce(lambda a, b: a + b, polys, SymPoly.zero())
