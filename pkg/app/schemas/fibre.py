"""
奇异纤维与全局分类报告的数据模式
"""
import re
from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

from app.core.errors import LatticeInputError

KodairaFamily = Literal["I", "I*", "II", "III", "IV", "IV*", "III*", "II*"]

# 例外型纤维的分支数与根格
_EXCEPTIONAL = {
    "II": (1, None),
    "III": (2, "A1"),
    "IV": (3, "A2"),
    "IV*": (7, "E6"),
    "III*": (8, "E7"),
    "II*": (9, "E8"),
}

_SYMBOL_RE = re.compile(r"^(I)(\d+)(\*?)$|^(II\*?|III\*?|IV\*?)$")


class KodairaType(BaseModel):
    """Kodaira 型：I_n、I_n*（n ≥ 0）或例外型"""

    model_config = ConfigDict(frozen=True)

    family: KodairaFamily = Field(..., description="型的类别")
    n: int = Field(0, ge=0, description="I_n 与 I_n* 的下标")

    @property
    def symbol(self) -> str:
        if self.family == "I":
            return f"I{self.n}"
        if self.family == "I*":
            return f"I{self.n}*"
        return self.family

    @property
    def is_multiplicative(self) -> bool:
        return self.family == "I" and self.n > 0

    @property
    def is_additive(self) -> bool:
        return self.family != "I"

    @property
    def components(self) -> int:
        """不可约分支数 m"""
        if self.family == "I":
            return max(self.n, 1)
        if self.family == "I*":
            return self.n + 5
        return _EXCEPTIONAL[self.family][0]

    @property
    def root_lattice(self) -> Optional[str]:
        """非恒等分支张成的根格，无则为 None"""
        if self.family == "I":
            return f"A{self.n - 1}" if self.n >= 2 else None
        if self.family == "I*":
            return f"D{self.n + 4}"
        return _EXCEPTIONAL[self.family][1]

    def euler_number(self, v_delta: int) -> int:
        """乘性纤维 e = n，加性纤维 e = m + 1"""
        if self.family == "I":
            return self.n
        return self.components + 1

    @classmethod
    def parse(cls, text: str) -> "KodairaType":
        """
        解析 `I18`、`I13*`、`IV*` 这类符号

        Raises:
            LatticeInputError: 无法识别的符号
        """
        match = _SYMBOL_RE.match(text.strip())
        if not match:
            raise LatticeInputError(f"无法识别的 Kodaira 型 '{text}'")
        if match.group(1):
            n = int(match.group(2))
            return cls(family="I*" if match.group(3) else "I", n=n)
        return cls(family=match.group(4))

    def __str__(self) -> str:
        return self.symbol


class FibreReport(BaseModel):
    """单个点处的纤维分类结果"""

    place: str = Field(..., description="点的标签，如 t=0 或 t=∞")
    place_degree: int = Field(1, description="点所在域的绝对扩张次数")
    kodaira: KodairaType = Field(..., description="Kodaira 型")
    v_delta: int = Field(..., description="判别式在该点的赋值")
    components: int = Field(..., description="不可约分支数 m")
    wild_defect: int = Field(0, description="野分歧缺陷 δ = vΔ − e")
    minimality_reductions: int = Field(0, description="为达到极小所做的约化次数")
    reduction: Literal["good", "multiplicative", "additive"] = Field(..., description="约化类型")

    @property
    def euler_number(self) -> int:
        return self.kodaira.euler_number(self.v_delta)

    def line(self) -> str:
        """`place | type | vΔ | m | δ` 形式的一行"""
        return f"{self.place} | {self.kodaira.symbol} | {self.v_delta} | {self.components} | {self.wild_defect}"


class GlobalReport(BaseModel):
    """整条射影直线上的纤维汇总"""

    characteristic: int = Field(..., description="基域特征")
    fibres: List[FibreReport] = Field(default_factory=list, description="全部奇异纤维")
    total_v_delta: int = Field(0, description="Σ vΔ（按点的次数加权）")
    euler_sum: int = Field(0, description="Σ e")
    wild_sum: int = Field(0, description="Σ δ")
    euler_ok: bool = Field(False, description="Σ e + Σ δ = 24")
    max_multiplicative: int = Field(0, description="最大的乘性下标 n（I_n）")
    max_additive: Optional[str] = Field(None, description="分支数最多的加性纤维")
    max_additive_components: int = Field(0, description="该加性纤维的分支数")
    configuration: List[str] = Field(default_factory=list, description="奇异纤维型的有序列表")
    complete: bool = Field(True, description="判别式是否在搜索范围内完全分裂")
    unsplit: List[str] = Field(default_factory=list, description="未分裂因子的描述")
    minimality_reductions: int = Field(0, description="全部点上的约化总数")

    def summary(self) -> str:
        """一行汇总"""
        status = "OK" if self.euler_ok else "MISMATCH"
        text = (
            f"ΣvΔ = {self.total_v_delta}; Σe = {self.euler_sum}; Σδ = {self.wild_sum} [{status}]; "
            f"config = [{', '.join(self.configuration)}]"
        )
        if not self.complete:
            text += f"; unsplit = {', '.join(self.unsplit)}"
        return text


class K3Check(BaseModel):
    """K3 判定结果"""

    value: bool = Field(..., description="是否为 K3 曲面")
    reason: str = Field("", description="判定依据或失败原因")
