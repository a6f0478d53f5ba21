"""
格判别式计算的输入配置与结果
"""
from fractions import Fraction
from typing import List, Literal, Optional, Union

from pydantic import BaseModel, Field, field_validator, model_validator

from app.core.errors import LatticeInputError
from app.schemas.fibre import KodairaType

# 截面与纤维相交的分支：I_n 用 0…n−1，I_n* 用 identity / near / far
Contact = Union[int, Literal["identity", "near", "far"]]


class LatticeConfig(BaseModel):
    """纤维构形与截面数据"""

    fibres: List[KodairaType] = Field(..., description="奇异纤维型的多重集")
    mw_rank: Literal[0, 1] = Field(0, description="Mordell–Weil 秩")
    torsion_order: int = Field(1, ge=1, description="挠子群的阶")
    section_contact: Optional[List[Optional[Contact]]] = Field(
        None, description="生成元 P 在每条纤维上相交的分支，与 fibres 一一对应"
    )
    p_o: Optional[int] = Field(None, ge=0, description="交数 (P.O)")
    characteristic: Optional[int] = Field(None, description="可选的特征，用于 Artin 检查")

    @field_validator("fibres", mode="before")
    @classmethod
    def _parse_fibres(cls, value):
        if isinstance(value, (list, tuple)):
            return [KodairaType.parse(v) if isinstance(v, str) else v for v in value]
        return value

    @model_validator(mode="after")
    def _check_sections(self) -> "LatticeConfig":
        if self.mw_rank == 0 and self.section_contact:
            raise LatticeInputError("Mordell–Weil 秩为 0 时不能给出截面相交数据")
        if self.section_contact is not None and len(self.section_contact) != len(self.fibres):
            raise LatticeInputError(
                f"section_contact 长度 {len(self.section_contact)} 与纤维数 {len(self.fibres)} 不一致"
            )
        return self


class DiscriminantValue(BaseModel):
    """|discr NS|，附带“至多相差 p 的偶次幂”的标注"""

    numerator: int = Field(..., description="分子")
    denominator: int = Field(1, ge=1, description="分母")
    up_to_even_p_power: bool = Field(True, description="是否只确定到 p^{2k} 的倍数")
    height: Optional[str] = Field(None, description="秩 1 时生成元的高度 <P,P>")
    uses_extension: bool = Field(False, description="是否用到了标准表中的扩展贡献值")

    @property
    def value(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    @classmethod
    def of(cls, value: Fraction, **kwargs) -> "DiscriminantValue":
        return cls(numerator=value.numerator, denominator=value.denominator, **kwargs)

    def __str__(self) -> str:
        return str(self.value)


class ArtinCertificate(BaseModel):
    """discr 与 −p^{2σ₀} 相容性的证书"""

    compatible: bool = Field(..., description="是否相容")
    p: int = Field(..., description="特征")
    discriminant: str = Field(..., description="被检查的 |discr|")
    sigma0: Optional[int] = Field(None, description="Artin 不变量 σ₀")
    k: Optional[int] = Field(None, description="p^{2k} 的调整指数，负数表示相除")
    obstruction: Optional[str] = Field(None, description="不相容的原因")


class ProofTranscript(BaseModel):
    """同余证明的逐例记录"""

    scenario: str = Field(..., description="情形名称")
    lines: List[str] = Field(default_factory=list, description="每条被排除情形一行")
    cases: int = Field(0, description="检查过的情形数")
    excluded: int = Field(0, description="得出矛盾的情形数")
    surviving: List[str] = Field(default_factory=list, description="未被排除的情形")

    @property
    def all_excluded(self) -> bool:
        return self.cases > 0 and self.excluded == self.cases and not self.surviving
