"""
参数族扫描的报告模式
"""
from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, Field

ScanTarget = Literal["max_multiplicative", "max_additive", "any"]


class ScanWitness(BaseModel):
    """扫描中找到的一个具体参数元组"""

    index: int = Field(..., description="参数元组在枚举顺序中的编号")
    parameters: Dict[str, str] = Field(..., description="参数名到域元素字面量")
    symbol: str = Field(..., description="对应的纤维型")
    configuration: List[str] = Field(default_factory=list, description="该模型的纤维构形")
    path: Optional[str] = Field(None, description="冻结后的模型文件路径")


class ScanReport(BaseModel):
    """一次扫描的汇总"""

    family: str = Field(..., description="族名称")
    field: str = Field(..., description="系数域，如 GF(2^2)")
    mode: Literal["exhaustive", "sampled"] = Field(..., description="穷举或抽样")
    target: ScanTarget = Field("any", description="冻结见证时关注的目标")
    parameters: List[str] = Field(default_factory=list, description="自由参数（按枚举顺序，首个为最高位）")
    fixed: Dict[str, str] = Field(default_factory=dict, description="被固定的参数")
    total: int = Field(0, description="参数空间大小")
    tested: int = Field(0, description="实际检查的元组数")
    skipped_singular: int = Field(0, description="Δ ≡ 0 而跳过的元组数")
    skipped_prefilter: int = Field(0, description="所有有理点 vΔ 均低于阈值而跳过的元组数")
    non_k3: int = Field(0, description="完整分类后不是 K3 的元组数")
    incomplete: int = Field(0, description="判别式未完全分裂的元组数")
    k3_models: int = Field(0, description="完整分类且为 K3 的元组数")
    max_multiplicative: int = Field(0, description="K3 模型中出现的最大 I_n 的 n")
    max_multiplicative_witness: Optional[ScanWitness] = Field(None, description="达到最大 I_n 的首个元组")
    max_additive: Optional[str] = Field(None, description="K3 模型中分支数最多的加性纤维")
    max_additive_components: int = Field(0, description="该加性纤维的分支数")
    max_additive_witness: Optional[ScanWitness] = Field(None, description="达到最大加性纤维的首个元组")
    collected: List[ScanWitness] = Field(default_factory=list, description="含指定纤维型的元组")
    jobs: int = Field(1, description="使用的进程数")

    def summary(self) -> str:
        return (
            f"{self.family} over {self.field} [{self.mode}]: tested {self.tested}/{self.total}, "
            f"Δ≡0 {self.skipped_singular}, prefilter {self.skipped_prefilter}, non-K3 {self.non_k3}, "
            f"incomplete {self.incomplete}, K3 {self.k3_models}; "
            f"max I_n = I{self.max_multiplicative}, max additive = {self.max_additive or '-'}"
        )
