"""
符号消元相关的数据模式
"""
from typing import Any, Dict, List, Literal

from pydantic import BaseModel, ConfigDict, Field, field_serializer


class ElimLeaf(BaseModel):
    """消元搜索树的一个叶子分支"""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    branch: str = Field(..., description="分支路径，如 root/a=0")
    status: Literal["solved", "inconsistent", "stuck", "exhausted"] = Field(..., description="分支结论")
    assignments: Dict[str, Any] = Field(default_factory=dict, description="符号到符号多项式的赋值")
    survivors: List[str] = Field(default_factory=list, description="仍然自由的符号")
    residual: List[str] = Field(default_factory=list, description="未能消去的方程")

    @field_serializer("assignments")
    def _serialize_assignments(self, value: Dict[str, Any]) -> Dict[str, str]:
        return {name: str(poly) for name, poly in value.items()}


class ElimVerdict(BaseModel):
    """消元结论"""

    status: Literal["all_parameters_killed", "residual"] = Field(..., description="总体结论")
    survivors: List[str] = Field(default_factory=list, description="所有已解分支中幸存的自由符号")
    leaves: List[ElimLeaf] = Field(default_factory=list, description="分支树的叶子")
    branches_used: int = Field(0, description="已消耗的分支数")
    exhausted: bool = Field(False, description="是否耗尽分支预算")
    transcript: List[str] = Field(default_factory=list, description="逐条规则应用记录")

    @property
    def solved_leaves(self) -> List[ElimLeaf]:
        return [leaf for leaf in self.leaves if leaf.status == "solved"]
