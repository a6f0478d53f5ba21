"""
定理验证结果的数据模式
"""
from typing import List, Literal, Optional

from pydantic import BaseModel, Field

Verdict = Literal["PASS", "FAIL", "INCONCLUSIVE", "SKIPPED"]
CheckStatus = Literal["pass", "fail", "inconclusive", "skipped"]


class CheckResult(BaseModel):
    """验证中的一个检查项"""

    name: str = Field(..., description="检查项名称")
    status: CheckStatus = Field(..., description="检查结论")
    detail: str = Field("", description="说明")


class VerificationResult(BaseModel):
    """一次命名验证的结论与记录"""

    name: str = Field(..., description="验证名称，如 thm20")
    verdict: Verdict = Field(..., description="总体结论")
    checks: List[CheckResult] = Field(default_factory=list, description="各检查项")
    transcript: List[str] = Field(default_factory=list, description="逐行记录")
    transcript_path: Optional[str] = Field(None, description="记录文件路径")

    @property
    def ok(self) -> bool:
        return self.verdict in ("PASS", "SKIPPED")
