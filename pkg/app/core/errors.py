"""
工具包异常定义
"""
from typing import Optional


class ToolkitError(Exception):
    """所有工具包错误的基类，携带详细信息与命令行退出码"""

    exit_code: int = 2

    def __init__(self, detail: str, exit_code: Optional[int] = None):
        super().__init__(detail)
        self.detail = detail
        if exit_code is not None:
            self.exit_code = exit_code


class FieldArithmeticError(ToolkitError, ArithmeticError):
    """域运算错误：除零、父域不一致等"""


class FieldTooLargeError(ToolkitError):
    """域过大，无法建表或枚举"""


class DegreeBoundError(ToolkitError):
    """违反 K3 次数约束 deg a_i ≤ 2i"""


class ValuationError(ToolkitError):
    """赋值计算参数不合法"""


class SingularFibrationError(ToolkitError):
    """判别式恒为零，纤维化在余维 1 处奇异"""


class NonMinimalModelError(ToolkitError):
    """模型在某个点处不是极小的"""


class LatticeInputError(ToolkitError):
    """格配置或接触分量不合法"""


class SymbolicError(ToolkitError):
    """符号计算输入不合法"""


class ModelFormatError(ToolkitError):
    """模型文件或配置文件格式错误"""

    def __init__(self, detail: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        super().__init__(f"第 {line} 行第 {column} 列: {detail}" if line else detail)
