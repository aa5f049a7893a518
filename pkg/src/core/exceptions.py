"""异常定义 - 所有错误按类别映射到 CLI 退出码"""


class GeeError(Exception):
    """广义本征值求解器的基础异常"""
    exit_code = 3


class ConfigError(GeeError):
    """配置文件/预设/输入文件解析或校验失败"""
    exit_code = 2


class PauliParseError(ConfigError):
    """Pauli 文本格式错误"""

    def __init__(self, message: str, line: int = None):
        self.line = line
        if line is not None:
            message = f"第 {line} 行: {message}"
        super().__init__(message)


class InvalidDimensionError(GeeError):
    """矩阵维度不是 2 的幂"""


class NonHermitianError(GeeError):
    """矩阵不满足厄米性"""


class DimensionMismatchError(GeeError):
    """量子比特数或矩阵维度不一致"""


class GateIndexError(GeeError):
    """门的比特索引或参数索引越界"""


class SingularBCollapseError(GeeError):
    """⟨ψ|B|ψ⟩ 低于阈值，态落入 B 的零空间"""


class IllConditionedGammaError(GeeError):
    """正则化后的 Γ 仍然数值奇异"""

    def __init__(self, message: str, condition: float = float("inf")):
        self.condition = condition
        super().__init__(f"{message} (条件数估计: {condition:.3e})")


class DivergenceError(GeeError):
    """演化过程中出现非有限值"""


class NotBNormalizableError(GeeError):
    """向量的 B 范数非正，无法 B 归一化"""


class DegeneratePencilError(GeeError):
    """det(A - λB) 恒为零"""


class ZeroVectorError(GeeError):
    """向量范数为零"""


class ClosedFormUndefinedError(GeeError):
    """解析解分母 Q = 0"""


class InvalidQuantumNumberError(GeeError):
    """量子数 (n, ℓ, m) 非法"""


class BasisSizeError(GeeError):
    """基组填充后的维度超出上限"""


class SingularFitError(GeeError):
    """g1/g2 拟合的 2x2 线性方程组奇异"""


class ConvergenceError(GeeError):
    """演化停滞，残差高于阈值"""
    exit_code = 4
