"""适配器层 - 文件读写与产物输出"""

from .artifacts import ArtifactWriter, OperatorReader

__all__ = ["ArtifactWriter", "OperatorReader"]
