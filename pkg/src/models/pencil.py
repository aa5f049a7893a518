"""矩阵束 (A, B) 与本征对结果"""

from dataclasses import dataclass, field
from typing import List

import numpy as np


@dataclass(frozen=True)
class Pencil:
    """稠密厄米矩阵对 A - λB"""
    A: np.ndarray
    B: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "A", np.asarray(self.A, dtype=complex))
        object.__setattr__(self, "B", np.asarray(self.B, dtype=complex))

    @property
    def dim(self) -> int:
        return self.A.shape[0]


@dataclass
class Eigenpair:
    """
    λ, 本征向量及其 B 范数

    b_norm 为归一化前的 ⟨v|B|v⟩（v 先取单位范数）；b_norm > 0 时 vector 已 B 归一。
    """
    eigenvalue: float
    vector: np.ndarray
    b_norm: float
    residual: float = 0.0

    @property
    def b_normalized(self) -> bool:
        return self.b_norm > 0

    def to_dict(self) -> dict:
        vec = self.vector
        if np.allclose(vec.imag, 0.0, atol=1e-12):
            amps = [float(a) for a in vec.real]
        else:
            amps = [[float(a.real), float(a.imag)] for a in vec]
        return {
            "lambda": float(self.eigenvalue),
            "vector": amps,
            "b_norm": float(self.b_norm),
            "residual": float(self.residual),
        }


@dataclass
class EigenpairSet:
    """按 λ 升序排列的有限本征对"""
    pairs: List[Eigenpair] = field(default_factory=list)
    b_rank: int = 0
    dimension: int = 0
    polynomial_degree: int = 0

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.array([p.eigenvalue for p in self.pairs])

    def distinct_eigenvalues(self, tol: float = 1e-9) -> List[float]:
        distinct: List[float] = []
        for value in self.eigenvalues:
            if not distinct or abs(value - distinct[-1]) > tol * max(1.0, abs(value)):
                distinct.append(float(value))
        return distinct

    def lowest(self) -> Eigenpair:
        if not self.pairs:
            raise IndexError("本征对集合为空")
        return self.pairs[0]

    def to_dict(self) -> dict:
        return {
            "dimension": self.dimension,
            "b_rank": self.b_rank,
            "polynomial_degree": self.polynomial_degree,
            "eigenvalues": [float(v) for v in self.eigenvalues],
            "distinct_eigenvalues": self.distinct_eigenvalues(),
            "pairs": [p.to_dict() for p in self.pairs],
        }
