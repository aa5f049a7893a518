"""氢原子 STO 基矩阵束与极化率拟合结果"""

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

QuantumNumbers = Tuple[int, int, int]


@dataclass(frozen=True)
class STOConfig:
    """
    STO 基参数

    ξ = x·α，能量 E = -α²/2（原子单位）。
    """
    x: float
    alpha: float
    Z: float = 1.0
    field: float = 0.01
    n_max: int = 2

    def __post_init__(self):
        if self.x <= 0:
            raise ValueError(f"x 必须为正: {self.x}")
        if self.alpha == 0:
            raise ValueError("alpha 不能为 0")
        if self.n_max < 1:
            raise ValueError(f"n_max 必须 >= 1: {self.n_max}")
        if self.Z == 0:
            raise ValueError("Z 不能为 0")

    @property
    def xi(self) -> float:
        return self.x * self.alpha

    def with_alpha(self, alpha: float) -> "STOConfig":
        return STOConfig(self.x, alpha, self.Z, self.field, self.n_max)

    def with_x(self, x: float) -> "STOConfig":
        return STOConfig(x, self.alpha, self.Z, self.field, self.n_max)

    def to_dict(self) -> dict:
        return {"x": self.x, "alpha": self.alpha, "Z": self.Z,
                "field": self.field, "n_max": self.n_max}


@dataclass(frozen=True)
class STOPencil:
    """截断 STO 基上的 A、B（及补齐到 2 的幂的版本）"""
    config: STOConfig
    basis: Tuple[QuantumNumbers, ...]
    A_mat: np.ndarray
    B_mat: np.ndarray
    S_mat: np.ndarray  # 基函数交叠，仅用于报告
    padded_A: np.ndarray
    padded_B: np.ndarray

    @property
    def size(self) -> int:
        return len(self.basis)

    @property
    def padded_size(self) -> int:
        return self.padded_A.shape[0]

    @property
    def num_qubits(self) -> int:
        return self.padded_size.bit_length() - 1


@dataclass
class PolarizabilityFit:
    """λ₁ = g₁/α + g₂·ℰ²/(Z²α⁵) 的两点拟合"""
    x: float
    g1: Optional[float] = None
    g2: Optional[float] = None
    alphas: Tuple[float, ...] = ()
    lambdas: Tuple[float, ...] = ()
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.error is None and self.g1 is not None

    @property
    def polarizability(self) -> Optional[float]:
        if not self.ok or self.g1 == 0:
            return None
        return 2.0 * self.g2 / self.g1 ** 3

    def to_dict(self) -> dict:
        return {
            "x": self.x,
            "g1": self.g1,
            "g2": self.g2,
            "polarizability": self.polarizability,
            "alphas": list(self.alphas),
            "lambdas": list(self.lambdas),
            "error": self.error,
        }


@dataclass
class SweepResult:
    """x 网格扫描结果，fits 保持网格顺序"""
    fits: List[PolarizabilityFit] = field(default_factory=list)
    solver: str = "oracle"

    @property
    def best(self) -> Optional[PolarizabilityFit]:
        valid = [f for f in self.fits if f.polarizability is not None]
        if not valid:
            return None
        return max(valid, key=lambda f: f.polarizability)

    @property
    def failed(self) -> List[PolarizabilityFit]:
        return [f for f in self.fits if not f.ok]

    def to_dict(self) -> dict:
        best = self.best
        return {
            "solver": self.solver,
            "argmax_x": best.x if best else None,
            "max_polarizability": best.polarizability if best else None,
            "points": [f.to_dict() for f in self.fits],
            "failed_points": [f.x for f in self.failed],
        }
