"""量子态与量子门数据模型"""

from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

ROTATION_AXES = ("X", "Y", "Z")
GATE_KINDS = ("rotation", "cnot", "hadamard", "pauli", "phase", "controlled")


@dataclass(frozen=True)
class StateVector:
    """m 比特稠密态矢量"""
    amps: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amps, dtype=complex).reshape(-1)
        dim = amps.shape[0]
        if dim < 2 or dim & (dim - 1):
            raise ValueError(f"态矢量长度必须为 2 的幂，实际: {dim}")
        object.__setattr__(self, "amps", amps)

    @classmethod
    def zero(cls, num_qubits: int) -> "StateVector":
        """|0̄⟩"""
        amps = np.zeros(1 << num_qubits, dtype=complex)
        amps[0] = 1.0
        return cls(amps)

    @property
    def num_qubits(self) -> int:
        return int(self.amps.shape[0]).bit_length() - 1

    @property
    def dim(self) -> int:
        return self.amps.shape[0]

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def normalized(self) -> "StateVector":
        return StateVector(self.amps / self.norm())


@dataclass(frozen=True)
class Gate:
    """
    单目标比特门

    kind:
        rotation   - R_axis(θ) = exp(-iθσ/2)，θ 取自 params[param_index]
        cnot       - 受控非门
        hadamard   - H
        pauli      - 单比特 Pauli (label)
        phase      - diag(1, e^{i·angle})
        controlled - 以 control 为控制位执行 body 中的门序列
    """
    kind: str
    target: int = 0
    control: Optional[int] = None
    axis: Optional[str] = None
    param_index: Optional[int] = None
    label: Optional[str] = None
    angle: float = 0.0
    body: Tuple["Gate", ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise ValueError(f"未知门类型: {self.kind}")
        if self.kind == "rotation" and self.axis not in ROTATION_AXES:
            raise ValueError(f"旋转门轴必须为 X/Y/Z: {self.axis}")
        if self.kind == "pauli" and self.label not in ("I", "X", "Y", "Z"):
            raise ValueError(f"Pauli 门标签非法: {self.label}")

    @classmethod
    def ry(cls, target: int, param_index: int) -> "Gate":
        return cls("rotation", target=target, axis="Y", param_index=param_index)

    @classmethod
    def rotation(cls, axis: str, target: int, param_index: int) -> "Gate":
        return cls("rotation", target=target, axis=axis, param_index=param_index)

    @classmethod
    def cnot(cls, control: int, target: int) -> "Gate":
        return cls("cnot", target=target, control=control)

    @classmethod
    def hadamard(cls, target: int) -> "Gate":
        return cls("hadamard", target=target)

    @classmethod
    def pauli(cls, label: str, target: int) -> "Gate":
        return cls("pauli", target=target, label=label)

    @classmethod
    def phase(cls, target: int, angle: float) -> "Gate":
        return cls("phase", target=target, angle=float(angle))

    @classmethod
    def controlled(cls, control: int, body) -> "Gate":
        return cls("controlled", control=control, body=tuple(body))

    def qubits(self) -> Tuple[int, ...]:
        """门涉及的全部比特"""
        if self.kind == "controlled":
            inner = tuple(q for g in self.body for q in g.qubits())
            return (self.control,) + inner
        if self.control is not None:
            return (self.control, self.target)
        return (self.target,)


@dataclass(frozen=True)
class MeasurementRecord:
    """辅助比特测量记录，estimate = p0 - p1"""
    p0: float
    p1: float
    shots: int = 0
    estimate: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "estimate", float(self.p0 - self.p1))

    @property
    def exact(self) -> bool:
        return self.shots == 0

    def to_dict(self) -> dict:
        return {"p0": self.p0, "p1": self.p1, "shots": self.shots, "estimate": self.estimate}
