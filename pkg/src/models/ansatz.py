"""变分线路数据模型"""

from dataclasses import dataclass, field
from typing import Tuple

from src.models.pauli import PauliTerm
from src.models.state import Gate


@dataclass(frozen=True)
class Generator:
    """∂U_i/∂θ_i = Σ_k f_{k,i} U_i σ_{k,i} 中的一项"""
    f: complex
    sigma: PauliTerm
    position: int  # σ 插入在该位置的门之后


@dataclass(frozen=True)
class Ansatz:
    """参数化线路 V(θ) = U_N ··· U_1"""
    gates: Tuple[Gate, ...]
    num_qubits: int
    num_params: int
    generators: Tuple[Tuple[Generator, ...], ...]
    layers: int = 1
    entanglement: str = "linear"

    def __post_init__(self):
        referenced = set()
        for gate in self.gates:
            if gate.kind == "rotation":
                if gate.param_index is None or not 0 <= gate.param_index < self.num_params:
                    raise ValueError(f"旋转门参数索引 {gate.param_index} 越界")
                referenced.add(gate.param_index)
        missing = set(range(self.num_params)) - referenced
        if missing:
            raise ValueError(f"参数 {sorted(missing)} 未被任何旋转门引用")
        if len(self.generators) != self.num_params:
            raise ValueError("生成元元数据数量与参数个数不一致")


@dataclass(frozen=True)
class DerivativeCircuit:
    """Ṽ_{k,i} = U_N ··· U_i σ_{k,i} U_{i-1} ··· U_1"""
    base: Ansatz = field(repr=False, compare=False)
    param_index: int
    gen_index: int
    gates: Tuple[Gate, ...]
