"""变分线路构造与导数线路"""

import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.core.circuit_sim import CircuitSimulator
from src.core.exceptions import GateIndexError
from src.core.topology import EntanglerTopology
from src.models.ansatz import Ansatz, DerivativeCircuit, Generator
from src.models.pauli import PauliTerm
from src.models.state import Gate, StateVector

logger = logging.getLogger(__name__)

# R_a(θ) = exp(-iθσ_a/2) 的导数系数
ROTATION_F = -0.5j


class AnsatzBuilder:
    """硬件高效线路族及其生成元元数据"""

    @staticmethod
    def from_gates(gates: Sequence[Gate], num_qubits: int, num_params: int,
                   layers: int = 1, entanglement: str = "linear") -> Ansatz:
        """
        由门序列推导每个参数的生成元 (f = -i/2, σ = 旋转轴, 插入在该门之后)
        """
        generators: List[List[Generator]] = [[] for _ in range(num_params)]
        for position, gate in enumerate(gates):
            if gate.kind != "rotation":
                continue
            if gate.param_index is None or not 0 <= gate.param_index < num_params:
                raise GateIndexError(f"旋转门参数索引 {gate.param_index} 越界")
            word = ["I"] * num_qubits
            word[gate.target] = gate.axis
            generators[gate.param_index].append(
                Generator(ROTATION_F, PauliTerm(1.0, "".join(word)), position)
            )
        return Ansatz(
            gates=tuple(gates),
            num_qubits=num_qubits,
            num_params=num_params,
            generators=tuple(tuple(g) for g in generators),
            layers=layers,
            entanglement=entanglement,
        )

    @staticmethod
    def hardware_efficient(num_qubits: int, layers: int = 1,
                           entanglement: str = "linear") -> Ansatz:
        """
        交替的 Ry 层与 CNOT 阶梯，最后一层只有旋转

        参数个数 m·(L+1)：m=2, L=1 为 4 参数，m=3, L=1 为 6 参数。

        Args:
            num_qubits: 比特数 m
            layers: CNOT 阶梯层数 L
            entanglement: 耦合拓扑
        """
        if num_qubits < 1 or layers < 1:
            raise ValueError(f"需要 m >= 1 且 L >= 1，实际 m={num_qubits}, L={layers}")

        pairs = EntanglerTopology.cnot_pairs(num_qubits, entanglement)
        gates: List[Gate] = []
        p = 0
        for layer in range(layers + 1):
            for q in range(num_qubits):
                gates.append(Gate.ry(q, p))
                p += 1
            if layer < layers:
                gates.extend(Gate.cnot(c, t) for c, t in pairs)

        logger.debug(f"构造硬件高效线路: m={num_qubits}, L={layers}, 参数 {p} 个")
        return AnsatzBuilder.from_gates(gates, num_qubits, p, layers, entanglement)

    @staticmethod
    def derivative_circuits(ansatz: Ansatz, i: int) -> List[Tuple[complex, DerivativeCircuit]]:
        """
        参数 i 的导数线路 Ṽ_{k,i}，σ_{k,i} 插入在对应旋转门之后

        Raises:
            GateIndexError: 参数索引越界
        """
        if not 0 <= i < ansatz.num_params:
            raise GateIndexError(f"参数索引 {i} 越界 (参数个数 {ansatz.num_params})")
        result = []
        for k, gen in enumerate(ansatz.generators[i]):
            inserted = [
                Gate.pauli(label, q) for q, label in enumerate(gen.sigma.word) if label != "I"
            ]
            gates = ansatz.gates[: gen.position + 1] + tuple(inserted) + ansatz.gates[gen.position + 1:]
            result.append((gen.f, DerivativeCircuit(ansatz, i, k, gates)))
        return result

    @staticmethod
    def state(ansatz: Ansatz, theta: Sequence[float],
              simulator: Optional[CircuitSimulator] = None) -> StateVector:
        """|ψ(θ)⟩ = V(θ)|0̄⟩"""
        simulator = simulator or CircuitSimulator()
        return simulator.prepare(ansatz.gates, theta, ansatz.num_qubits)

    @staticmethod
    def derivative_states(ansatz: Ansatz, theta: Sequence[float],
                          simulator: Optional[CircuitSimulator] = None) -> np.ndarray:
        """
        ∂_i|ψ⟩ = Σ_k f_{k,i} Ṽ_{k,i}|0̄⟩

        Returns:
            形状 (N, 2^m) 的复数组，第 i 行为 ∂_i|ψ⟩
        """
        simulator = simulator or CircuitSimulator()
        rows = np.zeros((ansatz.num_params, 1 << ansatz.num_qubits), dtype=complex)
        for i in range(ansatz.num_params):
            for f, circuit in AnsatzBuilder.derivative_circuits(ansatz, i):
                rows[i] += f * simulator.prepare(circuit.gates, theta, ansatz.num_qubits).amps
        return rows

    @staticmethod
    def initial_theta(ansatz: Ansatz, seed: Optional[int] = None) -> np.ndarray:
        """[0, π) 均匀随机初值"""
        rng = np.random.default_rng(seed)
        return rng.uniform(0.0, np.pi, size=ansatz.num_params)
