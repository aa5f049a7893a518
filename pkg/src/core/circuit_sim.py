"""稠密态矢量模拟器 - 门作用、期望值与 Hadamard 测试线路"""

import logging
from typing import List, Optional, Sequence

import numpy as np

from src.core.exceptions import DimensionMismatchError, GateIndexError
from src.models.pauli import PauliSum, PauliTerm
from src.models.state import Gate, MeasurementRecord, StateVector

logger = logging.getLogger(__name__)

_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
PAULI_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def rotation_matrix(axis: str, theta: float) -> np.ndarray:
    """R_axis(θ) = exp(-iθσ/2) = cos(θ/2) I - i sin(θ/2) σ"""
    return np.cos(theta / 2) * PAULI_MATRICES["I"] - 1j * np.sin(theta / 2) * PAULI_MATRICES[axis]


def draw_seed() -> int:
    """从系统熵中取一个具体种子，便于记录和复现"""
    return int(np.random.SeedSequence().entropy)


def pauli_gates(term: PauliTerm, offset: int = 0) -> List[Gate]:
    """将 Pauli 字符串展开为单比特 Pauli 门（跳过 I）"""
    return [
        Gate.pauli(label, q + offset)
        for q, label in enumerate(term.word)
        if label != "I"
    ]


class CircuitSimulator:
    """
    稠密态矢量模拟器

    qubit 0 对应态矢量索引的最高位；测试线路中辅助比特为额外的第 m 号比特（最低位）。
    shot 模式使用可设定种子的 numpy Generator。
    """

    def __init__(self, seed: Optional[int] = None):
        self.seed = draw_seed() if seed is None else int(seed)
        self.rng = np.random.default_rng(self.seed)

    # ------------------------------------------------------------------
    # 门作用
    # ------------------------------------------------------------------
    @staticmethod
    def _gate_matrix(gate: Gate, params: np.ndarray) -> np.ndarray:
        if gate.kind == "rotation":
            if gate.param_index is None or not 0 <= gate.param_index < len(params):
                raise GateIndexError(
                    f"参数索引 {gate.param_index} 越界 (参数个数 {len(params)})"
                )
            return rotation_matrix(gate.axis, float(params[gate.param_index]))
        if gate.kind == "cnot":
            return PAULI_MATRICES["X"]
        if gate.kind == "hadamard":
            return _H
        if gate.kind == "pauli":
            return PAULI_MATRICES[gate.label]
        if gate.kind == "phase":
            return np.diag([1.0, np.exp(1j * gate.angle)])
        raise GateIndexError(f"门 {gate.kind} 没有单比特矩阵")

    @staticmethod
    def _apply_matrix(psi: np.ndarray, mat: np.ndarray, target: int,
                      controls: Sequence[int]) -> None:
        """在 (2,)*n 张量上原地作用受控单比特矩阵"""
        index = [slice(None)] * psi.ndim
        for c in controls:
            index[c] = 1
        index = tuple(index)
        sub = psi[index]
        axis = target - sum(1 for c in controls if c < target)
        updated = np.moveaxis(np.tensordot(mat, sub, axes=([1], [axis])), 0, axis)
        psi[index] = updated

    def _apply_gate(self, psi: np.ndarray, gate: Gate, params: np.ndarray,
                    controls: tuple = ()) -> None:
        n = psi.ndim
        for q in gate.qubits():
            if q is None or not 0 <= q < n:
                raise GateIndexError(f"比特索引 {q} 越界 (比特数 {n})")
        if gate.kind == "controlled":
            for inner in gate.body:
                self._apply_gate(psi, inner, params, controls + (gate.control,))
            return
        extra = controls + ((gate.control,) if gate.kind == "cnot" else ())
        if gate.target in extra or len(set(extra)) != len(extra):
            raise GateIndexError(f"控制位与目标位冲突: target={gate.target}, controls={extra}")
        self._apply_matrix(psi, self._gate_matrix(gate, params), gate.target, extra)

    def apply_circuit(self, state: StateVector, gates: Sequence[Gate],
                      params: Optional[Sequence[float]] = None) -> StateVector:
        """
        按列表顺序依次作用门序列（U_1 最先）

        Args:
            state: 输入态
            gates: 门序列
            params: 旋转门参数向量

        Returns:
            新的态矢量
        """
        params = np.asarray(params if params is not None else [], dtype=float)
        n = state.num_qubits
        psi = state.amps.copy().reshape((2,) * n)
        for gate in gates:
            self._apply_gate(psi, gate, params)
        return StateVector(psi.reshape(-1))

    def prepare(self, gates: Sequence[Gate], params, num_qubits: int) -> StateVector:
        """V(θ)|0̄⟩"""
        return self.apply_circuit(StateVector.zero(num_qubits), gates, params)

    # ------------------------------------------------------------------
    # 期望值
    # ------------------------------------------------------------------
    @staticmethod
    def expectation(state: StateVector, obs: PauliSum) -> float:
        """
        Σ_α coeff_α ⟨ψ|h_α|ψ⟩

        Raises:
            DimensionMismatchError: 观测量比特数与态不一致
        """
        if obs.num_qubits != state.num_qubits:
            raise DimensionMismatchError(
                f"观测量比特数 {obs.num_qubits} 与态比特数 {state.num_qubits} 不一致"
            )
        return float(np.vdot(state.amps, obs.apply(state.amps)).real)

    # ------------------------------------------------------------------
    # 辅助比特测量
    # ------------------------------------------------------------------
    def _measure_ancilla(self, full: StateVector, shots: int) -> MeasurementRecord:
        amps = full.amps.reshape(-1, 2)
        p0 = float(np.sum(np.abs(amps[:, 0]) ** 2))
        p1 = float(np.sum(np.abs(amps[:, 1]) ** 2))
        if shots <= 0:
            return MeasurementRecord(p0, p1, 0)
        p0_exact = min(max(p0 / (p0 + p1), 0.0), 1.0)
        zeros = int(self.rng.binomial(shots, p0_exact))
        return MeasurementRecord(zeros / shots, (shots - zeros) / shots, int(shots))

    @staticmethod
    def build_hadamard_test_circuit(psi_circuit: Sequence[Gate], u: PauliTerm) -> List[Gate]:
        """
        |ψ⟩ 制备 + H(anc) + 受控 u + H(anc)，辅助比特编号为 m
        """
        ancilla = u.num_qubits
        return (
            list(psi_circuit)
            + [Gate.hadamard(ancilla)]
            + [Gate.controlled(ancilla, pauli_gates(u))]
            + [Gate.hadamard(ancilla)]
        )

    def hadamard_test_expectation(self, psi_circuit: Sequence[Gate], params,
                                  u: PauliTerm, shots: int = 0) -> MeasurementRecord:
        """
        用 P(0) - P(1) 估计 ⟨ψ|u|ψ⟩（u 的系数不计入）

        Args:
            psi_circuit: 在 m 比特寄存器上制备 |ψ⟩ 的门序列
            params: 参数向量
            u: Pauli 字符串
            shots: 0 为精确模式，否则为采样次数
        """
        circuit = self.build_hadamard_test_circuit(psi_circuit, u)
        full = self.prepare(circuit, params, u.num_qubits + 1)
        return self._measure_ancilla(full, shots)

    @staticmethod
    def build_overlap_circuit(left_circuit: Sequence[Gate], right_circuit: Sequence[Gate],
                              num_qubits: int, phase: float,
                              observable: Optional[PauliTerm] = None) -> List[Gate]:
        """
        测量 Re[e^{i·phase} ⟨0̄|L† (h) R|0̄⟩] 的辅助比特线路

        辅助比特为 |0⟩ 时作用 L，为 |1⟩ 时作用 R（及观测量 h），再施加相位门与 H。
        """
        ancilla = num_qubits
        right = list(right_circuit)
        if observable is not None:
            if observable.num_qubits != num_qubits:
                raise DimensionMismatchError("观测量比特数与寄存器不一致")
            right += pauli_gates(observable)
        return [
            Gate.hadamard(ancilla),
            Gate.pauli("X", ancilla),
            Gate.controlled(ancilla, left_circuit),
            Gate.pauli("X", ancilla),
            Gate.controlled(ancilla, right),
            Gate.phase(ancilla, phase),
            Gate.hadamard(ancilla),
        ]

    def overlap_test(self, left_circuit: Sequence[Gate], right_circuit: Sequence[Gate],
                     params, phase: float = 0.0, observable: Optional[PauliTerm] = None,
                     shots: int = 0, num_qubits: Optional[int] = None) -> MeasurementRecord:
        """
        Re[e^{i·phase} ⟨0̄|L†(h_α)R|0̄⟩] 的辅助比特估计

        Raises:
            DimensionMismatchError: 两条线路作用的寄存器大小不一致
        """
        if num_qubits is None:
            if observable is not None:
                num_qubits = observable.num_qubits
            else:
                num_qubits = 1 + max(
                    (q for g in list(left_circuit) + list(right_circuit) for q in g.qubits()),
                    default=0,
                )
        for g in list(left_circuit) + list(right_circuit):
            if max(g.qubits()) >= num_qubits:
                raise DimensionMismatchError(
                    f"线路作用于比特 {max(g.qubits())}，超出寄存器大小 {num_qubits}"
                )
        circuit = self.build_overlap_circuit(left_circuit, right_circuit, num_qubits,
                                             phase, observable)
        full = self.prepare(circuit, params, num_qubits + 1)
        return self._measure_ancilla(full, shots)
