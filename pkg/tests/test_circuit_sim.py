"""态矢量模拟器与辅助比特测量线路测试"""

import sys
from pathlib import Path

import numpy as np
import pytest

# 添加项目根目录到路径
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from src.core.circuit_sim import CircuitSimulator, rotation_matrix
from src.core.exceptions import DimensionMismatchError, GateIndexError
from src.models.pauli import PauliSum, PauliTerm
from src.models.problems import get_problem
from src.models.state import Gate, StateVector


def _random_circuit(num_qubits):
    gates = []
    p = 0
    for layer in range(2):
        for q in range(num_qubits):
            gates.append(Gate.rotation("XYZ"[(q + layer) % 3], q, p))
            p += 1
        for q in range(num_qubits - 1):
            gates.append(Gate.cnot(q, q + 1))
    return gates, p


def test_rotation_matrix():
    """R_y(π) 把 |0⟩ 转到 |1⟩"""
    r = rotation_matrix("Y", np.pi)
    assert np.allclose(r @ [1, 0], [0, 1])
    assert np.allclose(rotation_matrix("Z", 0.3) @ rotation_matrix("Z", -0.3), np.eye(2))


def test_bell_state():
    """H(0) + CNOT(0→1) 得到 (|00⟩ + |11⟩)/√2"""
    sim = CircuitSimulator()
    state = sim.prepare([Gate.hadamard(0), Gate.cnot(0, 1)], [], 2)
    assert np.allclose(state.amps, np.array([1, 0, 0, 1]) / np.sqrt(2))


def test_cnot_control_is_first_qubit():
    """CNOT(0→1)|10⟩ = |11⟩，qubit 0 为最高位"""
    sim = CircuitSimulator()
    start = StateVector(np.array([0, 0, 1, 0]))
    out = sim.apply_circuit(start, [Gate.cnot(0, 1)])
    assert np.allclose(out.amps, [0, 0, 0, 1])


def test_expectation():
    """期望值与稠密矩阵计算一致"""
    sim = CircuitSimulator()
    gates, n_params = _random_circuit(2)
    theta = np.linspace(0.3, 1.7, n_params)
    state = sim.prepare(gates, theta, 2)
    b = get_problem("example1").B
    expected = np.vdot(state.amps, b.to_matrix() @ state.amps).real
    assert CircuitSimulator.expectation(state, b) == pytest.approx(expected)

    with pytest.raises(DimensionMismatchError):
        CircuitSimulator.expectation(state, get_problem("example3").B)


def test_hadamard_test_matches_expectation():
    """Hadamard 测试 P(0) - P(1) = Re⟨ψ|u|ψ⟩"""
    sim = CircuitSimulator()
    gates, n_params = _random_circuit(3)
    theta = np.linspace(0.2, 2.9, n_params)
    state = sim.prepare(gates, theta, 3)
    for word in ("ZIX", "XXI", "IYY"):
        u = PauliTerm(1.0, word)
        record = sim.hadamard_test_expectation(gates, theta, u)
        exact = np.vdot(state.amps, u.apply(state.amps)).real
        assert record.exact
        assert record.p0 + record.p1 == pytest.approx(1.0)
        assert record.estimate == pytest.approx(exact, abs=1e-12)


def test_overlap_test_phase():
    """重叠线路估计 Re[e^{iφ}⟨L|h|R⟩]"""
    sim = CircuitSimulator()
    left = [Gate.rotation("Y", 0, 0), Gate.cnot(0, 1), Gate.rotation("X", 1, 1)]
    right = [Gate.rotation("X", 0, 1), Gate.rotation("Y", 1, 0), Gate.cnot(1, 0)]
    theta = np.array([0.7, 1.9])
    l_state = sim.prepare(left, theta, 2)
    r_state = sim.prepare(right, theta, 2)
    h = PauliTerm(1.0, "ZY")
    overlap = np.vdot(l_state.amps, h.apply(r_state.amps))

    for phase in (0.0, np.pi / 2, -np.pi / 2, 1.1):
        record = sim.overlap_test(left, right, theta, phase=phase, observable=h)
        assert record.estimate == pytest.approx((np.exp(1j * phase) * overlap).real, abs=1e-12)

    plain = sim.overlap_test(left, right, theta, num_qubits=2)
    assert plain.estimate == pytest.approx(np.vdot(l_state.amps, r_state.amps).real, abs=1e-12)


def test_shot_sampling_is_seeded():
    """shot 模式在固定种子下可复现，并逼近精确值"""
    gates = [Gate.rotation("Y", 0, 0), Gate.rotation("Y", 1, 1), Gate.cnot(0, 1)]
    theta = [0.8, 2.1]
    u = PauliTerm(1.0, "ZZ")
    exact = CircuitSimulator().hadamard_test_expectation(gates, theta, u).estimate
    a = CircuitSimulator(seed=7).hadamard_test_expectation(gates, theta, u, shots=20000)
    b = CircuitSimulator(seed=7).hadamard_test_expectation(gates, theta, u, shots=20000)
    assert a.estimate == b.estimate
    assert a.shots == 20000 and not a.exact
    assert abs(a.estimate - exact) < 0.05


def test_gate_index_errors():
    """参数或比特索引越界"""
    sim = CircuitSimulator()
    with pytest.raises(GateIndexError):
        sim.prepare([Gate.rotation("Y", 0, 3)], [0.1], 1)
    with pytest.raises(GateIndexError):
        sim.prepare([Gate.hadamard(2)], [], 2)
    with pytest.raises(GateIndexError):
        sim.prepare([Gate.cnot(1, 1)], [], 2)


def test_invalid_gate_and_state():
    """非法门参数与态维度"""
    with pytest.raises(ValueError):
        Gate("rotation", target=0, axis="W", param_index=0)
    with pytest.raises(ValueError):
        StateVector(np.ones(3))
    assert PauliSum.identity(2).coeff("II") == 1.0


def test_shot_estimates_within_statistical_bound():
    """200 次独立采样中，估计值落在 5/√S 以内的比例不低于 99%"""
    gates = [Gate.rotation("Y", 0, 0), Gate.rotation("Y", 1, 1), Gate.cnot(0, 1)]
    theta = [0.8, 2.1]
    u = PauliTerm(1.0, "ZZ")
    exact = CircuitSimulator().hadamard_test_expectation(gates, theta, u).estimate
    shots = 1000
    sim = CircuitSimulator(seed=2024)
    errors = np.array([
        abs(sim.hadamard_test_expectation(gates, theta, u, shots=shots).estimate - exact)
        for _ in range(200)
    ])
    assert np.mean(errors <= 5 / np.sqrt(shots)) >= 0.99
    # 估计不应恒等于精确值
    assert errors.max() > 0


def test_unseeded_simulator_records_seed():
    """未给种子时抽取一个具体整数种子，用它可复现采样"""
    sim = CircuitSimulator()
    assert isinstance(sim.seed, int)
    gates = [Gate.rotation("Y", 0, 0)]
    u = PauliTerm(1.0, "Z")
    first = sim.hadamard_test_expectation(gates, [0.7], u, shots=500).estimate
    replay = CircuitSimulator(seed=sim.seed).hadamard_test_expectation(gates, [0.7], u, shots=500).estimate
    assert first == replay
