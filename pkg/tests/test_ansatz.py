"""变分线路、导数线路与纠缠拓扑测试"""

import sys
from pathlib import Path

import numpy as np
import pytest

# 添加项目根目录到路径
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from src.core.ansatz import ROTATION_F, AnsatzBuilder
from src.core.exceptions import GateIndexError
from src.core.topology import EntanglerTopology
from src.models.state import Gate


def test_cnot_pairs():
    """线性、环形与全连接拓扑"""
    assert EntanglerTopology.cnot_pairs(3, "linear") == [(0, 1), (1, 2)]
    assert EntanglerTopology.cnot_pairs(3, "circular") == [(0, 1), (1, 2), (2, 0)]
    assert EntanglerTopology.cnot_pairs(2, "circular") == [(0, 1)]
    assert EntanglerTopology.cnot_pairs(3, "full") == [(0, 1), (0, 2), (1, 2)]
    assert EntanglerTopology.cnot_pairs(1, "linear") == []
    with pytest.raises(ValueError):
        EntanglerTopology.coupling_graph(3, "star")


def test_parameter_count():
    """参数个数 m·(L+1)"""
    assert AnsatzBuilder.hardware_efficient(2, 1).num_params == 4
    assert AnsatzBuilder.hardware_efficient(3, 1).num_params == 6
    assert AnsatzBuilder.hardware_efficient(3, 2).num_params == 9
    with pytest.raises(ValueError):
        AnsatzBuilder.hardware_efficient(2, 0)


def test_two_qubit_layout():
    """m=2, L=1：两个 Ry、一个 CNOT、两个 Ry"""
    ansatz = AnsatzBuilder.hardware_efficient(2, 1)
    kinds = [g.kind for g in ansatz.gates]
    assert kinds == ["rotation", "rotation", "cnot", "rotation", "rotation"]
    assert [g.param_index for g in ansatz.gates if g.kind == "rotation"] == [0, 1, 2, 3]
    for i, gens in enumerate(ansatz.generators):
        assert len(gens) == 1
        assert gens[0].f == ROTATION_F
        assert gens[0].sigma.word.count("Y") == 1


def test_zero_parameters_give_reference_state():
    """θ = 0 时 V(θ)|0̄⟩ = |0̄⟩"""
    ansatz = AnsatzBuilder.hardware_efficient(3, 2, "circular")
    state = AnsatzBuilder.state(ansatz, np.zeros(ansatz.num_params))
    assert np.allclose(state.amps, np.eye(8)[0])


def test_derivative_states_match_finite_differences():
    """∂_i|ψ⟩ 与中心差分一致"""
    ansatz = AnsatzBuilder.hardware_efficient(3, 1)
    theta = np.array([1.5, 0.8, 2.3, 3.1, 0.4, 1.2])
    derivs = AnsatzBuilder.derivative_states(ansatz, theta)
    h = 1e-6
    for i in range(ansatz.num_params):
        step = np.zeros_like(theta)
        step[i] = h
        plus = AnsatzBuilder.state(ansatz, theta + step).amps
        minus = AnsatzBuilder.state(ansatz, theta - step).amps
        assert np.allclose(derivs[i], (plus - minus) / (2 * h), atol=1e-7)


def test_shared_parameter_has_two_generators():
    """同一参数出现在两个门上时，导数为两项之和"""
    gates = [Gate.rotation("Y", 0, 0), Gate.cnot(0, 1), Gate.rotation("X", 1, 0)]
    ansatz = AnsatzBuilder.from_gates(gates, 2, 1)
    circuits = AnsatzBuilder.derivative_circuits(ansatz, 0)
    assert len(circuits) == 2
    assert circuits[1][1].gates[-1].label == "X"

    theta = np.array([0.9])
    derivs = AnsatzBuilder.derivative_states(ansatz, theta)
    h = 1e-6
    fd = (AnsatzBuilder.state(ansatz, theta + h).amps - AnsatzBuilder.state(ansatz, theta - h).amps) / (2 * h)
    assert np.allclose(derivs[0], fd, atol=1e-7)


def test_derivative_index_out_of_range():
    """参数索引越界"""
    ansatz = AnsatzBuilder.hardware_efficient(2, 1)
    with pytest.raises(GateIndexError):
        AnsatzBuilder.derivative_circuits(ansatz, 4)
    with pytest.raises(GateIndexError):
        AnsatzBuilder.from_gates([Gate.rotation("Y", 0, 2)], 1, 1)


def test_initial_theta_is_seeded():
    """同一种子得到相同初值"""
    ansatz = AnsatzBuilder.hardware_efficient(2, 1)
    a = AnsatzBuilder.initial_theta(ansatz, seed=5)
    b = AnsatzBuilder.initial_theta(ansatz, seed=5)
    assert np.array_equal(a, b)
    assert np.all((a >= 0) & (a < np.pi))
