"""氢原子 STO 基矩阵束与极化率测试"""

import sys
from pathlib import Path

import numpy as np
import pytest

# 添加项目根目录到路径
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from src.core.exceptions import BasisSizeError, InvalidQuantumNumberError, SingularFitError
from src.core.hydrogen import PolarizabilityCalculator, StoMatrixBuilder
from src.core.oracle import PencilOracle
from src.models.evolution import EvolutionConfig
from src.models.hydrogen import STOConfig
from src.models.run_config import parse_grid


def test_basis_order():
    """n_max=2：1s, 2s, 2p(-1, 0, +1)"""
    basis = StoMatrixBuilder.basis(2)
    assert basis == [(1, 0, 0), (2, 0, 0), (2, 1, -1), (2, 1, 0), (2, 1, 1)]
    assert len(StoMatrixBuilder.basis(3)) == 14


def test_overlap():
    """同一函数的交叠为 1，不同 n 不正交"""
    assert StoMatrixBuilder.sto_overlap((1, 0, 0), (1, 0, 0)) == pytest.approx(1.0)
    assert StoMatrixBuilder.sto_overlap((2, 1, 0), (2, 1, 0)) == pytest.approx(1.0)
    # Γ(4)/√(Γ(3)Γ(5)) = 6/√48
    assert StoMatrixBuilder.sto_overlap((1, 0, 0), (2, 0, 0)) == pytest.approx(6 / np.sqrt(48))
    assert StoMatrixBuilder.sto_overlap((2, 0, 0), (2, 1, 0)) == 0.0


def test_single_function_elements():
    """1s 函数的 A、B 矩阵元"""
    cfg = STOConfig(x=0.8, alpha=-1.5, field=0.0)
    s = (1, 0, 0)
    xi = cfg.xi
    assert StoMatrixBuilder.sto_element_A(cfg, s, s) == pytest.approx(xi)
    assert StoMatrixBuilder.sto_element_B(cfg, s, s) == pytest.approx((xi ** 2 + cfg.alpha ** 2) / 2)


def test_single_function_eigenvalue():
    """只有 1s 时 λ = 2x / (α(x² + 1))，x = 1 时为 1/α"""
    for x in (0.7, 1.0):
        cfg = STOConfig(x=x, alpha=-1.0, field=0.0, n_max=1)
        pencil = StoMatrixBuilder.build_pencil(cfg)
        assert pencil.size == 1 and pencil.padded_size == 2 and pencil.num_qubits == 1
        lam = pencil.A_mat[0, 0] / pencil.B_mat[0, 0]
        assert lam == pytest.approx(2 * x / (cfg.alpha * (x ** 2 + 1)))


def test_dipole_element():
    """⟨1s|r cosθ|2p₀⟩ 项只连接 ℓ 相差 1 且 m 相同的函数"""
    cfg = STOConfig(x=0.9, alpha=-1.0, field=0.01)
    value = StoMatrixBuilder.sto_element_A(cfg, (1, 0, 0), (2, 1, 0))
    expected = (2 / np.sqrt(48)) * (6 * cfg.field / cfg.xi) / np.sqrt(3)
    assert value == pytest.approx(expected)
    assert StoMatrixBuilder.sto_element_A(cfg, (2, 1, 0), (1, 0, 0)) == pytest.approx(expected)
    assert StoMatrixBuilder.sto_element_A(cfg, (1, 0, 0), (2, 1, 1)) == 0.0
    assert StoMatrixBuilder.sto_element_B(cfg, (1, 0, 0), (2, 1, 0)) == 0.0


def test_pencil_is_symmetric_and_padded():
    """A、B 对称，补齐块为单位阵"""
    pencil = StoMatrixBuilder.build_pencil(STOConfig(x=0.9, alpha=-2.0))
    assert pencil.size == 5
    assert pencil.padded_size == 8
    assert np.allclose(pencil.A_mat, pencil.A_mat.T)
    assert np.allclose(pencil.B_mat, pencil.B_mat.T)
    assert np.allclose(pencil.padded_A[5:, 5:], np.eye(3))
    assert np.allclose(pencil.padded_B[5:, :5], 0.0)
    assert np.linalg.eigvalsh(pencil.B_mat).min() > 0


def test_invalid_quantum_numbers():
    """ℓ ≥ n 或 |m| > ℓ"""
    cfg = STOConfig(x=1.0, alpha=-1.0)
    with pytest.raises(InvalidQuantumNumberError):
        StoMatrixBuilder.sto_element_A(cfg, (1, 1, 0), (1, 0, 0))
    with pytest.raises(InvalidQuantumNumberError):
        StoMatrixBuilder.sto_element_B(cfg, (2, 1, 2), (2, 1, 2))
    with pytest.raises(InvalidQuantumNumberError):
        StoMatrixBuilder.sto_overlap((0, 0, 0), (1, 0, 0))


def test_basis_size_limit():
    """补齐后超过 1024 维"""
    with pytest.raises(BasisSizeError):
        StoMatrixBuilder.build_pencil(STOConfig(x=1.0, alpha=-1.0, n_max=15))


def test_perturbative_reference():
    """微扰极限"""
    lam, p = PolarizabilityCalculator.perturbative_reference(-1.0, 1.0, 0.01)
    assert lam == pytest.approx(-1.0 - 9e-4 / 4)
    assert p == 4.5
    assert PolarizabilityCalculator.perturbative_energy(1.0, 0.01) == pytest.approx(-0.5 - 2.25e-4)


def test_fit_recovers_coefficients():
    """由构造的 λ₁ 反解 g₁、g₂"""
    cfg = STOConfig(x=0.9, alpha=-1.0, field=0.01)
    g1, g2 = 0.98, 2.1
    pairs = [(a, g1 / a + g2 * cfg.field ** 2 / a ** 5) for a in (-1.0, -2.0)]
    fit = PolarizabilityCalculator.fit_g(pairs, cfg)
    assert fit.g1 == pytest.approx(g1)
    assert fit.g2 == pytest.approx(g2)
    assert fit.polarizability == pytest.approx(2 * g2 / g1 ** 3)


def test_fit_singular():
    """ℰ = 0 或 α 相同时方程组奇异"""
    with pytest.raises(SingularFitError):
        PolarizabilityCalculator.fit_g([(-1.0, -1.0), (-2.0, -0.5)], STOConfig(x=1.0, alpha=-1.0, field=0.0))
    with pytest.raises(SingularFitError):
        PolarizabilityCalculator.fit_g([(-1.0, -1.0), (-1.0, -1.0)], STOConfig(x=1.0, alpha=-1.0))


def test_ground_lambda_sign_convention():
    """α < 0 取最小本征值，且接近 1/α"""
    calc = PolarizabilityCalculator()
    for alpha in (-1.0, -2.0):
        lam = calc.ground_lambda(STOConfig(x=1.0, alpha=alpha))
        assert lam == pytest.approx(1.0 / alpha, rel=2e-2)


def test_sweep_finds_maximum():
    """x 扫描：P(x) 在 x* = 0.9 处最大"""
    grid = parse_grid("0.5:1.2:0.1")
    assert len(grid) == 8 and 0.9 in grid
    template = STOConfig(x=1.0, alpha=-1.0, field=0.01, n_max=2)
    result = PolarizabilityCalculator().sweep_x(grid, template)
    assert not result.failed
    assert result.best.x == pytest.approx(0.9)
    assert result.best.polarizability == pytest.approx(4.2665, abs=5e-3)

    parallel = PolarizabilityCalculator().sweep_x(grid, template, workers=3)
    assert [f.polarizability for f in parallel.fits] == pytest.approx(
        [f.polarizability for f in result.fits]
    )


def test_failed_point_is_recorded():
    """单点失败不会中断扫描"""
    template = STOConfig(x=1.0, alpha=-1.0, field=0.0)
    result = PolarizabilityCalculator().sweep_x([0.8, 0.9], template)
    assert len(result.failed) == 2
    assert result.best is None
    assert result.to_dict()["failed_points"] == [0.8, 0.9]


def test_evolver_solver_respects_variational_bound():
    """演化求解器的 λ₁ 不低于精确最小本征值"""
    cfg = STOConfig(x=0.9, alpha=-1.0, field=0.01)
    pencil = StoMatrixBuilder.build_pencil(cfg)
    exact = PencilOracle.solve_pencil(PencilOracle.make_pencil(pencil.padded_A, pencil.padded_B))
    calc = PolarizabilityCalculator(
        solver="evolver",
        evolution=EvolutionConfig(d_tau=0.05, tau_max=5.0, seed=3),
        layers=1,
    )
    lam = calc.ground_lambda(cfg)
    assert lam >= exact.eigenvalues.min() - 1e-8
    assert np.isfinite(lam)


def _closed_form_matrices(x, alpha, Z, field):
    """n_max=2 时 A、B 的解析表达式，基组顺序 1s, 2s, 2p₋₁, 2p₀, 2p₊₁"""
    r3 = np.sqrt(3.0)
    a = np.diag([x * alpha, x * alpha / 2, x * alpha / 2, x * alpha / 2, x * alpha / 2])
    a[0, 1] = a[1, 0] = x * alpha / r3
    a[0, 3] = a[3, 0] = field / (x * Z * alpha)
    a[1, 3] = a[3, 1] = 5 * field / (2 * r3 * x * Z * alpha)
    a2 = alpha ** 2
    b = np.diag([(1 + x ** 2) * a2 / 2, (3 + x ** 2) * a2 / 6,
                 (1 + x ** 2) * a2 / 2, (1 + x ** 2) * a2 / 2, (1 + x ** 2) * a2 / 2])
    b[0, 1] = b[1, 0] = (3 + x ** 2) * a2 / (4 * r3)
    return a, b


@pytest.mark.parametrize("x, alpha, Z, field", [
    (0.7, -1.0, 1.0, 0.01),
    (0.9, -2.0, 1.0, 0.01),
    (1.3, 1.5, 2.0, 0.05),
])
def test_matrices_match_closed_form(x, alpha, Z, field):
    """n_max=2 的 5×5 矩阵逐元素等于解析表达式"""
    pencil = StoMatrixBuilder.build_pencil(STOConfig(x=x, alpha=alpha, Z=Z, field=field))
    a, b = _closed_form_matrices(x, alpha, Z, field)
    assert np.max(np.abs(pencil.A_mat - a)) < 1e-12
    assert np.max(np.abs(pencil.B_mat - b)) < 1e-12


def test_padded_spectrum_adds_unit_eigenvalues():
    """补齐后的谱 = 原谱 ∪ {1, 1, 1}，2p±1 的二重根不丢"""
    pencil = StoMatrixBuilder.build_pencil(STOConfig(x=0.9, alpha=-1.0, field=0.01))
    original = PencilOracle.solve_pencil(PencilOracle.make_pencil(pencil.A_mat, pencil.B_mat))
    padded = PencilOracle.solve_pencil(PencilOracle.make_pencil(pencil.padded_A, pencil.padded_B))
    assert len(original) == 5
    assert len(padded) == 8
    expected = np.sort(np.concatenate([original.eigenvalues, [1.0, 1.0, 1.0]]))
    assert padded.eigenvalues == pytest.approx(expected, abs=1e-10)
    assert np.sum(np.abs(padded.eigenvalues + 0.49724) < 1e-4) == 2


def test_small_field_shift_is_quadratic():
    """λ₁(ℰ) - λ₁(0) ∝ ℰ²：场强减半，位移变为四分之一"""
    calc = PolarizabilityCalculator()
    base = calc.ground_lambda(STOConfig(x=0.9, alpha=-1.0, field=0.0))
    fields = np.array([0.005, 0.01, 0.02])
    shifts = np.array([calc.ground_lambda(STOConfig(x=0.9, alpha=-1.0, field=f)) - base for f in fields])
    assert np.all(shifts < 0)
    assert shifts[1] / shifts[0] == pytest.approx(4.0, rel=1e-2)
    assert shifts[2] / shifts[1] == pytest.approx(4.0, rel=1e-2)
    c = np.dot(fields ** 2, shifts) / np.dot(fields ** 2, fields ** 2)
    assert np.linalg.norm(shifts - c * fields ** 2) / np.linalg.norm(shifts) < 1e-2


@pytest.mark.parametrize("x", [0.7, 0.8])
def test_evolver_matches_oracle(x):
    """演化求解器的 λ₁ 与经典解相差不超过 1e-2"""
    oracle = PolarizabilityCalculator()
    evolver = PolarizabilityCalculator(
        solver="evolver",
        evolution=EvolutionConfig(d_tau=0.05, tau_max=60.0, seed=5),
        layers=2,
    )
    for alpha in (-1.0, -2.0):
        cfg = STOConfig(x=x, alpha=alpha, field=0.01)
        assert evolver.ground_lambda(cfg) == pytest.approx(oracle.ground_lambda(cfg), abs=1e-2)
