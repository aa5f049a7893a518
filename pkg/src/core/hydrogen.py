"""氢原子外场极化率 - STO 基矩阵元、矩阵束构造与 g₁/g₂ 拟合"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg
from scipy.special import gammaln

from src.core.ansatz import AnsatzBuilder
from src.core.evolver import ImaginaryTimeEvolver
from src.core.exceptions import (
    BasisSizeError,
    GeeError,
    InvalidQuantumNumberError,
    SingularFitError,
)
from src.core.oracle import PencilOracle
from src.core.pauli_algebra import PauliAlgebra
from src.models.evolution import EvolutionConfig
from src.models.hydrogen import (
    PolarizabilityFit,
    QuantumNumbers,
    STOConfig,
    STOPencil,
    SweepResult,
)

logger = logging.getLogger(__name__)

MAX_PADDED_SIZE = 1 << 10
PERTURBATIVE_POLARIZABILITY = 4.5
SOLVERS = ("oracle", "evolver")


def _validate(qn: QuantumNumbers) -> None:
    n, l, m = qn
    if not all(isinstance(v, (int, np.integer)) for v in qn):
        raise InvalidQuantumNumberError(f"量子数必须为整数: {qn}")
    if n < 1 or not 0 <= l <= n - 1 or abs(m) > l:
        raise InvalidQuantumNumberError(f"非法量子数 (n, ℓ, m) = {qn}")


def _gamma_ratio(numerator: float, n_bra: int, n_ket: int) -> float:
    """Γ(numerator) / √(Γ(2n'+1) Γ(2n+1))，按对数计算"""
    return float(np.exp(gammaln(numerator)
                        - 0.5 * (gammaln(2 * n_bra + 1) + gammaln(2 * n_ket + 1))))


class StoMatrixBuilder:
    """STO 基 |n,ℓ,m⟩ = R_n(r) Y_ℓm 上的矩阵元"""

    @staticmethod
    def basis(n_max: int) -> List[QuantumNumbers]:
        """n 升序，其次 ℓ 升序，再 m 升序；0 ≤ ℓ ≤ n-1, |m| ≤ ℓ"""
        return [
            (n, l, m)
            for n in range(1, n_max + 1)
            for l in range(n)
            for m in range(-l, l + 1)
        ]

    @staticmethod
    def sto_overlap(bra: QuantumNumbers, ket: QuantumNumbers) -> float:
        """⟨n'ℓ'm'|nℓm⟩，不同 n 之间不正交"""
        _validate(bra)
        _validate(ket)
        (n1, l1, m1), (n, l, m) = bra, ket
        if l1 != l or m1 != m:
            return 0.0
        return _gamma_ratio(n + n1 + 1, n1, n)

    @staticmethod
    def sto_element_A(cfg: STOConfig, bra: QuantumNumbers, ket: QuantumNumbers) -> float:
        """
        ⟨n'ℓ'm'| 1/r + (ℰ/Z) r cosθ |nℓm⟩

        偶极项只连接 ℓ' = ℓ ± 1 且 m' = m。

        Raises:
            InvalidQuantumNumberError: 量子数非法
        """
        _validate(bra)
        _validate(ket)
        (n1, l1, m1), (n, l, m) = bra, ket
        if m1 != m:
            return 0.0
        xi = cfg.xi
        value = 0.0
        if l1 == l:
            value += 2.0 * xi
        elif cfg.field != 0:
            radial = (cfg.field / cfg.Z) * (n + n1 + 1) * (n + n1) / (2.0 * xi)
            if l1 == l + 1:
                value += radial * np.sqrt((l - m + 1) * (l + m + 1) / ((2 * l + 1) * (2 * l + 3)))
            elif l1 == l - 1:
                value += radial * np.sqrt((l - m) * (l + m) / ((2 * l - 1) * (2 * l + 1)))
        if value == 0.0:
            return 0.0
        return _gamma_ratio(n + n1, n1, n) * value

    @staticmethod
    def sto_element_B(cfg: STOConfig, bra: QuantumNumbers, ket: QuantumNumbers) -> float:
        """
        ⟨n'ℓ'm'| -∇²/2 + α²/2 |nℓm⟩，对 (ℓ, m) 对角

        Raises:
            InvalidQuantumNumberError: 量子数非法
        """
        _validate(bra)
        _validate(ket)
        (n1, l1, m1), (n, l, m) = bra, ket
        if l1 != l or m1 != m:
            return 0.0
        xi, alpha = cfg.xi, cfg.alpha
        bracket = (xi ** 2 * (4 * l * (l + 1) + (n + n1) - (n - n1) ** 2)
                   + alpha ** 2 * (n + n1) * (n + n1 - 1))
        return 0.5 * _gamma_ratio(n + n1 - 1, n1, n) * bracket

    @staticmethod
    def pad(matrix: np.ndarray, size: int) -> np.ndarray:
        """右下角补单位块到 size"""
        extra = size - matrix.shape[0]
        if extra <= 0:
            return matrix.copy()
        return scipy.linalg.block_diag(matrix, np.eye(extra))

    @staticmethod
    def build_pencil(cfg: STOConfig) -> STOPencil:
        """
        截断到 n ≤ n_max 的矩阵束，并补齐到 2 的幂

        Raises:
            BasisSizeError: 补齐后维度超过 1024
        """
        basis = StoMatrixBuilder.basis(cfg.n_max)
        size = len(basis)
        padded = max(2, 1 << (size - 1).bit_length())
        if padded > MAX_PADDED_SIZE:
            raise BasisSizeError(
                f"n_max={cfg.n_max} 的基组大小 {size} 补齐后为 {padded}，超出上限 {MAX_PADDED_SIZE}"
            )

        a = np.array([[StoMatrixBuilder.sto_element_A(cfg, b, k) for k in basis] for b in basis])
        b_mat = np.array([[StoMatrixBuilder.sto_element_B(cfg, b, k) for k in basis] for b in basis])
        s = np.array([[StoMatrixBuilder.sto_overlap(b, k) for k in basis] for b in basis])
        logger.debug(f"STO 矩阵束: x={cfg.x}, α={cfg.alpha}, 基组 {size} → {padded}")
        return STOPencil(
            config=cfg,
            basis=tuple(basis),
            A_mat=a,
            B_mat=b_mat,
            S_mat=s,
            padded_A=StoMatrixBuilder.pad(a, padded),
            padded_B=StoMatrixBuilder.pad(b_mat, padded),
        )


class PolarizabilityCalculator:
    """λ₁ 求解、g₁/g₂ 拟合与 x 扫描"""

    def __init__(self, solver: str = "oracle", evolution: Optional[EvolutionConfig] = None,
                 layers: int = 1, entanglement: str = "linear",
                 initial_theta: Optional[Sequence[float]] = None):
        if solver not in SOLVERS:
            raise ValueError(f"solver 必须为 {SOLVERS} 之一: {solver}")
        self.solver = solver
        self.evolution = evolution or EvolutionConfig(d_tau=0.05, tau_max=60.0)
        self.layers = layers
        self.entanglement = entanglement
        self.initial_theta = initial_theta

    # ------------------------------------------------------------------
    # 参考公式
    # ------------------------------------------------------------------
    @staticmethod
    def perturbative_reference(alpha: float, Z: float, field: float) -> Tuple[float, float]:
        """微扰结果 λ₁ = 1/α + 9ℰ²/(4Z²α⁵)，极化率恒为 9/2"""
        lambda1 = 1.0 / alpha + 9.0 * field ** 2 / (4.0 * Z ** 2 * alpha ** 5)
        return lambda1, PERTURBATIVE_POLARIZABILITY

    @staticmethod
    def perturbative_energy(Z: float, field: float) -> float:
        """E₁ ≈ -Z²/2 - (9/4)ℰ²/Z⁴"""
        return -Z ** 2 / 2.0 - 9.0 * field ** 2 / (4.0 * Z ** 4)

    # ------------------------------------------------------------------
    # 基态 λ₁
    # ------------------------------------------------------------------
    def ground_lambda(self, cfg: STOConfig) -> float:
        """
        物理基态对应的 λ₁

        λ_n ≈ 1/(nα)：α < 0 时取最小本征值，α > 0 时取最大本征值。
        """
        pencil = StoMatrixBuilder.build_pencil(cfg)
        if self.solver == "oracle":
            eigs = PencilOracle.solve_pencil(PencilOracle.make_pencil(pencil.A_mat, pencil.B_mat))
            values = eigs.eigenvalues
            return float(values.min() if cfg.alpha < 0 else values.max())
        return self._evolve_ground(pencil)

    def _evolve_ground(self, pencil: STOPencil) -> float:
        # α > 0 时对 (-A, B) 求最低本征值再取反
        sign = 1.0 if pencil.config.alpha < 0 else -1.0
        target = StoMatrixBuilder.pad(sign * pencil.A_mat, pencil.padded_size)
        a = PauliAlgebra.decompose(target)
        b = PauliAlgebra.decompose(pencil.padded_B)
        ansatz = AnsatzBuilder.hardware_efficient(pencil.num_qubits, self.layers, self.entanglement)
        theta0 = self.initial_theta
        if theta0 is not None and len(theta0) != ansatz.num_params:
            theta0 = None
        trace = ImaginaryTimeEvolver(self.evolution).run_evolution(ansatz, a, b, theta0=theta0)
        return sign * trace.final_lambda

    # ------------------------------------------------------------------
    # 拟合与扫描
    # ------------------------------------------------------------------
    @staticmethod
    def fit_g(lambda_pairs: Sequence[Tuple[float, float]], cfg: STOConfig) -> PolarizabilityFit:
        """
        由两组 (α, λ₁) 解出 (g₁, g₂)

        Raises:
            SingularFitError: 2x2 方程组奇异（α 相同或 ℰ = 0）
        """
        if len(lambda_pairs) != 2:
            raise SingularFitError(f"需要恰好两组 (α, λ₁)，实际 {len(lambda_pairs)} 组")
        scale = cfg.field ** 2 / cfg.Z ** 2
        matrix = np.array([[1.0 / alpha, scale / alpha ** 5] for alpha, _ in lambda_pairs])
        rhs = np.array([lam for _, lam in lambda_pairs])
        col_norms = np.linalg.norm(matrix, axis=0)
        if np.any(col_norms == 0) or np.linalg.cond(matrix / col_norms) > 1e12:
            raise SingularFitError(
                f"拟合方程组奇异: α = {[a for a, _ in lambda_pairs]}, ℰ = {cfg.field}"
            )
        g1, g2 = np.linalg.solve(matrix, rhs)
        return PolarizabilityFit(
            x=cfg.x,
            g1=float(g1),
            g2=float(g2),
            alphas=tuple(float(a) for a, _ in lambda_pairs),
            lambdas=tuple(float(lam) for _, lam in lambda_pairs),
        )

    def fit_point(self, x: float, template: STOConfig,
                  alphas: Sequence[float] = (-1.0, -2.0)) -> PolarizabilityFit:
        """单个 x 的两次求解与拟合；失败时返回带错误信息的结果"""
        cfg = template.with_x(x)
        try:
            pairs = [(alpha, self.ground_lambda(cfg.with_alpha(alpha))) for alpha in alphas]
            fit = self.fit_g(pairs, cfg)
            logger.info(f"x={x:.4g}: g1={fit.g1:.6f}, g2={fit.g2:.6f}, P={fit.polarizability:.4f}")
            return fit
        except (GeeError, ValueError, np.linalg.LinAlgError) as e:
            logger.warning(f"x={x:.4g} 求解失败: {e}")
            return PolarizabilityFit(x=x, alphas=tuple(alphas), error=str(e))

    def sweep_x(self, x_grid: Iterable[float], template: STOConfig,
                alphas: Sequence[float] = (-1.0, -2.0), workers: int = 1) -> SweepResult:
        """
        逐点求 P(x) 并给出最大值位置

        单点失败不影响其余网格点；workers > 1 时用线程池并行，结果保持网格顺序。
        """
        grid = [float(x) for x in x_grid]
        if not grid:
            raise ValueError("x 网格为空")
        logger.info(f"开始 x 扫描: {len(grid)} 个网格点, 求解器 {self.solver}, workers={workers}")
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as executor:
                fits = list(executor.map(lambda x: self.fit_point(x, template, alphas), grid))
        else:
            fits = [self.fit_point(x, template, alphas) for x in grid]

        result = SweepResult(fits=fits, solver=self.solver)
        best = result.best
        if best is not None:
            logger.info(f"极化率最大值: x*={best.x:.4g}, P={best.polarizability:.4f}")
        else:
            logger.warning("所有网格点均求解失败")
        return result
