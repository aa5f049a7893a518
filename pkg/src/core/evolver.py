"""虚时演化求解器 - 广义瑞利商 F(τ)、McLachlan 方程 Γθ̇ = C 与紧缩"""

import logging
from typing import Optional, Sequence, Union

import numpy as np
import scipy.linalg

from src.core.ansatz import AnsatzBuilder
from src.core.circuit_sim import CircuitSimulator
from src.core.exceptions import (
    DimensionMismatchError,
    DivergenceError,
    IllConditionedGammaError,
    NotBNormalizableError,
    SingularBCollapseError,
)
from src.core.pauli_algebra import PauliAlgebra
from src.models.ansatz import Ansatz
from src.models.evolution import (
    DeflatedOperator,
    DeflationTerm,
    EvolutionConfig,
    EvolutionTrace,
    TraceRow,
)
from src.models.pauli import PauliSum, PauliTerm
from src.models.state import StateVector

logger = logging.getLogger(__name__)

Operator = Union[PauliSum, DeflatedOperator]


def as_deflated(operator: Operator) -> DeflatedOperator:
    """PauliSum 视为不含紧缩项的 DeflatedOperator"""
    if isinstance(operator, DeflatedOperator):
        return operator
    return DeflatedOperator(operator)


def fix_phase(amps: np.ndarray) -> np.ndarray:
    """去掉全局相位，使模最大的振幅为正实数"""
    amps = np.asarray(amps, dtype=complex)
    k = int(np.argmax(np.abs(amps)))
    if abs(amps[k]) == 0:
        return amps
    return amps * (abs(amps[k]) / amps[k])


class ImaginaryTimeEvolver:
    """
    变分虚时演化

    estimator:
        statevector - 直接由导数态内积得到 Γ 与 C
        circuit     - 逐项执行辅助比特重叠线路（shots > 0 时总是使用该路径）
    """

    def __init__(self, config: Optional[EvolutionConfig] = None,
                 simulator: Optional[CircuitSimulator] = None):
        self.config = config or EvolutionConfig()
        self.simulator = simulator or CircuitSimulator(self.config.seed)
        # 未指定种子时沿用模拟器抽取的种子
        self.seed = self.config.seed if self.config.seed is not None else self.simulator.seed

    @property
    def use_circuits(self) -> bool:
        return self.config.estimator == "circuit" or self.config.shots > 0

    # ------------------------------------------------------------------
    # F(τ) 与残差
    # ------------------------------------------------------------------
    def _circuit_expectation(self, ansatz: Ansatz, theta, obs: PauliSum) -> float:
        total = 0.0
        for term in obs:
            record = self.simulator.hadamard_test_expectation(
                ansatz.gates, theta, PauliTerm(1.0, term.word), self.config.shots
            )
            total += term.coeff * record.estimate
        return total

    def compute_F(self, state: StateVector, A_eff: Operator, B: PauliSum,
                  ansatz: Optional[Ansatz] = None, theta=None) -> float:
        """
        F = ⟨ψ|A'|ψ⟩ / ⟨ψ|B|ψ⟩

        给出 ansatz 与 theta 且启用线路估计时，Pauli 项经 Hadamard 测试得到，
        紧缩项按秩一形式精确计入。

        Raises:
            SingularBCollapseError: |⟨ψ|B|ψ⟩| < b_norm_floor
        """
        A_eff = as_deflated(A_eff)
        if A_eff.num_qubits != state.num_qubits or B.num_qubits != state.num_qubits:
            raise DimensionMismatchError(
                f"算符比特数 ({A_eff.num_qubits}, {B.num_qubits}) 与态比特数 {state.num_qubits} 不一致"
            )
        if self.use_circuits and ansatz is not None and theta is not None:
            numerator = (self._circuit_expectation(ansatz, theta, A_eff.base_A)
                         + A_eff.deflation_expectation(state))
            denominator = self._circuit_expectation(ansatz, theta, B)
        else:
            numerator = A_eff.expectation(state)
            denominator = float(np.vdot(state.amps, B.apply(state.amps)).real)

        if abs(denominator) < self.config.b_norm_floor:
            raise SingularBCollapseError(
                f"⟨ψ|B|ψ⟩ = {denominator:.3e} 低于阈值 {self.config.b_norm_floor:.1e}，态落入 B 的零空间"
            )
        return numerator / denominator

    @staticmethod
    def residual(state: StateVector, A_eff: Operator, B: PauliSum, F: float) -> float:
        """‖(A' - F·B)|ψ⟩‖ / ‖ψ‖"""
        A_eff = as_deflated(A_eff)
        vec = A_eff.apply(state.amps) - F * B.apply(state.amps)
        return float(np.linalg.norm(vec) / state.norm())

    # ------------------------------------------------------------------
    # Γ 与 C
    # ------------------------------------------------------------------
    def compute_gamma(self, ansatz: Ansatz, theta) -> np.ndarray:
        """
        Γ_ij = Re[Σ f*_{k,i} f_{l,j} ⟨0̄|Ṽ†_{k,i} Ṽ_{l,j}|0̄⟩]

        Returns:
            N×N 实对称矩阵
        """
        theta = np.asarray(theta, dtype=float)
        if not self.use_circuits:
            derivs = AnsatzBuilder.derivative_states(ansatz, theta, self.simulator)
            gamma = (derivs.conj() @ derivs.T).real
            return (gamma + gamma.T) / 2

        n = ansatz.num_params
        circuits = [AnsatzBuilder.derivative_circuits(ansatz, i) for i in range(n)]
        gamma = np.zeros((n, n))
        for i in range(n):
            for j in range(i, n):
                value = 0.0
                for f_k, left in circuits[i]:
                    for f_l, right in circuits[j]:
                        weight = np.conj(f_k) * f_l
                        record = self.simulator.overlap_test(
                            left.gates, right.gates, theta,
                            phase=float(np.angle(weight)),
                            shots=self.config.shots,
                            num_qubits=ansatz.num_qubits,
                        )
                        value += abs(weight) * record.estimate
                gamma[i, j] = gamma[j, i] = value
        return gamma

    def compute_C(self, ansatz: Ansatz, theta, A_eff: Operator, B: PauliSum,
                  F: float) -> np.ndarray:
        """
        C_i = -Re[Σ_k f*_{k,i} ⟨0̄|Ṽ†_{k,i} (A' - F·B) V|0̄⟩]

        线路路径按 combine(A, B, F) 的 Pauli 项逐项测量，紧缩项以秩一稠密形式加入。
        """
        A_eff = as_deflated(A_eff)
        theta = np.asarray(theta, dtype=float)
        state = AnsatzBuilder.state(ansatz, theta, self.simulator)
        derivs = AnsatzBuilder.derivative_states(ansatz, theta, self.simulator)

        if not self.use_circuits:
            vec = A_eff.apply(state.amps) - F * B.apply(state.amps)
            return -(derivs.conj() @ vec).real

        shifted = PauliAlgebra.combine(A_eff.base_A, B, F)
        c = np.zeros(ansatz.num_params)
        for i in range(ansatz.num_params):
            for f_k, left in AnsatzBuilder.derivative_circuits(ansatz, i):
                for term in shifted:
                    weight = np.conj(f_k) * term.coeff
                    record = self.simulator.overlap_test(
                        left.gates, ansatz.gates, theta,
                        phase=float(np.angle(weight)),
                        observable=PauliTerm(1.0, term.word),
                        shots=self.config.shots,
                    )
                    c[i] -= abs(weight) * record.estimate
        if A_eff.terms:
            projected = A_eff.apply(state.amps) - A_eff.base_A.apply(state.amps)
            c -= (derivs.conj() @ projected).real
        return c

    # ------------------------------------------------------------------
    # 时间步进
    # ------------------------------------------------------------------
    def euler_step(self, theta, gamma: np.ndarray, c: np.ndarray, d_tau: float,
                   epsilon: Optional[float] = None) -> np.ndarray:
        """
        θ' = θ + solve(Γ + εI, C)·δτ

        Raises:
            IllConditionedGammaError: 正则化后的条件数超过 max_condition
        """
        if epsilon is None:
            epsilon = self.config.gamma_regularization
        theta = np.asarray(theta, dtype=float)
        system = np.asarray(gamma, dtype=float) + epsilon * np.eye(len(theta))
        condition = float(np.linalg.cond(system))
        if not np.isfinite(condition) or condition > self.config.max_condition:
            raise IllConditionedGammaError("Γ + εI 数值奇异", condition)
        try:
            velocity = scipy.linalg.solve(system, np.asarray(c, dtype=float), assume_a="sym")
        except (scipy.linalg.LinAlgError, ValueError) as e:
            raise IllConditionedGammaError(f"Γ + εI 求解失败: {e}", condition)
        return theta + velocity * d_tau

    def run_evolution(self, ansatz: Ansatz, A: PauliSum, B: PauliSum,
                      deflations: Union[Sequence[DeflationTerm], DeflatedOperator] = (),
                      theta0=None, level: int = 0) -> EvolutionTrace:
        """
        从 theta0 出发积分到 tau_max 或 F 出现平台

        F 连续 convergence_window 步满足 |ΔF| < convergence_tol 时停止。输出态同时给出
        单位归一形式 (final_state) 与 B 归一形式 (b_normalized)。

        Args:
            ansatz: 变分线路
            A, B: 算符对
            deflations: 已收敛能级的紧缩项
            theta0: 初始参数，缺省时按 self.seed 随机生成
            level: 能级编号，仅用于日志与输出

        Raises:
            SingularBCollapseError, IllConditionedGammaError, DivergenceError
        """
        cfg = self.config
        if A.num_qubits != ansatz.num_qubits or B.num_qubits != ansatz.num_qubits:
            raise DimensionMismatchError(
                f"算符比特数 ({A.num_qubits}, {B.num_qubits}) 与线路比特数 {ansatz.num_qubits} 不一致"
            )
        if isinstance(deflations, DeflatedOperator):
            A_eff = deflations
        else:
            A_eff = DeflatedOperator(A, tuple(deflations))

        if theta0 is None:
            theta = AnsatzBuilder.initial_theta(ansatz, self.seed)
        else:
            theta = np.asarray(theta0, dtype=float).copy()
            if theta.shape != (ansatz.num_params,):
                raise DimensionMismatchError(
                    f"初始参数长度 {theta.shape} 与参数个数 {ansatz.num_params} 不一致"
                )

        trace = EvolutionTrace(seed=self.seed, level=level, config=cfg)
        n_steps = int(round(cfg.tau_max / cfg.d_tau))
        stable = 0
        previous_F = None
        logger.info(
            f"能级 {level}: 开始演化 δτ={cfg.d_tau}, τ_max={cfg.tau_max}, "
            f"紧缩项 {len(A_eff.terms)} 个, 估计方式 {cfg.estimator} ({cfg.mode})"
        )

        for step in range(n_steps + 1):
            tau = step * cfg.d_tau
            state = AnsatzBuilder.state(ansatz, theta, self.simulator)
            F = self.compute_F(state, A_eff, B, ansatz, theta)
            if not np.isfinite(F) or not np.all(np.isfinite(theta)):
                raise DivergenceError(f"能级 {level}: τ={tau:.4g} 处出现非有限值 F={F}")
            res = self.residual(state, A_eff, B, F)
            trace.rows.append(TraceRow(tau, theta.copy(), F, res))

            if step % cfg.log_every == 0:
                logger.debug(f"能级 {level}: τ={tau:.4g} F={F:.8f} residual={res:.3e}")

            if previous_F is not None:
                stable = stable + 1 if abs(F - previous_F) < cfg.convergence_tol else 0
            previous_F = F
            if stable >= cfg.convergence_window:
                trace.converged = True
                break
            if step == n_steps:
                break

            gamma = self.compute_gamma(ansatz, theta)
            c = self.compute_C(ansatz, theta, A_eff, B, F)
            theta = self.euler_step(theta, gamma, c, cfg.d_tau)

        trace.final_state = state
        trace.stalled = not trace.converged
        b_norm = float(np.vdot(state.amps, B.apply(state.amps)).real)
        if b_norm > cfg.b_norm_floor:
            trace.b_normalized = fix_phase(state.amps / np.sqrt(b_norm))
        else:
            logger.warning(f"能级 {level}: ⟨ψ|B|ψ⟩ = {b_norm:.3e} 非正，无法 B 归一化")

        if trace.converged:
            logger.info(
                f"能级 {level}: 收敛于 τ={trace.rows[-1].tau:.4g}, "
                f"λ={trace.final_lambda:.6f}, residual={trace.final_residual:.3e}"
            )
        else:
            logger.warning(
                f"能级 {level}: 到达 τ_max={cfg.tau_max} 仍未收敛, "
                f"λ={trace.final_lambda:.6f}, residual={trace.final_residual:.3e}"
            )
        if trace.final_residual > cfg.residual_threshold:
            logger.warning(
                f"能级 {level}: 残差 {trace.final_residual:.3e} 高于阈值 {cfg.residual_threshold:.1e}，"
                f"线路表达能力可能不足，可尝试增加 layers"
            )
        return trace

    # ------------------------------------------------------------------
    # 紧缩
    # ------------------------------------------------------------------
    def deflate(self, A_eff: Operator, B: PauliSum, g: StateVector, mu: float) -> DeflatedOperator:
        """
        A' → A' + μ B|g⟩⟨g|B，g 先按 ⟨g|B|g⟩ = 1 归一

        Raises:
            NotBNormalizableError: ⟨g|B|g⟩ ≤ b_norm_floor
        """
        A_eff = as_deflated(A_eff)
        if g.num_qubits != B.num_qubits:
            raise DimensionMismatchError("紧缩态比特数与 B 不一致")
        b_norm = float(np.vdot(g.amps, B.apply(g.amps)).real)
        if b_norm <= self.config.b_norm_floor:
            raise NotBNormalizableError(f"⟨g|B|g⟩ = {b_norm:.3e}，无法 B 归一化")
        g_b = StateVector(g.amps / np.sqrt(b_norm))
        term = DeflationTerm(float(mu), g_b, B.apply(g_b.amps))
        logger.debug(f"添加紧缩项 μ={mu}, 原 B 范数 {b_norm:.6f}")
        return A_eff.with_term(term)

    @staticmethod
    def projector_decomposition(operator: DeflatedOperator, index: int,
                                drop_tol: float = 1e-4) -> PauliSum:
        """B|g_j⟩⟨g_j|B 的 Pauli 展开，仅用于报告"""
        return PauliAlgebra.decompose(operator.rank_one_matrix(index), drop_tol=drop_tol)

    @staticmethod
    def b_overlap(B: PauliSum, u: np.ndarray, v: np.ndarray) -> float:
        """|⟨u|B|v⟩|"""
        return float(abs(np.vdot(u, B.apply(v))))
