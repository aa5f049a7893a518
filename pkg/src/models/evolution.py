"""虚时演化的配置、轨迹与紧缩算符"""

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.models.pauli import PauliSum
from src.models.state import StateVector

ESTIMATORS = ("statevector", "circuit")


@dataclass
class EvolutionConfig:
    """单次演化的参数"""
    d_tau: float = 0.01
    tau_max: float = 10.0
    gamma_regularization: float = 1e-6
    mu_list: List[float] = field(default_factory=list)
    shots: int = 0  # 0 为精确模式
    convergence_tol: float = 1e-7
    convergence_window: int = 10
    b_norm_floor: float = 1e-8
    estimator: str = "statevector"
    max_condition: float = 1e12
    residual_threshold: float = 1e-2
    seed: Optional[int] = None
    log_every: int = 100

    def __post_init__(self):
        if self.d_tau <= 0:
            raise ValueError(f"d_tau 必须为正: {self.d_tau}")
        if self.tau_max < self.d_tau:
            raise ValueError(f"tau_max ({self.tau_max}) 不能小于 d_tau ({self.d_tau})")
        if self.gamma_regularization < 0:
            raise ValueError("gamma_regularization 不能为负")
        if self.b_norm_floor <= 0:
            raise ValueError("b_norm_floor 必须为正")
        if self.shots < 0:
            raise ValueError("shots 不能为负")
        if self.estimator not in ESTIMATORS:
            raise ValueError(f"estimator 必须为 {ESTIMATORS} 之一: {self.estimator}")

    @property
    def mode(self) -> str:
        return "exact" if self.shots == 0 else f"shots({self.shots})"

    def to_dict(self) -> dict:
        return {
            "d_tau": self.d_tau,
            "tau_max": self.tau_max,
            "gamma_regularization": self.gamma_regularization,
            "mu_list": list(self.mu_list),
            "mode": self.mode,
            "shots": self.shots,
            "convergence_tol": self.convergence_tol,
            "convergence_window": self.convergence_window,
            "b_norm_floor": self.b_norm_floor,
            "estimator": self.estimator,
            "max_condition": self.max_condition,
            "residual_threshold": self.residual_threshold,
            "seed": self.seed,
        }


def _amplitudes(amps: Optional[np.ndarray]):
    """实振幅输出为浮点列表，含虚部时输出 [re, im] 对"""
    if amps is None:
        return None
    if np.allclose(np.imag(amps), 0.0, atol=1e-12):
        return [float(a.real) for a in amps]
    return [[float(a.real), float(a.imag)] for a in amps]


@dataclass(frozen=True)
class TraceRow:
    tau: float
    theta: np.ndarray
    F: float
    residual: float


@dataclass
class EvolutionTrace:
    """一次虚时演化的 (τ, θ, F, residual) 时间序列"""
    rows: List[TraceRow] = field(default_factory=list)
    converged: bool = False
    stalled: bool = False  # 到达 tau_max 仍未出现 F 平台
    final_state: Optional[StateVector] = None
    b_normalized: Optional[np.ndarray] = None
    seed: Optional[int] = None
    level: int = 0
    config: Optional[EvolutionConfig] = None

    @property
    def final_lambda(self) -> float:
        return self.rows[-1].F if self.rows else float("nan")

    @property
    def final_residual(self) -> float:
        return self.rows[-1].residual if self.rows else float("nan")

    @property
    def final_theta(self) -> np.ndarray:
        return self.rows[-1].theta

    @property
    def steps(self) -> int:
        return max(len(self.rows) - 1, 0)

    def csv_header(self) -> List[str]:
        n = len(self.rows[0].theta) if self.rows else 0
        return ["tau", "F", "residual"] + [f"theta_{i}" for i in range(n)]

    def to_csv_rows(self) -> List[List[str]]:
        return [
            [f"{row.tau:.10g}", repr(float(row.F)), repr(float(row.residual))]
            + [repr(float(t)) for t in row.theta]
            for row in self.rows
        ]

    def summary(self) -> dict:
        return {
            "level": self.level,
            "final_lambda": self.final_lambda,
            "final_residual": self.final_residual,
            "converged": self.converged,
            "steps": self.steps,
            "seed": self.seed,
            "final_theta": [float(t) for t in self.final_theta] if self.rows else [],
            "stalled": self.stalled,
            "b_normalized_state": _amplitudes(self.b_normalized),
            "config": self.config.to_dict() if self.config else None,
        }


@dataclass(frozen=True)
class DeflationTerm:
    """μ B|g⟩⟨g|B，g 满足 ⟨g|B|g⟩ = 1"""
    mu: float
    g_state: StateVector
    b_vector: np.ndarray  # B|g⟩


@dataclass(frozen=True)
class DeflatedOperator:
    """A' = A + Σ_j μ_j B|g_j⟩⟨g_j|B，紧缩项以秩一稠密形式保存"""
    base_A: PauliSum
    terms: Tuple[DeflationTerm, ...] = ()

    @property
    def num_qubits(self) -> int:
        return self.base_A.num_qubits

    def apply(self, vector: np.ndarray) -> np.ndarray:
        vector = np.asarray(vector, dtype=complex)
        out = self.base_A.apply(vector)
        for term in self.terms:
            out = out + term.mu * term.b_vector * np.vdot(term.b_vector, vector)
        return out

    def expectation(self, state: StateVector) -> float:
        return float(np.vdot(state.amps, self.apply(state.amps)).real)

    def deflation_expectation(self, state: StateVector) -> float:
        """Σ_j μ_j |⟨g_j|B|ψ⟩|²"""
        return float(sum(term.mu * abs(np.vdot(term.b_vector, state.amps)) ** 2
                         for term in self.terms))

    def rank_one_matrix(self, index: int) -> np.ndarray:
        """B|g⟩⟨g|B（不含 μ）"""
        b = self.terms[index].b_vector
        return np.outer(b, b.conj())

    def to_matrix(self) -> np.ndarray:
        mat = self.base_A.to_matrix()
        for j, term in enumerate(self.terms):
            mat = mat + term.mu * self.rank_one_matrix(j)
        return mat

    def with_term(self, term: DeflationTerm) -> "DeflatedOperator":
        return DeflatedOperator(self.base_A, self.terms + (term,))

    @property
    def mus(self) -> Sequence[float]:
        return [t.mu for t in self.terms]
