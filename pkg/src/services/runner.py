"""运行编排 - 逐能级虚时演化、经典参考解对照与氢原子扫描"""

import dataclasses
import logging
from typing import Dict, List, Optional, Tuple

import numpy as np

from src.adapters.artifacts import ArtifactWriter, OperatorReader
from src.core.ansatz import AnsatzBuilder
from src.core.circuit_sim import draw_seed
from src.core.evolver import ImaginaryTimeEvolver
from src.core.exceptions import ConfigError, ConvergenceError, GeeError
from src.core.hydrogen import PolarizabilityCalculator
from src.core.oracle import PencilOracle
from src.models.evolution import DeflatedOperator, EvolutionTrace
from src.models.hydrogen import STOConfig, SweepResult
from src.models.pauli import PauliSum
from src.models.pencil import EigenpairSet
from src.models.problems import get_problem
from src.models.run_config import HydrogenRunConfig, LevelSpec, RunConfig

logger = logging.getLogger(__name__)

# 超过该比特数时不展开紧缩项的 Pauli 形式
MAX_REPORT_QUBITS = 4


class SpectrumRunner:
    """逐能级求解：演化 → 紧缩 → 下一能级，最后与经典参考解对照"""

    def __init__(self, config: RunConfig, writer: Optional[ArtifactWriter] = None):
        self.config = config
        self.writer = writer or ArtifactWriter(config.out_dir)

    def resolve_operators(self) -> Tuple[PauliSum, PauliSum, Tuple[float, ...]]:
        """
        内置问题或自定义 Pauli 文件

        Raises:
            ConfigError: 自定义文件的比特数不一致
        """
        cfg = self.config
        if cfg.problem != "custom":
            problem = get_problem(cfg.problem)
            return problem.A, problem.B, problem.reference_lambdas
        a = OperatorReader.read_pauli_file(cfg.a_file)
        b = OperatorReader.read_pauli_file(cfg.b_file)
        if a.num_qubits != b.num_qubits:
            raise ConfigError(
                f"a_file 与 b_file 比特数不一致: {a.num_qubits} != {b.num_qubits}"
            )
        return a, b, ()

    def solve_oracle(self, a: PauliSum, b: PauliSum) -> EigenpairSet:
        return PencilOracle.solve_pencil(PencilOracle.make_pencil(a.to_matrix(), b.to_matrix()))

    def _initial_theta(self, k: int, level: LevelSpec, num_params: int) -> Optional[np.ndarray]:
        values = level.initial_theta or self.config.ansatz.initial_theta
        if values is None:
            return None
        if len(values) != num_params:
            raise ConfigError(
                f"levels[{k}].initial_theta / ansatz.initial_theta 长度 {len(values)} "
                f"与参数个数 {num_params} 不一致"
            )
        return np.array(values, dtype=float)

    def run(self, num_levels: Optional[int] = None) -> Dict:
        """
        主流程

        Args:
            num_levels: 求解的能级数，缺省为配置中的全部能级

        Returns:
            报告字典（同时写出 report.json / report.txt）

        Raises:
            ConvergenceError: 某能级未出现平台且残差高于阈值（fail_on_stall 时）
        """
        cfg = self.config
        levels = list(cfg.levels)
        if num_levels is not None:
            if num_levels < 1:
                raise ConfigError(f"--levels 必须 >= 1，实际为 {num_levels}")
            if num_levels > len(levels):
                # 缺少的能级沿用最后一项设置
                levels = levels + [levels[-1]] * (num_levels - len(levels))
            levels = levels[:num_levels]

        base = cfg.evolution
        if base.seed is None:
            base = dataclasses.replace(base, seed=draw_seed())
            logger.info(f"未指定种子，本次运行使用 seed={base.seed}")

        a, b, references = self.resolve_operators()
        logger.info(f"问题 {cfg.problem}: {a.num_qubits} 比特, A 含 {len(a)} 项, B 含 {len(b)} 项")

        oracle = self.solve_oracle(a, b)
        self.writer.write_json("oracle.json", oracle.to_dict())

        ansatz = AnsatzBuilder.hardware_efficient(
            a.num_qubits, cfg.ansatz.layers, cfg.ansatz.entanglement
        )
        logger.info(f"线路: {ansatz.num_qubits} 比特, L={ansatz.layers}, 参数 {ansatz.num_params} 个")

        operator = DeflatedOperator(a)
        traces: List[EvolutionTrace] = []
        deflation_reports = []
        for k, level in enumerate(levels):
            evolution = dataclasses.replace(base, d_tau=level.d_tau, tau_max=level.tau_max)
            evolver = ImaginaryTimeEvolver(evolution)
            trace = evolver.run_evolution(
                ansatz, a, b, operator,
                theta0=self._initial_theta(k, level, ansatz.num_params), level=k,
            )
            traces.append(trace)
            self.writer.write_trace(trace)

            extra = {"mu": level.mu}
            if k + 1 < len(levels):
                operator = evolver.deflate(operator, b, trace.final_state, level.mu)
                if a.num_qubits <= MAX_REPORT_QUBITS:
                    terms = ImaginaryTimeEvolver.projector_decomposition(operator, k)
                    extra["deflation_pauli"] = terms.to_dict()
                    deflation_reports.append({"level": k, "mu": level.mu, "terms": terms.to_dict()})
            self.writer.write_level_summary(trace, extra)

            if trace.stalled and trace.final_residual > evolution.residual_threshold:
                message = (f"能级 {k} 在 τ_max={evolution.tau_max} 内未收敛，"
                           f"残差 {trace.final_residual:.3e} 高于阈值 {evolution.residual_threshold:.1e}")
                if cfg.fail_on_stall:
                    raise ConvergenceError(message + "，可尝试增加 ansatz.layers 或 tau_max")
                logger.warning(message)

        report = self.build_report(traces, oracle, references, b)
        report["seed"] = base.seed
        report["deflations"] = deflation_reports
        self.writer.write_json("report.json", report)
        self.writer.write_text(
            "report.txt",
            ArtifactWriter.format_report(report["levels"], report.get("ground_fidelity"),
                                         title=f"问题 {cfg.problem}"),
        )
        return report

    def build_report(self, traces: List[EvolutionTrace], oracle: EigenpairSet,
                     references, b: PauliSum) -> Dict:
        """方法 λ 与精确 λ 逐能级对照"""
        exact = oracle.eigenvalues
        rows = []
        for k, trace in enumerate(traces):
            row = {
                "level": k,
                "method_lambda": trace.final_lambda,
                "exact_lambda": float(exact[k]) if k < len(exact) else None,
                "reference_lambda": references[k] if k < len(references) else None,
                "residual": trace.final_residual,
                "converged": trace.converged,
            }
            if row["exact_lambda"] is not None:
                diff = abs(row["method_lambda"] - row["exact_lambda"])
                row["abs_error"] = diff
                row["agreement_percent"] = 100.0 * (1.0 - diff / max(abs(row["exact_lambda"]), 1e-300))
            rows.append(row)

        report = {
            "problem": self.config.problem,
            "levels": rows,
            "oracle_eigenvalues": [float(v) for v in exact],
        }
        if traces and len(oracle):
            report["ground_fidelity"] = PencilOracle.fidelity(
                traces[0].final_state.amps, oracle.lowest().vector
            )
        states = [t.b_normalized for t in traces if t.b_normalized is not None]
        if len(states) > 1:
            overlaps = np.array([[ImaginaryTimeEvolver.b_overlap(b, u, v) for v in states]
                                 for u in states])
            report["b_overlaps"] = overlaps.tolist()
            off = overlaps[~np.eye(len(states), dtype=bool)]
            report["max_b_overlap"] = float(off.max())
        return report


class HydrogenRunner:
    """氢原子极化率扫描"""

    def __init__(self, config: HydrogenRunConfig, writer: Optional[ArtifactWriter] = None):
        self.config = config
        self.writer = writer or ArtifactWriter(config.out_dir)

    def run(self) -> SweepResult:
        """
        Raises:
            GeeError: 所有网格点均失败
        """
        cfg = self.config
        template = STOConfig(x=cfg.x_grid[0], alpha=cfg.alphas[0], Z=cfg.Z,
                             field=cfg.field_strength, n_max=cfg.n_max)
        calculator = PolarizabilityCalculator(
            solver=cfg.solver,
            evolution=cfg.evolution,
            layers=cfg.layers,
            entanglement=cfg.entanglement,
            initial_theta=cfg.initial_theta,
        )
        result = calculator.sweep_x(cfg.x_grid, template, cfg.alphas, cfg.workers)
        self.writer.write_sweep(result)

        summary = result.to_dict()
        lambda_ref, p_ref = PolarizabilityCalculator.perturbative_reference(
            cfg.alphas[0], cfg.Z, cfg.field_strength
        )
        summary["perturbative"] = {
            "alpha": cfg.alphas[0],
            "lambda1": lambda_ref,
            "polarizability": p_ref,
            "energy": PolarizabilityCalculator.perturbative_energy(cfg.Z, cfg.field_strength),
        }
        summary["config"] = {
            "alphas": cfg.alphas, "Z": cfg.Z, "field": cfg.field_strength,
            "n_max": cfg.n_max, "solver": cfg.solver, "layers": cfg.layers,
        }
        self.writer.write_json("hydrogen_summary.json", summary)

        if result.best is None:
            raise GeeError("所有网格点均求解失败")
        return result

