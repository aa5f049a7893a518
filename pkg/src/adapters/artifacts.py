"""产物读写 - 轨迹 CSV、JSON 摘要、文本报告与算符输入文件"""

import csv
import json
import logging
from pathlib import Path
from typing import Dict, List, Sequence

import numpy as np

from src.core.exceptions import ConfigError
from src.core.pauli_algebra import PauliAlgebra
from src.models.evolution import EvolutionTrace
from src.models.hydrogen import SweepResult
from src.models.pauli import PauliSum

logger = logging.getLogger(__name__)


def _to_jsonable(value):
    if isinstance(value, dict):
        return {str(k): _to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return _to_jsonable(value.tolist())
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, complex):
        return [value.real, value.imag]
    return value


def dumps(data) -> str:
    return json.dumps(_to_jsonable(data), indent=2, ensure_ascii=False)


class ArtifactWriter:
    """将一次运行的产物写入输出目录"""

    def __init__(self, out_dir: str):
        self.out_dir = Path(out_dir)
        self.written: List[Path] = []

    def _path(self, name: str) -> Path:
        self.out_dir.mkdir(parents=True, exist_ok=True)
        return self.out_dir / name

    def _record(self, path: Path) -> Path:
        self.written.append(path)
        logger.info(f"已写出 {path}")
        return path

    def write_trace(self, trace: EvolutionTrace) -> Path:
        """level_<k>_trace.csv，表头 tau,F,residual,theta_0..theta_{N-1}"""
        path = self._path(f"level_{trace.level}_trace.csv")
        with open(path, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(trace.csv_header())
            writer.writerows(trace.to_csv_rows())
        return self._record(path)

    def write_json(self, name: str, data: Dict) -> Path:
        path = self._path(name)
        path.write_text(dumps(data) + "\n", encoding="utf-8")
        return self._record(path)

    def write_level_summary(self, trace: EvolutionTrace, extra: Dict = None) -> Path:
        summary = trace.summary()
        if extra:
            summary.update(extra)
        return self.write_json(f"level_{trace.level}_summary.json", summary)

    def write_text(self, name: str, text: str) -> Path:
        path = self._path(name)
        path.write_text(text, encoding="utf-8")
        return self._record(path)

    def write_sweep(self, result: SweepResult) -> Path:
        """hydrogen_sweep.csv (x,g1,g2,P)，失败的网格点留空"""
        path = self._path("hydrogen_sweep.csv")
        with open(path, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(["x", "g1", "g2", "P"])
            for fit in result.fits:
                if fit.ok:
                    writer.writerow([f"{fit.x:.10g}", repr(fit.g1), repr(fit.g2),
                                     repr(fit.polarizability)])
                else:
                    writer.writerow([f"{fit.x:.10g}", "", "", ""])
        return self._record(path)

    # ------------------------------------------------------------------
    # 报告
    # ------------------------------------------------------------------
    @staticmethod
    def format_report(rows: Sequence[Dict], fidelity: float = None,
                      title: str = "") -> str:
        """能级对照表：方法 λ、精确 λ、|Δ|、吻合度"""
        lines = []
        if title:
            lines.append(title)
        lines.append("=" * 72)
        lines.append(f"{'level':>5}  {'method λ':>14}  {'exact λ':>14}  {'|Δ|':>10}  {'agreement %':>12}")
        lines.append("-" * 72)
        for row in rows:
            exact = row.get("exact_lambda")
            if exact is None:
                lines.append(f"{row['level']:>5}  {row['method_lambda']:>14.6f}  {'-':>14}  {'-':>10}  {'-':>12}")
                continue
            lines.append(
                f"{row['level']:>5}  {row['method_lambda']:>14.6f}  {exact:>14.6f}  "
                f"{row['abs_error']:>10.2e}  {row['agreement_percent']:>12.4f}"
            )
        lines.append("=" * 72)
        if fidelity is not None:
            lines.append(f"基态保真度 |⟨φ₀|ψ₀⟩|² = {fidelity:.6f}")
        return "\n".join(lines) + "\n"


class OperatorReader:
    """读取 Pauli 文本文件与稠密矩阵文件"""

    @staticmethod
    def read_pauli_file(path: str) -> PauliSum:
        """
        读取 `<coeff> <word>` 格式文件

        Raises:
            ConfigError: 文件不存在或格式错误（带行号）
        """
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as e:
            raise ConfigError(f"无法读取 Pauli 文件 {path}: {e}")
        return PauliAlgebra.parse_pauli_text(text)

    @staticmethod
    def read_matrix_file(path: str) -> np.ndarray:
        """
        读取稠密矩阵：.npy 或空白分隔文本（支持 1+2j 形式的复数）

        Raises:
            ConfigError: 文件不存在或无法解析
        """
        path = Path(path)
        try:
            if path.suffix == ".npy":
                matrix = np.load(path)
            else:
                matrix = np.loadtxt(path, dtype=complex, ndmin=2)
        except (OSError, ValueError) as e:
            raise ConfigError(f"无法读取矩阵文件 {path}: {e}")
        return np.asarray(matrix, dtype=complex)
