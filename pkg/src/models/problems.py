"""内置算符对及其参考值"""

from dataclasses import dataclass, field
from typing import Dict, Tuple

from src.models.pauli import PauliSum


@dataclass(frozen=True)
class Problem:
    """一个命名的 (A, B) 问题"""
    name: str
    A: PauliSum
    B: PauliSum
    description: str = ""
    # 虚时演化的参考结果，用于报告对照
    reference_lambdas: Tuple[float, ...] = field(default_factory=tuple)

    @property
    def num_qubits(self) -> int:
        return self.A.num_qubits


_EXAMPLE1_A = {"II": 1.0, "ZI": 0.4, "IZ": 0.4, "XX": 0.2}

PROBLEMS: Dict[str, Problem] = {
    "example1": Problem(
        name="example1",
        A=PauliSum.from_dict(_EXAMPLE1_A),
        B=PauliSum.from_dict({"II": 1.0, "ZI": 0.3, "IZ": 0.4, "ZZ": 0.2}),
        description="两比特，正定 B",
        reference_lambdas=(0.33326, 0.97205, 1.02106, 1.56964),
    ),
    "example2": Problem(
        name="example2",
        A=PauliSum.from_dict(_EXAMPLE1_A),
        B=PauliSum.from_dict({"II": 1.0, "IX": 1.0, "XI": 1.0, "XX": 1.0}),
        description="两比特，秩一 B（全一矩阵）",
        reference_lambdas=(0.150005,),
    ),
    "example3": Problem(
        name="example3",
        A=PauliSum.from_dict({"III": 1.0, "ZIX": 0.4, "IZX": 0.4, "XXI": 0.2}),
        B=PauliSum.from_dict({"III": 1.0, "ZIZ": 0.3, "IZX": 0.4, "ZZX": 0.2}),
        description="三比特 8x8",
        reference_lambdas=(0.2126, 0.3988),
    ),
}


def get_problem(name: str) -> Problem:
    try:
        return PROBLEMS[name]
    except KeyError:
        raise KeyError(f"未知问题: {name}，可选 {sorted(PROBLEMS)}")
