"""数据模型层"""

from .ansatz import Ansatz, DerivativeCircuit, Generator
from .evolution import DeflatedOperator, DeflationTerm, EvolutionConfig, EvolutionTrace, TraceRow
from .hydrogen import PolarizabilityFit, STOConfig, STOPencil, SweepResult
from .pauli import PauliSum, PauliTerm
from .pencil import Eigenpair, EigenpairSet, Pencil
from .state import Gate, StateVector

__all__ = [
    "Ansatz",
    "DeflatedOperator",
    "DeflationTerm",
    "DerivativeCircuit",
    "Eigenpair",
    "EigenpairSet",
    "EvolutionConfig",
    "EvolutionTrace",
    "Gate",
    "Generator",
    "PauliSum",
    "PauliTerm",
    "Pencil",
    "PolarizabilityFit",
    "STOConfig",
    "STOPencil",
    "StateVector",
    "SweepResult",
    "TraceRow",
]
