"""核心算法层"""

from .ansatz import AnsatzBuilder
from .circuit_sim import CircuitSimulator
from .evolver import ImaginaryTimeEvolver
from .hydrogen import PolarizabilityCalculator, StoMatrixBuilder
from .oracle import PencilOracle
from .pauli_algebra import PauliAlgebra
from .topology import EntanglerTopology

__all__ = [
    "AnsatzBuilder",
    "CircuitSimulator",
    "EntanglerTopology",
    "ImaginaryTimeEvolver",
    "PauliAlgebra",
    "PencilOracle",
    "PolarizabilityCalculator",
    "StoMatrixBuilder",
]
