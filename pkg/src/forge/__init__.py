"""Resource-state construction for concatenated measurement-based Clifford tasks."""

from forge.pauli import PauliFactor, PauliString
from forge.stabilizer import StabilizerTableau
from forge.aux_ops import AuxOps

__all__ = ["PauliFactor", "PauliString", "StabilizerTableau", "AuxOps"]
__version__ = "0.1.0"
