"""qcasim: simulation and verification workbench for cellular automata,
quantum cellular automata, and quantum Turing machines.

Subpackages and modules:
  superposition  sparse complex state vectors over opaque labels
  gates          qubit registers, named gates, tensor products, unitarity
  ca             classical cellular automata (elementary rules, Life, rings)
  qca            one-dimensional quantum cellular automata and their checks
  pqca           partitioned QCA (sub-cell routing + per-cell unitary)
  bqca           block-partitioned QCA on qubit chains
  qtm            quantum Turing machines
  compiler       unidirectional-QTM to partitioned-QCA compiler
  cli            batch command-line frontend
"""

from .superposition import NormalizationError, Superposition, Tolerance

__version__ = "0.1.0"

__all__ = ["Superposition", "Tolerance", "NormalizationError", "__version__"]
