"""Which bipartite correlation classes can be verified without full tomography.

Detectors for PPT / CQ / QC / CC membership, constructive perturbations that
push states across each class boundary, and POVM subspace geometry including
the minimal measurement that decides the CQ property.
"""

from . import detect, linalg, povm, states, witness
from .detect import ClassReport, cc_check, classify, cq_check, ppt_check, qc_check
from .povm import Povm, analyze, build_minimal_cq_povm
from .states import DensityMatrix, Direction

__version__ = "0.1.0"

__all__ = [
    "detect",
    "linalg",
    "povm",
    "states",
    "witness",
    "ClassReport",
    "DensityMatrix",
    "Direction",
    "Povm",
    "analyze",
    "build_minimal_cq_povm",
    "cc_check",
    "classify",
    "cq_check",
    "ppt_check",
    "qc_check",
]
