"""Exact spectral cycles, local indexes and Hilbert-Samuel data for commuting tuples."""

from .arveson import GradedModule, degree_report, hilbert_function, phi_kernel_dim
from .cycles import (
    Cycle,
    PrimeCandidate,
    Sampling,
    cycle_of_module,
    functoriality_check,
    l_via_multiplicity,
    local_cycle,
    pushforward_cycle,
    spectral_picture,
    weyl_test,
)
from .errors import SpicError
from .exact import QMatrix
from .fpmodule import FPModule, hs_function, hs_polynomial, koszul_homology, multiplicity_serre
from .groebner import Ideal, buchberger
from .models import ExplicitHomology, MatrixTuple, ModuleTuple, default_ring
from .polyring import Poly, Ring
from .problem import parse_problem, write_problem

__version__ = "0.1.0"

__all__ = [
    "Cycle", "ExplicitHomology", "FPModule", "GradedModule", "Ideal", "MatrixTuple", "ModuleTuple",
    "Poly", "PrimeCandidate", "QMatrix", "Ring", "Sampling", "SpicError", "buchberger",
    "cycle_of_module", "default_ring", "degree_report", "functoriality_check", "hilbert_function",
    "hs_function", "hs_polynomial", "koszul_homology", "l_via_multiplicity", "local_cycle",
    "multiplicity_serre", "parse_problem", "phi_kernel_dim", "pushforward_cycle", "spectral_picture",
    "weyl_test", "write_problem",
]
