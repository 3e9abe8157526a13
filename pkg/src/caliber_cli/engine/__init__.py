"""
Computational core: exact arithmetic, forms, continued fractions, ρ_D,
inequality checks, classification and the range scanner.
"""

from .arith import DomainError, FieldSpec, field_spec, kronecker_chi
from .classify import Family, RDRepresentation, rd_representations
from .contfrac import CFExpansion, QuadraticIrrational, expand, make_qi
from .forms import CycleDecomposition, InvariantViolation, QuadForm, caliber, cycle_decomposition
from .ideals import PrimitiveIdeal, ResidueSolutionSet, rho
from .scan import ScanFilters, ScanRecord, SuiteReport, UnknownSuiteError, scan_range, verify_suite
from .theorems import BoundReport, Verdict

__all__ = [
    "BoundReport",
    "CFExpansion",
    "CycleDecomposition",
    "DomainError",
    "Family",
    "FieldSpec",
    "InvariantViolation",
    "PrimitiveIdeal",
    "QuadForm",
    "QuadraticIrrational",
    "RDRepresentation",
    "ResidueSolutionSet",
    "ScanFilters",
    "ScanRecord",
    "SuiteReport",
    "UnknownSuiteError",
    "Verdict",
    "caliber",
    "cycle_decomposition",
    "expand",
    "field_spec",
    "kronecker_chi",
    "make_qi",
    "rd_representations",
    "rho",
    "scan_range",
    "verify_suite",
]
