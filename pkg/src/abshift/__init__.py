"""Exact computations for (alpha, beta)-shifts: expansions, specification
certificates, Cantor-set thickness and parameter witnesses."""

from .cantor import IfsSpec, ThicknessReport, intersect_refine, lambda_approx, thickness
from .dynamics import Params, itinerary, left_limit_critical, step, zero_critical
from .numeric import Interval, IntervalUnion, eventually_periodic_value, union_intersect
from .paramlab import WitnessReport, find_witness, verify_witness
from .shiftspace import KReport, k_sets, lex_cmp, spec_check
from .symbols import SymbolSeq

__version__ = "0.1.0"

__all__ = [
    "IfsSpec",
    "Interval",
    "IntervalUnion",
    "KReport",
    "Params",
    "SymbolSeq",
    "ThicknessReport",
    "WitnessReport",
    "eventually_periodic_value",
    "find_witness",
    "intersect_refine",
    "itinerary",
    "k_sets",
    "lambda_approx",
    "left_limit_critical",
    "lex_cmp",
    "spec_check",
    "step",
    "thickness",
    "union_intersect",
    "verify_witness",
    "zero_critical",
]
