"""Stability and Liouville dimension thresholds for Δ²u = u^p."""

from .exponents import DomainError, ProblemParams
from .polynomials import Poly, largest_real_root, real_roots
from .thresholds import (
    SingularVerdict,
    ThresholdReport,
    classify_singular_solution,
    cowan_threshold,
    dimension_threshold,
    jl4_threshold,
    p_jl4,
    s0,
    threshold_report,
    x0,
)

__version__ = "0.1.0"
