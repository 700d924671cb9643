"""Embedding decision engine for 2x2, 3x3 and 4x4 Markov matrices."""

from .cases import (
    branch_count_bound,
    branch_range,
    embed_d2,
    embed_d3,
    embed_d3_complex,
    embed_d3_cyclic_real,
    embed_d3_deg2,
    embed_d4,
    rotation_branches,
    uniqueness_certificates,
)
from .coefficients import smt_coeffs
from .engine import decide
from .equal_input import (
    delta_min,
    embed_d3_eq_input_neg,
    eq_input_extremal_generators,
    equal_input_parameters,
    extremal_parameter,
)
from .hyperbola import HyperbolaOptions, HyperbolaOutcome, hyperbola_search
from .results import (
    Construction,
    EmbeddingResult,
    GeneratorCandidate,
    HyperbolaPoint,
    Reason,
    SearchStatus,
    Uniqueness,
    Verdict,
)

__all__ = [
    "Construction",
    "EmbeddingResult",
    "GeneratorCandidate",
    "HyperbolaOptions",
    "HyperbolaOutcome",
    "HyperbolaPoint",
    "Reason",
    "SearchStatus",
    "Uniqueness",
    "Verdict",
    "branch_count_bound",
    "branch_range",
    "decide",
    "delta_min",
    "embed_d2",
    "embed_d3",
    "embed_d3_complex",
    "embed_d3_cyclic_real",
    "embed_d3_deg2",
    "embed_d3_eq_input_neg",
    "embed_d4",
    "eq_input_extremal_generators",
    "equal_input_parameters",
    "extremal_parameter",
    "hyperbola_search",
    "rotation_branches",
    "smt_coeffs",
    "uniqueness_certificates",
]
