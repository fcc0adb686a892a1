"""Local invariants of genus-2 curves.

Exact invariants of polarized metric graphs (reduction graphs of
semistable fibers) through electrical-network potential theory, and
numerical invariants of genus-2 period matrices through theta functions.
"""

from .errors import (
    AdmissibilityFailureError,
    DegenerateThetaNullError,
    DisconnectedError,
    FormulaMismatchError,
    G2Error,
    GenusZeroError,
    InterpolationMismatchError,
    InvalidParamsError,
    NonProbabilityMeasureError,
    NonZeroMassError,
    NotPositiveDefiniteError,
    QuadratureUnstableError,
    TruncationOverflowError,
    UnclassifiableError,
)
from .fiber_catalog import FiberType, classify, closed_form, graph_of_type
from .metric_graph import (
    GraphDivisor,
    GraphMeasure,
    PMGraph,
    diagonal_green,
    effective_resistance,
    green_function,
    resistance_pairing,
    subdivide,
    vertex_point,
)
from .pm_invariants import (
    NonArchReport,
    admissible_measure,
    canonical_divisor,
    epsilon_invariant,
    lambda_invariant,
    node_counts,
    nonarch_report,
    phi_invariant,
    total_genus,
)
from .theta_surface import (
    ArchReport,
    QuadratureConfig,
    QuadratureResult,
    SiegelMatrix,
    ThetaChar,
    arch_invariants,
    even_characteristics,
    log_delta2,
    log_h,
    odd_characteristics,
    theta,
    theta_norm,
)

__version__ = "0.1.0"

__all__ = [
    "ArchReport",
    "AdmissibilityFailureError",
    "DegenerateThetaNullError",
    "DisconnectedError",
    "FiberType",
    "FormulaMismatchError",
    "G2Error",
    "GenusZeroError",
    "GraphDivisor",
    "GraphMeasure",
    "InterpolationMismatchError",
    "InvalidParamsError",
    "NonArchReport",
    "NonProbabilityMeasureError",
    "NonZeroMassError",
    "NotPositiveDefiniteError",
    "PMGraph",
    "QuadratureConfig",
    "QuadratureResult",
    "QuadratureUnstableError",
    "SiegelMatrix",
    "ThetaChar",
    "TruncationOverflowError",
    "UnclassifiableError",
    "admissible_measure",
    "arch_invariants",
    "canonical_divisor",
    "classify",
    "closed_form",
    "diagonal_green",
    "effective_resistance",
    "epsilon_invariant",
    "even_characteristics",
    "graph_of_type",
    "green_function",
    "lambda_invariant",
    "log_delta2",
    "log_h",
    "node_counts",
    "nonarch_report",
    "odd_characteristics",
    "phi_invariant",
    "resistance_pairing",
    "subdivide",
    "theta",
    "theta_norm",
    "total_genus",
    "vertex_point",
]
