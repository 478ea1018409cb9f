"""Certified bounds on the joint spectral radius and subradius of matrix sets
that share an invariant cone."""

__version__ = "0.1.0"

from .bounds import BoundReport, Interval, TraceSequence, enumerate_bounds, trace_sequence  # noqa: E402
from .cones import (EmbeddedPair, Membership, PolyhedralCone, cone_membership,  # noqa: E402
                    construct_embedded_pair, estimate_beta, is_embedded_pair,
                    is_invariant, is_positive_map, is_primitive)
from .errors import (DomainError, JscError, NumericalError, ParseError,  # noqa: E402
                     ResourceError, SizeError, ValidationError)
from .kronlift import KronReport, kron_lift_bounds, trace_kron_inequality  # noqa: E402
from .linalg import (MatrixSet, kron, kron_power, mat_product, operator_norm,  # noqa: E402
                     spectral_radius, trace)
from .lp import LPProblem, lp_feasible  # noqa: E402
from .perturb import hausdorff_distance, perturbation_study  # noqa: E402
from .subradius import conic_subradius_lower, subradius_bounds  # noqa: E402

__all__ = [
    "BoundReport", "DomainError", "EmbeddedPair", "Interval", "JscError", "KronReport",
    "LPProblem", "MatrixSet", "Membership", "NumericalError", "ParseError",
    "PolyhedralCone", "ResourceError", "SizeError", "TraceSequence", "ValidationError",
    "cone_membership", "conic_subradius_lower", "construct_embedded_pair",
    "enumerate_bounds", "estimate_beta", "hausdorff_distance", "is_embedded_pair",
    "is_invariant", "is_positive_map", "is_primitive", "kron", "kron_lift_bounds",
    "kron_power", "lp_feasible", "mat_product", "operator_norm", "perturbation_study",
    "spectral_radius", "subradius_bounds", "trace", "trace_kron_inequality",
    "trace_sequence",
]
