"""Stability boundaries of the PT-symmetric Mathieu equation.

``psi'' + [a + 2 eps (cos x + i beta sin x)] psi = 0``

Closed-form small-``eps`` boundaries live in :mod:`ptmathieu.core`; they are
checked against a Floquet monodromy engine (:mod:`ptmathieu.floquet`) and a
truncated Hill-matrix eigensolver (:mod:`ptmathieu.hill`).  Curves are traced
and compared in :mod:`ptmathieu.tracer`.
"""

__version__ = "0.1.0"

from .core import (  # noqa: E402
    BranchId,
    MathieuParams,
    Stability,
    boundary,
    boundary_a0,
    boundary_quarter,
    coupling_coefficients,
    curvature_kappa1,
    curvature_kappa2,
    potential_value,
    predict_stability_perturbative,
)
from .floquet import FloquetClass, FloquetResult, classify, discriminant, monodromy, multipliers  # noqa: E402
from .hill import band_edges, build_hill_matrix, hermitian_equivalence_check, symmetrize  # noqa: E402
from .tracer import compare_report, estimate_curvature, solve_edge, trace_boundary  # noqa: E402
from ._accel import backend  # noqa: E402
