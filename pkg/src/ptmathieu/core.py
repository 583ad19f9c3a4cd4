"""Parameter model and closed-form stability boundaries.

The equation studied throughout the package is

    psi'' + [a + 2 eps V(x)] psi = 0,    V(x) = cos x + i beta sin x,

with ``beta`` the non-Hermitian weight.  The boundaries below are the
second-order small-``eps`` results around the two anchors ``a = 0`` and
``a = 1/4``.  They are only meaningful for ``0 <= beta <= 1``; the functions
refuse larger ``beta`` instead of returning complex numbers.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError

__all__ = [
    "MathieuParams",
    "BranchId",
    "Stability",
    "potential_value",
    "coupling_coefficients",
    "boundary_a0",
    "boundary_quarter",
    "boundary",
    "curvature_kappa1",
    "curvature_kappa2",
    "slope_at_anchor",
    "near_boundary_tol",
    "predict_stability_perturbative",
]

# Midpoint between the two anchors; decides which rule classifies a point.
ANCHOR_SPLIT = 0.125


@dataclass(frozen=True)
class MathieuParams:
    a: float
    eps: float
    beta: float

    def __post_init__(self):
        for name in ("a", "eps", "beta"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ParameterError(f"{name} must be finite, got {value!r}")
        if self.eps < 0:
            raise ParameterError(f"eps must be >= 0, got {self.eps}")
        if self.beta < 0:
            raise ParameterError(f"beta must be >= 0, got {self.beta}")


class BranchId(enum.Enum):
    A0_ZERO = "zero"
    A0_QUARTER_PLUS = "quarter+"
    A0_QUARTER_MINUS = "quarter-"

    @property
    def anchor(self) -> float:
        return 0.0 if self is BranchId.A0_ZERO else 0.25

    @property
    def sign(self) -> int:
        """+1/-1 for the quarter branches, 0 for the single zero branch."""
        return {BranchId.A0_ZERO: 0, BranchId.A0_QUARTER_PLUS: 1, BranchId.A0_QUARTER_MINUS: -1}[self]

    @property
    def target_discriminant(self) -> float:
        # periodic edges (trace +2) at a0 = 0, antiperiodic (trace -2) at a0 = 1/4
        return 2.0 if self is BranchId.A0_ZERO else -2.0

    @classmethod
    def parse(cls, text: str) -> "BranchId":
        key = text.strip().lower()
        aliases = {
            "zero": cls.A0_ZERO,
            "a0_zero": cls.A0_ZERO,
            "0": cls.A0_ZERO,
            "quarter+": cls.A0_QUARTER_PLUS,
            "quarter_plus": cls.A0_QUARTER_PLUS,
            "a0_quarter_plus": cls.A0_QUARTER_PLUS,
            "quarter-": cls.A0_QUARTER_MINUS,
            "quarter_minus": cls.A0_QUARTER_MINUS,
            "a0_quarter_minus": cls.A0_QUARTER_MINUS,
        }
        try:
            return aliases[key]
        except KeyError:
            raise ParameterError(f"unknown branch {text!r}") from None


class Stability(enum.Enum):
    STABLE = "stable"
    UNSTABLE = "unstable"
    NEAR_BOUNDARY = "near_boundary"


def _check_beta(beta: float) -> None:
    if not 0.0 <= beta <= 1.0:
        raise ParameterError(
            f"perturbative boundaries need 0 <= beta <= 1 (broken phase beyond), got {beta}"
        )


def potential_value(x, beta):
    """cos(x) + i*beta*sin(x); works elementwise on numpy arrays too."""
    return np.cos(x) + 1j * beta * np.sin(x)


def coupling_coefficients(eps: float, beta: float) -> tuple[float, float]:
    """Fourier weights of ``2 eps V(x) = g_plus e^{ix} + g_minus e^{-ix}``."""
    if eps < 0:
        raise ParameterError(f"eps must be >= 0, got {eps}")
    return eps * (1.0 + beta), eps * (1.0 - beta)


def boundary_a0(eps: float, beta: float) -> float:
    _check_beta(beta)
    return -2.0 * (1.0 - beta * beta) * eps * eps


def boundary_quarter(eps: float, beta: float, sign: int) -> float:
    """Edge of the first tongue, ``sign=+1`` upper edge, ``sign=-1`` lower."""
    _check_beta(beta)
    if sign not in (1, -1):
        raise ParameterError(f"sign must be +1 or -1, got {sign!r}")
    w = 1.0 - beta * beta
    return 0.25 + sign * math.sqrt(w) * eps - 0.5 * w * eps * eps


def boundary(branch: BranchId, eps: float, beta: float) -> float:
    if branch is BranchId.A0_ZERO:
        return boundary_a0(eps, beta)
    return boundary_quarter(eps, beta, branch.sign)


def curvature_kappa1(beta: float) -> float:
    _check_beta(beta)
    return 4.0 * (1.0 - beta * beta)


def curvature_kappa2(beta: float) -> float:
    _check_beta(beta)
    return 1.0 - beta * beta


def slope_at_anchor(branch: BranchId, beta: float) -> float:
    """da/deps at eps = 0 predicted by the closed forms."""
    _check_beta(beta)
    return branch.sign * math.sqrt(1.0 - beta * beta)


def near_boundary_tol(eps: float) -> float:
    return max(1e-9, 10.0 * eps**3)


def predict_stability_perturbative(p: MathieuParams, tol: float | None = None) -> Stability:
    """Classify a point with the closed-form boundaries.

    Points with ``a < 0.125`` use the rule around ``a0 = 0``, the rest the
    rule around ``a0 = 1/4``.  That split is a heuristic; the formulas carry
    O(eps^3) error so the answer is only trustworthy for small ``eps``.
    """
    _check_beta(p.beta)
    if tol is None:
        tol = near_boundary_tol(p.eps)
    if p.a < ANCHOR_SPLIT:
        edge = boundary_a0(p.eps, p.beta)
        if abs(p.a - edge) <= tol:
            return Stability.NEAR_BOUNDARY
        return Stability.STABLE if p.a > edge else Stability.UNSTABLE

    lower = boundary_quarter(p.eps, p.beta, -1)
    upper = boundary_quarter(p.eps, p.beta, 1)
    if abs(p.a - lower) <= tol or abs(p.a - upper) <= tol:
        return Stability.NEAR_BOUNDARY
    if lower < p.a < upper:
        return Stability.UNSTABLE
    return Stability.STABLE
