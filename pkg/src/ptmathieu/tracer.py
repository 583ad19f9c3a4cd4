"""Numerical tracing of tongue boundaries and comparison with the closed forms.

A boundary is the set of ``(eps, a)`` where the discriminant equals +2 (the
tongue from ``a = 0``) or -2 (the tongue from ``a = 1/4``).  At fixed
``eps`` the edge is found by bisection in ``a`` on ``Re Delta - target``;
marching ``eps`` upward with extrapolated seeds traces the curve.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field

import numpy as np

from . import core
from .core import BranchId
from .errors import (
    InsufficientSamplesError,
    NoBracketError,
    NonFiniteError,
    ParameterError,
    TongueClosedError,
    VerificationError,
)
from .floquet import DEFAULT_STEPS, discriminant_value
from .hill import DEFAULT_TRUNCATION, band_edges
from ._parallel import pmap

__all__ = [
    "ROOT_TOL",
    "SAMPLE_TOL",
    "BoundaryCurve",
    "CurvatureReport",
    "ComparisonRow",
    "solve_edge",
    "edge_at",
    "trace_boundary",
    "estimate_curvature",
    "compare_report",
]

ROOT_TOL = 1e-12
SAMPLE_TOL = 1e-8
# largest |Re Delta - target| accepted at a touching (double) root
TANGENT_TOL = 1e-9
IMAG_TOL = 1e-8
MAX_EXPANSIONS = 3
CURVATURE_EPS_MAX = 0.05


@dataclass
class BoundaryCurve:
    branch: BranchId
    beta: float
    samples: list[tuple[float, float]] = field(default_factory=list)
    target_discriminant: float = 2.0
    residuals: list[float] = field(default_factory=list)
    merged: list[bool] = field(default_factory=list)
    closed_at: float | None = None

    @property
    def eps(self) -> np.ndarray:
        return np.array([s[0] for s in self.samples])

    @property
    def a(self) -> np.ndarray:
        return np.array([s[1] for s in self.samples])

    @property
    def closed(self) -> bool:
        return self.closed_at is not None

    @property
    def is_merged(self) -> bool:
        return any(self.merged)


@dataclass(frozen=True)
class CurvatureReport:
    branch: BranchId
    beta: float
    kappa_numeric: float
    kappa_paper: float
    relative_error: float
    slope_numeric: float
    slope_paper: float
    fit_degree: int = 3


@dataclass(frozen=True)
class ComparisonRow:
    branch: BranchId
    beta: float
    eps: float
    a_perturbative: float
    a_floquet: float
    a_hill: float
    abs_error_pert: float
    cross_engine_error: float
    flag: str = ""


# ---------------------------------------------------------------------------
# single edge


def _residual(a, eps, beta, target, steps):
    return discriminant_value(a, eps, beta, steps).real - target


def _bisect(f, lo, hi, flo, tol=ROOT_TOL):
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _tangent_root(f, lo, hi):
    """Locate an extremum of ``f`` in [lo, hi] that touches zero, or None."""
    delta = 1e-6

    def slope(x):
        return f(x + delta) - f(x - delta)

    slo, shi = slope(lo), slope(hi)
    if slo == 0.0 or shi == 0.0 or (slo < 0) == (shi < 0):
        return None
    x = _bisect(slope, lo, hi, slo)
    return x if abs(f(x)) <= TANGENT_TOL else None


def _solve_bracket(eps, beta, lo, hi, target, steps):
    """Root of Re Delta - target in [lo, hi].  Returns (a, touching)."""
    f = functools.partial(_residual, eps=eps, beta=beta, target=target, steps=steps)
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo, False
    if fhi == 0.0:
        return hi, False
    touching = (flo < 0) == (fhi < 0)
    if not touching:
        a = _bisect(f, lo, hi, flo)
    else:
        a = _tangent_root(f, lo, hi)
        if a is None:
            raise NoBracketError(
                f"Re Delta - {target:+g} keeps sign {'+' if flo > 0 else '-'} on [{lo:.10g}, {hi:.10g}] at eps={eps:g}"
            )
    _check_imag(a, eps, beta, steps)
    return a, touching


def _check_imag(a, eps, beta, steps):
    im = discriminant_value(a, eps, beta, steps).imag
    if abs(im) > IMAG_TOL:
        raise VerificationError(f"Im Delta = {im:.3g} at a={a:.12g}, eps={eps:g}, beta={beta:g}")


def solve_edge(
    eps: float,
    beta: float,
    seed_a: float,
    target: float,
    window: float,
    steps: int = DEFAULT_STEPS,
) -> float:
    """Edge ``a*`` with ``Re Delta(a*) = target`` in ``[seed - window, seed + window]``.

    Plain bisection when the residual changes sign across the window.  When
    it does not, a touching root (the residual has an extremum at zero, as at
    ``eps = 0`` or ``beta = 1`` on the quarter tongue) is accepted if one
    exists; otherwise :class:`NoBracketError` is raised.
    """
    if window <= 0:
        raise ParameterError(f"window must be positive, got {window}")
    if target not in (2.0, -2.0):
        raise ParameterError(f"target must be +2 or -2, got {target}")
    if eps == 0.0:
        return _free_edge(seed_a, target, window)
    a, _ = _solve_bracket(eps, beta, seed_a - window, seed_a + window, target, steps)
    return a


def _free_edge(seed, target, window):
    # eps = 0: Delta = 2 cos(2 pi sqrt(a)) hits +2 at n^2 and -2 at (n + 1/2)^2
    shift = 0.0 if target > 0 else 0.5
    k = max(0, round(math.sqrt(max(seed, 0.0)) - shift))
    candidates = [(n + shift) ** 2 for n in (k - 1, k, k + 1) if n >= 0]
    inside = [a for a in candidates if abs(a - seed) <= window]
    if not inside:
        raise NoBracketError(f"no free edge with Delta = {target:+g} within {window:g} of a={seed:.10g}")
    return min(inside, key=lambda a: abs(a - seed))


def _initial_window(eps):
    return max(0.02, 10.0 * eps * eps)


def edge_at(branch: BranchId, eps: float, beta: float, seed: float | None = None, steps: int = DEFAULT_STEPS):
    """Edge of ``branch`` at one ``eps``.  Returns ``(a, touching)``.

    The quarter branches keep their bracket on their own side of the tongue
    midline so a wide window cannot straddle both edges.  If the midline is
    not inside the tongue the two edges have merged and a touching root is
    sought instead.
    """
    target = branch.target_discriminant
    if seed is None:
        seed = core.boundary(branch, eps, beta)
    if eps == 0.0:
        return branch.anchor, False

    inner = None
    if branch is not BranchId.A0_ZERO:
        mid = 0.25 - 0.5 * (1.0 - beta * beta) * eps * eps
        if _residual(mid, eps, beta, target, steps) < -TANGENT_TOL:
            inner = mid

    window = _initial_window(eps)
    for attempt in range(MAX_EXPANSIONS + 1):
        lo, hi = seed - window, seed + window
        if inner is not None:
            if branch is BranchId.A0_QUARTER_MINUS:
                hi = min(hi, inner)
            else:
                lo = max(lo, inner)
        try:
            if lo < hi:
                return _solve_bracket(eps, beta, lo, hi, target, steps)
        except NoBracketError:
            pass
        window *= 3.0
    raise NoBracketError(f"no edge for {branch.value} near a={seed:.6g} at eps={eps:g}, beta={beta:g}")


# ---------------------------------------------------------------------------
# curves


def _verify(a, eps, beta, target, steps):
    res = abs(discriminant_value(a, eps, beta, steps) - target)
    if res > SAMPLE_TOL:
        raise VerificationError(
            f"|Delta - {target:+g}| = {res:.3g} > {SAMPLE_TOL:g} at a={a:.12g}, eps={eps:g} ({steps} steps)"
        )
    return res


def trace_boundary(
    branch: BranchId,
    beta: float,
    eps_max: float,
    n_samples: int,
    steps: int = DEFAULT_STEPS,
    strict: bool = False,
) -> BoundaryCurve:
    """March one tongue edge from ``eps = 0`` to ``eps_max``.

    ``n_samples`` uniformly spaced ``eps`` values include both endpoints.
    Each accepted sample is re-checked at twice the step count.  If an edge
    cannot be bracketed after the window expansions the partial curve is
    returned with ``closed_at`` set (or :class:`TongueClosedError` raised when
    ``strict``).
    """
    if not 0.0 <= beta <= 1.0:
        raise ParameterError(f"tracing needs 0 <= beta <= 1, got {beta}")
    if not 0.0 < eps_max <= 0.5:
        raise ParameterError(f"eps_max must lie in (0, 0.5], got {eps_max}")
    if int(n_samples) != n_samples or n_samples < 2:
        raise ParameterError(f"n_samples must be an integer >= 2, got {n_samples!r}")

    target = branch.target_discriminant
    curve = BoundaryCurve(branch=branch, beta=float(beta), target_discriminant=target)
    for eps in np.linspace(0.0, eps_max, int(n_samples)):
        eps = float(eps)
        if eps == 0.0:
            a, touching = branch.anchor, False
        else:
            if len(curve.samples) >= 2:
                (e0, a0), (e1, a1) = curve.samples[-2:]
                seed = a1 + (a1 - a0) * (eps - e1) / (e1 - e0)
            else:
                seed = core.boundary(branch, eps, beta)
            try:
                a, touching = edge_at(branch, eps, beta, seed, steps)
            except (NoBracketError, NonFiniteError):
                curve.closed_at = eps
                if strict:
                    raise TongueClosedError(curve, eps) from None
                break
        curve.residuals.append(_verify(a, eps, beta, target, 2 * steps))
        curve.samples.append((eps, float(a)))
        curve.merged.append(bool(touching))
    return curve


def estimate_curvature(curve: BoundaryCurve, degree: int = 3) -> CurvatureReport:
    """Fit ``a = anchor + s eps + (kappa/2) eps^2 [+ c eps^3]`` by least squares.

    Only samples with ``eps <= 0.05`` are used and at least five are required.
    The default cubic term absorbs the O(eps^3) part of the quarter branches,
    which would otherwise leak into the fitted curvature; ``degree=2`` gives
    the plain quadratic fit.
    """
    if degree not in (2, 3):
        raise ParameterError(f"degree must be 2 or 3, got {degree}")
    eps, a = curve.eps, curve.a
    keep = eps <= CURVATURE_EPS_MAX + 1e-12
    eps, a = eps[keep], a[keep]
    if eps.size < 5:
        raise InsufficientSamplesError(
            f"need >= 5 samples with eps <= {CURVATURE_EPS_MAX}, got {eps.size}"
        )
    cols = [eps, 0.5 * eps**2]
    if degree == 3:
        cols.append(eps**3)
    design = np.column_stack(cols)
    coef, *_ = np.linalg.lstsq(design, a - curve.branch.anchor, rcond=None)
    slope, kappa = float(coef[0]), float(coef[1])

    if curve.branch is BranchId.A0_ZERO:
        kappa_paper = core.curvature_kappa1(curve.beta)
    else:
        kappa_paper = core.curvature_kappa2(curve.beta)
    kappa_numeric = abs(kappa)
    return CurvatureReport(
        branch=curve.branch,
        beta=curve.beta,
        kappa_numeric=kappa_numeric,
        kappa_paper=kappa_paper,
        relative_error=abs(kappa_numeric - kappa_paper) / max(kappa_paper, 1e-3),
        slope_numeric=slope,
        slope_paper=core.slope_at_anchor(curve.branch, curve.beta),
        fit_degree=degree,
    )


# ---------------------------------------------------------------------------
# comparison table

_HILL_FAMILY = {
    BranchId.A0_ZERO: (0.0, 0),
    BranchId.A0_QUARTER_MINUS: (0.5, 0),
    BranchId.A0_QUARTER_PLUS: (0.5, 1),
}


def _compare_row(job):
    branch, beta, eps, steps, N = job
    a_pert = core.boundary(branch, eps, beta)
    nu, idx = _HILL_FAMILY[branch]
    a_hill = band_edges(nu, eps, beta, N, idx + 1)[idx]
    flag = ""
    try:
        a_floq, touching = edge_at(branch, eps, beta, a_pert, steps)
        if touching:
            flag = "merged"
    except NoBracketError:
        a_floq, flag = math.nan, "no_bracket"
    except NonFiniteError:
        a_floq, flag = math.nan, "nonfinite"
    return ComparisonRow(
        branch=branch,
        beta=beta,
        eps=eps,
        a_perturbative=a_pert,
        a_floquet=a_floq,
        a_hill=a_hill,
        abs_error_pert=abs(a_pert - a_floq),
        cross_engine_error=abs(a_hill - a_floq),
        flag=flag,
    )


def compare_report(
    betas,
    eps_grid,
    steps: int = 2 * DEFAULT_STEPS,
    N: int = DEFAULT_TRUNCATION,
    branches=tuple(BranchId),
    jobs: int | None = 1,
) -> list[ComparisonRow]:
    """Closed form vs Floquet vs Hill for every (branch, beta, eps).

    Rows are ordered by branch, then beta, then eps.  Failures are recorded
    in ``flag`` instead of aborting the table.
    """
    betas = [float(b) for b in betas]
    eps_grid = [float(e) for e in eps_grid]
    for b in betas:
        if not 0.0 <= b <= 1.0:
            raise ParameterError(f"beta must lie in [0, 1], got {b}")
    for e in eps_grid:
        if not 0.0 <= e <= 0.3:
            raise ParameterError(f"eps must lie in [0, 0.3], got {e}")
    jobs_list = [(br, b, e, steps, N) for br in branches for b in betas for e in eps_grid]
    return pmap(_compare_row, jobs_list, jobs)
