"""Band edges from the truncated Hill (Fourier) matrix.

Substituting ``psi = sum_n c_n exp(i (nu + n) x)`` into the equation gives the
three-term recurrence

    (nu + n)^2 c_n - eps (1 + beta) c_{n-1} - eps (1 - beta) c_{n+1} = a c_n,

so band edges are eigenvalues of a tridiagonal matrix with constant,
unequal off-diagonals.  ``nu = 0`` gives periodic edges (discriminant +2),
``nu = 1/2`` antiperiodic ones (discriminant -2).

For ``beta < 1`` a diagonal similarity ``c_n -> r^n c_n`` makes the matrix
symmetric with off-diagonal ``-eps sqrt(1 - beta^2)``, which is why the
spectrum depends on ``beta`` only through ``eps sqrt(1 - beta^2)``.  At
``beta = 1`` the matrix is triangular and its eigenvalues are the diagonal.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import _accel
from .core import coupling_coefficients
from .errors import NotSymmetrizableError, ParameterError, TruncationWarning

__all__ = [
    "DEFAULT_TRUNCATION",
    "EIG_TOL",
    "HillMatrix",
    "SymTridiagonal",
    "build_hill_matrix",
    "symmetrize",
    "sturm_count",
    "tridiagonal_eigenvalues",
    "band_edges",
    "hermitian_equivalence_check",
]

DEFAULT_TRUNCATION = 32
EIG_TOL = 1e-12


@dataclass(frozen=True)
class HillMatrix:
    nu: float
    half_width: int
    diag: np.ndarray
    sub: float
    sup: float

    @property
    def dimension(self) -> int:
        return 2 * self.half_width + 1

    def dense(self) -> np.ndarray:
        n = self.dimension
        return (
            np.diag(self.diag)
            + np.diag(np.full(n - 1, self.sub), -1)
            + np.diag(np.full(n - 1, self.sup), 1)
        )


@dataclass(frozen=True)
class SymTridiagonal:
    diag: np.ndarray
    off: np.ndarray

    def dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.off, -1) + np.diag(self.off, 1)


def _check_nu(nu):
    if nu not in (0, 0.5):
        raise ParameterError(f"nu must be 0 or 1/2, got {nu!r}")
    return float(nu)


def build_hill_matrix(nu: float, eps: float, beta: float, N: int) -> HillMatrix:
    nu = _check_nu(nu)
    if int(N) != N or N < 1:
        raise ParameterError(f"truncation N must be a positive integer, got {N!r}")
    N = int(N)
    g_plus, g_minus = coupling_coefficients(eps, beta)
    n = np.arange(-N, N + 1)
    return HillMatrix(nu=nu, half_width=N, diag=(nu + n) ** 2.0, sub=-g_plus, sup=-g_minus)


def symmetrize(H: HillMatrix) -> SymTridiagonal:
    """Symmetric tridiagonal matrix similar to ``H``.

    Raises :class:`NotSymmetrizableError` unless ``sub * sup > 0``; the
    uncoupled case ``sub == sup == 0`` is returned as is.
    """
    if H.sub == 0.0 and H.sup == 0.0:
        off = 0.0
    elif H.sub * H.sup > 0.0 or (H.sub != 0.0 and H.sup != 0.0 and (H.sub > 0) == (H.sup > 0)):
        # factored square root so tiny couplings do not underflow to zero
        off = math.copysign(math.sqrt(abs(H.sub)) * math.sqrt(abs(H.sup)), H.sub)
    else:
        raise NotSymmetrizableError(
            f"off-diagonal product {H.sub * H.sup:.3g} is not positive (beta >= 1); no real similarity exists"
        )
    return SymTridiagonal(diag=H.diag.copy(), off=np.full(H.dimension - 1, off))


# ---------------------------------------------------------------------------
# Sturm-sequence bisection


@_accel.njit
def _sturm_count_nb(d, e, x):
    """Number of eigenvalues strictly below ``x``."""
    count = 0
    q = d[0] - x
    if q < 0.0:
        count += 1
    for i in range(1, d.shape[0]):
        if q == 0.0:
            q = 1e-300
        q = d[i] - x - e[i - 1] * e[i - 1] / q
        if q < 0.0:
            count += 1
    return count


@_accel.njit
def _bisect_lowest_nb(d, e, count, tol):
    n = d.shape[0]
    lo0 = np.inf
    hi0 = -np.inf
    for i in range(n):
        r = 0.0
        if i > 0:
            r += abs(e[i - 1])
        if i < n - 1:
            r += abs(e[i])
        lo0 = min(lo0, d[i] - r)
        hi0 = max(hi0, d[i] + r)
    out = np.empty(count)
    for k in range(count):
        lo = lo0
        hi = hi0
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            if _sturm_count_nb(d, e, mid) >= k + 1:
                hi = mid
            else:
                lo = mid
        out[k] = 0.5 * (lo + hi)
    return out


def _sturm_count_np(d, e, x):
    x = np.asarray(x, dtype=float)
    q = d[0] - x
    count = (q < 0).astype(np.int64)
    for i in range(1, d.shape[0]):
        q = np.where(q == 0.0, 1e-300, q)
        q = d[i] - x - e[i - 1] ** 2 / q
        count += q < 0
    return count


def _bisect_lowest_np(d, e, count, tol):
    r = np.zeros_like(d)
    r[1:] += np.abs(e)
    r[:-1] += np.abs(e)
    lo = np.full(count, np.min(d - r))
    hi = np.full(count, np.max(d + r))
    ks = np.arange(1, count + 1)
    # all eigenvalues are bisected together
    while True:
        active = hi - lo > tol
        mid = 0.5 * (lo + hi)
        active &= (mid > lo) & (mid < hi)
        if not active.any():
            break
        upper = _sturm_count_np(d, e, mid) >= ks
        hi = np.where(active & upper, mid, hi)
        lo = np.where(active & ~upper, mid, lo)
    return 0.5 * (lo + hi)


def sturm_count(T: SymTridiagonal, x: float) -> int:
    return int(_sturm_count_nb(T.diag, T.off, float(x)) if _accel.USE_NUMBA else _sturm_count_np(T.diag, T.off, x))


def tridiagonal_eigenvalues(T: SymTridiagonal, count: int | None = None, tol: float = EIG_TOL) -> np.ndarray:
    """Lowest ``count`` eigenvalues of a symmetric tridiagonal matrix, ascending."""
    n = T.diag.shape[0]
    count = n if count is None else int(count)
    if not 1 <= count <= n:
        raise ParameterError(f"count must lie in [1, {n}], got {count}")
    if not np.any(T.off):
        return np.sort(T.diag)[:count]
    d = np.ascontiguousarray(T.diag, dtype=float)
    e = np.ascontiguousarray(T.off, dtype=float)
    if _accel.USE_NUMBA:
        return _bisect_lowest_nb(d, e, count, tol)
    return _bisect_lowest_np(d, e, count, tol)


def band_edges(nu: float, eps: float, beta: float, N: int = DEFAULT_TRUNCATION, count: int = 3) -> list[float]:
    """Lowest ``count`` band edges of the ``nu`` family, ascending.

    Emits :class:`TruncationWarning` when the largest requested edge exceeds
    ``(N/2)^2``, where truncation error stops being negligible.
    """
    if beta < 0 or beta > 1:
        raise ParameterError(f"band edges need 0 <= beta <= 1, got {beta}")
    H = build_hill_matrix(nu, eps, beta, N)
    if not 1 <= count <= H.dimension:
        raise ParameterError(f"count must lie in [1, {H.dimension}], got {count}")
    if beta == 1.0 or eps == 0.0:
        # triangular (or diagonal): spectrum is the diagonal itself
        values = np.sort(H.diag)[:count]
    else:
        values = tridiagonal_eigenvalues(symmetrize(H), count)
    if values[-1] > (H.half_width / 2.0) ** 2:
        warnings.warn(
            f"edge {values[-1]:.6g} exceeds (N/2)^2 = {(H.half_width / 2.0) ** 2:.6g}; increase N",
            TruncationWarning,
            stacklevel=2,
        )
    return [float(v) for v in values]


def hermitian_equivalence_check(eps: float, beta: float, N: int = DEFAULT_TRUNCATION, count: int = 5) -> float:
    """Largest gap between the PT edges and Hermitian edges at ``eps sqrt(1 - beta^2)``."""
    if not 0 <= beta < 1:
        raise ParameterError(f"equivalence check needs 0 <= beta < 1, got {beta}")
    eps_eff = eps * math.sqrt(1.0 - beta * beta)
    dev = 0.0
    for nu in (0.0, 0.5):
        pt = np.array(band_edges(nu, eps, beta, N, count))
        herm = np.array(band_edges(nu, eps_eff, 0.0, N, count))
        dev = max(dev, float(np.max(np.abs(pt - herm))))
    return dev
