"""Floquet stability of the PT-symmetric Mathieu equation.

The first-order system ``(psi, psi')' = (psi', -q(x) psi)`` with
``q(x) = a + 2 eps (cos x + i beta sin x)`` is integrated over one period
``[0, 2 pi]`` with fixed-step classical RK4, once for each column of the
identity.  The trace of the resulting monodromy matrix (the discriminant)
decides stability: ``|Delta| < 2`` bounded, ``|Delta| > 2`` unbounded.

Two interchangeable kernels do the integration:

* a numba kernel that marches the 2x2 state step by step, checking for
  overflow after every step;
* a numpy kernel that builds the one-step RK4 propagator for every step at
  once (the system is linear, so a step is a fixed 2x2 matrix) and multiplies
  the propagators together with a pairwise tree product.

Both evaluate the same RK4 stages and agree to rounding.
"""

from __future__ import annotations

import cmath
import enum
import functools
import math
from dataclasses import dataclass

import numpy as np

from . import _accel
from .core import MathieuParams
from .errors import NonFiniteError, ParameterError

__all__ = [
    "DEFAULT_STEPS",
    "DEFAULT_TOL",
    "OVERFLOW_LIMIT",
    "FloquetClass",
    "FloquetResult",
    "StateVector",
    "monodromy",
    "monodromy_batch",
    "discriminant",
    "discriminant_value",
    "multipliers",
    "growth_rate",
    "classify",
    "classify_batch",
]

DEFAULT_STEPS = 4096
DEFAULT_TOL = 1e-7
OVERFLOW_LIMIT = 1e150
MIN_STEPS = 64
PERIOD = 2.0 * math.pi

# numpy kernel works on blocks of (points x steps) no larger than this
_NP_BLOCK = 1 << 18


class FloquetClass(enum.Enum):
    STABLE = "stable"
    UNSTABLE = "unstable"
    BOUNDARY = "boundary"


@dataclass(frozen=True)
class StateVector:
    psi: complex
    dpsi: complex

    def __post_init__(self):
        if not (cmath.isfinite(self.psi) and cmath.isfinite(self.dpsi)):
            raise NonFiniteError(float("nan"), "state vector has non-finite components")


@dataclass(frozen=True)
class FloquetResult:
    discriminant: complex
    mu1: complex
    mu2: complex
    growth_rate: float
    classification: FloquetClass

    @property
    def is_stable(self) -> bool:
        return self.classification is not FloquetClass.UNSTABLE


# ---------------------------------------------------------------------------
# kernels


@functools.lru_cache(maxsize=8)
def _trig_table(steps):
    """cos and sin at the half-step nodes x_k = k h / 2, k = 0..2*steps."""
    x = np.arange(2 * steps + 1) * (0.5 * PERIOD / steps)
    c, s = np.cos(x), np.sin(x)
    c.flags.writeable = False
    s.flags.writeable = False
    return c, s


@_accel.njit
def _monodromy_nb(a, eps, beta, cos_t, sin_t):
    """RK4 march of the 2x2 fundamental matrix.  Returns (M, overflow_x)."""
    steps = (cos_t.shape[0] - 1) // 2
    h = 2.0 * np.pi / steps
    m00 = 1.0 + 0j
    m01 = 0j
    m10 = 0j
    m11 = 1.0 + 0j
    for n in range(steps):
        q0 = a + 2.0 * eps * (cos_t[2 * n] + 1j * beta * sin_t[2 * n])
        qm = a + 2.0 * eps * (cos_t[2 * n + 1] + 1j * beta * sin_t[2 * n + 1])
        q1 = a + 2.0 * eps * (cos_t[2 * n + 2] + 1j * beta * sin_t[2 * n + 2])
        # columns advance independently: (u, v) = (psi, psi')
        k1u0 = m10
        k1v0 = -q0 * m00
        k1u1 = m11
        k1v1 = -q0 * m01
        k2u0 = m10 + 0.5 * h * k1v0
        k2v0 = -qm * (m00 + 0.5 * h * k1u0)
        k2u1 = m11 + 0.5 * h * k1v1
        k2v1 = -qm * (m01 + 0.5 * h * k1u1)
        k3u0 = m10 + 0.5 * h * k2v0
        k3v0 = -qm * (m00 + 0.5 * h * k2u0)
        k3u1 = m11 + 0.5 * h * k2v1
        k3v1 = -qm * (m01 + 0.5 * h * k2u1)
        k4u0 = m10 + h * k3v0
        k4v0 = -q1 * (m00 + h * k3u0)
        k4u1 = m11 + h * k3v1
        k4v1 = -q1 * (m01 + h * k3u1)
        m00 = m00 + h / 6.0 * (k1u0 + 2.0 * k2u0 + 2.0 * k3u0 + k4u0)
        m10 = m10 + h / 6.0 * (k1v0 + 2.0 * k2v0 + 2.0 * k3v0 + k4v0)
        m01 = m01 + h / 6.0 * (k1u1 + 2.0 * k2u1 + 2.0 * k3u1 + k4u1)
        m11 = m11 + h / 6.0 * (k1v1 + 2.0 * k2v1 + 2.0 * k3v1 + k4v1)
        big = max(max(abs(m00), abs(m01)), max(abs(m10), abs(m11)))
        if not big <= 1e150:  # also catches NaN
            out = np.empty((2, 2), dtype=np.complex128)
            out[0, 0] = m00
            out[0, 1] = m01
            out[1, 0] = m10
            out[1, 1] = m11
            return out, (n + 1) * h
    out = np.empty((2, 2), dtype=np.complex128)
    out[0, 0] = m00
    out[0, 1] = m01
    out[1, 0] = m10
    out[1, 1] = m11
    return out, np.nan


@_accel.njit
def _monodromy_batch_nb(a, eps, beta, cos_t, sin_t):
    n = a.shape[0]
    out = np.empty((n, 2, 2), dtype=np.complex128)
    xs = np.empty(n)
    for i in range(n):
        m, x = _monodromy_nb(a[i], eps[i], beta[i], cos_t, sin_t)
        out[i] = m
        xs[i] = x
    return out, xs


def _step_propagators_np(a, eps, beta, cos_t, sin_t):
    """One-step RK4 propagators, shape (points, steps, 2, 2).

    Entries are the RK4 stages applied to the identity, expanded by hand.
    """
    steps = (cos_t.shape[0] - 1) // 2
    h = PERIOD / steps

    def q(sl):
        return a[:, None] + 2.0 * eps[:, None] * (cos_t[sl] + 1j * beta[:, None] * sin_t[sl])

    q0, qm, q1 = q(slice(0, -1, 2)), q(slice(1, None, 2)), q(slice(2, None, 2))
    h2 = h * h
    props = np.empty(q0.shape + (2, 2), dtype=np.complex128)
    props[..., 0, 0] = 1.0 - h2 / 6.0 * (q0 + 2.0 * qm) + h2 * h2 / 24.0 * (qm * q0)
    props[..., 0, 1] = h - h * h2 / 6.0 * qm
    props[..., 1, 0] = -h / 6.0 * (q0 + 4.0 * qm + q1) + h * h2 / 12.0 * (qm * (q0 + q1))
    props[..., 1, 1] = 1.0 - h2 / 6.0 * (2.0 * qm + q1) + h2 * h2 / 24.0 * (qm * q1)
    return props


def _locate_overflow_np(props):
    m = np.eye(2, dtype=np.complex128)
    h = PERIOD / props.shape[0]
    for n, p in enumerate(props):
        m = p @ m
        if not np.all(np.isfinite(m)) or np.max(np.abs(m)) > OVERFLOW_LIMIT:
            return (n + 1) * h
    return math.nan


def _monodromy_batch_np(a, eps, beta, cos_t, sin_t):
    npts = a.shape[0]
    steps = (cos_t.shape[0] - 1) // 2
    out = np.empty((npts, 2, 2), dtype=np.complex128)
    xs = np.full(npts, np.nan)
    block = max(1, _NP_BLOCK // steps)
    for start in range(0, npts, block):
        sl = slice(start, min(start + block, npts))
        props = _step_propagators_np(a[sl], eps[sl], beta[sl], cos_t, sin_t)
        prod = props
        with np.errstate(over="ignore", invalid="ignore"):
            while prod.shape[1] > 1:
                if prod.shape[1] % 2:
                    pad = np.broadcast_to(np.eye(2, dtype=np.complex128), prod.shape[:1] + (1, 2, 2))
                    prod = np.concatenate([prod, pad], axis=1)
                # later steps multiply from the left
                prod = prod[:, 1::2] @ prod[:, 0::2]
        res = prod[:, 0]
        out[sl] = res
        with np.errstate(invalid="ignore"):
            suspect = ~np.all(np.isfinite(res), axis=(1, 2)) | (np.abs(res).max(axis=(1, 2)) > OVERFLOW_LIMIT)
        for k in np.flatnonzero(suspect):
            xs[start + k] = _locate_overflow_np(props[k])
    return out, xs


def _single(a, eps, beta, steps, use_numba):
    if use_numba is None:
        use_numba = _accel.USE_NUMBA
    cos_t, sin_t = _trig_table(steps)
    if use_numba:
        return _monodromy_nb(float(a), float(eps), float(beta), cos_t, sin_t)
    ms, xs = _monodromy_batch_np(
        np.array([a], dtype=float), np.array([eps], dtype=float), np.array([beta], dtype=float), cos_t, sin_t
    )
    return ms[0], xs[0]


def _check_steps(steps):
    if int(steps) != steps or steps < MIN_STEPS:
        raise ParameterError(f"steps must be an integer >= {MIN_STEPS}, got {steps!r}")
    return int(steps)


def monodromy_batch(a, eps, beta, steps: int = DEFAULT_STEPS, use_numba: bool | None = None):
    """Monodromy matrices for many parameter points at once.

    ``a``, ``eps`` and ``beta`` broadcast against each other.  Returns
    ``(M, overflow_x)`` with ``M`` of shape ``(..., 2, 2)`` and ``overflow_x``
    holding the x where the guard tripped, NaN for points that finished.
    No exception is raised here; callers decide what overflow means.
    """
    steps = _check_steps(steps)
    a, eps, beta = np.broadcast_arrays(
        np.asarray(a, dtype=float), np.asarray(eps, dtype=float), np.asarray(beta, dtype=float)
    )
    shape = a.shape
    flat = [np.array(v, dtype=float).ravel() for v in (a, eps, beta)]
    if use_numba is None:
        use_numba = _accel.USE_NUMBA
    kernel = _monodromy_batch_nb if use_numba else _monodromy_batch_np
    m, xs = kernel(flat[0], flat[1], flat[2], *_trig_table(steps))
    return m.reshape(shape + (2, 2)), xs.reshape(shape)


def monodromy(p: MathieuParams, steps: int = DEFAULT_STEPS, use_numba: bool | None = None) -> np.ndarray:
    """2x2 complex monodromy matrix ``[[m11, m12], [m21, m22]]``.

    Columns are ``(psi(2 pi), psi'(2 pi))`` for initial data ``(1, 0)`` and
    ``(0, 1)``.  Raises :class:`NonFiniteError` if ``|psi|`` passes 1e150.
    """
    steps = _check_steps(steps)
    if use_numba is None:
        use_numba = _accel.USE_NUMBA
    m, x = _single(p.a, p.eps, p.beta, steps, use_numba)
    if not math.isnan(x):
        raise NonFiniteError(x)
    return m


def discriminant(m: np.ndarray) -> complex:
    return complex(m[0, 0] + m[1, 1])


def discriminant_value(a: float, eps: float, beta: float, steps: int = DEFAULT_STEPS) -> complex:
    """Trace of the monodromy at a raw parameter triple (any sign of beta)."""
    m, x = _single(a, eps, beta, _check_steps(steps), None)
    if not math.isnan(x):
        raise NonFiniteError(x)
    return complex(m[0, 0] + m[1, 1])


def multipliers(delta: complex) -> tuple[complex, complex]:
    """Roots of ``mu^2 - delta mu + 1 = 0``, larger-magnitude root first."""
    delta = complex(delta)
    s = cmath.sqrt(delta * delta - 4.0)
    # pick the sign that avoids cancellation
    if (delta.conjugate() * s).real >= 0:
        mu1 = 0.5 * (delta + s)
    else:
        mu1 = 0.5 * (delta - s)
    return mu1, 1.0 / mu1


def growth_rate(mu1: complex, mu2: complex) -> float:
    return max(abs(math.log(abs(mu1))), abs(math.log(abs(mu2)))) / PERIOD


def _classify_delta(delta: complex, tol: float, m: np.ndarray | None = None) -> FloquetResult:
    mu1, mu2 = multipliers(delta)
    gamma = growth_rate(mu1, mu2)
    if gamma > tol:
        label = FloquetClass.UNSTABLE
    elif min(abs(delta - 2.0), abs(delta + 2.0)) <= 100.0 * tol and not _is_scalar(m, delta, tol):
        label = FloquetClass.BOUNDARY
    else:
        label = FloquetClass.STABLE
    return FloquetResult(delta, mu1, mu2, gamma, label)


def _is_scalar(m, delta, tol):
    """Monodromy equal to +-identity: every solution (anti)periodic, so bounded."""
    if m is None:
        return False
    lam = 1.0 if delta.real > 0 else -1.0
    return float(np.max(np.abs(m - lam * np.eye(2)))) <= 100.0 * tol


def classify(p: MathieuParams, steps: int = DEFAULT_STEPS, tol: float = DEFAULT_TOL) -> FloquetResult:
    if tol <= 0:
        raise ParameterError(f"tol must be positive, got {tol}")
    m = monodromy(p, steps)
    return _classify_delta(discriminant(m), tol, m)


def classify_batch(a, eps, beta, steps: int = DEFAULT_STEPS, tol: float = DEFAULT_TOL):
    """Classify a grid of points without raising on overflow.

    Returns ``(results, overflow_x)``; ``results`` is an object array of
    :class:`FloquetResult` with ``None`` where the integration overflowed.
    """
    if tol <= 0:
        raise ParameterError(f"tol must be positive, got {tol}")
    m, xs = monodromy_batch(a, eps, beta, steps)
    deltas = m[..., 0, 0] + m[..., 1, 1]
    results = np.empty(deltas.shape, dtype=object)
    for idx in np.ndindex(deltas.shape):
        if math.isnan(xs[idx]):
            results[idx] = _classify_delta(complex(deltas[idx]), tol, m[idx])
        else:
            results[idx] = None
    return results, xs
