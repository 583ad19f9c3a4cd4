import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ptmathieu import _accel
from ptmathieu import floquet as fl
from ptmathieu.core import MathieuParams
from ptmathieu.errors import NonFiniteError, ParameterError
from ptmathieu.floquet import (
    FloquetClass,
    StateVector,
    classify,
    classify_batch,
    discriminant,
    discriminant_value,
    monodromy,
    monodromy_batch,
    multipliers,
)


def det(m):
    return m[..., 0, 0] * m[..., 1, 1] - m[..., 0, 1] * m[..., 1, 0]


def free_discriminant(a):
    # closed form at eps = 0, evaluated at high precision
    with mpmath.workdps(30):
        a = mpmath.mpf(a)
        if a >= 0:
            return float(2 * mpmath.cos(2 * mpmath.pi * mpmath.sqrt(a)))
        return float(2 * mpmath.cosh(2 * mpmath.pi * mpmath.sqrt(-a)))


def test_antiperiodic_quarter():
    m = monodromy(MathieuParams(0.25, 0.0, 0.8), 4096)
    assert np.allclose(m, -np.eye(2), atol=1e-10)
    assert discriminant(m) == pytest.approx(-2.0, abs=1e-12)


def test_periodic_unit():
    m = monodromy(MathieuParams(1.0, 0.0, 0.3), 4096)
    assert np.allclose(m, np.eye(2), atol=1e-10)
    assert discriminant(np.eye(2)) == 2 + 0j


def test_tongue_point_det_and_step_doubling():
    p = MathieuParams(0.25, 0.1, 0.5)
    m1 = monodromy(p, 4096)
    m2 = monodromy(p, 8192)
    assert abs(det(m1) - 1) <= 1e-9
    assert abs(discriminant(m1).imag) <= 1e-9
    assert np.max(np.abs(m1 - m2)) <= 1e-8


@pytest.mark.parametrize("a", [0.05, 0.25, 1.0, 2.3, -0.1, -0.7])
def test_free_closed_form(a):
    assert abs(discriminant_value(a, 0.0, 0.0) - free_discriminant(a)) <= 1e-8


def test_free_negative_example():
    d = discriminant_value(-0.1, 0.0, 0.0)
    assert d.real == pytest.approx(free_discriminant(-0.1), abs=1e-9)
    assert d.real > 2 and abs(d.imag) <= 1e-12


def test_step_doubling_order():
    # away from round-off: small step counts on a hard case
    vals = [discriminant_value(2.0, 0.3, 0.5, s) for s in (64, 128, 256, 512)]
    diffs = [abs(vals[i] - vals[i + 1]) for i in range(3)]
    for d0, d1 in zip(diffs, diffs[1:]):
        assert d0 / d1 >= 8.0


def test_det_and_reality_box():
    a, e, b = np.meshgrid(np.linspace(-1, 3, 21), np.linspace(0, 0.5, 6), [0.0, 0.5, 1.0, 1.2], indexing="ij")
    m, xs = monodromy_batch(a, e, b)
    assert np.all(np.isnan(xs))
    assert np.max(np.abs(det(m) - 1)) <= 1e-9
    assert np.max(np.abs((m[..., 0, 0] + m[..., 1, 1]).imag)) <= 1e-8


@settings(max_examples=30, deadline=None)
@given(st.floats(-1, 3), st.floats(0, 0.5), st.floats(0, 1.5))
def test_beta_sign_symmetry(a, eps, beta):
    d1 = discriminant_value(a, eps, beta)
    d2 = discriminant_value(a, eps, -beta)
    assert abs(d1 - d2) <= 1e-9 * max(1.0, abs(d1))


def test_overflow_reports_x():
    with pytest.raises(NonFiniteError) as info:
        monodromy(MathieuParams(-4000.0, 0.0, 0.0))
    assert 0 < info.value.x < 2 * math.pi


def test_overflow_batch_does_not_raise():
    m, xs = monodromy_batch([-4000.0, 0.3], 0.0, 0.0)
    assert not math.isnan(xs[0]) and math.isnan(xs[1])
    results, _ = classify_batch([-4000.0, 0.3], 0.0, 0.0)
    assert results[0] is None and results[1].classification is FloquetClass.STABLE


def test_steps_validation():
    with pytest.raises(ParameterError):
        monodromy(MathieuParams(0.1, 0.1, 0.1), 32)
    with pytest.raises(ParameterError):
        classify(MathieuParams(0.1, 0.1, 0.1), tol=0.0)


def test_numba_numpy_parity():
    a, e, b = np.meshgrid([-0.3, 0.1, 0.25, 0.9, 2.0], [0.0, 0.1, 0.4], [0.0, 0.6, 1.1], indexing="ij")
    m_np, _ = monodromy_batch(a, e, b, 1024, use_numba=False)
    m_nb, _ = monodromy_batch(a, e, b, 1024, use_numba=True)
    scale = np.maximum(1.0, np.abs(m_nb))
    assert np.max(np.abs(m_np - m_nb) / scale) <= 1e-11
    p = MathieuParams(0.3, 0.2, 0.4)
    assert np.allclose(monodromy(p, use_numba=False), monodromy(p, use_numba=True), atol=1e-11)


def test_numpy_overflow_location_matches():
    _, x_np = monodromy_batch([-4000.0], 0.0, 0.0, use_numba=False)
    _, x_nb = monodromy_batch([-4000.0], 0.0, 0.0, use_numba=True)
    assert x_np[0] == pytest.approx(x_nb[0], abs=2 * math.pi / 4096 * 2)


def test_backend_flag():
    assert _accel.backend() in ("numba", "numpy")


@pytest.mark.parametrize(
    "delta, expected",
    [(2.0, (1.0, 1.0)), (0.0, (1j, -1j)), (2.5, (2.0, 0.5))],
)
def test_multiplier_examples(delta, expected):
    mu = multipliers(delta)
    assert mu[0] == pytest.approx(expected[0], abs=1e-15)
    assert mu[1] == pytest.approx(expected[1], abs=1e-15)


@given(st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False))
def test_multiplier_reciprocity(delta):
    mu1, mu2 = multipliers(delta)
    assert abs(mu1 * mu2 - 1) <= 1e-12
    # they really are roots of mu^2 - delta mu + 1
    for mu in (mu1, mu2):
        assert abs(mu * mu - delta * mu + 1) <= 1e-12 * max(1.0, abs(mu) ** 2)


def test_growth_rate_zero_on_unit_circle():
    mu1, mu2 = multipliers(1.3)
    assert fl.growth_rate(mu1, mu2) <= 1e-15
    mu1, mu2 = multipliers(2.5)
    assert fl.growth_rate(mu1, mu2) == pytest.approx(math.log(2) / (2 * math.pi))


def test_classify_examples():
    r = classify(MathieuParams(0.5, 0.05, 0.0))
    assert r.classification is FloquetClass.STABLE
    assert -2 < r.discriminant.real < 2
    r = classify(MathieuParams(0.25, 0.1, 0.0))
    assert r.classification is FloquetClass.UNSTABLE and r.growth_rate > 0
    r = classify(MathieuParams(0.25, 0.1, 1.0))
    assert r.classification in (FloquetClass.STABLE, FloquetClass.BOUNDARY)
    assert r.growth_rate <= 1e-7
    assert abs(r.mu1 * r.mu2 - 1) <= 1e-12


def test_coexistence_is_stable_but_parabolic_is_boundary():
    assert classify(MathieuParams(1.0, 0.0, 0.0)).classification is FloquetClass.STABLE
    # beta = 1 keeps Delta = -2 at a = 1/4 but the monodromy is a Jordan block
    assert classify(MathieuParams(0.25, 0.2, 1.0)).classification is FloquetClass.BOUNDARY


def test_state_vector_finite():
    StateVector(1 + 1j, 0.0)
    with pytest.raises(NonFiniteError):
        StateVector(complex("nan"), 0.0)
    assert cmath.isfinite(StateVector(1.0, 2.0).dpsi)
