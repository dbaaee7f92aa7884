"""Monodromy analysis of Hill's equation: oracles and invariants."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import solve_ivp

from kapitza import floquet
from kapitza.floquet import HillParams
from kapitza.params import ModelParams


def undriven_monodromy(a, gamma=1.0):
    """Closed form for b = 0: rotation (a > 0) or hyperbolic (a < 0) flow."""
    T = 2.0 * math.pi / gamma
    if a > 0:
        w = math.sqrt(a)
        return np.array([[math.cos(w * T), math.sin(w * T) / w],
                         [-w * math.sin(w * T), math.cos(w * T)]])
    if a < 0:
        w = math.sqrt(-a)
        return np.array([[math.cosh(w * T), math.sinh(w * T) / w],
                         [w * math.sinh(w * T), math.cosh(w * T)]])
    return np.array([[1.0, T], [0.0, 1.0]])


@pytest.mark.parametrize("a", [0.17, 1.3, -0.4, 0.0])
def test_undriven_closed_form(a):
    M = floquet.hill_monodromy(a, 0.0)
    np.testing.assert_allclose(M, undriven_monodromy(a), rtol=1e-9, atol=1e-9)


def test_against_adaptive_integrator():
    """Fixed-step RK4 agrees with an independent adaptive integration."""
    rng = np.random.default_rng(3)
    for _ in range(5):
        a, b = rng.uniform(-2, 2), rng.uniform(-2, 2)
        gamma = rng.uniform(0.5, 3.0)

        def rhs(t, y):
            c = -(a + b * math.cos(gamma * t))
            return [y[1], c * y[0], y[3], c * y[2]]

        T = 2.0 * math.pi / gamma
        sol = solve_ivp(rhs, (0.0, T), [1.0, 0.0, 0.0, 1.0],
                        rtol=1e-11, atol=1e-13)
        u1, du1, u2, du2 = sol.y[:, -1]
        M_ref = np.array([[u1, u2], [du1, du2]])  # columns are solutions
        M = floquet.hill_monodromy(a, b, gamma)
        np.testing.assert_allclose(M, M_ref, rtol=1e-7, atol=1e-7)


@settings(max_examples=200, deadline=None)
@given(a=st.floats(-5.0, 5.0), b=st.floats(-5.0, 5.0),
       gamma=st.floats(0.5, 2.0))
def test_symplectic_det_one(a, b, gamma):
    _, det = floquet.hill_monodromy(a * gamma**2, b * gamma**2, gamma,
                                    return_det=True)
    assert det == pytest.approx(1.0, abs=1e-8)


def test_batch_matches_scalar():
    a = np.array([0.1, 0.3, -0.2])
    b = np.array([[0.05], [0.4]])
    M = floquet.hill_monodromy(a, b)
    assert M.shape == (2, 3, 2, 2)
    for i in range(2):
        for j in range(3):
            np.testing.assert_allclose(
                M[i, j], floquet.hill_monodromy(a[j], b[i, 0]), rtol=1e-12)


def test_growth_exponent_matches_eigenvalue():
    r = floquet.monodromy(HillParams(a=0.25, b=0.3))  # inside the resonance band
    assert not r.stable
    lam = np.max(np.abs(np.linalg.eigvals(r.M)))
    assert r.growth_exponent == pytest.approx(math.log(lam), rel=1e-8)
    # stable point reports zero growth
    assert floquet.monodromy(HillParams(a=0.03, b=0.01)).growth_exponent == 0.0


def test_marginal_undriven_band_edge_is_stable():
    # b = 0, a = (n gamma/2)^2 gives |tr M| = 2 exactly; tolerance keeps it stable
    assert floquet.monodromy(HillParams(a=0.25, b=0.0)).stable


def test_overflow_raises():
    # growth exp(2 pi sqrt(-a)) overflows double precision for a = -2e4
    with pytest.raises(floquet.NumericOverflowError):
        floquet.monodromy(HillParams(a=-2e4, b=0.0))


def test_pendulum_fixed_points():
    # static limit: lower extremum stable, inverted unstable
    p = ModelParams(K=1.0, g0=0.05, g1=0.0, gamma=1.0, Lambda=1.0)
    lower, upper = floquet.pendulum_fixed_point_stability(p)
    assert lower and not upper
    # fast strong drive stabilizes the inverted extremum
    p2 = ModelParams(K=1.0, g0=0.01, g1=0.35, gamma=1.0, Lambda=1.0)
    lower2, upper2 = floquet.pendulum_fixed_point_stability(p2)
    assert lower2 and upper2


def test_critical_drive_value():
    gc = floquet.pendulum_critical_drive()
    assert gc == pytest.approx(0.45, abs=0.02)


def test_critical_drive_gamma_invariance():
    assert floquet.pendulum_critical_drive(gamma=2.0) == pytest.approx(
        floquet.pendulum_critical_drive(gamma=1.0), abs=2e-4)


@pytest.mark.parametrize("b", [0.01, 0.02, 0.05])
def test_resonance_band_width(b):
    a_lo, a_hi = floquet.instability_interval(b)
    width = a_hi - a_lo
    # leading-order band: stable iff 2b <= |gamma^2 - 4a|, so width = b/2 + b/2
    assert width == pytest.approx(b, rel=0.15)
    assert a_lo < 0.25 < a_hi


def test_bisect_verdict_simple():
    root = floquet.bisect_verdict(lambda x: x < 0.3, 0.0, 1.0, rel_tol=1e-6)
    assert root == pytest.approx(0.3, abs=1e-5)
    with pytest.raises(ValueError):
        floquet.bisect_verdict(lambda x: True, 0.0, 1.0)


def test_pendulum_diagram_shape():
    d = floquet.pendulum_diagram(resolution=50, steps_per_period=512)
    assert len(d.cells) == 2500
    assert d.columns[:2] == ["lower_stable", "upper_stable"]
    # the g0 = g1 = 0 corner is stable for the lower extremum
    assert d.cells[0][0] is True
