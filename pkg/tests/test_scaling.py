"""Finite-time extrapolation of the critical drive."""

import numpy as np
import pytest

from kapitza import scaling


def test_exact_model_recovered():
    T = np.array([25.0, 50.0, 100.0, 200.0])
    g = 0.4 * (1.0 + 20.0 / T)
    fit = scaling.finite_time_fit(T, g)
    assert fit.g_c_inf == pytest.approx(0.4, rel=1e-10)
    assert fit.A == pytest.approx(20.0, rel=1e-10)
    assert fit.residual < 1e-12
    assert fit.reliable


def test_noise_tolerated():
    rng = np.random.default_rng(1)
    T = np.array([25.0, 50.0, 100.0, 200.0, 400.0])
    g = 0.4 * (1.0 + 20.0 / T) * (1.0 + 0.02 * rng.standard_normal(len(T)))
    fit = scaling.finite_time_fit(T, g)
    assert fit.g_c_inf == pytest.approx(0.4, rel=0.1)
    assert fit.A == pytest.approx(20.0, rel=0.5)


def test_requires_four_distinct_T():
    with pytest.raises(ValueError):
        scaling.finite_time_fit([25.0, 50.0, 100.0], [0.5, 0.45, 0.42])
    with pytest.raises(ValueError):
        scaling.finite_time_fit([25.0, 25.0, 50.0, 100.0],
                                [0.5, 0.5, 0.45, 0.42])


def test_unreliable_when_nonmonotone():
    T = [25.0, 50.0, 100.0, 200.0]
    g = [0.40, 0.55, 0.42, 0.41]  # bump far above any residual
    fit = scaling.finite_time_fit(T, g)
    assert not fit.reliable


def test_unordered_input_sorted():
    T = [200.0, 25.0, 100.0, 50.0]
    g = [0.4 * (1 + 20.0 / t) for t in T]
    fit = scaling.finite_time_fit(T, g)
    assert list(fit.T_values) == sorted(T)
    assert fit.A == pytest.approx(20.0, rel=1e-10)


def test_collapse_shifts_each_curve():
    T = np.array([25.0, 50.0, 100.0, 200.0])
    g_c = 0.4 * (1.0 + 20.0 / T)
    fit = scaling.finite_time_fit(T, g_c)
    gs = [np.linspace(0.2, 0.8, 13) for _ in T]
    obs = [np.exp(-((g - gc) / 0.05)**2) for g, gc in zip(gs, g_c)]
    pairs = scaling.collapse_curves(T, gs, obs, fit)
    # after shifting, every curve peaks at the same abscissa (zero)
    for (x, y) in pairs:
        assert abs(x[np.argmax(y)]) < 0.06
