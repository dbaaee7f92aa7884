"""Finite-time scaling of the critical drive amplitude.

The critical amplitude measured after a finite number of drive periods
T follows g_c(T) = g_c_inf * (1 + A/T); fitting this model extrapolates
the transition point to the infinite-time limit and collapses the
observable-vs-drive curves taken at different T.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

#: relative residual above which the fit is reported unreliable
RESIDUAL_LIMIT = 0.2


@dataclass(frozen=True)
class ScalingFit:
    T_values: np.ndarray
    g_c_values: np.ndarray
    g_c_inf: float
    A: float
    residual: float          # rms relative misfit of g_c(T)
    reliable: bool


def finite_time_fit(T_values, g_c_values) -> ScalingFit:
    """Least-squares fit of g_c(T) = g_c_inf * (1 + A/T).

    Linear in (g_c_inf, g_c_inf*A) via regression on 1/T.  Requires at
    least 4 distinct T values; flags the fit unreliable if g_c(T) is
    non-monotone beyond the fit residual or the residual itself is large.
    """
    T = np.asarray(T_values, dtype=float)
    g = np.asarray(g_c_values, dtype=float)
    if len(T) < 4 or len(np.unique(T)) < 4:
        raise ValueError("need at least 4 distinct T values")
    if len(T) != len(g):
        raise ValueError("T_values and g_c_values must have equal length")
    order = np.argsort(T)
    T, g = T[order], g[order]

    slope, intercept = np.polyfit(1.0 / T, g, 1)
    g_inf = float(intercept)
    A = float(slope / intercept) if intercept != 0 else np.inf
    pred = g_inf * (1.0 + A / T)
    residual = float(np.sqrt(np.mean(((g - pred) / np.mean(np.abs(g)))**2)))

    increases = np.diff(g) > residual * np.mean(np.abs(g)) + 1e-15
    reliable = (residual <= RESIDUAL_LIMIT) and not np.any(increases) and g_inf > 0
    return ScalingFit(T_values=T, g_c_values=g, g_c_inf=g_inf, A=A,
                      residual=residual, reliable=reliable)


def collapse_curves(T_values, g_values_per_T, obs_values_per_T, fit: ScalingFit):
    """Shift each observable-vs-drive curve by its finite-time critical point.

    Returns a list of (g - g_c(T), observable) pairs, one per T, for
    visual verification of the data collapse.
    """
    out = []
    for T, gs, obs in zip(T_values, g_values_per_T, obs_values_per_T):
        gc_T = fit.g_c_inf * (1.0 + fit.A / float(T))
        out.append((np.asarray(gs, dtype=float) - gc_T,
                    np.asarray(obs, dtype=float)))
    return out
