"""Monodromy-matrix Floquet analysis of Hill's equation.

Classifies u'' + (a + b*cos(gamma*t)) u = 0 by integrating the 2x2
fundamental matrix over one drive period: the solution is bounded iff
|tr M| <= 2.  Used directly for the two fixed points of the driven
pendulum and reused per momentum mode by the quadratic chain analysis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .diagram import PhaseDiagram
from .params import ModelParams

#: stable iff |tr M| <= 2 + TRACE_TOL; keeps marginal band edges (b = 0) stable
TRACE_TOL = 1e-9

DEFAULT_STEPS = 4096


class NumericOverflowError(RuntimeError):
    """Integration produced non-finite values (grossly unstable parameters)."""


@dataclass(frozen=True)
class HillParams:
    """Coefficients of u'' + (a + b*cos(gamma*t)) u = 0."""

    a: float
    b: float
    gamma: float = 1.0

    def __post_init__(self):
        if not (self.gamma > 0):
            raise ValueError("gamma must be positive")


@dataclass(frozen=True)
class MonodromyResult:
    M: np.ndarray            # 2x2 one-period flow of (u, u')
    trace: float
    stable: bool
    growth_exponent: float   # log of spectral radius per period; 0 when stable


def hill_monodromy(a, b, gamma: float = 1.0, steps: int = DEFAULT_STEPS,
                   return_det: bool = False):
    """One-period fundamental matrices for a batch of Hill equations.

    `a` and `b` broadcast against each other; the result has their
    broadcast shape plus trailing (2, 2).  Fixed-step classical RK4 on
    M' = A(t) M with A = [[0, 1], [-(a + b cos gamma t), 0]]; each step
    is applied as an explicit update factor M <- S M.

    With return_det the per-step determinants det(S) are accumulated and
    returned alongside M.  This product equals det(M) exactly in exact
    arithmetic, but evaluates it without the catastrophic cancellation
    that hits M00*M11 - M01*M10 once the entries grow large.
    """
    if steps < 256:
        raise ValueError("steps_per_period must be >= 256")
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    shape = np.broadcast(a, b).shape
    a = np.broadcast_to(a, shape)
    b = np.broadcast_to(b, shape)

    T = 2.0 * math.pi / gamma
    h = T / steps
    M = np.zeros(shape + (2, 2))
    M[..., 0, 0] = 1.0
    M[..., 1, 1] = 1.0
    det = np.ones(shape)

    t = 0.0
    for _ in range(steps):
        c0 = -(a + b * math.cos(gamma * t))
        ch = -(a + b * math.cos(gamma * (t + 0.5 * h)))
        c1 = -(a + b * math.cos(gamma * (t + h)))
        # RK4 update factor S (stages applied to the identity, closed form)
        e2 = 1.0 + 0.25 * h * h * c0
        e3 = 1.0 + 0.5 * h * h * ch
        s00 = 1.0 + (h * h / 6.0) * (c0 + ch + ch * e2)
        s01 = h + (h**3 / 6.0) * ch
        s10 = (h / 6.0) * (c0 + 2.0 * ch + 2.0 * ch * e2 + c1 * e3)
        s11 = 1.0 + (h * h / 6.0) * (2.0 * ch + c1 * (1.0 + 0.25 * h * h * ch))
        m00, m01 = M[..., 0, 0], M[..., 0, 1]
        m10, m11 = M[..., 1, 0], M[..., 1, 1]
        M = np.stack([
            np.stack([s00 * m00 + s01 * m10, s00 * m01 + s01 * m11], axis=-1),
            np.stack([s10 * m00 + s11 * m10, s10 * m01 + s11 * m11], axis=-1),
        ], axis=-2)
        if return_det:
            det = det * (s00 * s11 - s01 * s10)
        t += h
    if return_det:
        return M, det
    return M


def growth_from_trace(trace):
    """Per-period growth exponent from tr M, assuming det M = 1."""
    tr = np.abs(np.asarray(trace, dtype=float))
    half = tr / 2.0
    with np.errstate(invalid="ignore"):
        rate = np.where(tr > 2.0 + TRACE_TOL,
                        np.log(half + np.sqrt(np.maximum(half**2 - 1.0, 0.0))),
                        0.0)
    return rate


def monodromy(h: HillParams, steps_per_period: int = DEFAULT_STEPS) -> MonodromyResult:
    """Classify one Hill equation by its one-period flow matrix."""
    M = hill_monodromy(h.a, h.b, h.gamma, steps_per_period)
    if not np.all(np.isfinite(M)):
        raise NumericOverflowError(
            f"monodromy integration overflowed for a={h.a}, b={h.b}, gamma={h.gamma}")
    tr = float(M[0, 0] + M[1, 1])
    stable = abs(tr) <= 2.0 + TRACE_TOL
    return MonodromyResult(M=M, trace=tr, stable=stable,
                           growth_exponent=float(growth_from_trace(tr)))


def pendulum_fixed_point_stability(params: ModelParams,
                                   steps_per_period: int = DEFAULT_STEPS
                                   ) -> tuple[bool, bool]:
    """Linear stability of the pendulum extrema phi=0 and phi=pi.

    Linearizing -g(t)cos(phi) about phi=0 gives Hill coefficients
    (a, b) = (g0, g1); about phi=pi it gives (-g0, -g1).
    """
    lower = monodromy(HillParams(params.g0, params.g1, params.gamma), steps_per_period)
    upper = monodromy(HillParams(-params.g0, -params.g1, params.gamma), steps_per_period)
    return lower.stable, upper.stable


def pendulum_diagram(g0_range=(0.0, 0.6), g1_range=(0.0, 1.0),
                     resolution: int = 60, gamma: float = 1.0,
                     steps_per_period: int = DEFAULT_STEPS) -> PhaseDiagram:
    """Fixed-point stability of the driven pendulum over (g0, g1)/gamma^2.

    Each cell records the linear verdict of both extrema; at least-one-
    stable corresponds to the colored regions of the classic diagram.
    """
    if resolution < 50:
        raise ValueError("resolution must be >= 50")
    g2 = gamma**2
    g0s = np.linspace(g0_range[0], g0_range[1], resolution)
    g1s = np.linspace(g1_range[0], g1_range[1], resolution)
    A, B = np.meshgrid(g0s * g2, g1s * g2, indexing="ij")
    M_lo = hill_monodromy(A, B, gamma, steps_per_period)
    M_up = hill_monodromy(-A, -B, gamma, steps_per_period)
    tr_lo = M_lo[..., 0, 0] + M_lo[..., 1, 1]
    tr_up = M_up[..., 0, 0] + M_up[..., 1, 1]
    st_lo = np.abs(tr_lo) <= 2.0 + TRACE_TOL
    st_up = np.abs(tr_up) <= 2.0 + TRACE_TOL

    cells = []
    for i in range(resolution):
        for j in range(resolution):
            cells.append((bool(st_lo[i, j]), bool(st_up[i, j]),
                          float(growth_from_trace(tr_lo[i, j])),
                          float(growth_from_trace(tr_up[i, j]))))
    return PhaseDiagram(
        axes={"g0_over_gamma2": g0s.tolist(), "g1_over_gamma2": g1s.tolist()},
        columns=["lower_stable", "upper_stable", "growth_lower", "growth_upper"],
        cells=cells, method="pendulum",
        manifest={"steps_per_period": steps_per_period, "trace_tol": TRACE_TOL})


def bisect_verdict(predicate, lo: float, hi: float, rel_tol: float = 1e-4) -> float:
    """Locate the boundary of a boolean predicate on [lo, hi] by bisection.

    Requires predicate(lo) != predicate(hi); returns the midpoint of the
    final bracket once its width falls below rel_tol * max(|lo|, |hi|, 1).
    """
    p_lo = predicate(lo)
    if predicate(hi) == p_lo:
        raise ValueError("predicate does not change over the bracket")
    scale = max(abs(lo), abs(hi), 1.0)
    while hi - lo > rel_tol * scale:
        mid = 0.5 * (lo + hi)
        if predicate(mid) == p_lo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def pendulum_critical_drive(g0: float = 0.0, gamma: float = 1.0,
                            steps_per_period: int = DEFAULT_STEPS,
                            rel_tol: float = 1e-4) -> float:
    """Critical g1/gamma^2 where the lower extremum destabilizes at fixed g0."""
    g2 = gamma**2

    def stable(g1_red: float) -> bool:
        return monodromy(HillParams(g0, g1_red * g2, gamma),
                         steps_per_period).stable

    return bisect_verdict(stable, 0.0, 1.0, rel_tol)


def instability_interval(b: float, gamma: float = 1.0,
                         steps_per_period: int = DEFAULT_STEPS,
                         rel_tol: float = 1e-6) -> tuple[float, float]:
    """Edges (a_lo, a_hi) of the first parametric-resonance band at fixed b.

    Searches around the resonance center a = gamma^2/4; for small b the
    width is b on each side (2b <= |gamma^2 - 4a| is the stability rule).
    """
    g2 = gamma**2
    center = 0.25 * g2

    def stable(a: float) -> bool:
        return monodromy(HillParams(a, b, gamma), steps_per_period).stable

    if stable(center):
        raise ValueError("resonance center classified stable; b too small to resolve")
    span = max(2.0 * abs(b), 1e-3 * g2)
    lo_out, hi_out = center - span, center + span
    while not stable(lo_out):
        lo_out -= span
    while not stable(hi_out):
        hi_out += span
    a_lo = bisect_verdict(stable, lo_out, center, rel_tol)
    a_hi = bisect_verdict(stable, center, hi_out, rel_tol)
    return a_lo, a_hi
