"""Stability of the driven chain in the quadratic approximation.

Expanding cos(phi) about phi=0 decouples the chain into one driven
harmonic oscillator per momentum mode q with Hill coefficients
a = q^2 + K*g0 and b = K*g1.  The chain is stable iff every mode in
(0, Lambda] is.  The closed-form criterion
    2*K*g1 < max(gamma^2 - 4*(K*g0 + Lambda^2), 4*K*g0 - gamma^2)
covers the leading resonance band only; the monodromy classifier also
captures the higher-order tongues and is authoritative.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import floquet
from .diagram import PhaseDiagram
from .floquet import HillParams, MonodromyResult
from .params import ModelParams

DEFAULT_N_MODES = 128


@dataclass(frozen=True)
class ModeGrid:
    """Ordered momenta in (0, Lambda], endpoint included exactly."""

    q_values: np.ndarray

    def __post_init__(self):
        q = np.asarray(self.q_values, dtype=float)
        if q.ndim != 1 or len(q) == 0:
            raise ValueError("q_values must be a non-empty 1-D array")
        if q[0] <= 0 or np.any(np.diff(q) <= 0):
            raise ValueError("q_values must be strictly increasing and positive")
        object.__setattr__(self, "q_values", q)

    @property
    def n_modes(self) -> int:
        return len(self.q_values)

    @classmethod
    def uniform(cls, Lambda: float, n_modes: int = DEFAULT_N_MODES,
                include_zero_gapped: bool = False) -> "ModeGrid":
        """Uniform grid q_j = j*Lambda/n, j = 1..n.

        With include_zero_gapped a near-zero mode is prepended; use it when
        g0 > 0 so the gapped band minimum omega_0 = sqrt(K g0) is sampled.
        """
        q = (np.arange(1, n_modes + 1) / n_modes) * Lambda
        if include_zero_gapped:
            q = np.concatenate(([Lambda * 1e-9], q))
        return cls(q)


@dataclass(frozen=True)
class ChainVerdict:
    stable: bool
    worst_q: float           # mode with the largest growth exponent
    max_growth: float        # its per-period growth exponent


def mode_stability(params: ModelParams, q: float,
                   steps_per_period: int = floquet.DEFAULT_STEPS) -> MonodromyResult:
    """Monodromy verdict for the single mode at momentum q."""
    if not (0.0 <= q <= params.Lambda * (1 + 1e-12)):
        raise ValueError(f"q={q} outside [0, Lambda]")
    h = HillParams(a=q * q + params.K * params.g0, b=params.K * params.g1,
                   gamma=params.gamma)
    return floquet.monodromy(h, steps_per_period)


def chain_stability_exact(params: ModelParams, grid: ModeGrid | None = None,
                          steps_per_period: int = floquet.DEFAULT_STEPS
                          ) -> ChainVerdict:
    """Stable iff every mode's monodromy is stable; reports the worst mode."""
    if grid is None:
        grid = ModeGrid.uniform(params.Lambda, include_zero_gapped=params.g0 > 0)
    elif grid.n_modes < 32:
        raise ValueError("mode grid too coarse: need n_modes >= 32")
    q = grid.q_values
    a = q * q + params.K * params.g0
    b = params.K * params.g1
    M = floquet.hill_monodromy(a, b, params.gamma, steps_per_period)
    tr = M[..., 0, 0] + M[..., 1, 1]
    growth = np.where(np.isfinite(tr), floquet.growth_from_trace(tr), np.inf)
    i = int(np.argmax(growth))
    stable = bool(np.all(np.abs(tr) <= 2.0 + floquet.TRACE_TOL)
                  and np.all(np.isfinite(tr)))
    return ChainVerdict(stable=stable, worst_q=float(q[i]),
                        max_growth=float(growth[i]))


def chain_stability_analytic(params: ModelParams) -> bool:
    """Closed-form leading-band criterion (first resonance only)."""
    g2 = params.gamma**2
    kg0 = params.K * params.g0
    kg1 = params.K * params.g1
    return 2.0 * kg1 < max(g2 - 4.0 * (kg0 + params.Lambda**2), 4.0 * kg0 - g2)


def chain_diagram(x_axis: str = "Kg0_over_gamma2",
                  x_range=(0.0, 0.5), y_range=(0.0, 0.6),
                  fixed: float = 0.1, K: float = 1.0,
                  resolution: int = 50,
                  n_modes: int = DEFAULT_N_MODES,
                  steps_per_period: int = floquet.DEFAULT_STEPS) -> PhaseDiagram:
    """Stability grid over reduced axes, exact and analytic verdicts side by side.

    x_axis selects the scan plane: "Kg0_over_gamma2" scans (Kg0, Kg1)
    at fixed Lambda/gamma = `fixed`; "Lambda_over_gamma" scans
    (Lambda/gamma, Kg1) at fixed Kg0/gamma^2 = `fixed`.  The y axis is
    always Kg1/gamma^2.
    """
    if resolution < 50:
        raise ValueError("resolution must be >= 50 per axis")
    if x_axis not in ("Kg0_over_gamma2", "Lambda_over_gamma"):
        raise ValueError(f"unknown x_axis {x_axis!r}")
    xs = np.linspace(x_range[0], x_range[1], resolution)
    ys = np.linspace(y_range[0], y_range[1], resolution)
    if x_axis == "Lambda_over_gamma":
        # a Lambda axis starting at 0 has no modes; nudge off zero
        xs = np.where(xs <= 0, 1e-6, xs)

    cells = []
    for x in xs:
        for y in ys:
            if x_axis == "Kg0_over_gamma2":
                kg0, lam = float(x), fixed
            else:
                kg0, lam = fixed, float(x)
            p = ModelParams.from_reduced(K=K, kg0=kg0, kg1=float(y), lam=lam)
            grid = ModeGrid.uniform(p.Lambda, n_modes,
                                    include_zero_gapped=p.g0 > 0)
            v = chain_stability_exact(p, grid, steps_per_period)
            cells.append((v.stable, chain_stability_analytic(p),
                          v.max_growth, v.worst_q / p.gamma))
    return PhaseDiagram(
        axes={x_axis: xs.tolist(), "Kg1_over_gamma2": ys.tolist()},
        columns=["stable_exact", "stable_analytic", "growth_exponent", "worst_q"],
        cells=cells, method="quadratic",
        manifest={"fixed": fixed, "K": K, "n_modes": n_modes,
                  "steps_per_period": steps_per_period})


def first_lobe_boundary(lam: float, K: float = 1.0,
                        n_modes: int = DEFAULT_N_MODES,
                        steps_per_period: int = floquet.DEFAULT_STEPS,
                        rel_tol: float = 1e-4) -> float:
    """Critical Kg1/gamma^2 of the exact classifier along g0 = 0 at fixed Lambda/gamma."""

    def stable(kg1: float) -> bool:
        p = ModelParams.from_reduced(K=K, kg0=0.0, kg1=kg1, lam=lam)
        return chain_stability_exact(p, ModeGrid.uniform(p.Lambda, n_modes),
                                     steps_per_period).stable

    if not stable(1e-6):
        return 0.0
    return floquet.bisect_verdict(stable, 1e-6, 1.0, rel_tol)
