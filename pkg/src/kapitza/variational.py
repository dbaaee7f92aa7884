"""Self-consistent Gaussian variational dynamics.

The trial state is a translation-invariant Gaussian wavefunctional with
per-mode width G_k and conjugate parameter Sigma_k.  Saddle-point
equations of the effective action:

    dG_k/dt     = 4 K G_k Sigma_k
    dSigma_k/dt = K/(8 G_k^2) - 2 K Sigma_k^2 - k^2/(2K) - Z(t) g(t) / 2

with the fluctuation suppression factor Z = exp(-(1/2) int dk/2pi G_k)
coupling all modes.  Gap closure (Z -> 0) signals the unstable, absorbing
regime; Z staying finite signals stability.

All integration is done in drive-period units (tau = gamma*t, kappa =
k/gamma, G_hat = gamma*G, Sigma_hat = Sigma/gamma); physical quantities
are converted at the API boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .params import ModelParams

DEFAULT_N_K = 256
#: Kosterlitz-Thouless coupling above which the cosine is irrelevant
K_CRITICAL = 8.0 * math.pi

G_FLOOR = 1e-12
G_CEIL = 1e12


@dataclass(frozen=True)
class GaussianState:
    """Variational state on a fixed momentum grid (physical units)."""

    k_grid: np.ndarray   # momenta in (0, Lambda], uniform, endpoint included
    G: np.ndarray
    Sigma: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        if np.any(np.asarray(self.G) <= 0):
            raise ValueError("G_k must stay positive")

    def Z(self) -> float:
        """Suppression factor exp(-(1/2) int_{-L}^{L} dk/2pi G_k).

        The integrand is even, so the symmetric integral is twice the
        uniform Riemann sum over (0, Lambda].
        """
        return float(np.exp(-_z_exponent(self.k_grid, self.G)))


@dataclass(frozen=True)
class GapSolution:
    Delta0: float        # self-consistent gap (same frequency units as params)
    Z0: float
    converged: bool
    iterations: int
    note: str = ""


@dataclass(frozen=True)
class EvolveResult:
    t_over_T: np.ndarray
    Z: np.ndarray
    diverged: bool
    t_abort_over_T: float | None
    final_state: GaussianState
    G_snapshots: np.ndarray | None = None


def _z_exponent(k, G) -> float:
    dk = k[-1] / len(k)
    return float(np.sum(G) * dk / (2.0 * math.pi))


def make_k_grid(Lambda: float, n_k: int = DEFAULT_N_K) -> np.ndarray:
    """Uniform momenta j*Lambda/n, j = 1..n; k = 0 excluded."""
    return (np.arange(1, n_k + 1) / n_k) * Lambda


def solve_gap(params: ModelParams, n_k: int = DEFAULT_N_K,
              max_iter: int = 200, residual_tol: float = 1e-10) -> GapSolution:
    """Self-consistent initial gap: Delta^2 = g0 K Z[G(Delta)].

    Bracketed bisection on log Delta, using the same discrete momentum
    quadrature as the time evolution so the stationarity residual
    vanishes to machine precision on the grid.
    """
    note = ""
    if params.K >= K_CRITICAL:
        note = "K >= 8*pi: cosine irrelevant (KT regime); gap solution unreliable"
    if params.g0 == 0.0:
        return GapSolution(Delta0=0.0, Z0=_z0_of_delta(params, 0.0, n_k),
                           converged=True, iterations=0, note=note)

    k = make_k_grid(params.Lambda, n_k)

    def residual(delta: float) -> float:
        G = (params.K / 2.0) / np.sqrt(k * k + delta * delta)
        Z = math.exp(-_z_exponent(k, G))
        return delta * delta - params.g0 * params.K * Z

    scale = math.sqrt(params.g0 * params.K)
    lo = math.log(scale * 1e-150 + 1e-300)
    hi = math.log(scale + params.Lambda + 1.0)
    if residual(math.exp(lo)) > 0:
        # no positive-gap solution besides Delta = 0
        return GapSolution(Delta0=0.0, Z0=_z0_of_delta(params, 0.0, n_k),
                           converged=True, iterations=0,
                           note=note or "no positive gap solution; Delta0 = 0")
    it = 0
    while it < max_iter:
        mid = 0.5 * (lo + hi)
        if residual(math.exp(mid)) > 0:
            hi = mid
        else:
            lo = mid
        it += 1
        if abs(residual(math.exp(0.5 * (lo + hi)))) <= residual_tol * max(scale**2, 1e-30):
            break
    delta = math.exp(0.5 * (lo + hi))
    res = residual(delta)
    return GapSolution(Delta0=delta, Z0=_z0_of_delta(params, delta, n_k),
                       converged=abs(res) <= residual_tol * max(scale**2, 1.0),
                       iterations=it, note=note)


def _z0_of_delta(params: ModelParams, delta: float, n_k: int) -> float:
    k = make_k_grid(params.Lambda, n_k)
    G = (params.K / 2.0) / np.sqrt(k * k + delta * delta)
    return math.exp(-_z_exponent(k, G))


def initial_state(params: ModelParams, gap: GapSolution | None = None,
                  n_k: int = DEFAULT_N_K) -> GaussianState:
    """Stationary gapped state G_k = (K/2)/sqrt(k^2 + Delta0^2), Sigma_k = 0."""
    if gap is None:
        gap = solve_gap(params, n_k)
    k = make_k_grid(params.Lambda, n_k)
    G = (params.K / 2.0) / np.sqrt(k * k + gap.Delta0**2)
    return GaussianState(k_grid=k, G=G, Sigma=np.zeros_like(k), t=0.0)


def evolve(state: GaussianState, params: ModelParams, t_final_periods: float,
           rtol: float = 1e-8, atol: float = 1e-12,
           samples_per_period: int = 4, stop_z_ratio: float | None = None,
           keep_G: bool = False) -> EvolveResult:
    """Integrate the coupled (G_k, Sigma_k) system for a number of drive periods.

    Internally the saddle-point equations are propagated through the
    equivalent complex mode functions u_k with

        u_k'' = -(k^2 + K Z(t) g(t)) u_k,   G_k = |u_k|^2,
        Sigma_k = Re(u_k* u_k') / (2 K G_k),

    which carries the same dynamics (the Wronskian Im(u* u') = -K/2 is
    conserved) without the 1/G^2 stiffness of the raw width equations.
    Z is re-evaluated from |u|^2 inside every right-hand-side call, so
    the global self-consistent coupling is honored at each integrator
    stage.  The run aborts (diverged=True) if any G_k leaves
    [1e-12, 1e+12]; with stop_z_ratio set it also terminates once
    Z/Z(0) falls below it.
    """
    K = params.K
    lam = params.Lambda / params.gamma
    a0 = params.g0 / params.gamma**2
    a1 = params.g1 / params.gamma**2
    n = len(state.k_grid)
    kap = state.k_grid / params.gamma
    dkap = lam / n
    zfac = dkap / (2.0 * math.pi)
    k2 = kap * kap

    # reduced widths G_hat = gamma*G; mode functions chosen real at t=0
    G0 = state.G * params.gamma
    S0 = state.Sigma / params.gamma
    sq = np.sqrt(G0)
    # y = [Re u, Im u, Re u', Im u']
    y0 = np.concatenate([sq, np.zeros(n),
                         2.0 * K * sq * S0, -K / (2.0 * sq)])
    z0 = math.exp(-float(np.sum(G0)) * zfac)

    def rhs(tau, y):
        ur, ui = y[:n], y[n:2 * n]
        Z = math.exp(-float(np.sum(ur * ur + ui * ui)) * zfac)
        W = k2 + K * Z * (a0 + a1 * math.cos(tau))
        out = np.empty_like(y)
        out[:2 * n] = y[2 * n:]
        out[2 * n:3 * n] = -W * ur
        out[3 * n:] = -W * ui
        return out

    def _G(y):
        return y[:n] * y[:n] + y[n:2 * n] * y[n:2 * n]

    def ev_floor(tau, y):
        return float(np.min(_G(y))) - G_FLOOR
    ev_floor.terminal = True
    ev_floor.direction = -1

    def ev_ceil(tau, y):
        return G_CEIL - float(np.max(_G(y)))
    ev_ceil.terminal = True
    ev_ceil.direction = -1

    events = [ev_floor, ev_ceil]
    if stop_z_ratio is not None:
        def ev_z(tau, y):
            Z = math.exp(-float(np.sum(_G(y))) * zfac)
            return Z / z0 - stop_z_ratio
        ev_z.terminal = True
        ev_z.direction = -1
        events.append(ev_z)

    T = 2.0 * math.pi
    tau_final = t_final_periods * T
    n_samples = max(int(round(t_final_periods * samples_per_period)), 1)
    t_eval = np.linspace(0.0, tau_final, n_samples + 1)

    sol = solve_ivp(rhs, (0.0, tau_final), y0, method="DOP853",
                    t_eval=t_eval, rtol=rtol, atol=atol, events=events,
                    dense_output=False)

    Gs = sol.y[:n] ** 2 + sol.y[n:2 * n] ** 2
    Z = np.exp(-np.sum(Gs, axis=0) * zfac)
    t_over_T = sol.t / T

    diverged = False
    t_abort = None
    if sol.status == 1:  # an event fired
        fired = [i for i, te in enumerate(sol.t_events) if len(te) > 0]
        t_ev = min(float(sol.t_events[i][0]) for i in fired)
        t_abort = t_ev / T
        diverged = any(i < 2 for i in fired)
    elif sol.status != 0:
        diverged = True
        t_abort = float(sol.t[-1]) / T if len(sol.t) else 0.0

    if sol.y.shape[1]:
        ur, ui = sol.y[:n, -1], sol.y[n:2 * n, -1]
        vr, vi = sol.y[2 * n:3 * n, -1], sol.y[3 * n:, -1]
        G_fin = np.maximum(ur * ur + ui * ui, G_FLOOR)
        S_fin = (ur * vr + ui * vi) / (2.0 * K * G_fin)
        final = GaussianState(k_grid=state.k_grid, G=G_fin / params.gamma,
                              Sigma=S_fin * params.gamma,
                              t=state.t + sol.t[-1] / params.gamma)
    else:
        final = state
    return EvolveResult(t_over_T=t_over_T, Z=Z, diverged=diverged,
                        t_abort_over_T=t_abort, final_state=final,
                        G_snapshots=Gs / params.gamma if keep_G else None)


@dataclass(frozen=True)
class StabilityVerdict:
    stable: bool
    z_ratio: float         # Z(T_f)/Z(0), or last sampled ratio if aborted
    diverged: bool


#: classification rule used for the variational phase diagrams
Z_RATIO_THRESHOLD = 0.95


def classify(params: ModelParams, T_f: float = 100.0,
             n_k: int = DEFAULT_N_K, rtol: float = 1e-8) -> StabilityVerdict:
    """Stable iff Z(T_f)/Z(0) > 0.95 and the evolution never diverged."""
    state = initial_state(params, n_k=n_k)
    res = evolve(state, params, T_f, rtol=rtol, stop_z_ratio=0.05)
    z0 = res.Z[0]
    ratio = float(res.Z[-1] / z0)
    early_stop = res.t_abort_over_T is not None
    stable = (not res.diverged) and (not early_stop) and ratio > Z_RATIO_THRESHOLD
    return StabilityVerdict(stable=stable, z_ratio=ratio,
                            diverged=res.diverged or early_stop)


def diagram_cell(params: ModelParams, T_f: float = 100.0,
                 n_k: int = DEFAULT_N_K, rtol: float = 1e-8
                 ) -> tuple[bool, float, float]:
    """One evolve per cell: (stable verdict, Z(T_f)/Z(0), tau_d or inf).

    tau_d is capped by the cell budget T_f; cells whose Z never reaches
    1e-3 within T_f report inf.
    """
    state = initial_state(params, n_k=n_k)
    res = evolve(state, params, T_f, rtol=rtol, stop_z_ratio=0.3e-3)
    ratio = float(res.Z[-1] / res.Z[0])
    early = res.t_abort_over_T is not None
    stable = (not res.diverged) and (not early) and ratio > Z_RATIO_THRESHOLD
    tau = _crossing_time(res, 1e-3)
    return stable, ratio, tau


def _crossing_time(res: EvolveResult, threshold: float) -> float:
    """Interpolated time (periods) at which Z/Z(0) first reaches threshold."""
    ratio = res.Z / res.Z[0]
    below = np.nonzero(ratio <= threshold)[0]
    if len(below) == 0:
        if res.t_abort_over_T is None:
            return math.inf
        if res.diverged:
            return float(res.t_abort_over_T)
        t0, r0 = float(res.t_over_T[-1]), float(ratio[-1])
        t1, r1 = float(res.t_abort_over_T), 0.3 * threshold
        frac = (math.log(r0) - math.log(threshold)) / (math.log(r0) - math.log(r1))
        return t0 + frac * (t1 - t0)
    i = int(below[0])
    if i == 0:
        return float(res.t_over_T[0])
    t0, t1 = res.t_over_T[i - 1], res.t_over_T[i]
    r0, r1 = ratio[i - 1], ratio[i]
    frac = (math.log(r0) - math.log(threshold)) / (math.log(r0) - math.log(r1))
    return float(t0 + frac * (t1 - t0))


def decay_time(params: ModelParams, T_max: float = 1e4,
               n_k: int = DEFAULT_N_K, rtol: float = 1e-8,
               samples_per_period: int = 8) -> float:
    """First time (in periods) at which Z falls to 1e-3 of its initial value.

    Returns math.inf if the threshold is not crossed within T_max periods.
    Linearly interpolated between output samples.
    """
    threshold = 1e-3
    state = initial_state(params, n_k=n_k)
    res = evolve(state, params, T_max, rtol=rtol,
                 samples_per_period=samples_per_period,
                 stop_z_ratio=0.3 * threshold)
    return _crossing_time(res, threshold)
