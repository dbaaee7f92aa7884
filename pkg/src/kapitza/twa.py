"""Truncated-Wigner semiclassical dynamics on the lattice.

Classical sine-Gordon equations of motion,

    dphi_i/dt = K P_i
    dP_i/dt   = (1/K) (phi_{i+1} - 2 phi_i + phi_{i-1}) / dx^2 - g(t) sin(phi_i)

integrated with a time-symmetric kick-drift-kick splitting, over an
ensemble of initial conditions drawn from the Gaussian Wigner function
of the undriven ground state.  The absorption order parameter is the
normalized gradient energy sigma_kin = E_kin(t)/E_kin(0) - 1 with
E_kin = (1/K) <(d_x phi)^2>; the companion observable is the oscillation
amplitude of <cos 2 phi> over the late-time window.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .params import ModelParams

BLOWUP_LIMIT = 1e8
DELTA_COS_WINDOW_PERIODS = 30.0


@dataclass(frozen=True)
class LatticeSpec:
    """Periodic lattice: N sites over length L, cutoff pi/dx."""

    L: float
    N: int

    def __post_init__(self):
        if self.N % 2 != 0 or self.N <= 0:
            raise ValueError("N must be positive and even")
        if not (self.L > 0):
            raise ValueError("L must be positive")

    @property
    def dx(self) -> float:
        return self.L / self.N

    @property
    def cutoff(self) -> float:
        return math.pi / self.dx

    def check_cutoff(self, params: ModelParams) -> None:
        if abs(self.cutoff - params.Lambda) > 1e-12 * max(self.cutoff, 1.0):
            raise ValueError(
                f"lattice cutoff pi/dx = {self.cutoff} != params.Lambda = {params.Lambda}")

    def dispersion(self) -> np.ndarray:
        """Lattice frequencies (2/dx)|sin(q dx/2)| for FFT mode indices 0..N-1."""
        k = np.arange(self.N)
        return (2.0 / self.dx) * np.abs(np.sin(math.pi * k / self.N))


@dataclass
class LatticeField:
    phi: np.ndarray
    p: np.ndarray
    t: float = 0.0


@dataclass
class EnsembleStats:
    n_traj: int
    t_over_T: np.ndarray
    sigma_kin: np.ndarray      # ensemble-averaged E_kin(t)/E_kin(0) - 1
    cos2phi: np.ndarray        # ensemble-and-space averaged cos(2 phi)
    delta_cos: float           # max - min of cos2phi over the final window
    sigma_final: float         # sigma_kin at the last sample (+inf if any blow-up)
    blowup_fraction: float
    manifest: dict = field(default_factory=dict)


def _sample_mode_fields(spec: LatticeSpec, variance_of_omega, omega: np.ndarray,
                        rng: np.random.Generator, zero_mode: bool) -> np.ndarray:
    """Real Gaussian field with per-mode variance <|f_q|^2> = variance_of_omega(w_q).

    Continuum normalization <f_i f_j> = (1/L) sum_q v_q exp(iq(x_i-x_j)).
    """
    N = spec.N
    c = np.zeros(N, dtype=complex)
    amp = np.sqrt((N * N / spec.L) * variance_of_omega(omega))
    half = N // 2
    # independent complex modes k = 1..N/2-1; conjugates fill N-k
    re = rng.standard_normal(half - 1)
    im = rng.standard_normal(half - 1)
    c[1:half] = amp[1:half] * (re + 1j * im) / math.sqrt(2.0)
    c[half + 1:] = np.conj(c[1:half][::-1])
    # self-conjugate modes k = 0 and k = N/2 are real
    g0_draw = rng.standard_normal()
    c[half] = amp[half] * rng.standard_normal()
    if zero_mode:
        c[0] = amp[0] * g0_draw
    return np.fft.ifft(c).real


def sample_initial(spec: LatticeSpec, params: ModelParams,
                   delta: float = 0.0, seed: int = 0) -> LatticeField:
    """Draw one trajectory from the Gaussian ground-state Wigner ensemble.

    Mode variances <|phi_q|^2> = K/(2 w_q), <|P_q|^2> = w_q/(2K) with
    w_q = sqrt(wtilde_q^2 + delta^2) and wtilde_q the lattice dispersion.
    delta = 0 selects the gapless ensemble (zero mode pinned to zero).
    """
    rng = np.random.default_rng(seed)
    wt = spec.dispersion()
    omega = np.sqrt(wt * wt + delta * delta)
    gapless = delta == 0.0
    if gapless:
        omega[0] = 1.0  # placeholder; zero mode is dropped below
    K = params.K
    phi = _sample_mode_fields(spec, lambda w: K / (2.0 * w), omega, rng,
                              zero_mode=not gapless)
    p = _sample_mode_fields(spec, lambda w: w / (2.0 * K), omega, rng,
                            zero_mode=not gapless)
    return LatticeField(phi=phi, p=p, t=0.0)


def sample_batch(spec: LatticeSpec, params: ModelParams, n_traj: int,
                 base_seed: int = 0, delta: float = 0.0
                 ) -> tuple[np.ndarray, np.ndarray]:
    """Stack n_traj independent draws; trajectory i uses seed base_seed ^ i."""
    phi = np.empty((n_traj, spec.N))
    p = np.empty((n_traj, spec.N))
    for i in range(n_traj):
        f = sample_initial(spec, params, delta=delta, seed=base_seed ^ i)
        phi[i] = f.phi
        p[i] = f.p
    return phi, p


def default_dt(spec: LatticeSpec, params: ModelParams) -> float:
    """Resolve both the drive (T/256) and the band-edge mode (0.1/Lambda)."""
    return min(params.period / 256.0, 0.1 / spec.cutoff)


def _force(phi: np.ndarray, g: float, K: float, dx2: float) -> np.ndarray:
    lap = np.roll(phi, -1, axis=-1) - 2.0 * phi + np.roll(phi, 1, axis=-1)
    return lap / (K * dx2) - g * np.sin(phi)


def evolve_segment(phi: np.ndarray, p: np.ndarray, t0: float, n_steps: int,
                   dt: float, spec: LatticeSpec, params: ModelParams) -> float:
    """Advance fields in place by n_steps of kick-drift-kick; returns the new time."""
    K = params.K
    dx2 = spec.dx**2
    p += (0.5 * dt) * _force(phi, float(params.drive(t0)), K, dx2)
    t = t0
    for i in range(1, n_steps + 1):
        phi += (dt * K) * p
        t = t0 + i * dt
        w = dt if i < n_steps else 0.5 * dt
        p += w * _force(phi, float(params.drive(t)), K, dx2)
    return t


def evolve_leapfrog(field: LatticeField, params: ModelParams, spec: LatticeSpec,
                    t_final: float, dt: float | None = None,
                    n_samples: int = 64):
    """Single-trajectory evolution; returns (times, phi snapshots, p snapshots)."""
    if dt is None:
        dt = default_dt(spec, params)
    if dt > 0.1 / spec.cutoff * (1 + 1e-12):
        raise ValueError("dt too large for the band-edge mode: need dt <= 0.1/Lambda")
    seg = t_final / n_samples
    n_sub = max(int(math.ceil(seg / dt)), 1)
    dt_eff = seg / n_sub
    phi = field.phi.copy()
    p = field.p.copy()
    times = [field.t]
    phis = [phi.copy()]
    ps = [p.copy()]
    t = field.t
    for _ in range(n_samples):
        t = evolve_segment(phi, p, t, n_sub, dt_eff, spec, params)
        if not np.all(np.isfinite(phi)) or np.max(np.abs(phi)) > BLOWUP_LIMIT:
            raise FloatingPointError(f"trajectory blew up at t = {t}")
        times.append(t)
        phis.append(phi.copy())
        ps.append(p.copy())
    return np.array(times), np.array(phis), np.array(ps)


def _grad_energy(phi: np.ndarray, spec: LatticeSpec, K: float) -> np.ndarray:
    """Per-trajectory space-averaged (1/K)<(d_x phi)^2> (forward difference)."""
    d = (np.roll(phi, -1, axis=-1) - phi) / spec.dx
    return np.mean(d * d, axis=-1) / K


def run_ensemble(spec: LatticeSpec, params: ModelParams, n_traj: int,
                 t_final_periods: float, base_seed: int = 0,
                 samples_per_period: int = 8, delta: float = 0.0,
                 dt: float | None = None,
                 window_periods: float = DELTA_COS_WINDOW_PERIODS) -> EnsembleStats:
    """Ensemble-averaged observables over t_final_periods drive periods.

    Trajectories are evolved as one batch; blown-up trajectories are
    removed from subsequent averages and force sigma_final = +inf.
    """
    if n_traj < 4:
        raise ValueError("need at least 4 trajectories")
    spec.check_cutoff(params)
    if dt is None:
        dt = default_dt(spec, params)
    T = params.period
    seg = T / samples_per_period
    n_sub = max(int(math.ceil(seg / dt)), 1)
    dt_eff = seg / n_sub
    n_samples = int(round(t_final_periods * samples_per_period))

    phi, p = sample_batch(spec, params, n_traj, base_seed, delta)
    alive = np.ones(n_traj, dtype=bool)

    K = params.K
    e0 = _grad_energy(phi, spec, K)        # per trajectory at t = 0
    e0_mean = float(np.mean(e0))

    t_over_T = np.zeros(n_samples + 1)
    sigma = np.zeros(n_samples + 1)
    cos2 = np.zeros(n_samples + 1)
    sigma[0] = 0.0
    cos2[0] = float(np.mean(np.cos(2.0 * phi)))

    for s in range(1, n_samples + 1):
        # evolve the full batch in place; dead rows hold zeros and stay cheap
        t = (s - 1) * seg
        t_new = evolve_segment(phi, p, t, n_sub, dt_eff, spec, params)
        bad = ~np.all(np.isfinite(phi), axis=-1) | (np.max(np.abs(phi), axis=-1) > BLOWUP_LIMIT)
        newly_dead = bad & alive
        if np.any(newly_dead):
            alive &= ~bad
            phi[~alive] = 0.0
            p[~alive] = 0.0
        t_over_T[s] = t_new / T
        if np.any(alive):
            sigma[s] = float(np.mean(_grad_energy(phi[alive], spec, K))) / e0_mean - 1.0
            cos2[s] = float(np.mean(np.cos(2.0 * phi[alive])))
        else:
            sigma[s] = math.inf
            cos2[s] = math.nan

    blowup_fraction = float(np.mean(~alive))
    in_window = t_over_T >= t_final_periods - window_periods
    w = cos2[in_window]
    delta_cos = float(np.nanmax(w) - np.nanmin(w)) if np.any(np.isfinite(w)) else math.nan
    sigma_final = math.inf if blowup_fraction > 0 else float(sigma[-1])
    return EnsembleStats(
        n_traj=n_traj, t_over_T=t_over_T, sigma_kin=sigma, cos2phi=cos2,
        delta_cos=delta_cos, sigma_final=sigma_final,
        blowup_fraction=blowup_fraction,
        manifest={"base_seed": base_seed, "samples_per_period": samples_per_period,
                  "dt": dt_eff, "delta": delta, "L": spec.L, "N": spec.N,
                  "t_final_periods": t_final_periods,
                  "window_periods": window_periods,
                  "params": params.to_dict()})


@dataclass(frozen=True)
class CriticalEstimate:
    g_c_sigma: float | None     # kink of sigma_final (max second difference)
    g_c_peak: float | None      # peak of delta_cos, parabolically refined
    uncertainty: float          # scan spacing
    found: bool


def detect_critical(scan: list[tuple[float, EnsembleStats]]) -> CriticalEstimate:
    """Locate the transition from a sorted drive-amplitude scan.

    Two independent estimators: the maximum second finite difference of
    sigma_final (kink), and the maximum of delta_cos (peak).  Interior
    maxima are required; a flat or monotone scan yields found=False.
    """
    if len(scan) < 20:
        raise ValueError("scan must have at least 20 points")
    g = np.array([x for x, _ in scan])
    if np.any(np.diff(g) <= 0):
        raise ValueError("scan must be sorted by drive amplitude")
    sig = np.array([s.sigma_final for _, s in scan])
    dco = np.array([s.delta_cos for _, s in scan])
    spacing = float(np.max(np.diff(g)))

    g_c_sigma = None
    fin = np.isfinite(sig)
    if np.sum(fin) >= 5:
        gf, sf = g[fin], sig[fin]
        # sigma_final spans decades across the transition; the kink is the
        # maximal second finite difference on a log scale (onset corner)
        ls = np.log(np.maximum(sf, 1e-3))
        d2 = ls[2:] - 2.0 * ls[1:-1] + ls[:-2]
        i = int(np.argmax(d2)) + 1
        if 0 < i < len(gf) - 1 and d2[i - 1] > 0:
            g_c_sigma = float(gf[i])
    if g_c_sigma is None and np.any(~fin) and np.any(fin):
        # kink hidden under blow-up: first blown-up amplitude bounds it
        g_c_sigma = float(g[~fin][0])

    g_c_peak = None
    ok = np.isfinite(dco)
    if np.sum(ok) >= 3:
        go, do = g[ok], dco[ok]
        j = int(np.argmax(do))
        if 0 < j < len(go) - 1 and do[j] > do[0] and do[j] > do[-1]:
            # parabolic refinement through the three points around the max
            y0, y1, y2 = do[j - 1], do[j], do[j + 1]
            denom = y0 - 2.0 * y1 + y2
            shift = 0.5 * (y0 - y2) / denom if denom != 0 else 0.0
            h = 0.5 * (go[j + 1] - go[j - 1])
            g_c_peak = float(go[j] + shift * h)

    found = g_c_sigma is not None or g_c_peak is not None
    return CriticalEstimate(g_c_sigma=g_c_sigma, g_c_peak=g_c_peak,
                            uncertainty=spacing, found=found)


def oscillation_period(stats: EnsembleStats, f_min: float = 0.02,
                       f_max: float = 0.45) -> float:
    """Dominant oscillation period of sigma_kin, in drive periods.

    Windowed zero-padded FFT of the uniformly sampled trace; the peak is
    sought within (f_min, f_max) cycles per drive period, excluding the
    dc component and the drive harmonic itself.
    """
    t, y = stats.t_over_T, stats.sigma_kin
    if not np.all(np.isfinite(y)):
        raise ValueError("trace contains blow-ups; no well-defined period")
    dt = float(t[1] - t[0])
    yw = (y - np.mean(y)) * np.hanning(len(y))
    n = 4 * len(y)
    power = np.abs(np.fft.rfft(yw, n))
    f = np.fft.rfftfreq(n, d=dt)
    band = (f > f_min) & (f < f_max)
    if not np.any(band):
        raise ValueError("frequency band is empty at this sampling")
    return float(1.0 / f[band][np.argmax(power[band])])
