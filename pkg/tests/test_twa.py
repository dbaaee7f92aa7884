"""Semiclassical lattice ensembles: sampling, integrator, transition detection."""

import math

import numpy as np
import pytest

from kapitza import twa
from kapitza.params import ModelParams
from kapitza.twa import LatticeSpec


def make_params(spec, lam=0.1, K=0.4 * math.pi, kg0=0.0, kg1=0.1):
    gamma = spec.cutoff / lam
    return ModelParams(K=K, g0=kg0 * gamma**2 / K, g1=kg1 * gamma**2 / K,
                       gamma=gamma, Lambda=spec.cutoff)


def test_lattice_spec():
    spec = LatticeSpec(L=200.0, N=400)
    assert spec.dx == pytest.approx(0.5)
    assert spec.cutoff == pytest.approx(2.0 * math.pi)
    with pytest.raises(ValueError):
        LatticeSpec(L=10.0, N=5)
    w = spec.dispersion()
    assert w[0] == 0.0
    assert np.max(w) == pytest.approx(2.0 / spec.dx)
    # small-q limit is linear: w ~ q
    q1 = 2.0 * math.pi / spec.L
    assert w[1] == pytest.approx(q1, rel=1e-3)


def test_cutoff_mismatch_rejected():
    spec = LatticeSpec(L=200.0, N=400)
    p = ModelParams(K=1.0, g0=0.0, g1=0.1, gamma=10.0, Lambda=1.0)
    with pytest.raises(ValueError):
        spec.check_cutoff(p)


def test_initial_gradient_energy_matches_mode_sum():
    spec = LatticeSpec(L=100.0, N=200)
    p = make_params(spec)
    n_traj = 100
    phi, _ = twa.sample_batch(spec, p, n_traj, base_seed=42)
    d = (np.roll(phi, -1, axis=1) - phi) / spec.dx
    e = np.mean(d * d, axis=1) / p.K
    # closed form: (1/K)<(grad phi)^2> = (1/2L) sum_{q != 0} wtilde_q
    w = spec.dispersion()
    expected = float(np.sum(w[1:]) / (2.0 * spec.L))
    sem = np.std(e, ddof=1) / math.sqrt(n_traj)
    assert abs(np.mean(e) - expected) < 3.0 * sem


def test_initial_field_variance_matches_mode_sum():
    spec = LatticeSpec(L=100.0, N=200)
    p = make_params(spec)
    delta = 0.3
    phi, pmom = twa.sample_batch(spec, p, 200, base_seed=9, delta=delta)
    w = np.sqrt(spec.dispersion()**2 + delta**2)
    var_phi = float(np.sum(p.K / (2.0 * w)) / spec.L)
    var_p = float(np.sum(w / (2.0 * p.K)) / spec.L)
    assert np.mean(phi**2) == pytest.approx(var_phi, rel=0.1)
    assert np.mean(pmom**2) == pytest.approx(var_p, rel=0.1)


def test_sampling_deterministic_and_seed_scheme():
    spec = LatticeSpec(L=50.0, N=100)
    p = make_params(spec)
    a = twa.sample_initial(spec, p, seed=7)
    b = twa.sample_initial(spec, p, seed=7)
    np.testing.assert_array_equal(a.phi, b.phi)
    phi, _ = twa.sample_batch(spec, p, 4, base_seed=16)
    np.testing.assert_array_equal(phi[3], twa.sample_initial(spec, p, seed=16 ^ 3).phi)


def test_zero_mode_pinned_gapless():
    spec = LatticeSpec(L=50.0, N=100)
    p = make_params(spec)
    f = twa.sample_initial(spec, p, seed=1)
    assert abs(np.mean(f.phi)) < 1e-12
    assert abs(np.mean(f.p)) < 1e-12


def total_energy(phi, p, params, spec, t):
    g = float(params.drive(t))
    d = (np.roll(phi, -1, axis=-1) - phi) / spec.dx
    dens = 0.5 * params.K * p * p + d * d / (2.0 * params.K) - g * np.cos(phi)
    return float(np.mean(dens))


def test_leapfrog_energy_conservation_undriven():
    spec = LatticeSpec(L=50.0, N=100)
    gamma = spec.cutoff / 0.1
    p = ModelParams(K=1.0, g0=0.5 * gamma**2, g1=0.0, gamma=gamma,
                    Lambda=spec.cutoff)
    f = twa.sample_initial(spec, p, seed=3)
    e0 = total_energy(f.phi, f.p, p, spec, 0.0)
    times, phis, ps = twa.evolve_leapfrog(f, p, spec, t_final=20.0 * p.period)
    e1 = total_energy(phis[-1], ps[-1], p, spec, times[-1])
    assert abs(e1 - e0) < 2e-4 * abs(e0)


def test_leapfrog_matches_harmonic_oracle():
    """Tiny amplitude: the lattice reduces to exactly solvable normal modes."""
    spec = LatticeSpec(L=50.0, N=100)
    gamma = spec.cutoff / 0.1
    p = ModelParams(K=1.0, g0=0.0, g1=0.0, gamma=gamma, Lambda=spec.cutoff)
    eps = 1e-6
    q = 2.0 * math.pi * 5 / spec.L
    x = spec.dx * np.arange(spec.N)
    f = twa.LatticeField(phi=eps * np.cos(q * x), p=np.zeros(spec.N))
    w = (2.0 / spec.dx) * abs(math.sin(q * spec.dx / 2.0))
    t_final = 3.7
    _, phis, _ = twa.evolve_leapfrog(f, p, spec, t_final=t_final, n_samples=1,
                                     dt=1e-3)
    expected = eps * math.cos(w * t_final) * np.cos(q * x)
    np.testing.assert_allclose(phis[-1], expected, atol=eps * 1e-3)


def test_segment_composition():
    spec = LatticeSpec(L=50.0, N=100)
    p = make_params(spec, kg1=0.2)
    f = twa.sample_initial(spec, p, seed=5)
    dt = twa.default_dt(spec, p)
    phi1, p1 = f.phi.copy(), f.p.copy()
    twa.evolve_segment(phi1, p1, 0.0, 64, dt, spec, p)
    phi2, p2 = f.phi.copy(), f.p.copy()
    t = twa.evolve_segment(phi2, p2, 0.0, 32, dt, spec, p)
    twa.evolve_segment(phi2, p2, t, 32, dt, spec, p)
    np.testing.assert_allclose(phi1, phi2, rtol=1e-10, atol=1e-12)
    np.testing.assert_allclose(p1, p2, rtol=1e-10, atol=1e-12)


def test_dt_guard():
    spec = LatticeSpec(L=50.0, N=100)
    p = make_params(spec)
    f = twa.sample_initial(spec, p, seed=1)
    with pytest.raises(ValueError):
        twa.evolve_leapfrog(f, p, spec, t_final=1.0, dt=1.0 / spec.cutoff)


def test_run_ensemble_deterministic():
    spec = LatticeSpec(L=50.0, N=100)
    p = make_params(spec, kg1=0.1)
    s1 = twa.run_ensemble(spec, p, n_traj=8, t_final_periods=5.0, base_seed=2)
    s2 = twa.run_ensemble(spec, p, n_traj=8, t_final_periods=5.0, base_seed=2)
    np.testing.assert_array_equal(s1.sigma_kin, s2.sigma_kin)
    np.testing.assert_array_equal(s1.cos2phi, s2.cos2phi)
    assert s1.sigma_kin[0] == 0.0
    assert len(s1.t_over_T) == 5 * 8 + 1


def test_stable_drive_keeps_energy_bounded():
    spec = LatticeSpec(L=50.0, N=100)
    p = make_params(spec, kg1=0.05)
    s = twa.run_ensemble(spec, p, n_traj=8, t_final_periods=30.0, base_seed=4)
    assert s.blowup_fraction == 0.0
    assert np.max(np.abs(s.sigma_kin)) < 2.0


def test_strong_drive_absorbs_energy():
    spec = LatticeSpec(L=50.0, N=100)
    p = make_params(spec, kg1=0.8)
    s = twa.run_ensemble(spec, p, n_traj=8, t_final_periods=30.0, base_seed=4)
    assert s.sigma_final > 10.0 or s.blowup_fraction > 0.0


def synthetic_scan(gc=0.35, n=25):
    g = np.linspace(0.1, 0.6, n)
    out = []
    for x in g:
        sig = 0.05 if x < gc else 0.05 + 40.0 * (x - gc)
        dco = 0.2 + 1.5 * math.exp(-((x - gc) / 0.04)**2)
        stats = twa.EnsembleStats(n_traj=4, t_over_T=np.zeros(1),
                                  sigma_kin=np.zeros(1), cos2phi=np.zeros(1),
                                  delta_cos=dco, sigma_final=sig,
                                  blowup_fraction=0.0)
        out.append((float(x), stats))
    return out


def test_detect_critical_synthetic():
    scan = synthetic_scan()
    est = twa.detect_critical(scan)
    assert est.found
    assert est.g_c_sigma == pytest.approx(0.35, abs=2 * est.uncertainty)
    assert est.g_c_peak == pytest.approx(0.35, abs=2 * est.uncertainty)


def test_detect_critical_rejects_short_or_unsorted():
    scan = synthetic_scan(n=25)
    with pytest.raises(ValueError):
        twa.detect_critical(scan[:10])
    with pytest.raises(ValueError):
        twa.detect_critical(scan[::-1])


def test_detect_critical_flat_scan_not_found():
    g = np.linspace(0.1, 0.6, 25)
    scan = [(float(x), twa.EnsembleStats(
        n_traj=4, t_over_T=np.zeros(1), sigma_kin=np.zeros(1),
        cos2phi=np.zeros(1), delta_cos=0.2, sigma_final=0.05,
        blowup_fraction=0.0)) for x in g]
    est = twa.detect_critical(scan)
    assert not est.found


def test_oscillation_period_synthetic():
    t = np.arange(0, 120, 0.125)
    y = 0.3 * np.cos(2.0 * math.pi * t / 12.5) + 0.01 * np.cos(2.0 * math.pi * t)
    stats = twa.EnsembleStats(n_traj=4, t_over_T=t, sigma_kin=y,
                              cos2phi=np.zeros_like(t), delta_cos=0.0,
                              sigma_final=0.0, blowup_fraction=0.0)
    assert twa.oscillation_period(stats) == pytest.approx(12.5, abs=0.3)
    bad = twa.EnsembleStats(n_traj=4, t_over_T=t, sigma_kin=y + np.inf,
                            cos2phi=np.zeros_like(t), delta_cos=0.0,
                            sigma_final=0.0, blowup_fraction=0.0)
    with pytest.raises(ValueError):
        twa.oscillation_period(bad)
