"""Command-line front end: reproducible parameter sweeps and plot emission.

One method per scan, configured by a single JSON document.  Outputs are
deterministic: CSV tables, a manifest.json carrying every knob and seed,
a provenance README.txt, and self-contained gnuplot scripts.  Scans are
flushed row by row so an interrupted run resumes and produces output
byte-identical to an uninterrupted one.  Wall-clock timing goes to a
separate timing.txt so the scientific artifacts stay reproducible.

Exit codes: 0 success, 2 config error, 3 missing input, 4 numeric
failure in every cell.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__, floquet, magnus, quadratic, scaling, twa, variational
from .params import ModelParams

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_MISSING = 3
EXIT_NUMERIC = 4


class ConfigError(Exception):
    def __init__(self, field: str, msg: str):
        super().__init__(f"config field {field!r}: {msg}")
        self.field = field


def _load_config(path: str) -> dict:
    if path is None:
        raise ConfigError("--config", "a config file is required")
    if not os.path.exists(path):
        raise FileNotFoundError(path)
    try:
        with open(path) as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigError(f"line {e.lineno}", f"invalid JSON: {e.msg}")


def _need(cfg: dict, field: str, typ, default=None):
    if field not in cfg:
        if default is not None:
            return default
        raise ConfigError(field, "missing")
    v = cfg[field]
    try:
        if typ is list:
            return list(v)
        return typ(v)
    except (TypeError, ValueError):
        raise ConfigError(field, f"expected {typ.__name__}, got {v!r}")


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


class RowWriter:
    """Row-flushed CSV writer with resume support.

    Rows already present in the partial file are kept verbatim; the scan
    skips recomputing them.  finish() renames partial -> final.
    """

    def __init__(self, out_dir: str, name: str, header: list[str]):
        self.final = os.path.join(out_dir, name)
        self.partial = self.final + ".partial"
        self.header = ",".join(header)
        self.done = 0
        existing = []
        if os.path.exists(self.partial):
            with open(self.partial) as f:
                lines = f.read().splitlines()
            if lines and lines[0] == self.header:
                existing = lines[1:]
        self.done = len(existing)
        self._f = open(self.partial, "w")
        self._f.write(self.header + "\n")
        for line in existing:
            self._f.write(line + "\n")
        self._f.flush()

    def write_row(self, values) -> None:
        self._f.write(",".join(_fmt(v) for v in values) + "\n")
        self._f.flush()

    def finish(self) -> str:
        self._f.close()
        os.replace(self.partial, self.final)
        return self.final


def _write_manifest(out_dir: str, method: str, config: dict, extras: dict | None = None):
    doc = {"tool": "kapitza", "version": __version__, "method": method,
           "config": config}
    if extras:
        doc.update(extras)
    with open(os.path.join(out_dir, "manifest.json"), "w") as f:
        json.dump(doc, f, indent=2, sort_keys=True)
        f.write("\n")


def _write_readme(out_dir: str, text: str):
    with open(os.path.join(out_dir, "README.txt"), "w") as f:
        f.write(text)


def _write_timing(out_dir: str, seconds: float):
    with open(os.path.join(out_dir, "timing.txt"), "w") as f:
        f.write(f"wall_time_seconds: {seconds:.3f}\n")


def _parallel_rows(worker, row_inputs, threads: int, skip: int):
    """Evaluate row_inputs[skip:] with a thread pool, preserving order."""
    todo = row_inputs[skip:]
    if threads <= 1 or not todo:
        for x in todo:
            yield worker(x)
        return
    with ThreadPoolExecutor(max_workers=threads) as ex:
        yield from ex.map(worker, todo)


# ---------------------------------------------------------------- pendulum

def cmd_pendulum(cfg: dict, out_dir: str, threads: int, seed: int) -> int:
    g0r = _need(cfg, "g0_range", list, [0.0, 0.6])
    g1r = _need(cfg, "g1_range", list, [0.0, 1.0])
    res = _need(cfg, "resolution", int, 60)
    steps = _need(cfg, "steps_per_period", int, floquet.DEFAULT_STEPS)
    g0s = np.linspace(g0r[0], g0r[1], res)
    g1s = np.linspace(g1r[0], g1r[1], res)

    writer = RowWriter(out_dir, "pendulum.csv",
                       ["g0_over_gamma2", "g1_over_gamma2",
                        "lower_stable", "upper_stable"])

    def row(g0):
        M_lo = floquet.hill_monodromy(g0, g1s, 1.0, steps)
        M_up = floquet.hill_monodromy(-g0, -g1s, 1.0, steps)
        tr_lo = np.abs(M_lo[..., 0, 0] + M_lo[..., 1, 1])
        tr_up = np.abs(M_up[..., 0, 0] + M_up[..., 1, 1])
        return (tr_lo <= 2 + floquet.TRACE_TOL, tr_up <= 2 + floquet.TRACE_TOL)

    skip = writer.done // res
    for i, (st_lo, st_up) in enumerate(_parallel_rows(row, list(g0s), threads, skip)):
        for j in range(res):
            writer.write_row((float(g0s[skip + i]), float(g1s[j]),
                              bool(st_lo[j]), bool(st_up[j])))
    writer.finish()
    _write_manifest(out_dir, "pendulum",
                    {"g0_range": g0r, "g1_range": g1r, "resolution": res,
                     "steps_per_period": steps, "trace_tol": floquet.TRACE_TOL})
    _write_readme(out_dir, "Fixed-point stability of the driven pendulum over "
                           "(g0, g1)/gamma^2.\nColumns: lower/upper extremum "
                           "monodromy verdicts (1 = stable).\n")
    _emit_heatmap_script(out_dir, "pendulum.csv", "g0/gamma^2", "g1/gamma^2",
                         value_col=3, name="pendulum.gp")
    return EXIT_OK


# --------------------------------------------------------------- quadratic

def cmd_quadratic(cfg: dict, out_dir: str, threads: int, seed: int) -> int:
    x_axis = _need(cfg, "x_axis", str, "Kg0_over_gamma2")
    if x_axis not in ("Kg0_over_gamma2", "Lambda_over_gamma"):
        raise ConfigError("x_axis", "must be Kg0_over_gamma2 or Lambda_over_gamma")
    xr = _need(cfg, "x_range", list, [0.0, 0.5])
    yr = _need(cfg, "y_range", list, [0.0, 0.6])
    fixed = _need(cfg, "fixed", float, 0.1)
    K = _need(cfg, "K", float, 1.0)
    res = _need(cfg, "resolution", int, 50)
    n_modes = _need(cfg, "n_modes", int, quadratic.DEFAULT_N_MODES)
    steps = _need(cfg, "steps_per_period", int, floquet.DEFAULT_STEPS)

    xs = np.linspace(xr[0], xr[1], res)
    ys = np.linspace(yr[0], yr[1], res)
    writer = RowWriter(out_dir, "quadratic.csv",
                       [x_axis, "Kg1_over_gamma2", "stable_exact",
                        "stable_analytic", "growth_exponent", "worst_q"])

    def row(x):
        out = []
        for y in ys:
            if x_axis == "Kg0_over_gamma2":
                kg0, lam = float(x), fixed
            else:
                kg0, lam = fixed, max(float(x), 1e-6)
            p = ModelParams.from_reduced(K=K, kg0=kg0, kg1=float(y), lam=lam)
            try:
                grid = quadratic.ModeGrid.uniform(p.Lambda, n_modes,
                                                  include_zero_gapped=p.g0 > 0)
                v = quadratic.chain_stability_exact(p, grid, steps)
                out.append((v.stable, quadratic.chain_stability_analytic(p),
                            v.max_growth, v.worst_q / p.gamma))
            except Exception:
                out.append((False, quadratic.chain_stability_analytic(p),
                            math.nan, math.nan))
        return out

    skip = writer.done // res
    for i, cells in enumerate(_parallel_rows(row, list(xs), threads, skip)):
        x = xs[skip + i]
        for y, rec in zip(ys, cells):
            writer.write_row((float(x), float(y)) + tuple(rec))
    writer.finish()
    _write_manifest(out_dir, "quadratic",
                    {"x_axis": x_axis, "x_range": xr, "y_range": yr,
                     "fixed": fixed, "K": K, "resolution": res,
                     "n_modes": n_modes, "steps_per_period": steps,
                     "trace_tol": floquet.TRACE_TOL})
    _write_readme(out_dir, "Quadratic-chain stability diagram: one Hill "
                           "equation per momentum mode.\nstable_exact = "
                           "monodromy over all modes; stable_analytic = "
                           "leading-band closed form.\n")
    _emit_heatmap_script(out_dir, "quadratic.csv", x_axis, "K g1/gamma^2",
                         value_col=3, name="quadratic.gp")
    return EXIT_OK


# ------------------------------------------------------------------ magnus

def cmd_magnus(cfg: dict, out_dir: str, threads: int, seed: int) -> int:
    pdict = _need(cfg, "params", dict)
    try:
        p = ModelParams.from_dict(pdict)
    except (KeyError, ValueError) as e:
        raise ConfigError("params", str(e))
    rep = magnus.report(p)
    text = json.dumps(rep, indent=2, sort_keys=True)
    print(text)
    with open(os.path.join(out_dir, "magnus.json"), "w") as f:
        f.write(text + "\n")
    _write_manifest(out_dir, "magnus", {"params": pdict})
    _write_readme(out_dir, "High-frequency effective-Hamiltonian coefficients "
                           "and time-ordered integral identities.\n")
    return EXIT_OK


# ------------------------------------------------------------- variational

def cmd_variational(cfg: dict, out_dir: str, threads: int, seed: int) -> int:
    mode = _need(cfg, "mode", str, "diagram")
    K = _need(cfg, "K", float)
    n_k = _need(cfg, "n_k", int, variational.DEFAULT_N_K)
    rtol = _need(cfg, "rtol", float, 1e-8)

    if mode == "series":
        kg0 = _need(cfg, "Kg0_over_gamma2", float)
        kg1 = _need(cfg, "Kg1_over_gamma2", float)
        lam = _need(cfg, "Lambda_over_gamma", float)
        T_f = _need(cfg, "T_f", float, 100.0)
        p = ModelParams.from_reduced(K=K, kg0=kg0, kg1=kg1, lam=lam)
        state = variational.initial_state(p, n_k=n_k)
        r = variational.evolve(state, p, T_f, rtol=rtol)
        with open(os.path.join(out_dir, "variational_series.csv"), "w") as f:
            f.write("t_over_T,Z_ratio\n")
            for t, z in zip(r.t_over_T, r.Z / r.Z[0]):
                f.write(f"{_fmt(float(t))},{_fmt(float(z))}\n")
        _write_manifest(out_dir, "variational", dict(cfg),
                        {"n_k": n_k, "rtol": rtol})
        _write_readme(out_dir, "Suppression factor Z(t)/Z(0) from the "
                               "self-consistent Gaussian dynamics.\n")
        return EXIT_OK

    if mode != "diagram":
        raise ConfigError("mode", "must be 'series' or 'diagram'")
    xr = _need(cfg, "x_range", list, [0.0, 0.4])
    yr = _need(cfg, "y_range", list, [0.0, 0.5])
    res = _need(cfg, "resolution", int, 20)
    lam = _need(cfg, "Lambda_over_gamma", float)
    T_f = _need(cfg, "T_f", float, 100.0)
    xs = np.linspace(xr[0], xr[1], res)
    ys = np.linspace(yr[0], yr[1], res)
    writer = RowWriter(out_dir, "variational.csv",
                       ["Kg0_over_gamma2", "Kg1_over_gamma2", "stable",
                        "z_ratio", "tau_d_over_T"])

    failures = [0]

    def row(x):
        out = []
        for y in ys:
            p = ModelParams.from_reduced(K=K, kg0=float(x), kg1=float(y), lam=lam)
            try:
                stable, zr, tau = variational.diagram_cell(p, T_f, n_k, rtol)
                out.append((stable, zr, tau))
            except Exception:
                failures[0] += 1
                out.append((False, math.nan, math.nan))
        return out

    skip = writer.done // res
    for i, cells in enumerate(_parallel_rows(row, list(xs), threads, skip)):
        x = xs[skip + i]
        for y, rec in zip(ys, cells):
            writer.write_row((float(x), float(y)) + tuple(rec))
    writer.finish()
    _write_manifest(out_dir, "variational",
                    {"mode": mode, "K": K, "x_range": xr, "y_range": yr,
                     "resolution": res, "Lambda_over_gamma": lam, "T_f": T_f,
                     "n_k": n_k, "rtol": rtol,
                     "z_threshold": variational.Z_RATIO_THRESHOLD})
    _write_readme(out_dir, "Self-consistent Gaussian stability diagram.\n"
                           "stable: Z(T_f)/Z(0) > 0.95 and no divergence; "
                           "tau_d_over_T: Z -> 1e-3 crossing (inf if none).\n")
    _emit_heatmap_script(out_dir, "variational.csv", "K g0/gamma^2",
                         "K g1/gamma^2", value_col=3, name="variational.gp")
    if failures[0] >= res * res:
        return EXIT_NUMERIC
    return EXIT_OK


# --------------------------------------------------------------------- twa

def cmd_twa(cfg: dict, out_dir: str, threads: int, seed: int) -> int:
    mode = _need(cfg, "mode", str, "scan")
    L = _need(cfg, "L", float, 200.0)
    N = _need(cfg, "N", int, 400)
    K = _need(cfg, "K", float)
    lam = _need(cfg, "Lambda_over_gamma", float)
    kg0 = _need(cfg, "Kg0_over_gamma2", float, 0.0)
    n_traj = _need(cfg, "n_traj", int, 100)
    t_final = _need(cfg, "t_final_periods", float, 100.0)
    spp = _need(cfg, "samples_per_period", int, 8)
    spec = twa.LatticeSpec(L=L, N=N)
    gamma = spec.cutoff / lam

    def params_for(kg1: float) -> ModelParams:
        return ModelParams(K=K, g0=kg0 * gamma**2 / K, g1=kg1 * gamma**2 / K,
                           gamma=gamma, Lambda=spec.cutoff)

    if mode == "series":
        kg1 = _need(cfg, "Kg1_over_gamma2", float)
        stats = twa.run_ensemble(spec, params_for(kg1), n_traj, t_final,
                                 base_seed=seed, samples_per_period=spp)
        with open(os.path.join(out_dir, "twa_series.csv"), "w") as f:
            f.write("t_over_T,sigma_kin,mean_cos2phi\n")
            for t, s, c in zip(stats.t_over_T, stats.sigma_kin, stats.cos2phi):
                f.write(f"{_fmt(float(t))},{_fmt(float(s))},{_fmt(float(c))}\n")
        _write_manifest(out_dir, "twa", dict(cfg), {"base_seed": seed,
                                                    "gamma": gamma})
        _write_readme(out_dir, "Semiclassical ensemble time series.\n")
        _emit_series_script(out_dir, "twa_series.csv")
        return EXIT_OK

    if mode != "scan":
        raise ConfigError("mode", "must be 'series' or 'scan'")
    kg1s = cfg.get("Kg1_values")
    if kg1s is None:
        r = _need(cfg, "Kg1_range", list)
        npts = _need(cfg, "n_points", int, 25)
        kg1s = np.linspace(r[0], r[1], npts).tolist()
    writer = RowWriter(out_dir, "twa_scan.csv",
                       ["Kg1_over_gamma2", "sigma_final", "d_sigma",
                        "delta_cos", "blowup_fraction"])

    def point(kg1):
        stats = twa.run_ensemble(spec, params_for(float(kg1)), n_traj, t_final,
                                 base_seed=seed, samples_per_period=spp)
        return stats.sigma_final, stats.delta_cos, stats.blowup_fraction

    results = []
    # derivative column needs neighbors, so gather rows first (still resumable
    # at the final write because the compute is deterministic)
    skip = writer.done
    cached = _read_partial_rows(writer)
    for vals in _parallel_rows(point, list(kg1s), threads, skip):
        results.append(vals)
    all_res = cached + results
    sig = np.array([r[0] for r in all_res])
    dsig = np.gradient(np.where(np.isfinite(sig), sig, np.nan),
                       np.array(kg1s, dtype=float))
    # rewrite the whole table (cheap) so d_sigma is consistent
    writer._f.close()
    with open(writer.partial, "w") as f:
        f.write(writer.header + "\n")
        for kg1, (sf, dc, bf), ds in zip(kg1s, all_res, dsig):
            f.write(",".join(_fmt(v) for v in
                             (float(kg1), sf, float(ds), dc, bf)) + "\n")
    os.replace(writer.partial, writer.final)
    _write_manifest(out_dir, "twa",
                    {"mode": mode, "L": L, "N": N, "K": K,
                     "Lambda_over_gamma": lam, "Kg0_over_gamma2": kg0,
                     "n_traj": n_traj, "t_final_periods": t_final,
                     "samples_per_period": spp, "Kg1_values": list(map(float, kg1s))},
                    {"base_seed": seed, "gamma": gamma,
                     "blowup_limit": twa.BLOWUP_LIMIT})
    _write_readme(out_dir, "Drive-amplitude scan of the semiclassical "
                           "ensemble observables.\n")
    _emit_scan_script(out_dir, "twa_scan.csv")
    return EXIT_OK


def _read_partial_rows(writer: RowWriter):
    """Parse sigma_final/delta_cos/blowup rows already present in a partial scan."""
    rows = []
    # RowWriter re-wrote existing lines into the open partial; read them back
    with open(writer.partial) as f:
        lines = f.read().splitlines()[1:]
    for line in lines:
        parts = line.split(",")
        rows.append((float(parts[1]), float(parts[3]), float(parts[4])))
    return rows


# ------------------------------------------------------------- fit-scaling

def cmd_fit_scaling(cfg: dict, out_dir: str, threads: int, seed: int) -> int:
    if "g_c_values" in cfg:
        T_vals = _need(cfg, "T_values", list)
        g_vals = _need(cfg, "g_c_values", list)
        curves = None
    else:
        scans = _need(cfg, "scans", list)
        T_vals, g_vals, curves = [], [], []
        for entry in scans:
            T = float(entry["T"])
            path = entry["csv"]
            if not os.path.exists(path):
                raise FileNotFoundError(path)
            data = np.genfromtxt(path, delimiter=",", names=True)
            g = np.atleast_1d(data["Kg1_over_gamma2"])
            dc = np.atleast_1d(data["delta_cos"])
            j = int(np.nanargmax(dc))
            T_vals.append(T)
            g_vals.append(float(g[j]))
            curves.append((g, dc))
    fit = scaling.finite_time_fit(T_vals, g_vals)
    out = {"T_values": [float(t) for t in fit.T_values],
           "g_c_values": [float(v) for v in fit.g_c_values],
           "g_c_inf": fit.g_c_inf, "A": fit.A,
           "residual": fit.residual, "reliable": fit.reliable}
    text = json.dumps(out, indent=2, sort_keys=True)
    print(text)
    with open(os.path.join(out_dir, "scaling_fit.json"), "w") as f:
        f.write(text + "\n")
    if curves:
        collapsed = scaling.collapse_curves(T_vals, [c[0] for c in curves],
                                            [c[1] for c in curves], fit)
        with open(os.path.join(out_dir, "collapsed.csv"), "w") as f:
            f.write("T_fin,g_minus_gc,observable\n")
            for T, (gx, ob) in zip(T_vals, collapsed):
                for a, b in zip(gx, ob):
                    f.write(f"{_fmt(float(T))},{_fmt(float(a))},{_fmt(float(b))}\n")
    _write_manifest(out_dir, "fit-scaling", dict(cfg))
    _write_readme(out_dir, "Finite-time scaling fit g_c(T) = g_c_inf*(1 + A/T) "
                           "and collapsed curves.\n")
    return EXIT_OK


# -------------------------------------------------------------------- plot

GNUPLOT_HEATMAP = """\
# gnuplot script: phase-diagram heatmap (auto-generated)
set datafile separator ','
set xlabel '{xlabel}'
set ylabel '{ylabel}'
set view map
set palette defined (0 'white', 1 'steelblue')
splot '{csv}' skip 1 using 1:2:{col} with points pt 5 ps 1.2 palette notitle
pause -1
"""

GNUPLOT_TAU = """\
# gnuplot script: decay time vs drive, log-log with slope -1 reference
set datafile separator ','
set logscale xy
set xlabel 'K g1 / gamma^2'
set ylabel 'tau_d / T'
plot '{csv}' skip 1 using 1:2 with points pt 7 title 'tau_d', \\
     [*:*] 0.1/x with lines dt 2 title 'slope -1'
pause -1
"""

GNUPLOT_SERIES = """\
# gnuplot script: observable time series
set datafile separator ','
set xlabel 't / T'
set ylabel 'sigma_kin'
plot '{csv}' skip 1 using 1:2 with lines title 'sigma_kin', \\
     '{csv}' skip 1 using 1:3 with lines title '<cos 2 phi>'
pause -1
"""

GNUPLOT_SCAN = """\
# gnuplot script: drive-amplitude scan
set datafile separator ','
set xlabel 'K g1 / gamma^2'
plot '{csv}' skip 1 using 1:2 with linespoints title 'sigma_final', \\
     '{csv}' skip 1 using 1:4 with linespoints title 'delta_cos'
pause -1
"""


def _emit_heatmap_script(out_dir, csv_name, xlabel, ylabel, value_col, name):
    with open(os.path.join(out_dir, name), "w") as f:
        f.write(GNUPLOT_HEATMAP.format(csv=csv_name, xlabel=xlabel,
                                       ylabel=ylabel, col=value_col))


def _emit_series_script(out_dir, csv_name):
    with open(os.path.join(out_dir, os.path.splitext(csv_name)[0] + ".gp"), "w") as f:
        f.write(GNUPLOT_SERIES.format(csv=csv_name))


def _emit_scan_script(out_dir, csv_name):
    with open(os.path.join(out_dir, os.path.splitext(csv_name)[0] + ".gp"), "w") as f:
        f.write(GNUPLOT_SCAN.format(csv=csv_name))


def cmd_plot(args) -> int:
    csv = args.csv
    if not os.path.exists(csv):
        print(f"missing input CSV: {csv}", file=sys.stderr)
        return EXIT_MISSING
    out_dir = args.out_dir or os.path.dirname(os.path.abspath(csv))
    base = os.path.basename(csv)
    rel = os.path.relpath(csv, out_dir)
    script = os.path.join(out_dir, os.path.splitext(base)[0] + ".gp")
    kind = args.kind
    if kind == "heatmap":
        body = GNUPLOT_HEATMAP.format(csv=rel, xlabel=args.xlabel or "x",
                                      ylabel=args.ylabel or "y", col=3)
    elif kind == "tau-d":
        body = GNUPLOT_TAU.format(csv=rel)
    elif kind == "series":
        body = GNUPLOT_SERIES.format(csv=rel)
    elif kind == "scan":
        body = GNUPLOT_SCAN.format(csv=rel)
    else:
        print(f"unknown plot kind: {kind}", file=sys.stderr)
        return EXIT_CONFIG
    with open(script, "w") as f:
        f.write(body)
    print(script)
    return EXIT_OK


# -------------------------------------------------------------------- main

SCAN_COMMANDS = {
    "pendulum": cmd_pendulum,
    "quadratic": cmd_quadratic,
    "magnus": cmd_magnus,
    "variational": cmd_variational,
    "twa": cmd_twa,
    "fit-scaling": cmd_fit_scaling,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="kapitza",
                                 description="Stability sweeps for the driven "
                                             "sine-Gordon chain")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in SCAN_COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", required=True)
        sp.add_argument("--out-dir", default=".")
        sp.add_argument("--threads", type=int, default=1)
        sp.add_argument("--seed", type=int, default=0)
    pp = sub.add_parser("plot")
    pp.add_argument("kind", choices=["heatmap", "tau-d", "series", "scan"])
    pp.add_argument("csv")
    pp.add_argument("--out-dir", default=None)
    pp.add_argument("--xlabel", default=None)
    pp.add_argument("--ylabel", default=None)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "plot":
        return cmd_plot(args)
    try:
        cfg = _load_config(args.config)
    except FileNotFoundError as e:
        print(f"missing input: {e}", file=sys.stderr)
        return EXIT_MISSING
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    os.makedirs(args.out_dir, exist_ok=True)
    t0 = time.monotonic()
    try:
        code = SCAN_COMMANDS[args.command](cfg, args.out_dir, args.threads,
                                           args.seed)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except FileNotFoundError as e:
        print(f"missing input: {e}", file=sys.stderr)
        return EXIT_MISSING
    _write_timing(args.out_dir, time.monotonic() - t0)
    return code


if __name__ == "__main__":
    sys.exit(main())
