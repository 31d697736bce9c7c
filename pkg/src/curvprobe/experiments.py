"""Experiment runners behind the CLI: one function per experiment kind, CSV output."""
from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ThreadPoolExecutor
from itertools import product

import numpy as np

from . import geometry as geo
from . import magnetic as mag
from .config import ConfigError, ExperimentConfig
from .estimation import position_fi, qfi_cylinder_closed, qfi_pure, qfi_sphere_closed
from .mle import BoundaryHitError, mle_radius, replica_seed, sample_positions
from .probe import (
    SpectralState,
    cylinder_two_level,
    lambda_derivative,
    superposition,
    two_level,
    von_mises_packet,
)
from .spectral import CylinderMode, SphereMode, sphere_quadrature

COLUMNS = {
    "geometry": ["surface", "radius", "torus_r", "torus_R", "u", "v", "xi", "hbar", "mass",
                 "g_uu", "g_uv", "g_vv", "alpha_uu", "alpha_uv", "alpha_vu", "alpha_vv",
                 "mean_curvature", "gaussian_curvature", "V_s", "ricci", "ricci_christoffel",
                 "quantization_gap", "degenerate", "warnings"],
    "qfi-free": ["surface", "probe", "t", "lam", "hbar", "mass", "qfi", "qfi_closed",
                 "mean_energy", "energy_var", "n_modes", "tail_mass", "warnings"],
    "qfi-field": ["surface", "lam", "charge", "field", "hbar", "mass", "a", "k", "m", "gauge_y",
                  "qfi_printed", "qfi_derived", "qfi_numeric", "warnings"],
    "fi-position": ["surface", "probe", "t", "lam", "hbar", "mass", "fi", "qfi", "ratio", "K",
                    "skipped_mass", "warnings"],
    "ratio-scan": ["j", "t", "lam", "gamma", "hbar", "mass", "fi", "qfi", "ratio", "skipped_mass",
                   "warnings"],
    "mle": ["replica", "seed", "n", "t", "lam0", "hbar", "mass", "lam_hat", "warnings"],
}

UNITS = {
    "lengths": "natural units unless hbar/mass overridden; lam, radius, r, R in length",
    "t": "time", "qfi": "1/length^2", "fi": "1/length^2", "V_s": "energy", "ricci": "1/length^2",
    "quantization_gap": "energy", "mean_energy": "energy", "energy_var": "energy^2",
}


def build_probe(cfg: ExperimentConfig) -> SpectralState:
    p, stype = cfg.probe, cfg.surface["type"]
    if p["type"] == "two-level":
        if stype == "sphere":
            return two_level(p["j"], p.get("m", 0), p["alpha"], p["beta"])
        return cylinder_two_level(p["m"], p.get("k", 0.0), p["alpha"], p["beta"])
    if p["type"] == "modes":
        label = SphereMode if stype == "sphere" else CylinderMode
        try:
            return superposition([(label(a, int(b)), complex(re, im)) for a, b, re, im in p["modes"]])
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"probe.modes: {exc}") from exc
    return von_mises_packet(p["kappa"], j_max=p.get("j_max"))


def probe_label(cfg: ExperimentConfig) -> str:
    p = cfg.probe
    return p["type"] + "(" + ",".join(f"{k}={p[k]}" for k in sorted(p) if k != "type") + ")"


def _map(fn, items, threads):
    items = list(items)
    if threads > 1:
        with ThreadPoolExecutor(threads) as ex:
            return list(ex.map(fn, items))
    return [fn(x) for x in items]


def _run_geometry(cfg, threads):
    s = geo.make_surface(cfg.surface["type"], **{k: v for k, v in cfg.surface.items() if k != "type"})
    hbar, mass = cfg.physics["hbar"], cfg.physics["mass"]
    echo = {"surface": s.kind, "radius": cfg.surface.get("radius", ""),
            "torus_r": cfg.surface.get("r", ""), "torus_R": cfg.surface.get("R", "")}

    def row(args):
        u, v, xi = args
        try:
            p = s.canonical((u, v))
        except ValueError as exc:
            raise ConfigError(f"scan.u: {exc}") from exc
        rep = geo.geometry_report(s, p, mass, hbar)
        ricci_fd = geo.ricci_scalar(s, p, method="christoffel")
        warns = ["degenerate chart point"] if rep.degenerate else []
        g, a = rep.metric, rep.shape_operator
        return dict(echo, u=p.u, v=p.v, xi=xi, hbar=hbar, mass=mass,
                    g_uu=g[0, 0], g_uv=g[0, 1], g_vv=g[1, 1],
                    alpha_uu=a[0, 0], alpha_uv=a[0, 1], alpha_vu=a[1, 0], alpha_vv=a[1, 1],
                    mean_curvature=rep.mean_curvature, gaussian_curvature=rep.gaussian_curvature,
                    V_s=rep.surface_potential, ricci=rep.ricci, ricci_christoffel=ricci_fd,
                    quantization_gap=geo.quantization_gap(s, p, xi, mass, hbar),
                    degenerate=int(rep.degenerate), warnings=warns)

    rows = _map(row, product(cfg.scan["u"], cfg.scan["v"], cfg.physics["xi"]), threads)
    return rows, {"rows": len(rows)}


def _run_qfi_free(cfg, threads):
    state = build_probe(cfg)
    hbar, mass = cfg.physics["hbar"], cfg.physics["mass"]
    closed = qfi_sphere_closed if state.surface == "sphere" else qfi_cylinder_closed
    label = probe_label(cfg)

    def row(args):
        t, lam = args
        model = lambda_derivative(state, t, lam, mass, hbar)
        E = state.energies(lam, mass, hbar)
        pr = state.probabilities
        mean = float(pr @ E)
        return dict(surface=state.surface, probe=label, t=t, lam=lam, hbar=hbar, mass=mass,
                    qfi=qfi_pure(model), qfi_closed=closed(state, t, lam, mass, hbar),
                    mean_energy=mean, energy_var=float(pr @ (E - mean) ** 2), n_modes=len(state.modes),
                    tail_mass=state.truncation.get("tail_mass", 0.0), warnings=[])

    rows = _map(row, product(cfg.physics["t"], cfg.physics["lam"]), threads)
    return rows, {"rows": len(rows)}


def _run_qfi_field(cfg, threads):
    ph = cfg.physics
    hbar, mass, Q, B = ph["hbar"], ph["mass"], ph["charge"], ph["field"]
    stype = cfg.surface["type"]
    h = cfg.numerics["fd_step"]
    k, m = cfg.probe.get("k", 1.0), int(cfg.probe.get("m", 0))
    fc = mag.FieldConfig(stype, Q, B, hbar)

    def row(lam):
        if stype == "sphere":
            rep = mag.sphere_ground_qfi(Q, B, lam, hbar)
            num = mag.perturbed_qfi_numeric(lambda x: mag.sphere_ground_state(Q, B, x, hbar), lam, h)
            printed, derived = rep.meta["printed"], rep.meta["derived"]
            warns = rep.warnings + num.warnings
            kk, mm, y = "", 0, fc.gauge(lam)
        else:
            num = mag.perturbed_qfi_numeric(
                lambda x: mag.cylinder_perturbed_state(k, m, Q, B, x, mass, hbar), lam, h)
            printed = mag.cylinder_field_qfi(k, m, Q, B, lam, hbar)
            derived = mag.cylinder_field_qfi_derived(k, m, Q, B, lam, hbar)
            warns = fc.warnings(lam, k) + num.warnings
            kk, mm, y = k, m, fc.gauge(lam, k)
        return dict(surface=stype, lam=lam, charge=Q, field=B, hbar=hbar, mass=mass, a=fc.coupling,
                    k=kk, m=mm, gauge_y=y, qfi_printed=printed, qfi_derived=derived,
                    qfi_numeric=num.value, warnings=warns)

    rows = _map(row, ph["lam"], threads)
    return rows, {"rows": len(rows), "a": fc.coupling}


def _fi_grid(cfg, state):
    if state.surface == "sphere":
        return sphere_quadrature(state.j_max, cfg.numerics.get("n_theta"), cfg.numerics.get("n_phi"))
    return cfg.numerics.get("n_theta")


def _run_fi_position(cfg, threads):
    state = build_probe(cfg)
    hbar, mass = cfg.physics["hbar"], cfg.physics["mass"]
    grid = _fi_grid(cfg, state)
    label = probe_label(cfg)

    def row(args):
        t, lam = args
        model = lambda_derivative(state, t, lam, mass, hbar)
        fi = position_fi(model, grid)
        H = qfi_pure(model)
        K = fi.value * lam**6 * mass**2 / (t**2 * hbar**2) if t else math.nan
        return dict(surface=state.surface, probe=label, t=t, lam=lam, hbar=hbar, mass=mass, fi=fi.value,
                    qfi=H, ratio=fi.value / H if H > 1e-300 else math.nan, K=K,
                    skipped_mass=fi.meta["skipped_mass"], warnings=fi.warnings)

    rows = _map(row, product(cfg.physics["t"], cfg.physics["lam"]), threads)
    return rows, {"rows": len(rows)}


def _run_ratio_scan(cfg, threads):
    hbar, mass = cfg.physics["hbar"], cfg.physics["mass"]
    j_top = max(cfg.scan["j"])
    grid = sphere_quadrature(j_top, cfg.numerics.get("n_theta"), cfg.numerics.get("n_phi"))

    def row(args):
        j, t, lam, gamma = args
        model = lambda_derivative(two_level(int(j), 0, gamma), t, lam, mass, hbar)
        fi = position_fi(model, grid)
        H = qfi_pure(model)
        return dict(j=int(j), t=t, lam=lam, gamma=gamma, hbar=hbar, mass=mass, fi=fi.value, qfi=H,
                    ratio=fi.value / H, skipped_mass=fi.meta["skipped_mass"], warnings=fi.warnings)

    combos = product(cfg.scan["j"], cfg.physics["t"], cfg.physics["lam"], cfg.scan["gamma"])
    rows = _map(row, combos, threads)
    best = {}
    for r in rows:
        key = (r["j"], r["t"], r["lam"])
        best[key] = max(best.get(key, 0.0), r["ratio"])
    return rows, {"rows": len(rows), "max_ratio": {f"j={k[0]},t={k[1]},lam={k[2]}": v for k, v in best.items()}}


def _run_mle(cfg, threads):
    state = build_probe(cfg)
    ph, nu = cfg.physics, cfg.numerics
    hbar, mass, t, lam0 = ph["hbar"], ph["mass"], ph["t"], ph["lam0"]
    n, interval = nu["n_samples"], tuple(nu["interval"])

    def row(r):
        rec = sample_positions(state, t, lam0, n, replica_seed(cfg.seed, r), mass, hbar)
        try:
            est, warns = mle_radius(rec, state, interval, mass, hbar), []
        except BoundaryHitError as exc:
            est, warns = math.nan, [str(exc)]
        return dict(replica=r, seed=f"{cfg.seed}:{r}", n=n, t=t, lam0=lam0, hbar=hbar, mass=mass,
                    lam_hat=est, warnings=warns)

    rows = _map(row, range(nu["replicas"]), threads)
    est = np.array([r["lam_hat"] for r in rows])
    est = est[np.isfinite(est)]
    model = lambda_derivative(state, t, lam0, mass, hbar)
    fisher = position_fi(model).value
    H = qfi_pure(model)
    var = float(np.var(est, ddof=1)) if est.size > 1 else math.nan
    summary = {"rows": len(rows), "mean": float(np.mean(est)) if est.size else math.nan, "variance": var,
               "fisher": fisher, "qfi": H, "var_N_F": var * n * fisher, "var_N_H": var * n * H,
               "boundary_hits": int(len(rows) - est.size)}
    return rows, summary


RUNNERS = {"geometry": _run_geometry, "qfi-free": _run_qfi_free, "qfi-field": _run_qfi_field,
           "fi-position": _run_fi_position, "ratio-scan": _run_ratio_scan, "mle": _run_mle}


def run(cfg: ExperimentConfig, threads: int = 1):
    """Rows (dicts in scan order, schema ``COLUMNS[cfg.kind]``) and a summary dict."""
    cfg.validate()
    return RUNNERS[cfg.kind](cfg, max(1, int(threads)))


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".15e")
    if isinstance(x, (list, tuple)):
        return "; ".join(str(w) for w in x)
    return str(x)


def metadata(cfg: ExperimentConfig) -> dict:
    """Everything needed to rerun: the full effective config, its hash and the seed."""
    return {"kind": cfg.kind, "config_sha256": cfg.digest(), "seed": cfg.seed, "units": UNITS,
            "config": cfg.to_dict()}


def emit_csv(rows, path, kind: str, meta: dict) -> None:
    """UTF-8 CSV: one '#'-prefixed JSON metadata line, then header and rows."""
    columns = COLUMNS[kind]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("# " + json.dumps(meta, sort_keys=True, separators=(",", ":")) + "\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for r in rows:
            writer.writerow([_fmt(r.get(c, "")) for c in columns])


def row_warnings(rows) -> list:
    return [w for r in rows for w in r.get("warnings", [])]
