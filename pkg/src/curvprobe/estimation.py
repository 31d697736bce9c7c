"""Quantum and classical Fisher information for the radius."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .probe import EvolvedModel, SpectralState
from .spectral import QuadratureGrid, angular_grid, harmonics_table, sphere_quadrature

DENSITY_FLOOR = 1e-14
SKIPPED_MASS_WARN = 1e-6


class UndefinedRatioError(ValueError):
    """FI/QFI ratio requested for a model with vanishing QFI."""


@dataclass
class EstimationReport:
    quantity: str
    value: float
    params: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)

    def __float__(self) -> float:
        return float(self.value)

    @property
    def ok(self) -> bool:
        return not self.warnings


def qfi_from_vectors(psi: np.ndarray, dpsi: np.ndarray) -> float:
    """4 (<d|d> - |<psi|d>|^2) for a normalized pure state and its derivative."""
    dd = float(np.vdot(dpsi, dpsi).real)
    ov = np.vdot(psi, dpsi)
    return max(4.0 * (dd - abs(ov) ** 2), 0.0)


def qfi_pure(model: EvolvedModel) -> float:
    return qfi_from_vectors(model.psi, model.dpsi)


def _weights(state_or_probs):
    if isinstance(state_or_probs, SpectralState):
        return state_or_probs.probabilities, state_or_probs.modes
    raise TypeError("expected a SpectralState")


def qfi_sphere_closed(state: SpectralState, t: float, lam: float, mass: float = 1.0,
                      hbar: float = 1.0) -> float:
    """(4 t^2 / (M^2 lam^6 hbar^2)) Var(J^2) with J^2 eigenvalue hbar^2 j(j+1)."""
    p, modes = _weights(state)
    j2 = hbar**2 * np.array([md.j * (md.j + 1) for md in modes], dtype=float)
    mean = p @ j2
    var = p @ (j2 - mean) ** 2
    return 4.0 * t**2 / (mass**2 * lam**6 * hbar**2) * var


def qfi_cylinder_closed(state: SpectralState, t: float, lam: float, mass: float = 1.0,
                        hbar: float = 1.0) -> float:
    """(4 t^2 hbar^2 / (M^2 lam^6)) Var(m^2 - 1/4); blind to the axial content."""
    p, modes = _weights(state)
    q = np.array([md.m**2 - 0.25 for md in modes], dtype=float)
    mean = p @ q
    var = p @ (q - mean) ** 2
    return 4.0 * t**2 * hbar**2 / (mass**2 * lam**6) * var


def default_sphere_grid(j_max: int) -> QuadratureGrid:
    # (dp)^2/p is not polynomial; oversample well past the exactness minimum
    return sphere_quadrature(j_max, n_theta=max(8 * j_max + 16, 400), n_phi=max(8 * j_max + 8, 64))


def sphere_density(model: EvolvedModel, theta, phi) -> tuple[np.ndarray, np.ndarray]:
    """Position density p_t(theta, phi | lam) w.r.t. the area element, and d p / d lam."""
    Y = harmonics_table(model.modes, theta, phi)
    amp = Y @ model.psi
    damp = Y @ model.dpsi
    return np.abs(amp) ** 2, 2.0 * np.real(np.conj(amp) * damp)


def _fi_sum(p, dp, w, params, meta):
    floor = DENSITY_FLOOR * p.max()
    keep = p >= floor
    skipped = float(np.sum(w[~keep] * p[~keep]))
    fi = float(np.sum(w[keep] * dp[keep] ** 2 / p[keep]))
    total = float(np.sum(w * p))
    meta = dict(meta, skipped_mass=skipped, density_total=total)
    warns = []
    if skipped > SKIPPED_MASS_WARN:
        warns.append(f"skipped density mass {skipped:.3e} above {SKIPPED_MASS_WARN:g}")
    return EstimationReport("FI", fi, params, meta, warns)


def _params(model: EvolvedModel) -> dict:
    return {"t": model.t, "lam": model.lam, "mass": model.mass, "hbar": model.hbar}


def position_fi_sphere(model: EvolvedModel, grid: QuadratureGrid | None = None) -> EstimationReport:
    """Fisher information of an ideal (theta, phi) position measurement.

    When the density has a nodal line, (dp)^2/p is sharply peaked in a band of
    width ~ t/lam^2 around it; at very short times pass a finer ``grid``.
    """
    if model.surface != "sphere":
        raise ValueError("sphere model required")
    j_max = model.initial.j_max
    grid = grid or default_sphere_grid(j_max)
    if grid.degree < 2 * j_max:
        raise ValueError(f"grid exactness {grid.degree} below 2*j_max={2 * j_max}")
    p, dp = sphere_density(model, grid.u, grid.v)
    return _fi_sum(p, dp, grid.weights, _params(model), {"grid_points": grid.size, "grid_degree": grid.degree})


def cylinder_angular_density(model: EvolvedModel, theta) -> tuple[np.ndarray, np.ndarray]:
    """theta-marginal q_t(theta | lam) and its radius derivative.

    Modes sharing an axial label k interfere; distinct k are orthogonal after
    integrating out z, which reduces gamma_mn to a same-k sum.
    """
    theta = np.asarray(theta, dtype=float)
    q = np.zeros(theta.shape)
    dq = np.zeros(theta.shape)
    ks = sorted({md.k for md in model.modes})
    for k in ks:
        idx = [a for a, md in enumerate(model.modes) if md.k == k]
        ms = np.array([model.modes[a].m for a in idx])
        E = np.exp(1j * np.outer(theta, ms)) / math.sqrt(2 * math.pi)
        amp = E @ model.psi[idx]
        damp = E @ model.dpsi[idx]
        q += np.abs(amp) ** 2
        dq += 2.0 * np.real(np.conj(amp) * damp)
    return q, dq


def position_fi_cylinder(model: EvolvedModel, n_theta: int | None = None) -> EstimationReport:
    """Fisher information of the angular coordinate on the cylinder."""
    if model.surface != "cylinder":
        raise ValueError("cylinder model required")
    m_max = model.initial.m_max
    minimum = 4 * m_max + 2
    n_theta = n_theta if n_theta is not None else max(minimum, 512)
    if n_theta < minimum:
        raise ValueError(f"n_theta={n_theta} below 4*max|m|+2={minimum}")
    theta, w = angular_grid(n_theta)
    q, dq = cylinder_angular_density(model, theta)
    return _fi_sum(q, dq, w, _params(model), {"grid_points": n_theta})


def position_fi(model: EvolvedModel, grid=None) -> EstimationReport:
    if model.surface == "sphere":
        return position_fi_sphere(model, grid)
    return position_fi_cylinder(model, grid)


def fi_qfi_ratio(model: EvolvedModel, grid=None) -> EstimationReport:
    """R = F / H for position measurements; undefined when H vanishes."""
    H = qfi_pure(model)
    if H < 1e-300:
        raise UndefinedRatioError("QFI vanishes; ratio undefined")
    fi = position_fi(model, grid)
    return EstimationReport("ratio", fi.value / H, fi.params, dict(fi.meta, fi=fi.value, qfi=H), fi.warnings)
