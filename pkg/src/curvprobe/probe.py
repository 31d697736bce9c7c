"""Probe states, free unitary evolution and the radius derivative of the evolved state."""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .spectral import (
    CylinderMode,
    SphereMode,
    cylinder_energy,
    cylinder_energy_dlam,
    legendre_normalized,
    sphere_energy,
    sphere_energy_dlam,
)

NORM_TOL = 1e-12


@dataclass(frozen=True)
class SpectralState:
    """Finite superposition over labelled free eigenmodes of one surface.

    Amplitudes are stored in mode order; ``truncation`` records how the mode
    set was chosen (e.g. ``{"j_max": 40}`` for an expanded wave packet).
    """

    surface: str
    modes: tuple
    amplitudes: np.ndarray
    truncation: dict = field(default_factory=dict)
    normalized: bool = True

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (len(self.modes),):
            raise ValueError("one amplitude per mode required")
        object.__setattr__(self, "amplitudes", amps)
        if self.normalized and abs(self.norm2() - 1.0) > NORM_TOL:
            raise ValueError(f"state flagged normalized but has norm^2 {self.norm2()!r}")

    def norm2(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def as_dict(self) -> dict:
        return dict(zip(self.modes, self.amplitudes))

    @property
    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def energies(self, lam: float, mass: float = 1.0, hbar: float = 1.0) -> np.ndarray:
        fn = sphere_energy if self.surface == "sphere" else cylinder_energy
        return np.array([fn(md, lam, mass, hbar) for md in self.modes])

    def energy_derivatives(self, lam: float, mass: float = 1.0, hbar: float = 1.0) -> np.ndarray:
        fn = sphere_energy_dlam if self.surface == "sphere" else cylinder_energy_dlam
        return np.array([fn(md, lam, mass, hbar) for md in self.modes])

    @property
    def j_max(self) -> int:
        return max(md.j for md in self.modes)

    @property
    def m_max(self) -> int:
        return max(abs(md.m) for md in self.modes)


def _surface_of(mode) -> str:
    if isinstance(mode, SphereMode):
        return "sphere"
    if isinstance(mode, CylinderMode):
        return "cylinder"
    raise TypeError(f"not a mode label: {mode!r}")


def superposition(terms) -> SpectralState:
    """Normalized state from ``[(mode, amplitude), ...]``; repeated modes add up."""
    terms = list(terms)
    if not terms:
        raise ValueError("empty superposition")
    surface = _surface_of(terms[0][0])
    acc: dict = {}
    for mode, amp in terms:
        if _surface_of(mode) != surface:
            raise ValueError("cannot mix sphere and cylinder modes")
        acc[mode] = acc.get(mode, 0.0) + complex(amp)
    modes = tuple(sorted(acc))
    amps = np.array([acc[md] for md in modes])
    norm = math.sqrt(float(np.vdot(amps, amps).real))
    if norm == 0.0:
        raise ValueError("all amplitudes are zero")
    return SpectralState(surface, modes, amps / norm)


def two_level(j: int, m: int = 0, alpha: float = math.pi / 4, beta: float = 0.0) -> SpectralState:
    """cos(alpha)|00> + sin(alpha) e^{i beta}|jm> on the sphere."""
    return superposition([(SphereMode(0, 0), math.cos(alpha)),
                          (SphereMode(j, m), math.sin(alpha) * np.exp(1j * beta))])


def cylinder_two_level(m: int, k: float = 0.0, alpha: float = math.pi / 4, beta: float = 0.0) -> SpectralState:
    return superposition([(CylinderMode(k, 0), math.cos(alpha)),
                          (CylinderMode(k, m), math.sin(alpha) * np.exp(1j * beta))])


def von_mises_wavefunction(kappa: float, theta) -> np.ndarray:
    """Localized packet sqrt(kappa / sinh kappa) e^{kappa cos(theta) / 2} / sqrt(4 pi)."""
    x = np.cos(np.asarray(theta, dtype=float))
    if kappa == 0:
        return np.full(x.shape, 1 / math.sqrt(4 * math.pi))
    # rewritten with e^{kappa (x - 1)/2} so large kappa does not overflow
    pref = math.sqrt(2 * kappa / -math.expm1(-2 * kappa))
    return pref * np.exp(0.5 * kappa * (x - 1.0)) / math.sqrt(4 * math.pi)


class TruncationError(ValueError):
    def __init__(self, msg, required_j_max=None):
        super().__init__(msg)
        self.required_j_max = required_j_max


def von_mises_packet(kappa: float, j_max: int | None = None, tail_tol: float = 1e-12,
                     auto_raise: bool = True, j_limit: int = 400, guard: int = 4) -> SpectralState:
    """Expand the Von Mises packet on Y_j0 by Gauss-Legendre quadrature.

    The returned truncation keeps the smallest j_max whose discarded weight is
    below ``tail_tol`` (plus ``guard`` extra modes).  With ``auto_raise=False``
    a too-small ``j_max`` raises :class:`TruncationError` naming the one needed.
    """
    if kappa < 0:
        raise ValueError("kappa must be non-negative")
    j_probe = j_limit
    n = j_probe + 2 * int(math.ceil(kappa)) + 80
    x, w = np.polynomial.legendre.leggauss(n)
    psi = von_mises_wavefunction(kappa, np.arccos(x))
    leg = legendre_normalized(j_probe, 0, x)
    coeffs = 2 * math.pi * (leg * (w * psi)).sum(axis=1)
    p = coeffs**2
    tail = np.cumsum(p[::-1])[::-1]  # tail[j] = sum_{j' >= j} |c_j'|^2
    tail = np.append(tail[1:], 0.0)  # discarded weight when truncating at j
    ok = np.nonzero(tail < tail_tol)[0]
    if ok.size == 0 or ok[0] + guard > j_probe:
        raise TruncationError(f"kappa={kappa} needs j_max beyond {j_limit}", required_j_max=None)
    needed = int(ok[0]) + guard
    if j_max is None:
        j_use = needed
    elif j_max < needed and not auto_raise:
        raise TruncationError(
            f"j_max={j_max} leaves tail mass {tail[j_max]:.3e} > {tail_tol:g}; need j_max >= {needed}",
            required_j_max=needed,
        )
    else:
        j_use = max(j_max, needed)
    c = coeffs[: j_use + 1]
    c = c / np.linalg.norm(c)
    modes = tuple(SphereMode(j, 0) for j in range(j_use + 1))
    return SpectralState("sphere", modes, c.astype(complex),
                         truncation={"j_max": j_use, "tail_mass": float(tail[j_use]), "kappa": kappa})


def evolve(state: SpectralState, t: float, lam: float, mass: float = 1.0, hbar: float = 1.0) -> SpectralState:
    """Free evolution: each amplitude picks up exp(-i t E / hbar)."""
    if lam <= 0:
        raise ValueError("radius must be positive")
    phases = np.exp(-1j * t * state.energies(lam, mass, hbar) / hbar)
    return replace(state, amplitudes=state.amplitudes * phases)


@dataclass(frozen=True)
class EvolvedModel:
    """Evolved state and its analytic radius derivative in the same mode basis."""

    initial: SpectralState
    psi: np.ndarray
    dpsi: np.ndarray
    t: float
    lam: float
    mass: float = 1.0
    hbar: float = 1.0

    @property
    def surface(self) -> str:
        return self.initial.surface

    @property
    def modes(self) -> tuple:
        return self.initial.modes

    def overlap(self) -> complex:
        """<psi | d_lam psi>; purely imaginary for the free models."""
        return complex(np.vdot(self.psi, self.dpsi))

    def at(self, lam: float) -> "EvolvedModel":
        return lambda_derivative(self.initial, self.t, lam, self.mass, self.hbar)


def lambda_derivative(state: SpectralState, t: float, lam: float, mass: float = 1.0,
                      hbar: float = 1.0) -> EvolvedModel:
    """Free models only: eigenvectors do not depend on the radius, eigenvalues do."""
    psi = evolve(state, t, lam, mass, hbar).amplitudes
    dpsi = psi * (-1j * t / hbar) * state.energy_derivatives(lam, mass, hbar)
    return EvolvedModel(state, psi, dpsi, t, lam, mass, hbar)
