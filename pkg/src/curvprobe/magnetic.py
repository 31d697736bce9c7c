"""Charged probe in a magnetic field: first-order perturbed eigenstates and their QFI.

Sphere: uniform field B along the polar axis.  Cylinder: radial field B1
(no axial component).  The quadratic-in-field cylinder term is dropped.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .estimation import EstimationReport, qfi_from_vectors
from .mle import golden_section_max
from .spectral import CylinderMode, SphereMode, harmonics_table, sphere_quadrature

GAUGE_WARN = 0.3
DEGENERACY_GAP = 1e-10


@dataclass(frozen=True)
class FieldConfig:
    surface: str
    charge: float
    field: float
    hbar: float = 1.0

    @property
    def coupling(self) -> float:
        """a = Q^2 B^2 / (36 sqrt5 hbar^2) on the sphere, Q B1 / hbar on the cylinder."""
        if self.surface == "sphere":
            return self.charge**2 * self.field**2 / (36.0 * math.sqrt(5.0) * self.hbar**2)
        return self.charge * self.field / self.hbar

    def gauge(self, lam: float, k: float = 1.0) -> float:
        """Dimensionless size of the perturbation."""
        if self.surface == "sphere":
            return abs(self.charge * self.field) * lam**2 / self.hbar
        return abs(self.charge * self.field * k) * lam**3 / self.hbar

    def warnings(self, lam: float, k: float = 1.0) -> list:
        y = self.gauge(lam, k)
        return [f"perturbation gauge y={y:.3g} exceeds {GAUGE_WARN}"] if y > GAUGE_WARN else []


@dataclass(frozen=True)
class PerturbedState:
    """|base> plus first-order admixtures, normalized by 1/sqrt(norm)."""

    base: object
    modes: tuple
    coefficients: np.ndarray  # unnormalized, base coefficient is 1
    norm: float
    lam: float
    warnings: tuple = field(default=())

    @property
    def amplitudes(self) -> np.ndarray:
        return np.asarray(self.coefficients) / math.sqrt(self.norm)


# -- sphere -------------------------------------------------------------------

def sphere_zeroth_energy(j: int, m: int, charge: float, field: float, lam: float,
                         mass: float = 1.0, hbar: float = 1.0) -> float:
    """Free energy plus the Zeeman term -m Q B hbar / (2M)."""
    return j * (j + 1) * hbar**2 / (2 * mass * lam**2) - m * charge * field * hbar / (2 * mass)


def sin2_fraction(j: int, m: int) -> float:
    """<Y_jm| sin^2 theta |Y_jm> = 2 (m^2 + j^2 + j - 1) / ((2j+3)(2j-1))."""
    return 2.0 * (m * m + j * j + j - 1) / ((2 * j + 3) * (2 * j - 1))


def sphere_energy_correction(j: int, m: int, charge: float, field: float, lam: float,
                             mass: float = 1.0, printed_sign: bool = False) -> float:
    """Diagonal shift from the Q^2 B^2 lam^2 sin^2(theta) / (8M) term.

    The operator is non-negative so the shift is too.  ``printed_sign=True``
    multiplies by (-1)^m to reproduce the alternating-sign form found in
    reference tables; the diagonal matrix element itself carries no such sign.
    """
    val = charge**2 * field**2 * lam**2 / (8 * mass) * sin2_fraction(j, m)
    if printed_sign and m % 2:
        val = -val
    return val


def sin2_matrix_element(bra: SphereMode, ket: SphereMode, grid=None) -> float:
    """<Y_bra| sin^2 theta |Y_ket> by quadrature (exact for the grid degree)."""
    if bra.m != ket.m:
        return 0.0
    grid = grid or sphere_quadrature(max(bra.j, ket.j) + 1)
    Y = harmonics_table((bra, ket), grid.u, grid.v)
    return float(np.real(np.sum(grid.weights * np.conj(Y[:, 0]) * np.sin(grid.u) ** 2 * Y[:, 1])))


def sphere_first_order_state(j: int, m: int, charge: float, field: float, lam: float,
                             mass: float = 1.0, hbar: float = 1.0) -> PerturbedState:
    """First-order eigenvector built from quadrature couplings to all levels.

    sin^2(theta) only couples Delta j = +-2 at fixed m, so the sum is finite.
    """
    base = SphereMode(j, m)
    grid = sphere_quadrature(j + 3)
    e0 = sphere_zeroth_energy(j, m, charge, field, lam, mass, hbar)
    modes, coeffs = [base], [1.0]
    for kappa in (j - 2, j + 2):
        if kappa < abs(m) or kappa < 0:
            continue
        other = SphereMode(kappa, m)
        gap = e0 - sphere_zeroth_energy(kappa, m, charge, field, lam, mass, hbar)
        if abs(gap) < DEGENERACY_GAP:
            raise ValueError(f"levels {base} and {other} degenerate; first-order theory fails")
        coupling = lam**2 * charge**2 * field**2 / (8 * mass) * sin2_matrix_element(other, base, grid)
        modes.append(other)
        coeffs.append(coupling / gap)
    coeffs = np.array(coeffs)
    cfg = FieldConfig("sphere", charge, field, hbar)
    return PerturbedState(base, tuple(modes), coeffs, float(coeffs @ coeffs), lam, tuple(cfg.warnings(lam)))


def sphere_mixing(charge: float, field: float, lam: float, hbar: float = 1.0) -> float:
    """g(lam) = Q^2 B^2 lam^4 / (36 sqrt5 hbar^2), the |20> admixture of the ground state."""
    return FieldConfig("sphere", charge, field, hbar).coupling * lam**4


def sphere_ground_state(charge: float, field: float, lam: float, hbar: float = 1.0) -> PerturbedState:
    g = sphere_mixing(charge, field, lam, hbar)
    cfg = FieldConfig("sphere", charge, field, hbar)
    return PerturbedState(SphereMode(0, 0), (SphereMode(0, 0), SphereMode(2, 0)), np.array([1.0, g]),
                          1.0 + g * g, lam, tuple(cfg.warnings(lam)))


def sphere_ground_qfi_printed(a: float, lam: float) -> float:
    """Closed form 9 a^2 lam^6 / (1 + a^2 lam^8)^2 (reference form)."""
    return 9.0 * a**2 * lam**6 / (1.0 + a**2 * lam**8) ** 2


def sphere_ground_qfi_derived(a: float, lam: float) -> float:
    """4 (g'/(1+g^2))^2 with g = a lam^4, i.e. 64 a^2 lam^6 / (1 + a^2 lam^8)^2."""
    g, dg = a * lam**4, 4.0 * a * lam**3
    return 4.0 * (dg / (1.0 + g * g)) ** 2


def sphere_ground_qfi_argmax(a: float) -> float:
    return (3.0 / (5.0 * a * a)) ** 0.125


def sphere_ground_qfi(charge: float, field: float, lam: float, hbar: float = 1.0) -> EstimationReport:
    """Ground-state QFI carrying both the reference and the re-derived prefactor."""
    cfg = FieldConfig("sphere", charge, field, hbar)
    a = cfg.coupling
    printed = sphere_ground_qfi_printed(a, lam)
    derived = sphere_ground_qfi_derived(a, lam)
    warns = cfg.warnings(lam)
    if a != 0:
        warns.append("reference prefactor 9 differs from 64 obtained by differentiating g(lam)")
    return EstimationReport(
        "QFI", derived,
        {"charge": charge, "field": field, "lam": lam, "hbar": hbar, "a": a},
        {"printed": printed, "derived": derived, "argmax": sphere_ground_qfi_argmax(a) if a else math.nan},
        warns,
    )


# -- cylinder -----------------------------------------------------------------

def cylinder_b(k: float, m: int) -> float:
    """B_km = k / (1 + 2m); the denominator is odd, so never zero for integer m."""
    den = 1 + 2 * m
    assert den != 0
    return k / den


def cylinder_perturbed_state(k: float, m: int, charge: float, field: float, lam: float,
                             mass: float = 1.0, hbar: float = 1.0) -> PerturbedState:
    """|km> mixed with |k, m+-1> at first order in the radial field."""
    base = CylinderMode(k, m)
    pref = 2.0 * charge * field * lam**3 / hbar
    modes = (CylinderMode(k, m - 1), base, CylinderMode(k, m + 1))
    coeffs = np.array([-pref * cylinder_b(k, m - 1), 1.0, -pref * cylinder_b(k, m)])
    norm = 1.0 + 4.0 * charge**2 * field**2 * lam**6 / hbar**2 * 2.0 * k**2 * (4 * m * m + 1) / (
        (2 * m + 1) ** 2 * (2 * m - 1) ** 2)
    cfg = FieldConfig("cylinder", charge, field, hbar)
    return PerturbedState(base, modes, coeffs, norm, lam, tuple(cfg.warnings(lam, k)))


def cylinder_field_qfi(k: float, m: int, charge: float, field: float, lam: float,
                       hbar: float = 1.0) -> float:
    """Reference closed form 288 a^2 k^2 (1+4m^2) lam^4 / [(1-4m^2)^2 + 8 a^2 k^2 (1+4m^2) lam^6]."""
    a = charge * field / hbar
    c = 8.0 * a * a * k * k * (1 + 4 * m * m)
    return 36.0 * c * lam**4 / ((1 - 4 * m * m) ** 2 + c * lam**6)


def cylinder_field_qfi_derived(k: float, m: int, charge: float, field: float, lam: float,
                               hbar: float = 1.0) -> float:
    """Exact QFI of the normalized first-order state: 36 s^2 lam^4 / (1 + s^2 lam^6)^2.

    s^2 = 8 a^2 k^2 (1+4m^2) / (1-4m^2)^2.  Differs from the reference form by
    one power of the denominator.
    """
    a = charge * field / hbar
    s2 = 8.0 * a * a * k * k * (1 + 4 * m * m) / (1 - 4 * m * m) ** 2
    return 36.0 * s2 * lam**4 / (1.0 + s2 * lam**6) ** 2


def cylinder_field_qfi_argmax(a: float) -> float:
    """Maximizer (2a)^{-1/3} of the reference (k=1, m=0) form."""
    return (2.0 * a) ** (-1.0 / 3.0)


# -- numerical oracle ----------------------------------------------------------

def perturbed_qfi_numeric(family, lam: float, h: float = 1e-5, rtol: float = 1e-6) -> EstimationReport:
    """QFI from central differences of ``family(lam).amplitudes``.

    Evaluated at steps h and h/2; the reported value is the h/2 result and a
    warning is attached when the two disagree by more than ``rtol``.
    """

    def at_step(step):
        psi = family(lam).amplitudes
        d = (family(lam + step).amplitudes - family(lam - step).amplitudes) / (2 * step)
        return qfi_from_vectors(psi.astype(complex), d.astype(complex))

    coarse, fine = at_step(h), at_step(h / 2)
    scale = max(abs(fine), 1e-300)
    warns = []
    if abs(coarse - fine) > rtol * scale and max(abs(coarse), abs(fine)) > 1e-12:
        warns.append(f"Richardson check failed: H(h)={coarse!r}, H(h/2)={fine!r}")
    return EstimationReport("QFI", fine, {"lam": lam, "h": h}, {"coarse": coarse, "fine": fine}, warns)


def numeric_argmax(fn, lo: float, hi: float, rtol: float = 1e-10) -> float:
    """Golden-section maximizer of a unimodal function on [lo, hi]."""
    return golden_section_max(fn, lo, hi, rtol * hi)
