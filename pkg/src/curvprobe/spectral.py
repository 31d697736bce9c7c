"""Free-particle eigenbases on the sphere and the cylinder, and quadrature grids."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

FOUR_PI = 4.0 * math.pi


@dataclass(frozen=True, order=True)
class SphereMode:
    j: int
    m: int = 0

    def __post_init__(self):
        if self.j < 0 or abs(self.m) > self.j:
            raise ValueError(f"invalid sphere mode (j={self.j}, m={self.m})")


@dataclass(frozen=True, order=True)
class CylinderMode:
    k: float
    m: int = 0

    def __post_init__(self):
        if not math.isfinite(self.k):
            raise ValueError("axial wavenumber must be finite")


def legendre_normalized(j_max: int, m: int, x) -> np.ndarray:
    """Normalized associated Legendre functions for j = |m|..j_max.

    Returns an array of shape ``(j_max - |m| + 1,) + x.shape`` holding
    sqrt((2j+1)/(4 pi) (j-|m|)!/(j+|m|)!) P_j^{|m|}(x), with P_j^{|m|} taken
    without the Condon-Shortley sign.  Built by upward recurrence in j, so no
    factorials are formed.
    """
    m = abs(int(m))
    x = np.asarray(x, dtype=float)
    if j_max < m:
        return np.zeros((0,) + x.shape)
    s = np.sqrt(np.clip(1.0 - x * x, 0.0, None))
    out = np.empty((j_max - m + 1,) + x.shape)
    pmm = np.full(x.shape, 1.0 / math.sqrt(FOUR_PI))
    for k in range(1, m + 1):
        pmm = pmm * math.sqrt((2 * k + 1) / (2 * k)) * s
    out[0] = pmm
    if j_max == m:
        return out
    out[1] = math.sqrt(2 * m + 3) * x * pmm
    for n in range(m + 2, j_max + 1):
        a = math.sqrt((4 * n * n - 1) / (n * n - m * m))
        b = math.sqrt((2 * n + 1) * ((n - 1) ** 2 - m * m) / ((2 * n - 3) * (n * n - m * m)))
        out[n - m] = a * x * out[n - m - 1] - b * out[n - m - 2]
    return out


def _phase(m: int) -> float:
    # (-1)^{(|m|-m)/2}: unity for m >= 0, (-1)^m for m < 0
    return -1.0 if (m < 0 and m % 2) else 1.0


def sphere_harmonic(mode: SphereMode, theta, phi):
    """Y_jm(theta, phi) with the phase convention Y_{j,-m} = (-1)^m conj(Y_jm)."""
    theta = np.asarray(theta, dtype=float)
    if np.any((theta < 0) | (theta > math.pi)):
        raise ValueError("theta outside [0, pi]")
    p = legendre_normalized(mode.j, mode.m, np.cos(theta))[-1]
    val = _phase(mode.m) * p * np.exp(1j * mode.m * np.asarray(phi, dtype=float))
    return val[()] if val.ndim == 0 else val


def harmonics_table(modes, theta, phi) -> np.ndarray:
    """Matrix Y[i, a] = Y_{modes[a]}(theta[i], phi[i]) for point arrays theta, phi."""
    theta = np.asarray(theta, dtype=float).ravel()
    phi = np.asarray(phi, dtype=float).ravel()
    x = np.cos(theta)
    table = np.empty((theta.size, len(modes)), dtype=complex)
    by_m: dict[int, list[int]] = {}
    for a, md in enumerate(modes):
        by_m.setdefault(md.m, []).append(a)
    for m, cols in by_m.items():
        j_top = max(modes[a].j for a in cols)
        leg = legendre_normalized(j_top, m, x)
        ephi = _phase(m) * np.exp(1j * m * phi)
        for a in cols:
            table[:, a] = leg[modes[a].j - abs(m)] * ephi
    return table


def sphere_energy(mode: SphereMode, lam: float, mass: float = 1.0, hbar: float = 1.0) -> float:
    """Free-sphere eigenvalue hbar^2 j(j+1) / (2 M lam^2); m-independent."""
    return hbar**2 * mode.j * (mode.j + 1) / (2.0 * mass * lam**2)


def sphere_energy_dlam(mode: SphereMode, lam: float, mass: float = 1.0, hbar: float = 1.0) -> float:
    return -hbar**2 * mode.j * (mode.j + 1) / (mass * lam**3)


def cylinder_mode_amplitude(mode: CylinderMode, theta, z):
    val = np.exp(1j * (mode.k * np.asarray(z, dtype=float) + mode.m * np.asarray(theta, dtype=float))) / (2 * math.pi)
    return val[()] if np.ndim(val) == 0 else val


def cylinder_energy(mode: CylinderMode, lam: float, mass: float = 1.0, hbar: float = 1.0) -> float:
    """hbar^2/(2M) (k^2 + m^2/lam^2 - 1/(4 lam^2)); the last term is the surface potential."""
    return hbar**2 / (2.0 * mass) * (mode.k**2 + (mode.m**2 - 0.25) / lam**2)


def cylinder_energy_dlam(mode: CylinderMode, lam: float, mass: float = 1.0, hbar: float = 1.0) -> float:
    return -hbar**2 * (mode.m**2 - 0.25) / (mass * lam**3)


@dataclass(frozen=True)
class QuadratureGrid:
    """Tensor-product rule on a chart: point arrays ``u, v`` with ``weights``.

    For the sphere (u, v) = (theta, phi) and the weights already include the
    sin(theta) area element, so they sum to 4 pi.
    """

    surface: str
    u: np.ndarray
    v: np.ndarray
    weights: np.ndarray
    degree: int

    @property
    def size(self) -> int:
        return self.weights.size


def sphere_quadrature(j_max: int, n_theta: int | None = None, n_phi: int | None = None) -> QuadratureGrid:
    """Gauss-Legendre in cos(theta) times a uniform phi rule.

    Exact for Y*_{j'm'} Y_{jm} with j, j' <= j_max (degree 2 j_max).  Node
    counts default to the minimum plus two guard nodes.
    """
    if j_max < 0:
        raise ValueError("j_max must be non-negative")
    n_theta = max(n_theta or 0, 2 * j_max + 4)
    n_phi = max(n_phi or 0, 4 * j_max + 4)
    x, wx = np.polynomial.legendre.leggauss(n_theta)
    phi = np.arange(n_phi) * (2 * math.pi / n_phi)
    theta = np.arccos(x)
    tt, pp = np.meshgrid(theta, phi, indexing="ij")
    w = np.outer(wx, np.full(n_phi, 2 * math.pi / n_phi))
    degree = min(2 * n_theta - 1, n_phi - 1)
    return QuadratureGrid("sphere", tt.ravel(), pp.ravel(), w.ravel(), degree)


def angular_grid(n_theta: int) -> tuple[np.ndarray, np.ndarray]:
    """Uniform periodic rule on [0, 2 pi): nodes and equal weights."""
    theta = np.arange(n_theta) * (2 * math.pi / n_theta)
    return theta, np.full(n_theta, 2 * math.pi / n_theta)
