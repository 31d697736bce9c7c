"""Differential geometry of the sphere, cylinder and torus.

Chart coordinates ``(u, v)`` per surface:

* ``Sphere``   -- (theta, phi), theta in [0, pi], phi in [0, 2 pi)
* ``Cylinder`` -- (z, theta),   z real,          theta in [0, 2 pi)
* ``Torus``    -- (theta, phi), both in [0, 2 pi)

All 2x2 matrices are ordered by the chart coordinates above.  Quantities that
need the inverse metric are ``nan`` at degenerate chart points (sphere poles).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Union

import mpmath
import numpy as np

TWO_PI = 2.0 * math.pi
DEGENERACY_RTOL = 1e-14


class SurfacePoint(NamedTuple):
    u: float
    v: float


PointLike = Union[SurfacePoint, tuple]


@dataclass(frozen=True)
class Sphere:
    radius: float

    kind = "sphere"
    coords = ("theta", "phi")

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError(f"sphere radius must be positive, got {self.radius}")

    @property
    def scale(self) -> float:
        return self.radius

    def canonical(self, p: PointLike) -> SurfacePoint:
        theta, phi = p
        if not 0.0 <= theta <= math.pi:
            raise ValueError(f"sphere latitude {theta} outside [0, pi]")
        return SurfacePoint(float(theta), float(phi) % TWO_PI)

    def frame(self, u, v, lib=math):
        lam = self.radius
        st, ct, sp, cp = lib.sin(u), lib.cos(u), lib.sin(v), lib.cos(v)
        r_u = (lam * ct * cp, lam * ct * sp, -lam * st)
        r_v = (-lam * st * sp, lam * st * cp, 0 * st)
        r_uu = (-lam * st * cp, -lam * st * sp, -lam * ct)
        r_uv = (-lam * ct * sp, lam * ct * cp, 0 * st)
        r_vv = (-lam * st * cp, -lam * st * sp, 0 * st)
        normal = (st * cp, st * sp, ct)
        return r_u, r_v, r_uu, r_uv, r_vv, normal


@dataclass(frozen=True)
class Cylinder:
    radius: float

    kind = "cylinder"
    coords = ("z", "theta")

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError(f"cylinder radius must be positive, got {self.radius}")

    @property
    def scale(self) -> float:
        return self.radius

    def canonical(self, p: PointLike) -> SurfacePoint:
        z, theta = p
        return SurfacePoint(float(z), float(theta) % TWO_PI)

    def frame(self, u, v, lib=math):
        lam = self.radius
        s, c = lib.sin(v), lib.cos(v)
        zero = 0 * s
        r_u = (zero, zero, zero + 1)
        r_v = (-lam * s, lam * c, zero)
        r_uu = (zero, zero, zero)
        r_uv = (zero, zero, zero)
        r_vv = (-lam * c, -lam * s, zero)
        normal = (c, s, zero)
        return r_u, r_v, r_uu, r_uv, r_vv, normal


@dataclass(frozen=True)
class Torus:
    r: float
    R: float

    kind = "torus"
    coords = ("theta", "phi")

    def __post_init__(self):
        if not (self.r > 0 and self.R > 0):
            raise ValueError("torus radii must be positive")
        if not self.R > self.r:
            raise ValueError(f"torus needs R > r for an embedded surface, got r={self.r}, R={self.R}")

    @property
    def scale(self) -> float:
        return self.r

    def canonical(self, p: PointLike) -> SurfacePoint:
        theta, phi = p
        return SurfacePoint(float(theta) % TWO_PI, float(phi) % TWO_PI)

    def frame(self, u, v, lib=math):
        r, R = self.r, self.R
        st, ct, sp, cp = lib.sin(u), lib.cos(u), lib.sin(v), lib.cos(v)
        rho = R + r * ct
        r_u = (-r * st * cp, -r * st * sp, r * ct)
        r_v = (-rho * sp, rho * cp, 0 * st)
        r_uu = (-r * ct * cp, -r * ct * sp, -r * st)
        r_uv = (r * st * sp, -r * st * cp, 0 * st)
        r_vv = (-rho * cp, -rho * sp, 0 * st)
        normal = (ct * cp, ct * sp, st)
        return r_u, r_v, r_uu, r_uv, r_vv, normal


Surface = Union[Sphere, Cylinder, Torus]


@dataclass(frozen=True)
class GeometryReport:
    metric: np.ndarray
    second_form: np.ndarray
    shape_operator: np.ndarray
    mean_curvature: float
    gaussian_curvature: float
    surface_potential: float
    ricci: float
    degenerate: bool


def _dot(a, b):
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def _forms(s: Surface, p: SurfacePoint, lib=math):
    r_u, r_v, r_uu, r_uv, r_vv, n = s.frame(p.u, p.v, lib)
    g = ((_dot(r_u, r_u), _dot(r_u, r_v)), (_dot(r_v, r_u), _dot(r_v, r_v)))
    h = ((_dot(r_uu, n), _dot(r_uv, n)), (_dot(r_uv, n), _dot(r_vv, n)))
    return g, h


def is_degenerate(s: Surface, p: PointLike) -> bool:
    p = s.canonical(p)
    if isinstance(s, Sphere) and p.u in (0.0, math.pi):
        return True
    g, _ = _forms(s, p)
    det = g[0][0] * g[1][1] - g[0][1] * g[1][0]
    return det < DEGENERACY_RTOL * s.scale**4


def surface_metric(s: Surface, p: PointLike) -> np.ndarray:
    """Metric tensor at ``p``; singular (not an error) at sphere poles."""
    g, _ = _forms(s, s.canonical(p))
    return np.array(g, dtype=float)


def second_fundamental_form(s: Surface, p: PointLike) -> np.ndarray:
    _, h = _forms(s, s.canonical(p))
    return np.array(h, dtype=float)


def _alpha_from_forms(g, h) -> np.ndarray:
    # expansion coefficients of dn/dq^i on the tangent vectors, alpha = -h g^{-1}
    (g11, g12), (g21, g22) = g
    (h11, h12), (h21, h22) = h
    det = g11 * g22 - g12 * g21
    return np.array(
        [
            [(g12 * h21 - g22 * h11) / det, (g21 * h11 - g11 * h21) / det],
            [(g12 * h22 - g22 * h12) / det, (g12 * h21 - g11 * h22) / det],
        ]
    )


def shape_operator(s: Surface, p: PointLike) -> np.ndarray:
    p = s.canonical(p)
    if is_degenerate(s, p):
        return np.full((2, 2), np.nan)
    g, h = _forms(s, p)
    return _alpha_from_forms(g, h)


def curvatures(s: Surface, p: PointLike) -> tuple[float, float]:
    """Mean curvature C and Gaussian curvature K (nan at degenerate points)."""
    p = s.canonical(p)
    if is_degenerate(s, p):
        return math.nan, math.nan
    g, h = _forms(s, p)
    (g11, g12), (_, g22) = g
    (h11, h12), (_, h22) = h
    det_g = g11 * g22 - g12 * g12
    mean = (g11 * h22 + g22 * h11 - 2.0 * g12 * h12) / (2.0 * det_g)
    gauss = (h11 * h22 - h12 * h12) / det_g
    return mean, gauss


def surface_potential(s: Surface, p: PointLike, mass: float = 1.0, hbar: float = 1.0,
                      method: str = "curvature") -> float:
    """Constraining-potential term V_s = -hbar^2/(2M) (C^2 - K).

    ``method="alpha"`` evaluates the same quantity from the trace and
    determinant of the shape operator instead of from (C, K).
    """
    if mass <= 0:
        raise ValueError("mass must be positive")
    if method == "curvature":
        mean, gauss = curvatures(s, p)
        return -hbar**2 / (2.0 * mass) * (mean**2 - gauss)
    if method == "alpha":
        alpha = shape_operator(s, p)
        return -hbar**2 / (2.0 * mass) * (0.25 * np.trace(alpha) ** 2 - np.linalg.det(alpha))
    raise ValueError(f"unknown method {method!r}")


def ricci_scalar(s: Surface, p: PointLike, method: str = "gauss", step: float = 1e-5) -> float:
    """Ricci scalar of the induced metric.

    ``method="gauss"`` uses R = 2K from the embedding (exact to rounding).
    ``method="christoffel"`` is the general intrinsic route: Christoffel
    symbols and Riemann tensor from centered finite differences of the
    metric with coordinate step ``step``; see :func:`ricci_from_metric`.
    """
    p = s.canonical(p)
    if is_degenerate(s, p):
        return math.nan
    if method == "gauss":
        return 2.0 * curvatures(s, p)[1]
    if method == "christoffel":

        def metric(u, v, ctx):
            g, _ = _forms(s, SurfacePoint(u, v), lib=ctx)
            return g

        return ricci_from_metric(metric, p, step=step)
    raise ValueError(f"unknown method {method!r}")


def ricci_from_metric(metric, p: PointLike, step: float = 1e-5, dps: int = 40) -> float:
    """Ricci scalar R = g^{mn} R^l_{mln} of a 2-d metric given as a callable.

    ``metric(u, v, ctx)`` returns nested 2x2 components, using ``ctx`` (an
    mpmath context) for any elementary functions.  Nested differences are
    carried out at ``dps`` digits so the O(step^2) truncation error dominates
    instead of cancellation.  Each call owns its context, so concurrent calls
    do not disturb each other's precision.
    """
    mp = mpmath.MPContext()
    mp.dps = dps
    h = mp.mpf(step)
    x0 = (mp.mpf(p[0]), mp.mpf(p[1]))

    def g_at(x):
        return mp.matrix(metric(x[0], x[1], mp))

    def shifted(x, i, d):
        y = list(x)
        y[i] += d
        return tuple(y)

    def christoffel(x):
        g = g_at(x)
        ginv = g**-1
        dg = [(g_at(shifted(x, i, h)) - g_at(shifted(x, i, -h))) / (2 * h) for i in range(2)]
        gam = [[[mp.mpf(0)] * 2 for _ in range(2)] for _ in range(2)]
        for r in range(2):
            for m in range(2):
                for s_ in range(2):
                    gam[r][m][s_] = sum(
                        ginv[r, l] * (dg[m][s_, l] + dg[s_][m, l] - dg[l][m, s_]) for l in range(2)
                    ) / 2
        return gam

    gam = christoffel(x0)
    plus = [christoffel(shifted(x0, i, h)) for i in range(2)]
    minus = [christoffel(shifted(x0, i, -h)) for i in range(2)]

    def dgam(i, r, m, s_):
        return (plus[i][r][m][s_] - minus[i][r][m][s_]) / (2 * h)

    ginv = g_at(x0) ** -1
    total = mp.mpf(0)
    for m in range(2):
        for n in range(2):
            ric = mp.mpf(0)
            for l in range(2):
                ric += dgam(l, l, m, n) - dgam(n, l, m, l)
                for k in range(2):
                    ric += gam[k][m][n] * gam[l][l][k] - gam[k][m][l] * gam[l][n][k]
            total += ginv[m, n] * ric
    return float(total)


def quantization_gap(s: Surface, p: PointLike, xi: float, mass: float = 1.0, hbar: float = 1.0) -> float:
    """Pointwise difference xi hbar^2 R / M - V_s between the two quantizations."""
    return xi * hbar**2 * ricci_scalar(s, p) / mass - surface_potential(s, p, mass, hbar)


def geometry_report(s: Surface, p: PointLike, mass: float = 1.0, hbar: float = 1.0) -> GeometryReport:
    p = s.canonical(p)
    mean, gauss = curvatures(s, p)
    return GeometryReport(
        metric=surface_metric(s, p),
        second_form=second_fundamental_form(s, p),
        shape_operator=shape_operator(s, p),
        mean_curvature=mean,
        gaussian_curvature=gauss,
        surface_potential=surface_potential(s, p, mass, hbar),
        ricci=ricci_scalar(s, p),
        degenerate=is_degenerate(s, p),
    )


def make_surface(kind: str, **params) -> Surface:
    kind = kind.lower()
    if kind == "sphere":
        return Sphere(float(params["radius"]))
    if kind == "cylinder":
        return Cylinder(float(params["radius"]))
    if kind == "torus":
        return Torus(float(params["r"]), float(params["R"]))
    raise ValueError(f"unknown surface kind {kind!r}")
