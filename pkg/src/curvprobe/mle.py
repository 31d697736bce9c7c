"""Position sampling and maximum-likelihood estimation of the sphere radius."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .estimation import position_fi_sphere, qfi_pure
from .probe import SpectralState, lambda_derivative
from .spectral import harmonics_table, sphere_quadrature

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class BoundaryHitError(RuntimeError):
    def __init__(self, estimate, interval):
        super().__init__(f"likelihood maximum {estimate!r} sits on the search boundary {interval}")
        self.estimate = estimate
        self.interval = interval


@dataclass(frozen=True)
class SampleRecord:
    theta: np.ndarray
    phi: np.ndarray
    lam: float
    t: float
    seed: int | None

    @property
    def n(self) -> int:
        return self.theta.size


def _amplitudes(state: SpectralState, t, lam, mass, hbar):
    return state.amplitudes * np.exp(-1j * t * state.energies(lam, mass, hbar) / hbar)


def density_bound(state: SpectralState, t: float, lam: float, mass: float = 1.0, hbar: float = 1.0,
                  margin: float = 1.1) -> float:
    """Envelope for rejection sampling: grid maximum times ``margin``, capped by the
    rigorous bound (sum |c| sqrt((2j+1)/4pi))^2."""
    amps = _amplitudes(state, t, lam, mass, hbar)
    grid = sphere_quadrature(state.j_max, n_theta=8 * state.j_max + 64, n_phi=8 * state.j_max + 32)
    p = np.abs(harmonics_table(state.modes, grid.u, grid.v) @ amps) ** 2
    hard = sum(abs(c) * math.sqrt((2 * md.j + 1) / (4 * math.pi)) for md, c in zip(state.modes, amps)) ** 2
    return min(margin * float(p.max()), hard)


def sample_positions(state: SpectralState, t: float, lam: float, n: int, seed=None,
                     mass: float = 1.0, hbar: float = 1.0, batch: int = 8192) -> SampleRecord:
    """Draw ``n`` i.i.d. positions from p_t(theta, phi | lam) on the sphere.

    Uniform proposals on the sphere, accepted against a grid-derived envelope.
    Should a proposal exceed the envelope, the envelope is doubled and the
    draw restarted from the same seed, so the output depends only on the seed.
    """
    if n < 1:
        raise ValueError("need at least one sample")
    if state.surface != "sphere":
        raise ValueError("position sampling is implemented for the sphere")
    amps = _amplitudes(state, t, lam, mass, hbar)
    hard = sum(abs(c) * math.sqrt((2 * md.j + 1) / (4 * math.pi)) for md, c in zip(state.modes, amps)) ** 2
    envelope = density_bound(state, t, lam, mass, hbar)
    if not envelope > 0:
        raise ValueError("density vanishes everywhere; cannot build an envelope")
    while True:
        rng = np.random.default_rng(seed)
        thetas, phis, got, exceeded = [], [], 0, False
        while got < n:
            x = rng.uniform(-1.0, 1.0, batch)
            ph = rng.uniform(0.0, 2 * math.pi, batch)
            u = rng.uniform(0.0, envelope, batch)
            th = np.arccos(x)
            p = np.abs(harmonics_table(state.modes, th, ph) @ amps) ** 2
            if np.any(p > envelope):
                exceeded = True
                break
            acc = u < p
            thetas.append(th[acc])
            phis.append(ph[acc])
            got += int(acc.sum())
        if not exceeded:
            break
        envelope = min(2.0 * envelope, hard)
    return SampleRecord(np.concatenate(thetas)[:n], np.concatenate(phis)[:n], lam, t, seed)


def log_likelihood(record: SampleRecord, state: SpectralState, lam: float, mass: float = 1.0,
                   hbar: float = 1.0, table: np.ndarray | None = None) -> float:
    if table is None:
        table = harmonics_table(state.modes, record.theta, record.phi)
    p = np.abs(table @ _amplitudes(state, record.t, lam, mass, hbar)) ** 2
    return float(np.sum(np.log(p)))


def golden_section_max(f, lo: float, hi: float, tol: float) -> float:
    a, b = lo, hi
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def mle_radius(record: SampleRecord, state: SpectralState, interval: tuple[float, float],
               mass: float = 1.0, hbar: float = 1.0, n_scan: int = 64, rtol: float = 1e-8,
               on_boundary: str = "raise") -> float:
    """Radius maximizing the log-likelihood of the recorded positions.

    A coarse scan picks the best bracket (the likelihood need not be unimodal
    over wide intervals), then golden-section search refines it to
    ``rtol * lam``.  A maximum on the interval edge raises
    :class:`BoundaryHitError` unless ``on_boundary="clip"``.
    """
    lo, hi = interval
    if not 0 < lo < hi:
        raise ValueError("need 0 < lo < hi")
    table = harmonics_table(state.modes, record.theta, record.phi)

    def f(lam):
        return log_likelihood(record, state, lam, mass, hbar, table)

    grid = np.linspace(lo, hi, n_scan)
    vals = np.array([f(x) for x in grid])
    i = int(np.argmax(vals))
    a, b = grid[max(i - 1, 0)], grid[min(i + 1, n_scan - 1)]
    est = golden_section_max(f, a, b, rtol * grid[i])
    edge = 2 * rtol * hi
    if est - lo < edge or hi - est < edge:
        if on_boundary == "raise":
            raise BoundaryHitError(est, interval)
        est = min(max(est, lo), hi)
    return est


@dataclass
class CramerRaoResult:
    estimates: np.ndarray
    seeds: list
    n: int
    lam0: float
    t: float
    fisher: float
    qfi: float
    failures: int

    @property
    def variance(self) -> float:
        return float(np.var(self.estimates, ddof=1))

    @property
    def mean(self) -> float:
        return float(np.mean(self.estimates))

    @property
    def stderr(self) -> float:
        return math.sqrt(self.variance / self.estimates.size)

    @property
    def efficiency(self) -> float:
        """Var * N * F; one for an efficient estimator."""
        return self.variance * self.n * self.fisher

    @property
    def quantum_bound(self) -> float:
        return 1.0 / (self.n * self.qfi)


def replica_seed(seed: int, replica: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(entropy=seed, spawn_key=(replica,))


def cramer_rao_experiment(state: SpectralState, t: float, lam0: float, n: int, replicas: int,
                          seed: int = 0, interval=None, mass: float = 1.0, hbar: float = 1.0,
                          threads: int = 1) -> CramerRaoResult:
    """Repeat sample-then-estimate ``replicas`` times and compare with the bounds.

    Replica r uses the seed sequence (seed, r), so results do not depend on
    the number of worker threads or their completion order.
    """
    interval = interval or (lam0 / 2.0, 2.0 * lam0)
    model = lambda_derivative(state, t, lam0, mass, hbar)
    fisher = position_fi_sphere(model).value
    H = qfi_pure(model)

    def one(r):
        rec = sample_positions(state, t, lam0, n, replica_seed(seed, r), mass, hbar)
        try:
            return mle_radius(rec, state, interval, mass, hbar)
        except BoundaryHitError:
            return math.nan

    if threads > 1:
        with ThreadPoolExecutor(threads) as ex:
            est = list(ex.map(one, range(replicas)))
    else:
        est = [one(r) for r in range(replicas)]
    est = np.array(est)
    ok = np.isfinite(est)
    return CramerRaoResult(est[ok], [(seed, r) for r in range(replicas)], n, lam0, t, fisher, H,
                           int((~ok).sum()))
