"""Quadrature of the squared integral kernels bounding |1 - Q^dagger Q|_2 for the
Klein-Gordon mass change.

The cutoff chi is the indicator of the ball of radius 3/2 smoothed by a unit-mass
bump of radius 1/4, so chi == 1 on |x| <= 5/4. Its unitary Fourier transform is
radial and is tabulated once per dimension. The kernels

    phi-sector:  omega_m(p)^(1/2) [int chi^(p-q) F(q) chi^(q-k) dq] omega_m(k)^(1/2)
    pi-sector:   omega_m(p)^(-1/2) [int chi^(p-q) G(q) chi^(q-k) dq] omega_m(k)^(-1/2)

are reduced to radial integrals by expanding chi^(p-q) in angular channels
(cosines in d=2, Legendre polynomials in d=3).
"""

# pylint: disable=too-many-locals

import csv
from dataclasses import dataclass
from functools import cached_property, lru_cache
from pathlib import Path
from typing import Iterable, List, Sequence, TextIO, Tuple

import numpy as np
import scipy.fft
import scipy.integrate
import scipy.special
from scipy.interpolate import interp1d

from qfiso.errors import (ExplicitlyUnsupported, InvariantFailure, MassNegative,
                          QuadratureNotConverged)
from qfiso.galerkin import bump
from qfiso.logger import SUB_LOGGER

LOGGER = SUB_LOGGER('kernel_bound')

BALL_RADIUS = 1.5
MOLLIFIER_RADIUS = 0.25
TABLE_MAX = 400.0
TABLE_STEP = 0.025
MOLLIFIER_NODES = 200
PLATEAU_TOLERANCE = 1e-3
DECAY_WINDOWS = 6
DECAY_START = 100.0

UNSUPPORTED = {
    1: 'd=1: the phi-sector integrand F(q) ~ 1/|q| near q = 0 is not integrable '
       '(infrared divergence); only zero-mean test functions give a finite answer',
    4: 'd=4: the kernel integrals diverge logarithmically at large momenta, '
       'the Hilbert-Schmidt estimate does not work in four dimensions',
}


def scaled_bessel(order: float, z: np.ndarray) -> np.ndarray:
    """J_nu(z) / z^nu, with its series value 1/(2^nu Gamma(nu+1)) near z = 0"""
    z = np.asarray(z, dtype=float)
    limit = 1.0 / (2.0 ** order * scipy.special.gamma(order + 1.0))
    small = np.abs(z) < 1e-8
    safe = np.where(small, 1.0, z)
    return np.where(small, limit, scipy.special.jv(order, safe) / safe ** order)


@dataclass(frozen=True, eq=False)
class CutoffTable:
    """Radial profile of the unitary Fourier transform of chi"""
    dim: int
    momenta: np.ndarray
    values: np.ndarray

    @cached_property
    def _interp(self):
        return interp1d(self.momenta, self.values, kind='cubic', bounds_error=False,
                        fill_value=0.0, assume_sorted=True)

    def __call__(self, rho: np.ndarray) -> np.ndarray:
        return self._interp(np.abs(np.asarray(rho, dtype=float)))

    def inverse(self, radii: np.ndarray) -> np.ndarray:
        """chi(r) recovered from the table by the radial inverse transform"""
        radii = np.atleast_1d(np.asarray(radii, dtype=float))
        order = self.dim / 2 - 1
        weight = self.momenta ** (self.dim - 1) * self.values
        integrand = weight[None, :] * scaled_bessel(order, np.outer(radii, self.momenta))
        return scipy.integrate.simpson(integrand, x=self.momenta, axis=1)

    def plateau_error(self, radii: Sequence[float] = (0.0, 0.25, 0.5, 0.75, 1.0)) -> float:
        """max |chi(r) - 1| for r in the unit ball"""
        return float(np.max(np.abs(self.inverse(np.asarray(radii)) - 1.0)))

    def decay_profile(self) -> np.ndarray:
        """Window maxima of |chi^(rho)| rho^4 beyond DECAY_START"""
        edges = np.linspace(DECAY_START, self.momenta[-1], DECAY_WINDOWS + 1)
        scaled = np.abs(self.values) * self.momenta ** 4
        return np.array([np.max(scaled[(self.momenta >= lo) & (self.momenta <= hi)])
                         for lo, hi in zip(edges[:-1], edges[1:])])

    @property
    def decay_certified(self) -> bool:
        """|chi^| rho^4 strictly decreasing across the tail windows"""
        return bool(np.all(np.diff(self.decay_profile()) < 0))


def _mollifier_transform(dim: int, momenta: np.ndarray) -> np.ndarray:
    """Transform of the unit-mass bump of radius MOLLIFIER_RADIUS, 1 at rho = 0"""
    nodes, weights = np.polynomial.legendre.leggauss(MOLLIFIER_NODES)
    radii = MOLLIFIER_RADIUS * (nodes + 1) / 2
    weights = MOLLIFIER_RADIUS / 2 * weights * bump(radii / MOLLIFIER_RADIUS) * radii ** (dim - 1)
    raw = scaled_bessel(dim / 2 - 1, np.outer(momenta, radii)) @ weights
    return raw / raw[0]


@lru_cache(maxsize=4)
def get_cutoff_table(dim: int) -> CutoffTable:
    """Tabulated chi^ for the given dimension; InvariantFailure if chi != 1 on the unit ball"""
    momenta = np.arange(0.0, TABLE_MAX + TABLE_STEP / 2, TABLE_STEP)
    ball = BALL_RADIUS ** dim * scaled_bessel(dim / 2, BALL_RADIUS * momenta)
    table = CutoffTable(dim=dim, momenta=momenta,
                        values=ball * _mollifier_transform(dim, momenta))
    error = table.plateau_error()
    if error > PLATEAU_TOLERANCE:
        raise InvariantFailure(f'cutoff table in d={dim} misses chi = 1 on the unit ball by {error:.2e}')
    if not table.decay_certified:
        LOGGER.warning('cutoff table in d=%d: tail decay not certified (%s)', dim,
                       table.decay_profile())
    LOGGER.debug('cutoff table d=%d: %d momenta, plateau error %.2e', dim, momenta.size, error)
    return table


@dataclass(frozen=True)
class KernelBoundConfig:
    """Quadrature parameters of the first refinement level"""
    dim: int
    mass: float
    radial_nodes: int = 96
    channels: int = 128
    radial_extent: float = 40.0
    levels: int = 2
    rtol: float = 0.01

    def __post_init__(self):
        if self.dim in UNSUPPORTED:
            raise ExplicitlyUnsupported(UNSUPPORTED[self.dim])
        if self.dim not in (2, 3):
            raise ValueError(f'kernel bounds are defined for d in (2, 3), got {self.dim}')
        if self.mass < 0:
            raise MassNegative(f'mass must be > 0, got {self.mass}')
        if self.mass == 0:
            raise ValueError('kernel bounds need a positive mass')
        if self.radial_nodes < 4 or self.channels < 4 or self.levels < 2:
            raise ValueError('need radial_nodes >= 4, channels >= 4 and levels >= 2')
        if not self.radial_extent > 0 or not self.rtol > 0:
            raise ValueError('radial_extent and rtol must be > 0')


@dataclass(frozen=True)
class KernelBoundResult:
    """Hilbert-Schmidt bounds of both sectors at the finest level"""
    dim: int
    mass: float
    bound_phi: float
    bound_pi: float
    levels: int
    rel_change: float


def _channels_2d(table: CutoffTable, radii: np.ndarray, count: int) -> Tuple[np.ndarray, np.ndarray]:
    """kappa_l(r, r') = int_0^2pi chi^(|p - q|) cos(l phi) dphi and multiplicities"""
    angles = 2 * np.pi * np.arange(count) / count
    dist = np.sqrt(np.maximum(radii[:, None, None] ** 2 + radii[None, :, None] ** 2 -
                              2 * np.outer(radii, radii)[:, :, None] * np.cos(angles), 0.0))
    kappa = 2 * np.pi / count * np.real(scipy.fft.rfft(table(dist), axis=-1))
    mult = np.full(kappa.shape[-1], 2.0)
    mult[0] = 1.0
    if count % 2 == 0:
        mult[-1] = 1.0
    return kappa, mult


def _channels_3d(table: CutoffTable, radii: np.ndarray, count: int) -> Tuple[np.ndarray, np.ndarray]:
    """kappa_l(r, r') = 2 pi int_-1^1 chi^(|p - q|) P_l(t) dt and multiplicities 2l + 1"""
    nodes, weights = np.polynomial.legendre.leggauss(count)
    degrees = np.arange(count)
    legendre = scipy.special.eval_legendre(degrees[None, :], nodes[:, None]) * weights[:, None]
    dist = np.sqrt(np.maximum(radii[:, None, None] ** 2 + radii[None, :, None] ** 2 -
                              2 * np.outer(radii, radii)[:, :, None] * nodes, 0.0))
    kappa = 2 * np.pi * table(dist) @ legendre
    return kappa, 2.0 * degrees + 1.0


def _dispersion(mass: float, radii: np.ndarray) -> np.ndarray:
    return np.sqrt(mass ** 2 + radii ** 2)


def squared_kernel_norms(config: KernelBoundConfig, radial_nodes: int,
                         channels: int) -> Tuple[float, float]:
    """(|phi-kernel|_2^2, |pi-kernel|_2^2) on one quadrature level"""
    dim, mass = config.dim, config.mass
    table = get_cutoff_table(dim)
    nodes, weights = np.polynomial.legendre.leggauss(radial_nodes)
    radii = config.radial_extent * (nodes + 1) / 2
    measure = config.radial_extent / 2 * weights * radii ** (dim - 1)
    builder = _channels_2d if dim == 2 else _channels_3d
    kappa, mult = builder(table, radii, channels)
    stack = np.moveaxis(kappa, -1, 0)

    omega_0, omega_m = radii, _dispersion(mass, radii)
    inner_phi = mass ** 2 / (omega_0 * omega_m * (omega_0 + omega_m))
    inner_pi = mass ** 2 / (omega_m + omega_0)
    out = []
    for inner, outer in ((inner_phi, omega_m), (inner_pi, 1.0 / omega_m)):
        alpha = stack @ ((measure * inner)[:, None] * stack)
        weight = measure * outer
        per_channel = np.einsum('i,lik,k->l', weight, alpha ** 2, weight)
        out.append(float(np.dot(mult, per_channel)) / (2 * np.pi) ** (2 * dim))
    return out[0], out[1]


def kernel_bound(config: KernelBoundConfig) -> KernelBoundResult:
    """Both Hilbert-Schmidt bounds; QuadratureNotConverged if the last two levels
    differ by more than config.rtol"""
    history: List[Tuple[float, float]] = []
    for level in range(config.levels):
        nodes = config.radial_nodes * 2 ** level
        channels = config.channels * 2 ** level
        history.append(squared_kernel_norms(config, nodes, channels))
        LOGGER.debug('kernel d=%d m=%g level %d (%d nodes, %d channels): %s', config.dim,
                     config.mass, level, nodes, channels, history[-1])
    bounds = np.sqrt(np.array(history))
    last, previous = bounds[-1], bounds[-2]
    change = float(np.max(np.abs(last - previous) / np.maximum(np.abs(last), 1e-300)))
    if change > config.rtol:
        raise QuadratureNotConverged(
            f'kernel bounds d={config.dim} m={config.mass:g} changed by {change:.3e}'
            f' between the last two levels (rtol {config.rtol:g})', values=bounds)
    result = KernelBoundResult(dim=config.dim, mass=config.mass, bound_phi=float(last[0]),
                               bound_pi=float(last[1]), levels=config.levels,
                               rel_change=change)
    LOGGER.info('kernel bound %s', result)
    return result


@dataclass(frozen=True)
class MassUniformReport:
    """Sampled maxima of the mass-uniform estimates"""
    masses: Tuple[float, ...]
    samples: int
    f_max: float
    g_max: float
    literal_max: float

    @property
    def passed(self) -> bool:
        """F |q| (1 + q^2) <= 1 and G <= m (1 + q^2)^(-1/2) on every sample"""
        return self.f_max <= 1.0 + 1e-12 and self.g_max <= 1.0 + 1e-12


def check_mass_uniform_constants(masses: Sequence[float], samples: int = 10_000,
                                 seed: int = 0) -> MassUniformReport:
    """Sample |q| log-uniformly over 1e-4..1e4 (plus |q| = 1) for every 0 < m <= 1.

    literal_max is the largest m^2 (1 + |q|)^2 / (m^2 + q^2) seen; it reaches 2 at
    m = |q| = 1, so only the (1 + q^2) form gives a constant of 1.
    """
    for mass in masses:
        if not 0 < mass <= 1:
            raise ValueError(f'mass-uniform estimates hold for 0 < m <= 1, got {mass}')
    rng = np.random.default_rng(seed)
    momenta = np.append(10.0 ** rng.uniform(-4, 4, size=samples), 1.0)
    f_max = g_max = literal_max = 0.0
    for mass in masses:
        omega_m = _dispersion(mass, momenta)
        f_term = mass ** 2 / (momenta * omega_m * (momenta + omega_m))
        g_term = mass ** 2 / (omega_m + momenta)
        f_max = max(f_max, float(np.max(f_term * momenta * (1 + momenta ** 2))))
        g_max = max(g_max, float(np.max(g_term * np.sqrt(1 + momenta ** 2) / mass)))
        literal = mass ** 2 * (1 + momenta) ** 2 / (mass ** 2 + momenta ** 2)
        literal_max = max(literal_max, float(np.max(literal)))
    report = MassUniformReport(masses=tuple(float(m) for m in masses), samples=momenta.size,
                               f_max=f_max, g_max=g_max, literal_max=literal_max)
    LOGGER.debug('mass-uniform constants %s', report)
    return report


KERNEL_COLUMNS = ('dim', 'mass', 'bound_phi', 'bound_pi', 'levels', 'rel_change')


def write_kernel_csv(file: TextIO, results: Iterable[KernelBoundResult]):
    """One row per (dim, mass)"""
    writer = csv.writer(file, lineterminator='\n')
    writer.writerow(KERNEL_COLUMNS)
    for res in results:
        writer.writerow([res.dim, f'{res.mass:.12g}', f'{res.bound_phi:.12g}',
                         f'{res.bound_pi:.12g}', res.levels, f'{res.rel_change:.6g}'])


KERNEL_CSV_NAME = 'kernel_bounds.csv'


def run_kernel_bounds(config) -> Tuple[Path, List[KernelBoundResult]]:
    """Bounds for every configured (dim, mass), written to kernel_bounds.csv.

    All requests are validated before any quadrature runs, so an unsupported
    dimension fails fast with its reason.
    """
    section = config.kernel
    requests = [KernelBoundConfig(dim=dim, mass=mass, radial_nodes=section.radial_nodes,
                                  channels=section.channels, radial_extent=section.radial_extent,
                                  levels=section.levels, rtol=section.rtol)
                for dim in section.dims for mass in sorted(section.masses, reverse=True)]
    results = [kernel_bound(request) for request in requests]
    directory = config.output_directory()
    directory.mkdir(parents=True, exist_ok=True)
    target = directory / KERNEL_CSV_NAME
    with open(target, 'w', newline='', encoding='utf-8') as file:
        write_kernel_csv(file, results)
    LOGGER.info('wrote %d kernel bounds to %s', len(results), target)
    return target, results
