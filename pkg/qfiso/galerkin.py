"""Momentum grids, compactly supported bump families and their tabulated Fourier transforms.

Transforms use the unitary convention f^(p) = (2 pi)^(-d/2) int f(x) exp(-i p.x) dx.
"""

# pylint: disable=too-many-arguments

from dataclasses import dataclass
from functools import cached_property, lru_cache
import hashlib
import json
import math
import os
from pathlib import Path
import tempfile
import threading
from typing import List, Optional, Tuple

import numpy as np
import scipy.fft
from scipy.interpolate import interp1d

from qfiso.common import ArrayEncoder
from qfiso.errors import ConfigError
from qfiso.logger import SUB_LOGGER

LOGGER = SUB_LOGGER('galerkin')

TABLE_VERSION = 1
TABLE_OVERSAMPLE = 8
TABLE_BOX = 64.0
MAX_LEVELS = 12


@dataclass(frozen=True)
class GridSpec:
    """Symmetric cubic momentum lattice: M points per axis, spacing pi/P, no node at p = 0"""
    points: int
    extent: float

    def __post_init__(self):
        if not isinstance(self.points, (int, np.integer)) or self.points < 2 or self.points % 2:
            raise ValueError(f'grid points per axis must be an even integer >= 2, got {self.points!r}')
        if not self.extent > 0:
            raise ValueError(f'grid extent must be > 0, got {self.extent!r}')
        object.__setattr__(self, 'extent', float(self.extent))

    @classmethod
    def parse(cls, text: str) -> 'GridSpec':
        """From 'M:P'"""
        try:
            points, extent = text.strip().split(':')
            return cls(int(points), float(extent))
        except ValueError as ex:
            raise ConfigError(f"bad grid spec '{text}' (expected M:P): {ex}") from ex

    def __str__(self):
        return f'{self.points}:{self.extent:g}'

    @property
    def spacing(self) -> float:
        """h = pi / P"""
        return math.pi / self.extent

    @property
    def max_momentum(self) -> float:
        """Largest |p_a| on an axis"""
        return (self.points - 1) / 2 * self.spacing

    def axis(self) -> np.ndarray:
        """Nodes (k - M/2 + 1/2) h, k = 0..M-1; exactly symmetric under p -> -p"""
        return (np.arange(self.points) - self.points / 2 + 0.5) * self.spacing

    def nodes(self, dim: int) -> np.ndarray:
        """All lattice points as a (M^d, d) array, first axis slowest"""
        axes = np.meshgrid(*([self.axis()] * dim), indexing='ij')
        return np.stack([a.ravel() for a in axes], axis=-1)

    def weight(self, dim: int) -> float:
        """Quadrature weight h^d"""
        return self.spacing ** dim

    def refine(self) -> 'GridSpec':
        """(2M, 2P): half the spacing at the same momentum extent"""
        return GridSpec(2 * self.points, 2 * self.extent)


@dataclass(frozen=True)
class BasisSpec:
    """Number of test functions in the phi- and pi-sector"""
    n_f: int
    n_g: int

    def __post_init__(self):
        if self.n_f < 1 or self.n_g < 1:
            raise ValueError(f'need at least one test function per sector, got {self}')

    @classmethod
    def square(cls, count: int) -> 'BasisSpec':
        """n_f = n_g = count"""
        return cls(count, count)

    @property
    def total(self) -> int:
        """n_f + n_g"""
        return self.n_f + self.n_g

    @property
    def label(self) -> str:
        """n for square bases, n_f+n_g otherwise"""
        return str(self.n_f) if self.n_f == self.n_g else f'{self.n_f}+{self.n_g}'


@dataclass(frozen=True)
class Bump:
    """Tensor bump prod_a b((x_a - c_a) / w), supported in the cube of half-width w around c"""
    center: Tuple[float, ...]
    width: float


def bump(t: np.ndarray) -> np.ndarray:
    """exp(-1/(1 - t^2)) on |t| < 1, zero elsewhere"""
    t = np.asarray(t, dtype=float)
    inside = np.abs(t) < 1.0
    safe = np.where(inside, 1.0 - t ** 2, 1.0)
    return np.where(inside, np.exp(-1.0 / safe), 0.0)


def bump_layout(dim: int, count: int) -> List[Bump]:
    """First count bumps of the hierarchical family inside the unit ball.

    Level w = 1/2, 1/4, ... contributes the centres c in w Z^d with |c| + w sqrt(d) <= 1,
    sorted by (|c|^2, c); the order makes bases of different sizes nested.
    """
    bumps: List[Bump] = []
    width = 0.5
    for _ in range(MAX_LEVELS):
        radius = 1.0 - width * math.sqrt(dim)
        if radius >= 0:
            reach = int(math.floor(radius / width + 1e-12))
            ticks = np.arange(-reach, reach + 1)
            grid = np.stack([g.ravel() for g in np.meshgrid(*([ticks] * dim), indexing='ij')],
                            axis=-1)
            inside = [tuple(int(v) for v in row) for row in grid
                      if width * math.sqrt(float(np.dot(row, row))) <= radius + 1e-12]
            inside.sort(key=lambda c: (sum(v * v for v in c), c))
            bumps.extend(Bump(tuple(width * v for v in c), width) for c in inside)
            if len(bumps) >= count:
                return bumps[:count]
        width /= 2
    raise ValueError(f'{count} bumps need more than {MAX_LEVELS} levels in d={dim}')


@dataclass(frozen=True, eq=False)
class BumpTable:
    """Fourier transform of the unit bump, int b(t) exp(-ikt) dt, tabulated for k >= 0"""
    momenta: np.ndarray
    values: np.ndarray

    @property
    def mass(self) -> float:
        """int b(t) dt"""
        return float(self.values[0])

    @cached_property
    def _interp(self):
        return interp1d(self.momenta, self.values, kind='cubic', bounds_error=False,
                        fill_value=0.0, assume_sorted=True)

    def __call__(self, k: np.ndarray) -> np.ndarray:
        return self._interp(np.abs(np.asarray(k, dtype=float)))


@lru_cache(maxsize=16)
def unit_bump_table(k_max: float) -> BumpTable:
    """FFT of the unit bump on a periodic box of half-width TABLE_BOX, sampled
    TABLE_OVERSAMPLE times finer than needed to resolve k_max"""
    step = min(1.0 / 64, math.pi / (TABLE_OVERSAMPLE * max(k_max, 1.0)))
    samples = 1 << int(math.ceil(math.log2(2 * TABLE_BOX / step)))
    step = 2 * TABLE_BOX / samples
    positions = -TABLE_BOX + step * np.arange(samples)
    spectrum = scipy.fft.rfft(bump(positions))
    index = np.arange(spectrum.size)
    # shift from t_0 = -L to the origin: exp(i k_j L) = (-1)^j
    values = step * np.real(spectrum * (-1.0) ** index)
    momenta = math.pi / TABLE_BOX * index
    keep = momenta <= max(2 * k_max, momenta[8])
    LOGGER.debug('unit bump table: %d samples, %d momenta up to %.3g',
                 samples, int(np.sum(keep)), momenta[keep][-1])
    return BumpTable(momenta=momenta[keep], values=values[keep])


def bump_transforms(dim: int, bumps: List[Bump], grid: GridSpec,
                    unit_mass: bool = False) -> np.ndarray:
    """(M^d, len(bumps)) array of bump transforms on the grid nodes"""
    table = unit_bump_table(grid.max_momentum * max(b.width for b in bumps))
    axis = grid.axis()
    norm = (2 * math.pi) ** (-dim / 2)
    out = np.empty((grid.points ** dim, len(bumps)), dtype=complex)
    for col, item in enumerate(bumps):
        factor = table(item.width * axis)
        factor = factor / table.mass if unit_mass else item.width * factor
        per_axis = [factor * np.exp(-1j * axis * c) for c in item.center]
        values = per_axis[0]
        for extra in per_axis[1:]:
            values = np.multiply.outer(values, extra)
        out[:, col] = norm * values.ravel()
    return out


def family_transforms(dim: int, count: int, grid: GridSpec,
                      zero_mean: bool = False) -> np.ndarray:
    """Transforms of the first count test functions of the family.

    With zero_mean the functions are differences of consecutive unit-mass bumps,
    so every transform vanishes at p = 0.
    """
    if not zero_mean:
        return bump_transforms(dim, bump_layout(dim, count), grid)
    unit = bump_transforms(dim, bump_layout(dim, count + 1), grid, unit_mass=True)
    return unit[:, 1:] - unit[:, :-1]


class TransformCache:
    """Write-once store of test-function transforms, in memory and optionally on disk.

    Disk entries are <key>.npy with a <key>.json sidecar; both are published with
    os.replace, so concurrent readers never see partial files.
    """

    def __init__(self, directory: Optional[str] = None):
        self.directory = Path(directory).expanduser() if directory else None
        self._memory = {}
        self._lock = threading.Lock()

    @staticmethod
    def describe(dim: int, count: int, grid: GridSpec, zero_mean: bool) -> dict:
        """Sidecar metadata of an entry"""
        return {
            'version': TABLE_VERSION,
            'dim': dim,
            'count': count,
            'grid': str(grid),
            'zero_mean': bool(zero_mean),
            'oversample': TABLE_OVERSAMPLE,
        }

    @classmethod
    def key(cls, dim: int, count: int, grid: GridSpec, zero_mean: bool) -> str:
        """Content hash of the entry description"""
        text = json.dumps(cls.describe(dim, count, grid, zero_mean), sort_keys=True)
        return hashlib.sha256(text.encode('utf-8')).hexdigest()[:24]

    def get(self, dim: int, count: int, grid: GridSpec, zero_mean: bool = False) -> np.ndarray:
        """Transforms of the first count test functions; computed on a miss"""
        key = self.key(dim, count, grid, zero_mean)
        with self._lock:
            if key in self._memory:
                return self._memory[key]
        data = self._read(key)
        if data is None:
            data = family_transforms(dim, count, grid, zero_mean)
            self._write(key, data, self.describe(dim, count, grid, zero_mean))
        data.setflags(write=False)
        with self._lock:
            return self._memory.setdefault(key, data)

    def _read(self, key: str) -> Optional[np.ndarray]:
        if self.directory is None:
            return None
        path = self.directory / f'{key}.npy'
        if not path.is_file():
            return None
        try:
            data = np.load(path, allow_pickle=False)
        except (OSError, ValueError) as ex:
            LOGGER.warning('ignoring unreadable cache entry %s: %s', path, ex)
            return None
        LOGGER.debug('transform cache hit %s', path)
        return data

    def _publish(self, target: Path, writer):
        handle, tmp = tempfile.mkstemp(dir=self.directory, prefix='.tmp-', suffix=target.suffix)
        try:
            with os.fdopen(handle, 'wb') as file:
                writer(file)
            os.replace(tmp, target)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    def _write(self, key: str, data: np.ndarray, meta: dict):
        if self.directory is None:
            return
        self.directory.mkdir(parents=True, exist_ok=True)
        sidecar = json.dumps({**meta, 'key': key, 'shape': data.shape}, cls=ArrayEncoder,
                             indent=2, sort_keys=True)
        self._publish(self.directory / f'{key}.npy', lambda f: np.save(f, data))
        self._publish(self.directory / f'{key}.json', lambda f: f.write(sidecar.encode('utf-8')))
        LOGGER.debug('transform cache stored %s (%s)', key, meta)
