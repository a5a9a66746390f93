"""Common utility classes for various use-cases."""

from dataclasses import dataclass, fields, replace
from enum import Enum
import json

import numpy as np


@dataclass(frozen=True)
class Tolerances:
    """Numerical tolerances used by the checks; all relative unless noted"""
    real_orthonormal: float = 1e-10
    rank: float = 1e-10
    involution: float = 1e-10
    eigen_one_scale: float = 1e-8
    psd_clip: float = 1e-10
    identity: float = 1e-8
    symplectic: float = 1e-9
    conditioning: float = 1e12

    def eigen_one(self, delta_norm: float) -> float:
        """Band around 1 inside which an eigenvalue of delta counts as 1"""
        return self.eigen_one_scale * (1.0 + delta_norm)

    def override(self, **kwargs) -> 'Tolerances':
        """Copy with some tolerances replaced; unknown names are rejected"""
        known = {f.name for f in fields(self)}
        unknown = set(kwargs) - known
        if unknown:
            raise ValueError(f'unknown tolerances: {sorted(unknown)}')
        return replace(self, **{k: float(v) for k, v in kwargs.items()})


DEFAULT_TOLERANCES = Tolerances()


def relative_error(actual: np.ndarray, expected: np.ndarray) -> float:
    """Frobenius distance of actual from expected, relative to max(1, |expected|)"""
    actual = np.asarray(actual)
    expected = np.asarray(expected)
    scale = max(1.0, float(np.linalg.norm(expected)))
    return float(np.linalg.norm(actual - expected)) / scale


def frobenius(matrix: np.ndarray) -> float:
    """Frobenius (Hilbert-Schmidt) norm"""
    return float(np.linalg.norm(matrix, 'fro'))


def trace_norm(matrix: np.ndarray) -> float:
    """Sum of singular values"""
    return float(np.sum(np.linalg.svd(matrix, compute_uv=False)))


class ArrayEncoder(json.JSONEncoder):
    """Custom encoder for numpy scalars/arrays and enums in metadata"""
    def default(self, o):
        if isinstance(o, np.ndarray):
            return o.tolist()
        if isinstance(o, np.integer):
            return int(o)
        if isinstance(o, np.floating):
            return float(o)
        if isinstance(o, Enum):
            return str(o)
        if isinstance(o, complex):
            return [o.real, o.imag]
        return super().default(o)
