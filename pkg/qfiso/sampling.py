"""Seeded random generators of antilinear maps, standard subspaces and symplectomorphisms"""

from typing import Optional

import numpy as np
import scipy.linalg
from scipy.stats import unitary_group

from qfiso.common import DEFAULT_TOLERANCES, Tolerances
from qfiso.errors import DimensionMismatch
from qfiso.hilbert import AntilinearMap, ComplexSpace, fixed_real_basis
from qfiso.logger import SUB_LOGGER
from qfiso.quasifree import Symplectomorphism, symplectic_frame
from qfiso.standard_subspace import StandardSubspace, from_real_span, symplectic_form

LOGGER = SUB_LOGGER('sampling')


def random_antilinear(rng: np.random.Generator, dim: int) -> AntilinearMap:
    """Antilinear map with a complex Gaussian matrix (invertible almost surely)"""
    matrix = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return AntilinearMap(matrix / np.sqrt(2 * dim))


def _antisymmetric_generator(rng: np.random.Generator, dim: int, factor: Optional[bool],
                             spread: float) -> np.ndarray:
    if factor is None:
        gauss = rng.standard_normal((dim, dim))
        return spread * (gauss - gauss.T) / (2 * np.sqrt(dim))
    if factor and dim % 2:
        raise ValueError(f'a factor needs an even dimension, got {dim}')
    # rotation generators of prescribed strengths in a random orthonormal frame
    blocks = [np.zeros((1, 1))] * (dim % 2)
    strengths = rng.uniform(0.2, spread, size=dim // 2)
    if not factor and dim % 2 == 0:
        strengths[0] = 0.0
    blocks = [np.array([[0.0, a], [-a, 0.0]]) for a in strengths] + blocks
    frame, _ = np.linalg.qr(rng.standard_normal((dim, dim)))
    return frame @ scipy.linalg.block_diag(*blocks) @ frame.T


def random_standard_subspace(rng: np.random.Generator, dim: int, factor: Optional[bool] = None,
                             spread: float = 2.0,
                             tol: Tolerances = DEFAULT_TOLERANCES) -> StandardSubspace:
    """K = fix(j delta^(1/2)) for a random conjugation j = U conj(U)^* and delta with j delta j = delta^-1.

    factor=None draws a generic generator (a factor iff dim is even), True forces a
    factor, False forces 1 into the spectrum of delta. spread bounds |log delta|.
    """
    unitary = unitary_group.rvs(dim, random_state=rng) if dim > 1 else \
        np.exp(2j * np.pi * rng.uniform()) * np.ones((1, 1))
    conjugation = unitary @ unitary.T
    generator = _antisymmetric_generator(rng, dim, factor, spread)
    # delta = U exp(iA) U^H with A real antisymmetric commutes past j into its inverse
    sqrt_delta = unitary @ scipy.linalg.expm(0.5j * generator) @ unitary.conj().T
    tomita = conjugation @ np.conj(sqrt_delta)
    fixed = fixed_real_basis(tomita, tol)
    if fixed.shape[1] != dim:
        raise DimensionMismatch(f'fixed space of the sampled Tomita map has dim {fixed.shape[1]}')
    subspace = from_real_span(ComplexSpace(dim), fixed, tol)
    LOGGER.debug('sampled standard subspace dim=%d factor=%s', dim, subspace.factor)
    return subspace


def random_symplectomorphism(rng: np.random.Generator, source: StandardSubspace,
                             target: Optional[StandardSubspace] = None,
                             scale: float = 0.5) -> Symplectomorphism:
    """Random q with q^T omega2 q = omega1, built in Darboux frames of both symplectic forms"""
    target = source if target is None else target
    if source.dim != target.dim:
        raise DimensionMismatch(f'source has dim {source.dim}, target has dim {target.dim}')
    frame1, pairs1 = symplectic_frame(symplectic_form(source))
    frame2, pairs2 = symplectic_frame(symplectic_form(target))
    if pairs1 != pairs2:
        raise DimensionMismatch(f'symplectic forms have ranks {2 * pairs1} and {2 * pairs2}')
    dim, rank = source.dim, 2 * pairs1
    standard = np.kron(np.eye(pairs1), np.array([[0.0, 1.0], [-1.0, 0.0]]))
    sym = rng.standard_normal((rank, rank))
    sym = scale * (sym + sym.T) / (2 * np.sqrt(max(rank, 1)))
    kernel = rng.standard_normal((dim - rank, dim - rank))
    blocks = []
    if rank:
        blocks.append(scipy.linalg.expm(standard @ sym))
    if dim > rank:
        blocks.append(scipy.linalg.expm(scale * kernel / np.sqrt(dim)))
    normal_form = scipy.linalg.block_diag(*blocks)
    matrix = frame2 @ normal_form @ np.linalg.inv(frame1)
    return Symplectomorphism(source, target, matrix)
