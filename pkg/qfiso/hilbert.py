"""Finite-dimensional complex Hilbert space primitives.

Vectors live in C^N with <u, v> = u^H v (conjugate-linear in the first slot).
Sets of vectors are passed around as 2-d arrays whose *columns* are the vectors.
An antilinear map is stored as a complex matrix A acting by x -> A conj(x);
all functional calculus goes through a Hermitian eigendecomposition.
"""

from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Union

import numpy as np
import scipy.linalg

from qfiso.common import DEFAULT_TOLERANCES, Tolerances, relative_error
from qfiso.errors import ConditioningWarning, InvariantFailure, NotPSD, RankDeficient, Singular
from qfiso.logger import SUB_LOGGER
from qfiso.types import Form

LOGGER = SUB_LOGGER('hilbert')

Vectors = Union[np.ndarray, Sequence[np.ndarray]]


def as_columns(vectors: Vectors) -> np.ndarray:
    """Stack a sequence of vectors (or pass through a 2-d array) as complex columns"""
    if isinstance(vectors, np.ndarray) and vectors.ndim == 2:
        return vectors.astype(complex)
    vectors = list(vectors)
    if not vectors:
        raise ValueError('need at least one vector')
    return np.column_stack([np.asarray(v, dtype=complex).ravel() for v in vectors])


def _frozen(matrix) -> np.ndarray:
    arr = np.array(matrix, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f'expected a square matrix, got shape {arr.shape}')
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class ComplexSpace:
    """The ambient space C^N"""
    dim: int

    def __post_init__(self):
        if not isinstance(self.dim, (int, np.integer)) or self.dim < 1:
            raise ValueError(f'dim must be a positive integer, got {self.dim!r}')

    def __repr__(self):
        return f'<{__name__}.ComplexSpace(C^{self.dim})>'


@dataclass(frozen=True, eq=False)
class LinearMap:
    """Complex-linear map x -> matrix x; flags, when set, are verified"""
    matrix: np.ndarray
    hermitian: Optional[bool] = None
    positive: Optional[bool] = None

    def __post_init__(self):
        object.__setattr__(self, 'matrix', _frozen(self.matrix))
        mat = self.matrix
        scale = max(1.0, float(np.linalg.norm(mat)))
        if self.hermitian or self.positive:
            if np.linalg.norm(mat - mat.conj().T) > 1e-9 * scale:
                raise InvariantFailure('matrix flagged hermitian is not')
        if self.positive:
            low = float(np.min(np.linalg.eigvalsh((mat + mat.conj().T) / 2)))
            if low <= -1e-9 * scale:
                raise InvariantFailure(f'matrix flagged positive has eigenvalue {low}')

    @property
    def dim(self) -> int:
        """Dimension of the space acted upon"""
        return self.matrix.shape[0]

    def __call__(self, vector: np.ndarray) -> np.ndarray:
        return self.matrix @ np.asarray(vector, dtype=complex)

    def __matmul__(self, other):
        if isinstance(other, AntilinearMap):
            return AntilinearMap(self.matrix @ other.matrix)
        if isinstance(other, LinearMap):
            return LinearMap(self.matrix @ other.matrix)
        return NotImplemented

    def inverse(self) -> 'LinearMap':
        """Inverse map; Singular if not invertible"""
        try:
            return LinearMap(np.linalg.inv(self.matrix))
        except np.linalg.LinAlgError as ex:
            raise Singular(str(ex)) from ex

    def norm(self) -> float:
        """Operator norm"""
        return float(np.linalg.norm(self.matrix, 2))


@dataclass(frozen=True, eq=False)
class AntilinearMap:
    """Antilinear map x -> matrix conj(x)"""
    matrix: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'matrix', _frozen(self.matrix))

    @property
    def dim(self) -> int:
        """Dimension of the space acted upon"""
        return self.matrix.shape[0]

    def __call__(self, vector: np.ndarray) -> np.ndarray:
        return self.matrix @ np.conj(np.asarray(vector, dtype=complex))

    def __matmul__(self, other):
        if isinstance(other, AntilinearMap):
            return LinearMap(self.matrix @ np.conj(other.matrix))
        if isinstance(other, LinearMap):
            return AntilinearMap(self.matrix @ np.conj(other.matrix))
        return NotImplemented

    def is_involution(self, tol: float = DEFAULT_TOLERANCES.involution) -> bool:
        """A conj(A) == 1 within tol"""
        square = self.matrix @ np.conj(self.matrix)
        return relative_error(square, np.eye(self.dim)) <= tol

    def norm(self) -> float:
        """Operator norm (conjugation is isometric)"""
        return float(np.linalg.norm(self.matrix, 2))


def real_qr(vectors: Vectors, tol: Tolerances = DEFAULT_TOLERANCES):
    """Modified Gram-Schmidt w.r.t. Re<.,.> with one re-orthogonalization pass.

    Returns (basis, r) with basis columns Re-orthonormal, r real upper triangular
    with positive diagonal, and vectors == basis @ r.
    """
    columns = as_columns(vectors)
    count = columns.shape[1]
    basis = np.zeros_like(columns)
    r = np.zeros((count, count))
    for k in range(count):
        original = columns[:, k]
        vec = original.copy()
        for _ in range(2):
            for i in range(k):
                coeff = float(np.real(np.vdot(basis[:, i], vec)))
                vec = vec - coeff * basis[:, i]
                r[i, k] += coeff
        pivot = float(np.linalg.norm(vec))
        scale = float(np.linalg.norm(original))
        if scale == 0.0 or pivot <= tol.rank * scale:
            raise RankDeficient(f'vector {k} is R-linearly dependent on its predecessors'
                                f' (pivot {pivot:.3e}, norm {scale:.3e})')
        basis[:, k] = vec / pivot
        r[k, k] = pivot
    return basis, r


def real_orthonormalize(vectors: Vectors, tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """Re-orthonormal basis (as columns) of the real span of vectors, in input order"""
    basis, _ = real_qr(vectors, tol)
    return basis


def gram_matrix(vectors: Vectors, form: Form = Form.COMPLEX) -> np.ndarray:
    """G_ij = <v_i, v_j>, or its real part"""
    columns = as_columns(vectors)
    gram = columns.conj().T @ columns
    if form == Form.REAL_PART:
        return np.real(gram)
    return (gram + gram.conj().T) / 2


def antilinear_adjoint(s: AntilinearMap) -> AntilinearMap:
    """Adjoint fixed by <s* x, y> = <s y, x>; its matrix is the transpose"""
    return AntilinearMap(s.matrix.T)


def hermitian_function(matrix: np.ndarray, func: Callable[[np.ndarray], np.ndarray],
                       eigen=None) -> np.ndarray:
    """f(H) for Hermitian H via its eigendecomposition (optionally precomputed)"""
    if eigen is None:
        herm = (matrix + matrix.conj().T) / 2
        eigen = scipy.linalg.eigh(herm)
    values, vectors = eigen
    return (vectors * func(values)) @ vectors.conj().T


def principal_sqrt_psd(matrix: np.ndarray, tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """Principal square root of a Hermitian PSD matrix.

    Eigenvalues in [-tol*|M|, 0) are clipped to 0; anything more negative is NotPSD.
    """
    herm = (matrix + matrix.conj().T) / 2
    values, vectors = scipy.linalg.eigh(herm)
    floor = -tol.psd_clip * max(1.0, float(np.linalg.norm(herm, 2)))
    if values.size and values[0] < floor:
        raise NotPSD(f'smallest eigenvalue {values[0]:.3e} below {floor:.3e}')
    values = np.clip(values, 0.0, None)
    return (vectors * np.sqrt(values)) @ vectors.conj().T


def fixed_real_basis(matrix: np.ndarray, tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """Re-orthonormal basis (columns) of {x : matrix conj(x) = x}, by realification"""
    mat = np.asarray(matrix, dtype=complex)
    dim = mat.shape[0]
    re_part, im_part = mat.real, mat.imag
    # x = a + ib  ->  A conj(x) = (Re a + Im b) + i (Im a - Re b)
    realified = np.block([[re_part, im_part], [im_part, -re_part]]) - np.eye(2 * dim)
    kernel = scipy.linalg.null_space(realified, rcond=max(tol.rank, 1e-12) * 100)
    if kernel.shape[1] == 0:
        return np.zeros((dim, 0), dtype=complex)
    return kernel[:dim] + 1j * kernel[dim:]


@dataclass
class PolarDecomposition:
    """s = j delta^(1/2); unpacks as (j, delta)"""
    j: AntilinearMap
    delta: LinearMap
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    residuals: dict = field(default_factory=dict)
    notes: List[ConditioningWarning] = field(default_factory=list)

    def __iter__(self):
        return iter((self.j, self.delta))

    @property
    def condition(self) -> float:
        """cond(delta)"""
        return float(self.eigenvalues[-1] / self.eigenvalues[0])

    def delta_function(self, func: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
        """Matrix of f(delta) from the cached eigendecomposition"""
        return hermitian_function(None, func, (self.eigenvalues, self.eigenvectors))


def antilinear_polar(s: AntilinearMap, tol: Tolerances = DEFAULT_TOLERANCES,
                     involutive: bool = False) -> PolarDecomposition:
    """Polar decomposition of an invertible antilinear map from the SVD A = U S V^H.

    delta = conj(V) S^2 V^T and j = U V^H, so cond(delta) is never squared on the way.
    For involutive maps (s^2 = 1) the residuals also cover j^2 = 1 and j delta j = delta^-1.
    """
    mat = s.matrix
    if not np.all(np.isfinite(mat)):
        raise Singular('antilinear map has non-finite entries')
    left, singular_values, right_h = scipy.linalg.svd(mat)
    sigma_max, sigma_min = float(singular_values[0]), float(singular_values[-1])
    # an involution has sigma_min = 1/sigma_max, so only an exact zero is rank loss there
    floor = 0.0 if involutive else np.finfo(float).eps * sigma_max
    if sigma_max == 0.0 or sigma_min <= floor:
        raise Singular(f'antilinear map is numerically singular (sigma_min={sigma_min:.3e},'
                       f' sigma_max={sigma_max:.3e})')

    # eigenvectors of delta are the columns of conj(V) = right_h^T, ascending
    vectors = right_h.T[:, ::-1]
    values = singular_values[::-1] ** 2
    delta_matrix = (vectors * values) @ vectors.conj().T
    delta_matrix = (delta_matrix + delta_matrix.conj().T) / 2
    j = AntilinearMap(left @ right_h)
    delta = LinearMap(delta_matrix)
    result = PolarDecomposition(j=j, delta=delta, eigenvalues=values, eigenvectors=vectors)

    if result.condition > tol.conditioning:
        note = ConditioningWarning(f'cond(delta) = {result.condition:.3e} exceeds'
                                   f' {tol.conditioning:.1e}')
        LOGGER.warning('%s', note)
        result.notes.append(note)

    sqrt = (vectors * singular_values[::-1]) @ vectors.conj().T
    eye = np.eye(s.dim)
    result.residuals = {
        'reconstruction': relative_error(j.matrix @ np.conj(sqrt), mat),
        'antiunitary': relative_error(j.matrix @ j.matrix.conj().T, eye),
    }
    if involutive:
        inverse = (vectors / values) @ vectors.conj().T
        jdj = (j @ delta @ j).matrix
        result.residuals['involution'] = relative_error(j.matrix @ np.conj(j.matrix), eye)
        result.residuals['j_delta_j'] = float(np.linalg.norm(jdj - inverse) /
                                              max(1.0, float(np.linalg.norm(inverse))))
    LOGGER.debug('polar decomposition: cond=%.3e residuals=%s', result.condition, result.residuals)
    if result.residuals['reconstruction'] > tol.involution * 100:
        raise InvariantFailure(f'polar decomposition does not reconstruct s: {result.residuals}')
    return result
