"""Standard subspaces of C^N and their modular data.

A standard subspace K is stored through a Re-orthonormal real basis B (columns),
with B invertible over C. Operators that map K into K are handled as real
matrices in that basis; everything else in the basis is a complex matrix.
"""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Dict, Iterable, List, Tuple

import numpy as np
import scipy.linalg

from qfiso.common import DEFAULT_TOLERANCES, Tolerances, relative_error
from qfiso.errors import (ConditioningWarning, DimensionMismatch, InvariantFailure, NonFactor,
                          NotStandard)
from qfiso.hilbert import (AntilinearMap, ComplexSpace, LinearMap, PolarDecomposition, Vectors,
                           antilinear_polar, as_columns, hermitian_function, real_qr)
from qfiso.logger import SUB_LOGGER
from qfiso.types import NotStandardReason

LOGGER = SUB_LOGGER('standard_subspace')


@dataclass(frozen=True, eq=False)
class StandardSubspace:
    """Real subspace K of C^N with K + iK = C^N and K n iK = {0}.

    basis: Re-orthonormal basis of K as columns of an invertible N x N matrix
    gram_factor: real upper triangular r with generators == basis @ r
    """
    space: ComplexSpace
    basis: np.ndarray
    gram_factor: np.ndarray
    tolerances: Tolerances = field(default=DEFAULT_TOLERANCES, repr=False)

    standard = True

    @property
    def dim(self) -> int:
        """N, the complex dimension of the ambient space (= real dimension of K)"""
        return self.space.dim

    @cached_property
    def basis_inverse(self) -> np.ndarray:
        """B^-1"""
        return np.linalg.inv(self.basis)

    @cached_property
    def modular(self) -> 'ModularData':
        """Cached modular data"""
        return modular_data(self)

    @cached_property
    def _factor_data(self) -> Tuple[bool, np.ndarray]:
        return is_factor(self)

    @property
    def factor(self) -> bool:
        """True iff 1 is not an eigenvalue of delta"""
        return self._factor_data[0]

    @property
    def fixed_space(self) -> np.ndarray:
        """Re-orthonormal basis (columns) of K n K'"""
        return self._factor_data[1]

    def project(self, vectors: np.ndarray) -> np.ndarray:
        """Re-orthogonal projection onto K (columns or a single vector)"""
        vectors = np.asarray(vectors, dtype=complex)
        return self.basis @ np.real(self.basis.conj().T @ vectors)

    def coefficients(self, vectors: np.ndarray) -> np.ndarray:
        """Complex coefficients c with x = B c"""
        return self.basis_inverse @ np.asarray(vectors, dtype=complex)

    def __repr__(self):
        return f'<{__name__}.StandardSubspace(dim={self.dim})>'


@dataclass(frozen=True, eq=False)
class ModularData:
    """(s, j, delta) and the operators derived from delta by functional calculus"""
    s: AntilinearMap
    j: AntilinearMap
    delta: LinearMap
    delta_eigen: Tuple[np.ndarray, np.ndarray]
    R: LinearMap  # pylint: disable=invalid-name
    theta: LinearMap
    gamma: LinearMap
    projections: Tuple[LinearMap, LinearMap, LinearMap]
    notes: List[ConditioningWarning] = field(default_factory=list)

    @property
    def e_minus(self) -> LinearMap:
        """Spectral projection of delta on (0, 1)"""
        return self.projections[0]

    @property
    def e_one(self) -> LinearMap:
        """Spectral projection of delta on {1}"""
        return self.projections[1]

    @property
    def e_plus(self) -> LinearMap:
        """Spectral projection of delta on (1, inf)"""
        return self.projections[2]

    @property
    def eigenvalues(self) -> np.ndarray:
        """Spectrum of delta, ascending"""
        return self.delta_eigen[0]

    def function(self, func: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
        """Matrix of f(delta) on C^N"""
        return hermitian_function(None, func, self.delta_eigen)


def _spectral_split(values: np.ndarray, band: float):
    minus = values < 1.0 - band
    plus = values > 1.0 + band
    return minus, ~(minus | plus), plus


def from_real_span(space: ComplexSpace, vectors: Vectors,
                   tol: Tolerances = DEFAULT_TOLERANCES) -> StandardSubspace:
    """Standard subspace spanned over R by vectors; NotStandard explains failures"""
    columns = as_columns(vectors)
    if columns.shape[0] != space.dim:
        raise DimensionMismatch(f'vectors have length {columns.shape[0]}, space is C^{space.dim}')
    count = columns.shape[1]
    if count > space.dim:
        raise NotStandard(NotStandardReason.TOO_MANY_GENERATORS,
                          f'{count} generators for C^{space.dim}')
    basis, gram_factor = real_qr(columns, tol)
    if count < space.dim:
        raise NotStandard(NotStandardReason.TOO_FEW_GENERATORS,
                          f'{count} generators for C^{space.dim}')
    singular_values = np.linalg.svd(basis, compute_uv=False)
    if singular_values[-1] <= tol.rank * singular_values[0]:
        raise NotStandard(NotStandardReason.COMPLEX_DEGENERATE,
                          'K n iK != {0} (basis matrix singular over C)')
    subspace = StandardSubspace(space=space, basis=basis, gram_factor=gram_factor, tolerances=tol)
    LOGGER.debug('standard subspace of C^%d, sigma_min(B)=%.3e', space.dim, singular_values[-1])
    return subspace


def tomita_operator(subspace: StandardSubspace) -> AntilinearMap:
    """s(h + ik) = h - ik; matrix B conj(B^-1)"""
    return AntilinearMap(subspace.basis @ np.conj(subspace.basis_inverse))


def modular_data(subspace: StandardSubspace) -> ModularData:
    """s, j, delta, R, theta, gamma and spectral projections of K"""
    tol = subspace.tolerances
    s = tomita_operator(subspace)
    polar: PolarDecomposition = antilinear_polar(s, tol, involutive=True)
    values, vectors = polar.eigenvalues, polar.eigenvectors
    band = tol.eigen_one(float(values[-1]))
    minus, one, plus = _spectral_split(values, band)

    def calc(func):
        return hermitian_function(None, func, (values, vectors))

    gamma_values = np.where(plus, 1.0, np.where(minus, -1.0, 0.0))
    # tan(theta/2) = exp(-|log delta|/2)
    theta_values = 2.0 * np.arctan(np.sqrt(np.minimum(values, 1.0 / values)))
    theta_values = np.where(one, np.pi / 2, theta_values)
    projections = tuple(LinearMap(calc(lambda _v, mask=mask: mask.astype(float)))
                        for mask in (minus, one, plus))
    return ModularData(
        s=s,
        j=polar.j,
        delta=polar.delta,
        delta_eigen=(values, vectors),
        R=LinearMap(calc(lambda v: 1j * (v - 1.0) / (v + 1.0))),
        theta=LinearMap(calc(lambda _v: theta_values), hermitian=True),
        gamma=LinearMap(calc(lambda _v: gamma_values), hermitian=True),
        projections=projections,
        notes=list(polar.notes),
    )


def _real_span_basis(vectors: np.ndarray, rtol: float) -> np.ndarray:
    """Re-orthonormal basis of the real span of possibly dependent columns"""
    if vectors.shape[1] == 0:
        return np.zeros((vectors.shape[0], 0), dtype=complex)
    realified = np.vstack([vectors.real, vectors.imag])
    left, sing, _ = np.linalg.svd(realified, full_matrices=False)
    if sing.size == 0 or sing[0] == 0.0:
        return np.zeros((vectors.shape[0], 0), dtype=complex)
    rank = int(np.sum(sing > rtol * sing[0]))
    dim = vectors.shape[0]
    return left[:dim, :rank] + 1j * left[dim:, :rank]


def is_factor(subspace: StandardSubspace) -> Tuple[bool, np.ndarray]:
    """(factor, basis of K n K'); K n K' is spanned by h + jh, i(h - jh) for delta h = h"""
    tol = subspace.tolerances
    mod = subspace.modular
    values, vectors = mod.delta_eigen
    _, one, _ = _spectral_split(values, tol.eigen_one(float(values[-1])))
    if not np.any(one):
        return True, np.zeros((subspace.dim, 0), dtype=complex)
    eig_one = vectors[:, one]
    j_eig = mod.j(eig_one)
    candidates = np.hstack([eig_one + j_eig, 1j * (eig_one - j_eig)])
    fixed = _real_span_basis(candidates, 1e-8)
    residual = float(np.linalg.norm(fixed - subspace.project(fixed)))
    if residual > 1e-8:
        if not mod.notes:
            raise InvariantFailure(f'fixed space leaves K (residual {residual:.3e})')
        # ill-conditioned delta widens the band; report the candidates as they are
        LOGGER.warning('fixed space leaves K by %.3e under %s', residual, mod.notes[0])
    LOGGER.debug('not a factor: eigenvalue 1 with multiplicity %d', int(np.sum(one)))
    return False, fixed


def symplectic_complement(subspace: StandardSubspace) -> StandardSubspace:
    """K' = jK, checked against Im<b_i, j b_k> = 0"""
    j = subspace.modular.j
    complement = j(subspace.basis)
    pairing = np.imag(subspace.basis.conj().T @ complement)
    if np.max(np.abs(pairing)) > 1e-8 * max(1.0, float(np.linalg.norm(complement))):
        raise InvariantFailure('jK is not symplectically orthogonal to K')
    return from_real_span(subspace.space, complement, subspace.tolerances)


def polariser_inverse(subspace: StandardSubspace) -> LinearMap:
    """R^-1 = -i (delta + 1)(delta - 1)^-1; only for factors"""
    if not subspace.factor:
        raise NonFactor('R is not invertible: 1 is in the spectrum of delta')
    mod = subspace.modular
    inverse = LinearMap(mod.function(lambda v: -1j * (v + 1.0) / (v - 1.0)))
    roundtrip = inverse.matrix @ mod.R.matrix @ subspace.basis
    err = relative_error(roundtrip, subspace.basis)
    if err > subspace.tolerances.identity * max(1.0, inverse.norm()):
        raise InvariantFailure(f'R^-1 R b != b (relative error {err:.3e})')
    return inverse


def symplectic_form(subspace: StandardSubspace) -> np.ndarray:
    """omega_ik = Im<b_i, b_k>; equals the K-basis matrix of R"""
    gram = subspace.basis.conj().T @ subspace.basis
    omega = np.imag(gram)
    return (omega - omega.T) / 2


def coefficient_operator(subspace: StandardSubspace, matrix: np.ndarray) -> np.ndarray:
    """Matrix B^-1 L B of a complex-linear map L in the K-basis"""
    return subspace.basis_inverse @ np.asarray(matrix) @ subspace.basis


def coefficient_function(subspace: StandardSubspace,
                         func: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """K-basis matrix of f(delta)"""
    return coefficient_operator(subspace, subspace.modular.function(func))


def modular_flow(subspace: StandardSubspace, t: float) -> LinearMap:
    """delta^(it)"""
    return LinearMap(subspace.modular.function(lambda v: np.exp(1j * t * np.log(v))))


def check_modular_invariance(subspace: StandardSubspace,
                             times: Iterable[float] = (0.3, 1.0, np.pi),
                             tol: float = 1e-8) -> bool:
    """R K in K and delta^(it) K = K for every t in times"""
    mod = subspace.modular
    moved = [mod.R.matrix @ subspace.basis]
    moved += [modular_flow(subspace, t).matrix @ subspace.basis for t in times]
    worst = max(float(np.linalg.norm(m - subspace.project(m))) for m in moved)
    LOGGER.debug('modular invariance defect %.3e', worst)
    return worst <= tol


def theta_gamma_identity(subspace: StandardSubspace, tol: float = 1e-9) -> bool:
    """tan(theta/2) = exp(-|log delta|/2), gamma = sgn log delta and R = i gamma cos(theta)"""
    mod = subspace.modular
    values, vectors = mod.delta_eigen
    band = subspace.tolerances.eigen_one(float(values[-1]))
    _, one, _ = _spectral_split(values, band)
    # diagonal in the eigenbasis of delta
    theta = np.real(np.diag(vectors.conj().T @ mod.theta.matrix @ vectors))
    gamma = np.real(np.diag(vectors.conj().T @ mod.gamma.matrix @ vectors))
    log_values = np.log(values)
    expected_gamma = np.where(one, 0.0, np.sign(log_values))
    ok = np.allclose(np.tan(theta / 2), np.exp(-0.5 * np.abs(log_values)), rtol=0, atol=1e3 * band) \
        and np.allclose(gamma, expected_gamma, rtol=0, atol=tol)
    r_from_angles = 1j * mod.gamma.matrix @ hermitian_function(mod.theta.matrix, np.cos)
    return bool(ok and relative_error(r_from_angles, mod.R.matrix) <= tol)


def direct_sum(*subspaces: StandardSubspace) -> StandardSubspace:
    """Block direct sum K_1 + K_2 + ... in C^(N_1 + N_2 + ...)"""
    blocks = scipy.linalg.block_diag(*[k.basis for k in subspaces])
    return from_real_span(ComplexSpace(blocks.shape[0]), blocks, subspaces[0].tolerances)


def _intersection_dim(first: np.ndarray, second: np.ndarray, rtol: float = 1e-8) -> int:
    """Real dimension of span_R(first) n span_R(second), both Re-orthonormal"""
    stacked = np.hstack([first, -second])
    realified = np.vstack([stacked.real, stacked.imag])
    sing = np.linalg.svd(realified, compute_uv=False)
    rank = int(np.sum(sing > rtol * max(1.0, sing[0])))
    return stacked.shape[1] - rank


def modular_residuals(subspace: StandardSubspace,
                      flow_times: Iterable[float] = (0.3, 1.0, np.pi)) -> Dict[str, float]:
    """Residuals of the modular identities; each should be ~0"""
    mod = subspace.modular
    eye = np.eye(subspace.dim)
    basis = subspace.basis
    s_mat, j_mat = mod.s.matrix, mod.j.matrix
    theta, gamma, r_mat = mod.theta.matrix, mod.gamma.matrix, mod.R.matrix
    sqrt_delta = mod.function(np.sqrt)
    inverse_delta = mod.function(lambda v: 1.0 / v)
    jdj = (mod.j @ mod.delta @ mod.j).matrix
    jgj = (mod.j @ mod.gamma @ mod.j).matrix
    theta_values = np.linalg.eigvalsh(theta)
    complement = mod.j(basis)
    half_angle = mod.function(lambda v: np.exp(-0.5 * np.abs(np.log(v))))
    tan_half = hermitian_function(theta, lambda v: np.tan(v / 2))

    residuals = {
        's_fixes_basis': relative_error(mod.s(basis), basis),
        's_involution': relative_error(s_mat @ np.conj(s_mat), eye),
        'reconstruction': relative_error(j_mat @ np.conj(sqrt_delta), s_mat),
        'j_involution': relative_error(j_mat @ np.conj(j_mat), eye),
        'j_delta_j': relative_error(jdj, inverse_delta),
        'jK_is_complement': float(np.max(np.abs(np.imag(basis.conj().T @ complement)))),
        'fixed_space': float(abs(_intersection_dim(basis, complement)
                                 - subspace.fixed_space.shape[1])),
        'polariser': float(np.max(np.abs(np.imag(basis.conj().T @ basis)
                                         - np.real(basis.conj().T @ (r_mat @ basis))))),
        'R_preserves_K': float(np.linalg.norm(r_mat @ basis - subspace.project(r_mat @ basis))),
        'R_norm': max(0.0, float(np.linalg.norm(r_mat, 2)) - 1.0),
        'R_is_i_gamma_cos_theta': relative_error(
            1j * gamma @ hermitian_function(theta, np.cos), r_mat),
        'gamma_split': relative_error(mod.e_plus.matrix - mod.e_minus.matrix, gamma),
        'projections_sum': relative_error(
            mod.e_minus.matrix + mod.e_one.matrix + mod.e_plus.matrix, eye),
        'theta_range': float(max(0.0, -theta_values[0], theta_values[-1] - np.pi / 2)),
        'gamma_theta_commute': float(np.linalg.norm(gamma @ theta - theta @ gamma)),
        'j_theta_commute': float(np.linalg.norm(j_mat @ np.conj(theta) - theta @ j_mat)),
        'j_gamma_j': relative_error(jgj, -gamma),
        'tan_half_theta': relative_error(tan_half, half_angle),
    }
    flow = 0.0
    for t in flow_times:
        moved = modular_flow(subspace, t).matrix @ basis
        flow = max(flow, float(np.linalg.norm(moved - subspace.project(moved))))
    residuals['modular_flow_preserves_K'] = flow
    return residuals
