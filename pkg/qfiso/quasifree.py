"""Symplectomorphisms between standard subspaces and quasi-free isomorphism criteria.

Every operator is represented by its matrix in the Re-orthonormal K1-basis
(coefficient picture): a real matrix when it maps K1 into K1, a complex one when
it only acts on K1 + iK1. The criteria reduce to small dense computations:

    R1 in the K1-basis           r1 = Im<b_i, b_k>
    Q^dagger Q                   q^T q
    1/(1 + delta1)               (1 + i r1) / 2
"""

from dataclasses import dataclass, field
from typing import Callable, List, Tuple

import numpy as np
import scipy.linalg

from qfiso.common import DEFAULT_TOLERANCES, Tolerances, frobenius, relative_error, trace_norm
from qfiso.errors import (DimensionMismatch, InvariantFailure, MismatchWithDagger, NonFactor,
                          Singular, SpectrumAtOne, SpectrumHit)
from qfiso.hilbert import principal_sqrt_psd
from qfiso.logger import SUB_LOGGER
from qfiso.standard_subspace import StandardSubspace, coefficient_function, symplectic_form

LOGGER = SUB_LOGGER('quasifree')


@dataclass(frozen=True, eq=False)
class Symplectomorphism:
    """Real-linear bijection K1 -> K2, as a real matrix q with Q b1_k = sum_l q_lk b2_l"""
    source: StandardSubspace
    target: StandardSubspace
    matrix: np.ndarray

    def __post_init__(self):
        if self.source.dim != self.target.dim:
            raise DimensionMismatch(f'source has dim {self.source.dim},'
                                    f' target has dim {self.target.dim}')
        matrix = np.asarray(self.matrix)
        if np.iscomplexobj(matrix):
            if np.any(np.abs(np.imag(matrix)) > 0):
                raise ValueError('symplectomorphism matrix must be real')
            matrix = np.real(matrix)
        matrix = np.array(matrix, dtype=float)
        if matrix.shape != (self.source.dim, self.source.dim):
            raise DimensionMismatch(f'matrix shape {matrix.shape} for dim {self.source.dim}')
        sing = np.linalg.svd(matrix, compute_uv=False)
        if sing[-1] <= 1e3 * np.finfo(float).eps * sing[0]:
            raise Singular('symplectomorphism matrix is not invertible')
        matrix.setflags(write=False)
        object.__setattr__(self, 'matrix', matrix)

    @classmethod
    def identity(cls, subspace: StandardSubspace) -> 'Symplectomorphism':
        """Identity K -> K"""
        return cls(subspace, subspace, np.eye(subspace.dim))

    @property
    def dim(self) -> int:
        """Real dimension of K1"""
        return self.source.dim

    @property
    def inverse_matrix(self) -> np.ndarray:
        """q^-1"""
        return np.linalg.inv(self.matrix)

    def inverse(self) -> 'Symplectomorphism':
        """Q^-1 : K2 -> K1"""
        return Symplectomorphism(self.target, self.source, self.inverse_matrix)

    def compose(self, first: 'Symplectomorphism') -> 'Symplectomorphism':
        """self o first"""
        if first.target is not self.source:
            raise DimensionMismatch('composition needs first.target == self.source')
        return Symplectomorphism(first.source, self.target, self.matrix @ first.matrix)

    def extension(self) -> np.ndarray:
        """Matrix on C^N of the C-linear extension to K1 + iK1"""
        return self.target.basis @ self.matrix @ self.source.basis_inverse

    def __call__(self, vector: np.ndarray) -> np.ndarray:
        return self.extension() @ np.asarray(vector, dtype=complex)


@dataclass
class CriterionReport:
    """Criterion operator in the K1-basis together with its graph-space norms"""
    criterion_name: str
    operator_matrix: np.ndarray
    hs_norm: float
    trace_norm: float
    notes: List[str] = field(default_factory=list)

    @classmethod
    def build(cls, name: str, matrix: np.ndarray, notes=None) -> 'CriterionReport':
        """Report with norms computed from matrix"""
        return cls(criterion_name=name, operator_matrix=matrix, hs_norm=frobenius(matrix),
                   trace_norm=trace_norm(matrix), notes=list(notes or []))

    def __repr__(self):
        return (f'<{__name__}.CriterionReport({self.criterion_name}:'
                f' hs={self.hs_norm:.6g}, trace={self.trace_norm:.6g})>')


def _notes(symplecto: Symplectomorphism) -> List[str]:
    notes = [str(note) for note in symplecto.source.modular.notes]
    if symplecto.target is not symplecto.source:
        notes += [str(note) for note in symplecto.target.modular.notes]
    return notes


def _realify_if_close(matrix: np.ndarray, scale: float = 1.0) -> np.ndarray:
    if np.linalg.norm(np.imag(matrix)) <= 1e-9 * max(1.0, scale):
        return np.real(matrix)
    return matrix


def check_symplectomorphism(symplecto: Symplectomorphism,
                            tol: Tolerances = DEFAULT_TOLERANCES) -> bool:
    """Im<Q b_i, Q b_k> == Im<b_i, b_k> for all pairs, i.e. q^T omega2 q == omega1"""
    omega1 = symplectic_form(symplecto.source)
    omega2 = symplectic_form(symplecto.target)
    qmat = symplecto.matrix
    pulled_back = qmat.T @ omega2 @ qmat
    scale = 1.0 + np.linalg.norm(qmat, 2) ** 2 * max(1.0, np.linalg.norm(omega2, 2))
    error = float(np.max(np.abs(pulled_back - omega1), initial=0.0))
    LOGGER.debug('symplectic form defect %.3e (scale %.3e)', error, scale)
    return error <= tol.symplectic * scale


def qdagger_q(symplecto: Symplectomorphism) -> np.ndarray:
    """Q^dagger Q = q^T q, symmetric positive definite"""
    qmat = symplecto.matrix
    product = qmat.T @ qmat
    return (product + product.T) / 2


def _sqrt_difference(first: np.ndarray, second: np.ndarray, tol: Tolerances) -> np.ndarray:
    return principal_sqrt_psd(first, tol) - principal_sqrt_psd(second, tol)


def ay_criterion(symplecto: Symplectomorphism,
                 tol: Tolerances = DEFAULT_TOLERANCES) -> CriterionReport:
    """[1 + iR1]^(1/2) - [iR1 + Q^dagger Q]^(1/2) on K1 + iK1"""
    r1 = symplectic_form(symplecto.source)
    eye = np.eye(symplecto.dim)
    operator = _sqrt_difference(eye + 1j * r1, 1j * r1 + qdagger_q(symplecto), tol)
    return CriterionReport.build('araki-yamagami', operator, _notes(symplecto))


def factor_product(symplecto: Symplectomorphism,
                   tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """R1 Q^-1 R2^-1 Q, checked against Q^dagger Q"""
    if not (symplecto.source.factor and symplecto.target.factor):
        raise NonFactor('factor criterion needs both subspaces to be factors')
    r1 = symplectic_form(symplecto.source)
    r2 = symplectic_form(symplecto.target)
    qmat = symplecto.matrix
    product = r1 @ np.linalg.solve(qmat, np.linalg.solve(r2, qmat))
    dagger = qdagger_q(symplecto)
    err = relative_error(product, dagger)
    if err > tol.identity:
        raise MismatchWithDagger(f'R1 Q^-1 R2^-1 Q deviates from Q^dagger Q by {err:.3e}')
    return product


def factor_criterion(symplecto: Symplectomorphism,
                     tol: Tolerances = DEFAULT_TOLERANCES) -> CriterionReport:
    """[1 + iR1]^(1/2) - [iR1 + R1 Q^-1 R2^-1 Q]^(1/2)"""
    product = factor_product(symplecto, tol)
    r1 = symplectic_form(symplecto.source)
    eye = np.eye(symplecto.dim)
    operator = _sqrt_difference(eye + 1j * r1, 1j * r1 + product, tol)
    return CriterionReport.build('factor', operator, _notes(symplecto))


def conjugated_function(symplecto: Symplectomorphism,
                        func: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """Q^-1 f(delta2) Q in the K1-basis"""
    qmat = symplecto.matrix
    return np.linalg.solve(qmat, coefficient_function(symplecto.target, func) @ qmat)


def equiv_pair(symplecto: Symplectomorphism) -> Tuple[CriterionReport, CriterionReport]:
    """1 - Q^dagger Q on K1 and (1 + delta1)^(-1/2) - Q^-1 (1 + delta2)^(-1/2) Q on K1 + iK1"""
    eye = np.eye(symplecto.dim)
    first = CriterionReport.build('one-minus-qdq', eye - qdagger_q(symplecto), _notes(symplecto))

    def inv_sqrt(values):
        return (1.0 + values) ** -0.5

    operator = coefficient_function(symplecto.source, inv_sqrt) - \
        conjugated_function(symplecto, inv_sqrt)
    second = CriterionReport.build('inverse-sqrt-difference', operator, _notes(symplecto))
    return first, second


def _spectrum_near(subspace: StandardSubspace, point: complex, band: float) -> bool:
    return bool(np.any(np.abs(subspace.modular.eigenvalues - point) <= band))


def vd_criterion(symplecto: Symplectomorphism,
                 tol: Tolerances = DEFAULT_TOLERANCES) -> CriterionReport:
    """1 - tanh(log(delta1)/4) Q^-1 coth(log(delta2)/4) Q"""
    for name, subspace in (('delta1', symplecto.source), ('delta2', symplecto.target)):
        band = tol.eigen_one(float(subspace.modular.eigenvalues[-1]))
        if _spectrum_near(subspace, 1.0, band):
            raise SpectrumAtOne(f'{name} has an eigenvalue within {band:.1e} of 1')
    tanh1 = coefficient_function(symplecto.source, lambda v: np.tanh(np.log(v) / 4))
    coth2 = conjugated_function(symplecto, lambda v: 1.0 / np.tanh(np.log(v) / 4))
    operator = np.eye(symplecto.dim) - tanh1 @ coth2
    operator = _realify_if_close(operator, frobenius(operator))
    return CriterionReport.build('van-daele', operator, _notes(symplecto))


def resolvent_difference(symplecto: Symplectomorphism, lam: complex,
                         tol: Tolerances = DEFAULT_TOLERANCES) -> CriterionReport:
    """(delta1 - lam)^-1 - Q^-1 (delta2 - lam)^-1 Q, with the lam = -1 closed form
    and the E (.) F sandwich verified"""
    if not (symplecto.source.factor and symplecto.target.factor):
        raise NonFactor('resolvent identities need both subspaces to be factors')
    lam = complex(lam)
    for subspace in (symplecto.source, symplecto.target):
        values = subspace.modular.eigenvalues
        band = 1e-10 * (1.0 + abs(lam)) * max(1.0, float(values[-1]))
        if _spectrum_near(subspace, lam, band):
            raise SpectrumHit(f'lambda={lam} is within {band:.1e} of the spectrum of delta')

    def resolvent(point):
        return lambda v: 1.0 / (v - point)

    def difference(point):
        return coefficient_function(symplecto.source, resolvent(point)) - \
            conjugated_function(symplecto, resolvent(point))

    eye = np.eye(symplecto.dim)
    at_minus_one = difference(-1.0)
    closed_form = -0.5 * (eye - qdagger_q(symplecto)) @ \
        conjugated_function(symplecto, lambda v: (1.0 - v) / (1.0 + v))
    err = relative_error(at_minus_one, closed_form)
    if err > tol.identity:
        raise InvariantFailure(f'lambda=-1 closed form off by {err:.3e}')

    notes = _notes(symplecto)
    if lam == -1.0:
        return CriterionReport.build('resolvent(-1)', at_minus_one, notes)

    operator = difference(lam)
    left = eye + (lam + 1.0) * coefficient_function(symplecto.source, resolvent(lam))
    right = eye + (lam + 1.0) * conjugated_function(symplecto, resolvent(lam))
    err = relative_error(left @ at_minus_one @ right, operator)
    if err > tol.identity:
        raise InvariantFailure(f'E (.) F sandwich off by {err:.3e} at lambda={lam}')
    return CriterionReport.build(f'resolvent({lam:g})', operator, notes)


def abs_defect(symplecto: Symplectomorphism,
               tol: Tolerances = DEFAULT_TOLERANCES) -> CriterionReport:
    """1 - |Q| with |Q| = (Q^dagger Q)^(1/2); checks 1 - Q^dagger Q = (1 - |Q|)(1 + |Q|)"""
    eye = np.eye(symplecto.dim)
    qdq = qdagger_q(symplecto)
    modulus = np.real(principal_sqrt_psd(qdq, tol))
    err = relative_error((eye - modulus) @ (eye + modulus), eye - qdq)
    if err > tol.identity:
        raise InvariantFailure(f'1 - QdQ != (1 - |Q|)(1 + |Q|), error {err:.3e}')
    return CriterionReport.build('one-minus-abs-q', eye - modulus, _notes(symplecto))


def commutator_split(first: np.ndarray, second: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """((A+B)(A-B), A^2 - B^2 + [B, A]); both sides of the same identity"""
    lhs = (first + second) @ (first - second)
    rhs = first @ first - second @ second + (second @ first - first @ second)
    return lhs, rhs


def commutator_report(symplecto: Symplectomorphism, alpha: float = 1.0,
                      tol: Tolerances = DEFAULT_TOLERANCES) -> CriterionReport:
    """(1 + delta1)^-alpha B - B (1 + delta1)^-alpha, B = Q^-1 (1 + delta2)^-1 Q"""
    if alpha <= 0:
        raise ValueError(f'alpha must be > 0, got {alpha}')
    power = coefficient_function(symplecto.source, lambda v: (1.0 + v) ** -alpha)
    conjugated = conjugated_function(symplecto, lambda v: 1.0 / (1.0 + v))
    resolvent1 = coefficient_function(symplecto.source, lambda v: 1.0 / (1.0 + v))
    lhs, rhs = commutator_split(resolvent1, conjugated)
    err = relative_error(lhs, rhs)
    if err > tol.identity:
        raise InvariantFailure(f'(A+B)(A-B) identity off by {err:.3e}')
    operator = power @ conjugated - conjugated @ power
    return CriterionReport.build(f'commutator(alpha={alpha:g})', operator, _notes(symplecto))


def schatten_split(a1: np.ndarray, b1: np.ndarray, a2: np.ndarray, b2: np.ndarray):
    """(A1 B1 - A2 B2, A1 (B1 - B2) + (A1 - A2) B2)"""
    return a1 @ b1 - a2 @ b2, a1 @ (b1 - b2) + (a1 - a2) @ b2


def symplectic_frame(omega: np.ndarray, rtol: float = 1e-10) -> Tuple[np.ndarray, int]:
    """Real S with S^T omega S = J + 0 (J = n blocks [[0, 1], [-1, 0]]), and n.

    Built from the real Schur form of the antisymmetric omega, which is block
    diagonal with 2x2 rotation generators and zeros.
    """
    omega = (omega - omega.T) / 2
    dim = omega.shape[0]
    form, vectors = scipy.linalg.schur(omega, output='real')
    scale = max(1.0, float(np.max(np.abs(omega), initial=0.0)))
    pairs, kernel = [], []
    idx = 0
    while idx < dim:
        if idx + 1 < dim and abs(form[idx + 1, idx]) > rtol * scale:
            strength = form[idx, idx + 1]
            first, second = vectors[:, idx], vectors[:, idx + 1]
            if strength < 0:
                first, second = second, first
            norm = np.sqrt(abs(strength))
            pairs.append((first / norm, second / norm))
            idx += 2
        else:
            kernel.append(vectors[:, idx])
            idx += 1
    columns = [v for pair in pairs for v in pair] + kernel
    return np.column_stack(columns), len(pairs)
