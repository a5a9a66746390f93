"""Graph inner product on K + iK, the real dagger-adjoint and graph-space norms.

In a Re-orthonormal K-basis the graph Gram matrix is 2*identity, so an operator
given by its K-basis matrix is Hilbert-Schmidt (trace class) w.r.t. <.,.>_s
exactly when that matrix is, with the same Frobenius (nuclear) norm.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from qfiso.common import frobenius, trace_norm
from qfiso.errors import DimensionMismatch, InvariantFailure
from qfiso.logger import SUB_LOGGER
from qfiso.standard_subspace import StandardSubspace, symplectic_form

LOGGER = SUB_LOGGER('graph_space')


@dataclass(frozen=True, eq=False)
class GraphMetric:
    """Graph Gram matrix of a K-basis and its Cholesky whitener"""
    subspace: StandardSubspace
    gram_s: np.ndarray
    whitener: np.ndarray

    def whiten(self, matrix: np.ndarray) -> np.ndarray:
        """Matrix of an operator w.r.t. an orthonormal basis of (K + iK, <.,.>_s)"""
        return self.whitener @ matrix @ np.linalg.inv(self.whitener)


def graph_inner(subspace: StandardSubspace, x: np.ndarray, y: np.ndarray) -> complex:
    """<x, y>_s = <x, y> + <s y, s x>"""
    s = subspace.modular.s
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    return complex(np.vdot(x, y) + np.vdot(s(y), s(x)))


def graph_metric(subspace: StandardSubspace) -> GraphMetric:
    """Graph Gram of the basis; 2*identity for a Re-orthonormal basis"""
    basis = subspace.basis
    s_basis = subspace.modular.s(basis)
    gram = basis.conj().T @ basis + (s_basis.conj().T @ s_basis).T
    gram = (gram + gram.conj().T) / 2
    expected = 2.0 * np.eye(subspace.dim)
    if np.linalg.norm(gram - expected) > 1e-8 * subspace.dim:
        raise InvariantFailure('graph Gram of a Re-orthonormal basis is not 2*identity')
    return GraphMetric(subspace=subspace, gram_s=gram, whitener=np.linalg.cholesky(gram).conj().T)


def dagger_adjoint(matrix: np.ndarray, source: Optional[StandardSubspace] = None,
                   target: Optional[StandardSubspace] = None) -> np.ndarray:
    """T^dagger with Re<T^dagger h, k> = Re<h, T k>; the transpose in Re-orthonormal bases"""
    matrix = np.asarray(matrix)
    if np.iscomplexobj(matrix) and np.any(np.imag(matrix)):
        raise ValueError('dagger_adjoint expects a real matrix (an operator K1 -> K2)')
    matrix = np.real(matrix)
    if source is not None and matrix.shape[1] != source.dim:
        raise DimensionMismatch(f'{matrix.shape} does not act on a space of dim {source.dim}')
    if target is not None and matrix.shape[0] != target.dim:
        raise DimensionMismatch(f'{matrix.shape} does not map into dim {target.dim}')
    dagger = matrix.T.copy()
    if source is not None and target is not None:
        lhs = np.real((source.basis @ dagger).conj().T @ source.basis)
        rhs = np.real(target.basis.conj().T @ (target.basis @ matrix))
        if np.max(np.abs(lhs - rhs), initial=0.0) > 1e-10 * max(1.0, frobenius(matrix)):
            raise InvariantFailure('Re<T^dagger h, k> != Re<h, T k> on basis pairs')
    return dagger


def hs_norm_graph(matrix: np.ndarray, _subspace: Optional[StandardSubspace] = None) -> float:
    """Hilbert-Schmidt norm w.r.t. the graph structure (Frobenius norm in the K-basis)"""
    return frobenius(np.asarray(matrix))


def trace_norm_graph(matrix: np.ndarray, _subspace: Optional[StandardSubspace] = None) -> float:
    """Trace norm w.r.t. the graph structure (nuclear norm in the K-basis)"""
    return trace_norm(np.asarray(matrix))


def indefinite_form(subspace: StandardSubspace, x: np.ndarray, y: np.ndarray) -> complex:
    """gamma(x, y) = <x, y> - <s y, s x>"""
    s = subspace.modular.s
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    return complex(np.vdot(x, y) - np.vdot(s(y), s(x)))


def form_s(_subspace: StandardSubspace, x: np.ndarray, y: np.ndarray) -> complex:
    """S(x, y) = <x, y>"""
    return complex(np.vdot(np.asarray(x, dtype=complex), np.asarray(y, dtype=complex)))


def form_s_prime(symplecto, x: np.ndarray, y: np.ndarray) -> complex:
    """S'(x, y) = <Q x, Q y> with Q extended C-linearly to K1 + iK1"""
    extension = symplecto.extension()
    return complex(np.vdot(extension @ np.asarray(x, dtype=complex),
                           extension @ np.asarray(y, dtype=complex)))


def half_one_plus_i_r(subspace: StandardSubspace) -> np.ndarray:
    """K-basis matrix of (1 + iR)/2 = 1/(1 + delta); Hermitian since the graph Gram is 2*identity"""
    return 0.5 * (np.eye(subspace.dim) + 1j * symplectic_form(subspace))


def apply_coefficients(subspace: StandardSubspace, matrix: np.ndarray,
                       vector: np.ndarray) -> np.ndarray:
    """Apply an operator given by its K-basis matrix to a vector of C^N"""
    return subspace.basis @ (matrix @ subspace.coefficients(vector))
