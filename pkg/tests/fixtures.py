"""Shared two-dimensional reference subspace and symplectomorphism for the tests.

In C^2: delta = diag(4, 1/4), j(z1, z2) = (conj z2, conj z1), s = j delta^(1/2),
and K = fix(s) is spanned over R by u1 = (1/2, 1), u2 = (-i/2, i).
"""

import numpy as np

from qfiso.hilbert import ComplexSpace
from qfiso.quasifree import Symplectomorphism
from qfiso.standard_subspace import from_real_span

U1 = np.array([0.5, 1.0], dtype=complex)
U2 = np.array([-0.5j, 1.0j])
S_MATRIX = np.array([[0.0, 0.5], [2.0, 0.0]], dtype=complex)
J_MATRIX = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
HS_REFERENCE = np.sqrt(153.0) / 4


def reference_subspace():
    """K spanned by u1, u2"""
    return from_real_span(ComplexSpace(2), [U1, U2])


def reference_map(subspace=None):
    """Q = diag(2, 1/2) in the basis of K; Q^dagger Q = diag(4, 1/4)"""
    subspace = subspace or reference_subspace()
    return Symplectomorphism(subspace, subspace, np.diag([2.0, 0.5]))
