"""Tests for qfiso/hilbert.py."""

# pylint: disable=missing-class-docstring, missing-function-docstring

import unittest

import numpy as np

from qfiso.errors import ConditioningWarning, InvariantFailure, NotPSD, RankDeficient, Singular
from qfiso.hilbert import (AntilinearMap, ComplexSpace, LinearMap, antilinear_adjoint,
                           antilinear_polar, as_columns, fixed_real_basis, gram_matrix,
                           principal_sqrt_psd, real_orthonormalize, real_qr)
from qfiso.sampling import random_antilinear, random_standard_subspace
from qfiso.standard_subspace import tomita_operator
from qfiso.types import Form

from tests.fixtures import J_MATRIX, S_MATRIX, U1, U2


class TestMaps(unittest.TestCase):

    def test_complex_space_needs_positive_dim(self):
        with self.assertRaises(ValueError):
            ComplexSpace(0)
        self.assertEqual(ComplexSpace(3).dim, 3)

    def test_as_columns(self):
        cols = as_columns([np.array([1, 2]), np.array([3j, 4])])
        self.assertEqual(cols.shape, (2, 2))
        np.testing.assert_allclose(cols[:, 1], [3j, 4])
        with self.assertRaises(ValueError):
            as_columns([])

    def test_antilinear_action(self):
        s = AntilinearMap(S_MATRIX)
        np.testing.assert_allclose(s(np.array([1j, 2.0])), [1.0, -2j])
        np.testing.assert_allclose(s(U1), U1)
        np.testing.assert_allclose(s(U2), U2)

    def test_composition_types(self):
        s = AntilinearMap(S_MATRIX)
        square = s @ s
        self.assertIsInstance(square, LinearMap)
        np.testing.assert_allclose(square.matrix, np.eye(2))
        self.assertTrue(s.is_involution())
        self.assertIsInstance(LinearMap(np.eye(2)) @ s, AntilinearMap)

    def test_flags_are_checked(self):
        with self.assertRaises(InvariantFailure):
            LinearMap(np.array([[0, 1], [0, 0]]), hermitian=True)
        with self.assertRaises(InvariantFailure):
            LinearMap(np.diag([1.0, -1.0]), positive=True)
        LinearMap(np.diag([1.0, 2.0]), positive=True)

    def test_inverse_of_singular(self):
        with self.assertRaises(Singular):
            LinearMap(np.zeros((2, 2))).inverse()

    def test_adjoint_relation(self):
        rng = np.random.default_rng(3)
        mat = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        s = AntilinearMap(mat)
        x = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        y = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        self.assertAlmostEqual(np.vdot(antilinear_adjoint(s)(x), y), np.vdot(s(y), x))


class TestRealGramSchmidt(unittest.TestCase):

    def test_factorization(self):
        rng = np.random.default_rng(0)
        vectors = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        basis, r = real_qr(vectors)
        np.testing.assert_allclose(basis @ r, vectors, atol=1e-12)
        np.testing.assert_allclose(np.real(basis.conj().T @ basis), np.eye(3), atol=1e-12)
        np.testing.assert_allclose(np.tril(r, -1), 0.0)
        self.assertTrue(np.all(np.diag(r) > 0))

    def test_i_times_vector_is_real_independent(self):
        basis = real_orthonormalize([np.array([1.0, 0.0]), np.array([1j, 0.0])])
        self.assertEqual(basis.shape, (2, 2))

    def test_dependent_vectors(self):
        with self.assertRaises(RankDeficient):
            real_qr([U1, 2 * U1])
        with self.assertRaises(RankDeficient):
            real_qr([np.zeros(2)])

    def test_gram_forms(self):
        gram = gram_matrix([U1, U2])
        self.assertAlmostEqual(gram[0, 1], 0.75j)
        np.testing.assert_allclose(gram_matrix([U1, U2], Form.REAL_PART), np.diag([1.25, 1.25]))


class TestPolar(unittest.TestCase):

    def test_reference_polar(self):
        j, delta = antilinear_polar(AntilinearMap(S_MATRIX))
        np.testing.assert_allclose(delta.matrix, np.diag([4.0, 0.25]), atol=1e-12)
        np.testing.assert_allclose(j.matrix, J_MATRIX, atol=1e-12)

    def test_random_polar_residuals(self):
        rng = np.random.default_rng(11)
        for dim in (1, 2, 5, 8):
            polar = antilinear_polar(random_antilinear(rng, dim))
            self.assertLess(polar.residuals['reconstruction'], 1e-10)
            self.assertLess(polar.residuals['antiunitary'], 1e-10)
            self.assertNotIn('j_delta_j', polar.residuals)
            self.assertGreaterEqual(polar.condition, 1.0)

    def test_general_map_is_not_an_involution(self):
        s = random_antilinear(np.random.default_rng(0), 3)
        self.assertFalse(s.is_involution())
        polar = antilinear_polar(s)
        vector = np.array([1.0, 2j, -0.5 + 1j])
        np.testing.assert_allclose(polar.j(polar.delta_function(np.sqrt) @ vector), s(vector),
                                   atol=1e-12)
        np.testing.assert_allclose(polar.delta.matrix, (antilinear_adjoint(s) @ s).matrix,
                                   atol=1e-12)

    def test_involutive_polar_residuals(self):
        rng = np.random.default_rng(12)
        for dim in (2, 3, 6):
            s = tomita_operator(random_standard_subspace(rng, dim))
            polar = antilinear_polar(s, involutive=True)
            self.assertLess(polar.residuals['reconstruction'], 1e-10)
            self.assertLess(polar.residuals['involution'], 1e-10)
            self.assertLess(polar.residuals['j_delta_j'], 1e-8)
            self.assertEqual(polar.notes, [])

    def test_ill_conditioned_involution_warns(self):
        # A conj(A) = 1 with singular values 1e7 and 1e-7: cond(delta) = 1e28
        s = AntilinearMap(np.array([[0.0, 1e7], [1e-7, 0.0]]))
        self.assertTrue(s.is_involution())
        polar = antilinear_polar(s, involutive=True)
        self.assertEqual(len(polar.notes), 1)
        self.assertIsInstance(polar.notes[0], ConditioningWarning)
        np.testing.assert_allclose(polar.eigenvalues, [1e-14, 1e14], rtol=1e-12)
        np.testing.assert_allclose(polar.j.matrix, [[0.0, 1.0], [1.0, 0.0]], atol=1e-12)
        self.assertLess(polar.residuals['reconstruction'], 1e-12)
        self.assertLess(polar.residuals['j_delta_j'], 1e-8)

    def test_singular(self):
        with self.assertRaises(Singular):
            antilinear_polar(AntilinearMap(np.array([[1.0, 0.0], [0.0, 0.0]])))

    def test_fixed_real_basis(self):
        fixed = fixed_real_basis(S_MATRIX)
        self.assertEqual(fixed.shape, (2, 2))
        np.testing.assert_allclose(S_MATRIX @ np.conj(fixed), fixed, atol=1e-12)


class TestSqrt(unittest.TestCase):

    def test_principal_sqrt(self):
        np.testing.assert_allclose(principal_sqrt_psd(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]))

    def test_clips_roundoff(self):
        root = principal_sqrt_psd(np.diag([1.0, -1e-14]))
        np.testing.assert_allclose(root, np.diag([1.0, 0.0]))

    def test_negative(self):
        with self.assertRaises(NotPSD):
            principal_sqrt_psd(np.diag([1.0, -0.5]))


if __name__ == "__main__":
    unittest.main()
