"""Tests for qfiso/sampling.py."""

# pylint: disable=missing-class-docstring, missing-function-docstring

import unittest

from hypothesis import given, seed, settings, strategies as st
import numpy as np

from qfiso.errors import DimensionMismatch
from qfiso.quasifree import check_symplectomorphism
from qfiso.sampling import random_antilinear, random_standard_subspace, random_symplectomorphism
from qfiso.standard_subspace import modular_residuals


class TestSampling(unittest.TestCase):

    @seed(42)
    @settings(max_examples=25, deadline=None)
    @given(st.integers(min_value=0, max_value=2 ** 32 - 1), st.integers(min_value=1, max_value=8))
    def test_standard_subspaces(self, rng_seed, dim):
        k = random_standard_subspace(np.random.default_rng(rng_seed), dim)
        self.assertEqual(k.dim, dim)
        self.assertLess(max(modular_residuals(k).values()), 1e-9)

    @seed(42)
    @settings(max_examples=20, deadline=None)
    @given(st.integers(min_value=0, max_value=2 ** 32 - 1), st.integers(min_value=1, max_value=4))
    def test_symplectomorphisms(self, rng_seed, half):
        rng = np.random.default_rng(rng_seed)
        first = random_standard_subspace(rng, 2 * half, factor=True)
        second = random_standard_subspace(rng, 2 * half, factor=True)
        self.assertTrue(first.factor and second.factor)
        self.assertTrue(check_symplectomorphism(random_symplectomorphism(rng, first, second)))

    def test_forced_non_factor(self):
        k = random_standard_subspace(np.random.default_rng(0), 4, factor=False)
        self.assertFalse(k.factor)
        self.assertEqual(k.fixed_space.shape[1], 2)

    def test_odd_factor_impossible(self):
        with self.assertRaises(ValueError):
            random_standard_subspace(np.random.default_rng(0), 3, factor=True)

    def test_reproducible(self):
        first = random_standard_subspace(np.random.default_rng(123), 4)
        second = random_standard_subspace(np.random.default_rng(123), 4)
        np.testing.assert_array_equal(first.basis, second.basis)

    def test_mismatched_dims(self):
        rng = np.random.default_rng(1)
        with self.assertRaises(DimensionMismatch):
            random_symplectomorphism(rng, random_standard_subspace(rng, 2),
                                     random_standard_subspace(rng, 4))

    def test_antilinear_shape(self):
        self.assertEqual(random_antilinear(np.random.default_rng(2), 3).dim, 3)


if __name__ == "__main__":
    unittest.main()
