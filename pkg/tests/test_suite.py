"""Tests for qfiso/suite.py."""

# pylint: disable=missing-class-docstring, missing-function-docstring

import io
import unittest

import pytest

from qfiso.errors import NonFactor
from qfiso.suite import SuiteResult, run_random_suite, write_summary


class TestSuiteResult(unittest.TestCase):

    def test_counts(self):
        result = SuiteResult(seed=3, trials=2)
        result.record('alpha', True)
        result.record('alpha', True)
        with self.assertLogs('qfiso', level='WARNING'):
            result.record('beta', False)
        result.check('beta', lambda: True)
        self.assertEqual(result.failures, 1)
        self.assertEqual(list(result.counts), ['alpha', 'beta'])
        self.assertEqual(result.summary(),
                         'seed 3, 2 trials\n'
                         'alpha  2/2  ok\n'
                         'beta   1/2  FAIL\n'
                         'failures: 1\n')

    def test_check_catches_library_errors(self):
        result = SuiteResult(seed=0, trials=1)

        def fails():
            raise NonFactor('1 in the spectrum')

        with self.assertLogs('qfiso', level='WARNING'):
            result.check('factor', fails)
        self.assertEqual(result.counts['factor'], [0, 1])

    def test_empty(self):
        self.assertEqual(SuiteResult(1, 1).summary(), 'seed 1, 1 trials\nfailures: 0\n')


class TestRandomSuite(unittest.TestCase):

    def test_passes_and_repeats(self):
        first = run_random_suite(seed=42, trials=3)
        second = run_random_suite(seed=42, trials=3)
        self.assertEqual(first.failures, 0)
        self.assertEqual(first.summary(), second.summary())
        self.assertIn('resolvent_sandwich', first.counts)
        self.assertEqual(first.counts['resolvent_sandwich'], [6, 6])
        self.assertEqual(first.counts['polar_reconstruction'], [3, 3])
        out = io.StringIO()
        write_summary(first, out)
        self.assertEqual(out.getvalue(), first.summary())

    @pytest.mark.slow
    def test_hundred_trials(self):
        result = run_random_suite(seed=42, trials=100)
        self.assertEqual(result.failures, 0, result.summary())
        for name in ('criteria_agree', 'adjoint_identity', 'resolvent_closed_form',
                     'half_one_plus_iR_spectrum', 'polar_reconstruction', 'polar_antiunitary'):
            self.assertEqual(result.counts[name], [100, 100], name)
        self.assertEqual(result.counts['resolvent_sandwich'], [200, 200])

    def test_trials_positive(self):
        with self.assertRaises(ValueError):
            run_random_suite(seed=1, trials=0)


if __name__ == "__main__":
    unittest.main()
