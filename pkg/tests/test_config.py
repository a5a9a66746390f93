"""Tests for qfiso/config.py."""

# pylint: disable=missing-class-docstring, missing-function-docstring

import os
import tempfile
import unittest
from pathlib import Path

from qfiso.common import DEFAULT_TOLERANCES
from qfiso.config import DEFAULT_MASSES, ExperimentConfig, SweepSection
from qfiso.errors import ConfigError
from qfiso.galerkin import GridSpec


class TestDefaults(unittest.TestCase):

    def test_defaults(self):
        config = ExperimentConfig()
        self.assertEqual(config.suite.seed, 42)
        self.assertEqual(config.suite.trials, 100)
        self.assertEqual(config.sweep.masses, DEFAULT_MASSES)
        self.assertEqual(config.sweep.grids, (GridSpec(128, 32.0), GridSpec(256, 64.0)))
        self.assertEqual(config.kernel.masses, (1.0, 0.5, 0.25))
        self.assertEqual(config.tolerances(), DEFAULT_TOLERANCES)
        self.assertEqual(config.output_directory(), Path('qfiso-out'))
        self.assertEqual(config.cache_directory(), Path('qfiso-out') / '.qfiso-cache')

    def test_unknown_section_kwarg(self):
        with self.assertRaises(ConfigError):
            ExperimentConfig(plotting=SweepSection())

    def test_unknown_attribute(self):
        with self.assertRaises(AttributeError):
            _ = ExperimentConfig().plotting


class TestParsing(unittest.TestCase):

    def test_partial_document(self):
        config = ExperimentConfig.from_string('''
[sweep]
masses = 1, 0.5
grids = 64:16
zero_mean = yes
cache_dir = /tmp/transforms

[tolerances]
identity = 1e-6
''')
        self.assertEqual(config.sweep.masses, (1.0, 0.5))
        self.assertEqual(config.sweep.grids, (GridSpec(64, 16.0),))
        self.assertTrue(config.sweep.zero_mean)
        self.assertEqual(config.sweep.basis_sizes, (4, 8))
        self.assertEqual(config.tolerances().identity, 1e-6)
        self.assertEqual(config.tolerances().rank, DEFAULT_TOLERANCES.rank)
        self.assertEqual(config.cache_directory(), Path('/tmp/transforms'))

    def test_round_trip(self):
        config = ExperimentConfig.from_string('[suite]\nseed = 7\n[output]\ncsv_name = d2.csv\n')
        again = ExperimentConfig.from_string(config.to_string())
        self.assertEqual(again, config)
        self.assertEqual(again.suite.seed, 7)
        self.assertEqual(ExperimentConfig.from_string(ExperimentConfig().to_string()),
                         ExperimentConfig())

    def test_every_key_is_written(self):
        text = ExperimentConfig().to_string()
        for key in ('[modular]', 'spec_file =', 'trace_sizes = 16, 32, 64', 'rtol = 0.01',
                    'grids = 128:32, 256:64', 'conditioning = 1000000000000.0'):
            self.assertIn(key, text)

    def test_unknown_section(self):
        with self.assertRaises(ConfigError) as ctx:
            ExperimentConfig.from_string('[plot]\nwidth = 3\n', source='exp.ini')
        self.assertIn('exp.ini', str(ctx.exception))

    def test_unknown_key(self):
        with self.assertRaises(ConfigError) as ctx:
            ExperimentConfig.from_string('[suite]\nsed = 3\n')
        self.assertIn('sed', str(ctx.exception))

    def test_bad_values(self):
        for text in ('[suite]\ntrials = 0\n', '[suite]\nseed = x\n', '[sweep]\ndims = 5\n',
                     '[sweep]\ngrids = 128\n', '[sweep]\nzero_mean = perhaps\n',
                     '[sweep]\nmasses = 1,,2\n'):
            with self.assertRaises(ConfigError, msg=text):
                ExperimentConfig.from_string(text)

    def test_syntax_error(self):
        with self.assertRaises(ConfigError):
            ExperimentConfig.from_string('seed = 1\n')

    def test_from_file(self):
        self.assertEqual(ExperimentConfig.from_file(None), ExperimentConfig())
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'exp.ini')
            with open(path, 'w', encoding='utf-8') as file:
                file.write('[kernel]\ndims = 2, 3\n')
            self.assertEqual(ExperimentConfig.from_file(path).kernel.dims, (2, 3))
            with self.assertRaises(OSError):
                ExperimentConfig.from_file(os.path.join(tmp, 'missing.ini'))


if __name__ == "__main__":
    unittest.main()
