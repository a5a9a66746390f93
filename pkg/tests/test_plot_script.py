"""Tests for qfiso/plot_script.py."""

# pylint: disable=missing-class-docstring, missing-function-docstring

import os
import tempfile
import unittest

from qfiso.errors import ConfigError
from qfiso.plot_script import emit_plot
from qfiso.sweep import SWEEP_COLUMNS, SweepRecord, write_sweep_csv


def _write_csv(path, records):
    with open(path, 'w', newline='', encoding='utf-8') as file:
        write_sweep_csv(file, records)


def _record(mass):
    values = {name: 0.5 for name in SWEEP_COLUMNS[4:]}
    return SweepRecord(dim=2, mass=mass, n_basis='4', grid_points=128, **values)


class TestEmitPlot(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()  # pylint: disable=consider-using-with
        self.csv_path = os.path.join(self.tmp.name, 'kg_sweep.csv')

    def tearDown(self):
        self.tmp.cleanup()

    def test_default_location(self):
        _write_csv(self.csv_path, [_record(1.0), _record(0.5)])
        script = emit_plot(self.csv_path)
        self.assertEqual(str(script), os.path.join(self.tmp.name, 'plot_kg_sweep.py'))
        text = script.read_text(encoding='utf-8')
        self.assertIn("CSV_PATH = os.path.join(HERE, 'kg_sweep.csv')", text)
        self.assertIn('import matplotlib.pyplot as plt', text)
        self.assertIn("fig.savefig(OUTPUT, bbox_inches='tight')", text)
        self.assertIn(r"r'$\|1 - Q^\dagger Q\|_2$'", text)
        self.assertNotIn('$csv', text)
        compile(text, str(script), 'exec')

    def test_custom_location(self):
        _write_csv(self.csv_path, [_record(1.0)])
        target = os.path.join(self.tmp.name, 'plots', 'mass.py')
        os.makedirs(os.path.dirname(target))
        script = emit_plot(self.csv_path, target)
        self.assertEqual(str(script), target)
        text = script.read_text(encoding='utf-8')
        relative = os.path.join('..', 'kg_sweep.csv')
        self.assertIn(f'CSV_PATH = os.path.join(HERE, {relative!r})', text)

    def test_empty_csv(self):
        _write_csv(self.csv_path, [])
        with self.assertLogs('qfiso', level='WARNING') as logs:
            emit_plot(self.csv_path)
        self.assertTrue(any('no data rows' in line for line in logs.output))

    def test_bad_header(self):
        with open(self.csv_path, 'w', encoding='utf-8') as file:
            file.write('mass,norm\n1,2\n')
        with self.assertRaises(ConfigError):
            emit_plot(self.csv_path)
        self.assertFalse(os.path.exists(os.path.join(self.tmp.name, 'plot_kg_sweep.py')))

    def test_missing_csv(self):
        with self.assertRaises(OSError):
            emit_plot(os.path.join(self.tmp.name, 'missing.csv'))


if __name__ == "__main__":
    unittest.main()
