"""Tests for qfiso/sweep.py."""

# pylint: disable=missing-class-docstring, missing-function-docstring

import dataclasses
import io
import math
import os
import tempfile
import unittest
from concurrent.futures import ThreadPoolExecutor
from unittest import mock

from qfiso.config import ExperimentConfig
from qfiso.errors import ConfigError, MassNegative, SweepTruncated
from qfiso.galerkin import GridSpec, TransformCache
from qfiso.sweep import (SWEEP_COLUMNS, TRACE_PROBE_NAME, TRACE_SUMMARY_NAME, TRUNCATION_MARKER,
                         SweepRecord, evaluate_point, hs_sweep, read_sweep_csv, run_kg_sweep,
                         sweep_points, write_sweep_csv)

GRID = GridSpec(16, 4.0)
HEADER = ('dim,mass,n_basis,grid_points,hs_1mQdQ,hs_ay,trace_1mQdQ,hs_resolvent_m1,'
          'cond_delta,s_norm,runtime_ms')


def _record(mass=1.0, n_basis='4', grid_points=128, dim=2, **values):
    fields = {name: 0.5 for name in SWEEP_COLUMNS[4:]}
    fields.update(values)
    return SweepRecord(dim=dim, mass=mass, n_basis=n_basis, grid_points=grid_points, **fields)


class TestPoints(unittest.TestCase):

    def test_order(self):
        points = sweep_points(2, [0.25, 1.0], [4, 2], [GridSpec(8, 2.0), GridSpec(4, 1.0)])
        keys = [(p.mass, p.basis.n_f, p.grid.points) for p in points]
        self.assertEqual(keys[0], (1.0, 2, 4))
        self.assertEqual(keys[-1], (0.25, 4, 8))
        self.assertEqual(len(points), 8)

    def test_positive_masses(self):
        with self.assertRaises(MassNegative):
            sweep_points(2, [1.0, 0.0], [2], [GRID])

    def test_record_order(self):
        records = [_record(0.5, '8'), _record(1.0, '8'), _record(1.0, '4+6'), _record(1.0, '4')]
        ordered = sorted(records, key=SweepRecord.sort_key)
        self.assertEqual([(r.mass, r.n_basis) for r in ordered],
                         [(1.0, '4'), (1.0, '4+6'), (1.0, '8'), (0.5, '8')])


class TestSweep(unittest.TestCase):

    def setUp(self):
        self.cache = TransformCache()

    def test_two_dim(self):
        records = hs_sweep(2, [0.5, 1.0], [2], [GRID], cache=self.cache)
        self.assertEqual([r.mass for r in records], [1.0, 0.5])
        for record in records:
            self.assertEqual(record.n_basis, '2')
            self.assertEqual(record.grid_points, 16)
            values = dataclasses.astuple(record)[4:]
            self.assertTrue(all(math.isfinite(v) for v in values), record)
            self.assertGreaterEqual(record.cond_delta, 1.0)
            self.assertGreaterEqual(record.trace_1mQdQ, record.hs_1mQdQ)
        self.assertGreater(records[0].hs_1mQdQ, records[1].hs_1mQdQ)

    def test_parallel_matches_serial(self):
        serial = hs_sweep(2, [1.0, 0.5, 0.25], [2, 3], [GRID], cache=self.cache)
        parallel = hs_sweep(2, [1.0, 0.5, 0.25], [2, 3], [GRID], workers=3, cache=self.cache)

        def strip(rows):
            return [dataclasses.replace(r, runtime_ms=0.0) for r in rows]

        self.assertEqual(strip(serial), strip(parallel))

    def test_interrupt_keeps_finished_points(self):
        finished = _record()
        calls = []

        def fake(point, _cache, _tol):
            calls.append(point)
            if len(calls) > 1:
                raise KeyboardInterrupt()
            return finished

        with mock.patch('qfiso.sweep.evaluate_point', side_effect=fake):
            with self.assertRaises(SweepTruncated) as ctx:
                hs_sweep(2, [1.0, 0.5], [2], [GRID])
        self.assertEqual(ctx.exception.records, [finished])

    def test_failing_point_shuts_the_pool_down(self):
        def fake(point, _cache, _tol):
            if point.mass < 1.0:
                raise RuntimeError('point failed')
            return _record()

        original = ThreadPoolExecutor.shutdown
        with mock.patch('qfiso.sweep.evaluate_point', side_effect=fake), \
                mock.patch.object(ThreadPoolExecutor, 'shutdown', autospec=True,
                                  side_effect=original) as shutdown:
            with self.assertRaises(RuntimeError):
                hs_sweep(2, [1.0, 0.5], [2], [GRID], workers=2)
        shutdown.assert_called_once_with(mock.ANY, wait=False, cancel_futures=True)

    def test_point_against_models(self):
        point = sweep_points(1, [1.0], [2], [GridSpec(64, 8.0)], zero_mean=True)[0]
        record = evaluate_point(point, self.cache)
        self.assertEqual(record.dim, 1)
        self.assertGreater(record.s_norm, 1.0)


class TestCsv(unittest.TestCase):

    def test_header(self):
        out = io.StringIO()
        write_sweep_csv(out, [])
        self.assertEqual(out.getvalue(), HEADER + '\n')

    def test_write_read(self):
        records = [_record(1.0, hs_1mQdQ=0.123456789012345), _record(0.5, hs_resolvent_m1=math.nan)]
        out = io.StringIO()
        write_sweep_csv(out, records, truncated=True)
        text = out.getvalue()
        self.assertTrue(text.endswith(TRUNCATION_MARKER + '\n'))
        self.assertIn('0.123456789012', text)
        back = read_sweep_csv(io.StringIO(text))
        self.assertEqual(len(back), 2)
        self.assertAlmostEqual(back[0].hs_1mQdQ, 0.123456789012, places=12)
        self.assertTrue(math.isnan(back[1].hs_resolvent_m1))

    def test_bad_header(self):
        with self.assertRaises(ConfigError):
            read_sweep_csv(io.StringIO('dim,mass\n2,1\n'))
        with self.assertRaises(ConfigError):
            read_sweep_csv(io.StringIO(''))

    def test_bad_row(self):
        with self.assertRaises(ConfigError):
            read_sweep_csv(io.StringIO(HEADER + '\n2,1.0,4,128,x,1,1,1,1,1,1\n'))
        with self.assertRaises(ConfigError):
            read_sweep_csv(io.StringIO(HEADER + '\n2,1.0,4\n'))

    def test_empty(self):
        with self.assertLogs('qfiso', level='WARNING'):
            self.assertEqual(read_sweep_csv(io.StringIO(HEADER + '\n')), [])


class TestRunSweep(unittest.TestCase):

    def _config(self, tmp, extra=''):
        return ExperimentConfig.from_string(f'''
[sweep]
dims = 1
masses = 1.0, 0.5
basis_sizes = 2
grids = 64:8
zero_mean = true
workers = 1
trace_sizes = 2, 3
[output]
directory = {tmp}
{extra}''')

    def test_writes_sweep_and_trace_files(self):
        with tempfile.TemporaryDirectory() as tmp:
            target = run_kg_sweep(self._config(tmp))
            with open(target, encoding='utf-8') as file:
                records = read_sweep_csv(file)
            self.assertEqual([r.mass for r in records], [1.0, 0.5])
            for name in (TRACE_PROBE_NAME, TRACE_SUMMARY_NAME):
                self.assertTrue(os.path.isfile(os.path.join(tmp, name)))
            with open(os.path.join(tmp, TRACE_SUMMARY_NAME), encoding='utf-8') as file:
                lines = file.read().splitlines()
            self.assertEqual(lines[0], 'n_basis,trace_norm,tail_fraction')
            self.assertEqual([line.split(',')[0] for line in lines[1:]], ['2', '3'])
            self.assertTrue(os.path.isdir(os.path.join(tmp, '.qfiso-cache')))

    def test_truncated_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            config = self._config(tmp)
            with mock.patch('qfiso.sweep.hs_sweep', side_effect=SweepTruncated([_record()])):
                with self.assertRaises(SweepTruncated) as ctx:
                    run_kg_sweep(config)
            self.assertEqual(len(ctx.exception.records), 1)
            with open(os.path.join(tmp, 'sweep.csv'), encoding='utf-8') as file:
                text = file.read()
            self.assertTrue(text.endswith(TRUNCATION_MARKER + '\n'))
            self.assertFalse(os.path.exists(os.path.join(tmp, TRACE_PROBE_NAME)))

    def test_reproducible(self):
        with tempfile.TemporaryDirectory() as tmp:
            config = self._config(tmp)
            first = run_kg_sweep(config).read_text(encoding='utf-8')
            second = run_kg_sweep(config).read_text(encoding='utf-8')

        def strip(text):
            return [line.rsplit(',', 1)[0] for line in text.splitlines()]

        self.assertEqual(strip(first), strip(second))
        self.assertEqual(len(strip(first)), 3)


if __name__ == "__main__":
    unittest.main()
