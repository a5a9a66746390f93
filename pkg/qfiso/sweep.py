"""Hilbert-Schmidt mass sweeps over Galerkin models and their CSV files"""

# pylint: disable=too-many-arguments,too-many-locals

from concurrent.futures import ThreadPoolExecutor
import csv
from dataclasses import astuple, dataclass, fields
import itertools
import math
from pathlib import Path
import time
from typing import Iterable, List, Optional, Sequence, TextIO

import numpy as np

from qfiso.common import DEFAULT_TOLERANCES, Tolerances, frobenius, trace_norm
from qfiso.errors import ConfigError, MassNegative, SweepTruncated
from qfiso.galerkin import BasisSpec, GridSpec, TransformCache
from qfiso.klein_gordon import (TraceProbeRow, build_kg_model, check_qdq_agreement,
                                mass_change_map, one_dim_trace_probe, tomita_norm)
from qfiso.logger import SUB_LOGGER
from qfiso.quasifree import ay_criterion, qdagger_q, resolvent_difference

LOGGER = SUB_LOGGER('sweep')

TRUNCATION_MARKER = '# truncated'


@dataclass(frozen=True)
class SweepRecord:
    """One row of the sweep CSV"""
    dim: int
    mass: float
    n_basis: str
    grid_points: int
    hs_1mQdQ: float  # pylint: disable=invalid-name
    hs_ay: float
    trace_1mQdQ: float  # pylint: disable=invalid-name
    hs_resolvent_m1: float
    cond_delta: float
    s_norm: float
    runtime_ms: float

    def sort_key(self):
        """(dim, mass descending, basis size, grid points)"""
        return (self.dim, -self.mass, _basis_order(self.n_basis), self.grid_points)


SWEEP_COLUMNS = tuple(f.name for f in fields(SweepRecord))


def _basis_order(label: str):
    parts = [int(p) for p in label.split('+')]
    return (sum(parts) if len(parts) > 1 else 2 * parts[0], parts)


@dataclass(frozen=True)
class SweepPoint:
    """Inputs of one sweep evaluation"""
    dim: int
    mass: float
    basis: BasisSpec
    grid: GridSpec
    zero_mean: bool = False
    reference_mass: float = 0.0


def evaluate_point(point: SweepPoint, cache: Optional[TransformCache] = None,
                   tol: Tolerances = DEFAULT_TOLERANCES) -> SweepRecord:
    """All norms of one (mass, basis, grid) point; InvariantFailure if the two routes
    to Q^dagger Q disagree"""
    started = time.perf_counter()
    model_m = build_kg_model(point.dim, point.mass, point.basis, point.grid, point.zero_mean,
                             cache, tol)
    model_0 = build_kg_model(point.dim, point.reference_mass, point.basis, point.grid,
                             point.zero_mean, cache, tol)
    symplecto = mass_change_map(model_m, model_0)
    check_qdq_agreement(model_m, model_0, symplecto, tol)
    defect = np.eye(symplecto.dim) - qdagger_q(symplecto)
    if model_m.subspace.factor and model_0.subspace.factor:
        hs_resolvent = resolvent_difference(symplecto, -1.0, tol).hs_norm
    else:
        LOGGER.info('d=%d m=%g n=%s: not a factor pair, no resolvent norm', point.dim,
                    point.mass, point.basis.label)
        hs_resolvent = math.nan
    values = model_m.subspace.modular.eigenvalues
    record = SweepRecord(
        dim=point.dim,
        mass=point.mass,
        n_basis=point.basis.label,
        grid_points=point.grid.points,
        hs_1mQdQ=frobenius(defect),
        hs_ay=ay_criterion(symplecto, tol).hs_norm,
        trace_1mQdQ=trace_norm(defect),
        hs_resolvent_m1=hs_resolvent,
        cond_delta=float(values[-1] / values[0]),
        s_norm=tomita_norm(model_m.subspace),
        runtime_ms=1000.0 * (time.perf_counter() - started),
    )
    LOGGER.debug('sweep point %s', record)
    return record


def sweep_points(dim: int, masses: Sequence[float], basis_sizes: Sequence[int],
                 grid_specs: Sequence[GridSpec], zero_mean: bool = False,
                 reference_mass: float = 0.0) -> List[SweepPoint]:
    """Cartesian product of the sweep parameters, in output order"""
    for mass in masses:
        if mass <= 0:
            raise MassNegative(f'sweep masses must be > 0, got {mass}')
    points = [SweepPoint(dim, float(mass), BasisSpec.square(size), grid, zero_mean,
                         reference_mass)
              for mass, size, grid in itertools.product(masses, basis_sizes, grid_specs)]
    return sorted(points, key=lambda p: (p.dim, -p.mass, p.basis.total, p.grid.points))


def hs_sweep(dim: int, masses: Sequence[float], basis_sizes: Sequence[int],
             grid_specs: Sequence[GridSpec], zero_mean: bool = False, workers: int = 1,
             cache: Optional[TransformCache] = None, reference_mass: float = 0.0,
             tol: Tolerances = DEFAULT_TOLERANCES) -> List[SweepRecord]:
    """Evaluate every point, in parallel when workers > 1; rows come back in
    (dim, mass desc, size, grid) order regardless of scheduling.

    Ctrl-C raises SweepTruncated with the rows that finished before the first
    unfinished one.
    """
    points = sweep_points(dim, masses, basis_sizes, grid_specs, zero_mean, reference_mass)
    cache = cache or TransformCache()
    LOGGER.info('sweep d=%d: %d points on %d workers', dim, len(points), workers)
    records: List[SweepRecord] = []
    executor = ThreadPoolExecutor(max_workers=max(1, workers), thread_name_prefix='sweep')
    futures = [executor.submit(evaluate_point, point, cache, tol) for point in points]
    completed = False
    try:
        for future in futures:
            records.append(future.result())
        completed = True
    except KeyboardInterrupt as ex:
        LOGGER.warning('sweep interrupted, %d of %d points done', len(records), len(points))
        raise SweepTruncated(records) from ex
    finally:
        executor.shutdown(wait=completed, cancel_futures=not completed)
    return sorted(records, key=SweepRecord.sort_key)


def _format(value) -> str:
    if isinstance(value, float):
        return f'{value:.12g}'
    return str(value)


def write_sweep_csv(file: TextIO, records: Iterable[SweepRecord], truncated: bool = False):
    """Header plus one row per record; a final marker line when truncated"""
    writer = csv.writer(file, lineterminator='\n')
    writer.writerow(SWEEP_COLUMNS)
    for record in records:
        writer.writerow([_format(v) for v in astuple(record)])
    if truncated:
        file.write(TRUNCATION_MARKER + '\n')


def read_sweep_csv(file: TextIO) -> List[SweepRecord]:
    """Records of a sweep CSV; ConfigError on a malformed header or row"""
    reader = csv.reader(line for line in file if not line.startswith('#'))
    header = next(reader, None)
    if header is None or tuple(h.strip() for h in header) != SWEEP_COLUMNS:
        raise ConfigError(f'bad sweep CSV header: {header}')
    records = []
    for number, row in enumerate(reader, start=2):
        if not row:
            continue
        try:
            values = dict(zip(SWEEP_COLUMNS, row, strict=True))
            records.append(SweepRecord(
                dim=int(values['dim']),
                mass=float(values['mass']),
                n_basis=values['n_basis'],
                grid_points=int(values['grid_points']),
                **{name: float(values[name]) for name in SWEEP_COLUMNS[4:]}))
        except ValueError as ex:
            raise ConfigError(f'bad sweep CSV row {number}: {ex}') from ex
    if not records:
        LOGGER.warning('sweep CSV has no data rows')
    return records


TRACE_PROBE_COLUMNS = ('n_basis', 'index', 'singular_value', 'cumulative_fraction')
TRACE_SUMMARY_COLUMNS = ('n_basis', 'trace_norm', 'tail_fraction')
TRACE_PROBE_NAME = 'trace_probe.csv'
TRACE_SUMMARY_NAME = 'trace_summary.csv'


def write_trace_probe_csv(file: TextIO, rows: Iterable[TraceProbeRow]):
    """Every singular value of every probe row"""
    writer = csv.writer(file, lineterminator='\n')
    writer.writerow(TRACE_PROBE_COLUMNS)
    for row in rows:
        for index, (value, fraction) in enumerate(zip(row.singular_values,
                                                      row.cumulative_fraction)):
            writer.writerow([row.n_basis, index, _format(float(value)),
                             _format(float(fraction))])


def write_trace_summary_csv(file: TextIO, rows: Iterable[TraceProbeRow]):
    """Trace norm and tail fraction per basis size"""
    writer = csv.writer(file, lineterminator='\n')
    writer.writerow(TRACE_SUMMARY_COLUMNS)
    for row in rows:
        writer.writerow([row.n_basis, _format(row.trace_norm), _format(row.tail_fraction)])


def run_kg_sweep(config) -> Path:
    """Sweep every configured dimension into [output] csv_name; d=1 zero-mean
    configurations also get the trace probe CSVs.

    Ctrl-C writes the finished rows plus the truncation marker and re-raises
    SweepTruncated with all of them.
    """
    section = config.sweep
    tol = config.tolerances()
    directory = config.output_directory()
    directory.mkdir(parents=True, exist_ok=True)
    cache = TransformCache(str(config.cache_directory()))
    target = directory / config.output.csv_name
    records: List[SweepRecord] = []
    try:
        for dim in section.dims:
            records.extend(hs_sweep(dim, section.masses, section.basis_sizes, section.grids,
                                    section.zero_mean, section.workers, cache, tol=tol))
    except SweepTruncated as ex:
        records.extend(ex.records)
        with open(target, 'w', newline='', encoding='utf-8') as file:
            write_sweep_csv(file, records, truncated=True)
        raise SweepTruncated(records) from ex
    records.sort(key=SweepRecord.sort_key)
    with open(target, 'w', newline='', encoding='utf-8') as file:
        write_sweep_csv(file, records)
    LOGGER.info('wrote %d rows to %s', len(records), target)

    if 1 in section.dims and section.zero_mean:
        grid = max(section.grids, key=lambda g: g.points)
        rows = one_dim_trace_probe(section.trace_sizes, section.trace_mass, grid, cache=cache,
                                   tol=tol)
        with open(directory / TRACE_PROBE_NAME, 'w', newline='', encoding='utf-8') as file:
            write_trace_probe_csv(file, rows)
        with open(directory / TRACE_SUMMARY_NAME, 'w', newline='', encoding='utf-8') as file:
            write_trace_summary_csv(file, rows)
    return target
