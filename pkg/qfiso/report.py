"""Text report of the modular data of a standard subspace read from a spec file"""

from typing import List, TextIO, Tuple

import numpy as np

from qfiso.common import DEFAULT_TOLERANCES, Tolerances
from qfiso.errors import QfisoError
from qfiso.loader import Loader, SubspaceSpec
from qfiso.logger import SUB_LOGGER
from qfiso.standard_subspace import (StandardSubspace, check_modular_invariance,
                                     modular_residuals, symplectic_complement,
                                     theta_gamma_identity)

LOGGER = SUB_LOGGER('report')

RESIDUAL_LIMIT = 1e-9


def _format_vector(vector: np.ndarray) -> str:
    return ', '.join(f'{z.real:+.10g}{z.imag:+.10g}i' for z in vector)


def _checks(subspace: StandardSubspace) -> List[Tuple[str, bool, str]]:
    rows = [(name, value <= RESIDUAL_LIMIT, f'{value:.3e}')
            for name, value in modular_residuals(subspace).items()]
    for name, check in (('modular_invariance', check_modular_invariance),
                        ('theta_gamma_identity', theta_gamma_identity)):
        try:
            rows.append((name, check(subspace), ''))
        except QfisoError as ex:
            rows.append((name, False, str(ex)))
    return rows


def run_modular_report(spec: SubspaceSpec, out: TextIO,
                       tol: Tolerances = DEFAULT_TOLERANCES) -> bool:
    """Write the report; True iff every check passed. NotStandard propagates."""
    subspace = spec.subspace(tol)
    mod = subspace.modular
    values = mod.eigenvalues
    theta = np.linalg.eigvalsh(mod.theta.matrix)
    gamma = np.linalg.eigvalsh(mod.gamma.matrix)
    out.write(f'source: {spec.source or "-"}\n')
    out.write(f'dimension: {subspace.dim}\n')
    out.write('standard: true\n')
    out.write(f'factor: {str(subspace.factor).lower()}\n')
    out.write(f'fixed space dimension: {subspace.fixed_space.shape[1]}\n')
    out.write('delta spectrum: ' + ', '.join(f'{v:.10g}' for v in values) + '\n')
    out.write('theta spectrum: ' + ', '.join(f'{v:.10g}' for v in theta) + '\n')
    out.write('gamma spectrum: ' + ', '.join(f'{v:.10g}' for v in gamma) + '\n')
    out.write(f'|R|: {np.linalg.norm(mod.R.matrix, 2):.10g}\n')
    out.write(f'|s|: {np.sqrt(values[-1]):.10g}\n')
    for note in mod.notes:
        out.write(f'note: {note}\n')
    out.write("K' basis:\n")
    complement = symplectic_complement(subspace)
    for column in complement.basis.T:
        out.write(f'  {_format_vector(column)}\n')
    out.write('checks:\n')
    passed = True
    for name, ok, detail in _checks(subspace):
        passed &= bool(ok)
        suffix = f' ({detail})' if detail else ''
        out.write(f'  {name}: {"pass" if ok else "FAIL"}{suffix}\n')
    LOGGER.info('modular report for %s: %s', spec.source, 'pass' if passed else 'failures')
    return passed


def modular_report_from_file(file: str, out: TextIO,
                             tol: Tolerances = DEFAULT_TOLERANCES) -> bool:
    """run_modular_report on a spec file given as path or type:path"""
    return run_modular_report(Loader.load_spec(file), out, tol)
