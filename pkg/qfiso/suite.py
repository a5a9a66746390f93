"""Seeded random suite over the modular and quasi-free identities"""

# pylint: disable=too-many-locals

from collections import OrderedDict
from typing import Callable, Dict, TextIO

import numpy as np

from qfiso.common import DEFAULT_TOLERANCES, Tolerances, relative_error
from qfiso.errors import QfisoError
from qfiso.graph_space import apply_coefficients, graph_inner, graph_metric, half_one_plus_i_r
from qfiso.hilbert import antilinear_polar
from qfiso.logger import SUB_LOGGER
from qfiso.quasifree import (abs_defect, ay_criterion, check_symplectomorphism, factor_criterion,
                             factor_product, resolvent_difference)
from qfiso.sampling import random_antilinear, random_standard_subspace, random_symplectomorphism
from qfiso.standard_subspace import (check_modular_invariance, modular_residuals,
                                     theta_gamma_identity)

LOGGER = SUB_LOGGER('suite')

MODULAR_LIMIT = 1e-9
CRITERION_LIMIT = 1e-8
MAX_DIM = 8
SANDWICH_POINTS = (-2.0, -1.0 + 2.0j)


class SuiteResult:
    """Pass/total counters per invariant, in first-seen order"""

    def __init__(self, seed: int, trials: int):
        self.seed = seed
        self.trials = trials
        self.counts: Dict[str, list] = OrderedDict()

    def record(self, name: str, passed: bool):
        """Count one evaluation of an invariant"""
        counter = self.counts.setdefault(name, [0, 0])
        counter[0] += int(bool(passed))
        counter[1] += 1
        if not passed:
            LOGGER.warning('invariant %s failed (seed %d)', name, self.seed)

    def check(self, name: str, func: Callable[[], bool]):
        """Record func(); raising a QfisoError counts as a failure"""
        try:
            passed = bool(func())
        except QfisoError as ex:
            LOGGER.debug('invariant %s raised %s', name, ex)
            passed = False
        self.record(name, passed)

    @property
    def failures(self) -> int:
        """Number of failed evaluations over all invariants"""
        return sum(total - ok for ok, total in self.counts.values())

    def summary(self) -> str:
        """Deterministic text summary"""
        width = max((len(name) for name in self.counts), default=0)
        lines = [f'seed {self.seed}, {self.trials} trials']
        for name, (ok, total) in self.counts.items():
            status = 'ok' if ok == total else 'FAIL'
            lines.append(f'{name:<{width}}  {ok}/{total}  {status}')
        lines.append(f'failures: {self.failures}')
        return '\n'.join(lines) + '\n'


def _random_vector(rng: np.random.Generator, dim: int) -> np.ndarray:
    return rng.standard_normal(dim) + 1j * rng.standard_normal(dim)


def _modular_trial(result: SuiteResult, rng: np.random.Generator, tol: Tolerances):
    dim = int(rng.integers(1, MAX_DIM + 1))
    subspace = random_standard_subspace(rng, dim, tol=tol)
    for name, value in modular_residuals(subspace).items():
        result.record(name, value <= MODULAR_LIMIT)
    result.check('modular_invariance', lambda: check_modular_invariance(subspace))
    result.check('theta_gamma_identity', lambda: theta_gamma_identity(subspace, MODULAR_LIMIT))

    x, y = _random_vector(rng, dim), _random_vector(rng, dim)
    represented = apply_coefficients(subspace, half_one_plus_i_r(subspace), y)
    lhs = graph_inner(subspace, x, represented)
    rhs = complex(np.vdot(x, y))
    result.record('graph_representation',
                  abs(lhs - rhs) <= MODULAR_LIMIT * max(1.0, np.linalg.norm(x) * np.linalg.norm(y)))
    whitened = graph_metric(subspace).whiten(half_one_plus_i_r(subspace))
    spectrum = np.linalg.eigvalsh(0.5 * (whitened + whitened.conj().T))
    result.record('half_one_plus_iR_spectrum',
                  spectrum[0] >= 0.0 and spectrum[-1] <= 1.0 + 1e-10)

    polar = antilinear_polar(random_antilinear(rng, dim), tol)
    result.record('polar_reconstruction', polar.residuals['reconstruction'] <= MODULAR_LIMIT)
    result.record('polar_antiunitary', polar.residuals['antiunitary'] <= MODULAR_LIMIT)


def _factor_pair_trial(result: SuiteResult, rng: np.random.Generator, tol: Tolerances):
    dim = 2 * int(rng.integers(1, MAX_DIM // 2 + 1))
    first = random_standard_subspace(rng, dim, factor=True, tol=tol)
    second = random_standard_subspace(rng, dim, factor=True, tol=tol)
    symplecto = random_symplectomorphism(rng, first, second)
    result.check('symplectomorphism', lambda: check_symplectomorphism(symplecto, tol))
    result.check('adjoint_identity', lambda: factor_product(symplecto, tol) is not None)
    result.check('criteria_agree', lambda: relative_error(
        ay_criterion(symplecto, tol).operator_matrix,
        factor_criterion(symplecto, tol).operator_matrix) <= CRITERION_LIMIT)
    result.check('resolvent_closed_form',
                 lambda: resolvent_difference(symplecto, -1.0, tol) is not None)
    for point in SANDWICH_POINTS:
        result.check('resolvent_sandwich',
                     lambda point=point: resolvent_difference(symplecto, point, tol) is not None)
    result.check('abs_defect', lambda: abs_defect(symplecto, tol) is not None)


def run_random_suite(seed: int, trials: int,
                     tol: Tolerances = DEFAULT_TOLERANCES) -> SuiteResult:
    """Run trials rounds of every invariant family from one seed"""
    if trials < 1:
        raise ValueError(f'trials must be >= 1, got {trials}')
    rng = np.random.default_rng(seed)
    result = SuiteResult(seed, trials)
    for trial in range(trials):
        _modular_trial(result, rng, tol)
        _factor_pair_trial(result, rng, tol)
        LOGGER.debug('trial %d done, %d failures so far', trial, result.failures)
    LOGGER.info('suite seed=%d trials=%d: %d failures', seed, trials, result.failures)
    return result


def write_summary(result: SuiteResult, out: TextIO):
    """Write the summary text"""
    out.write(result.summary())
