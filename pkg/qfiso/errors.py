"""Exceptions raised by qfiso"""

from qfiso.types import NotStandardReason


class QfisoError(Exception):
    """Base class of all qfiso errors"""


class ConditioningWarning(UserWarning):
    """Ill-conditioned modular operator; carried as a note, never raised"""


class RankDeficient(QfisoError, ValueError):
    """Vectors are (numerically) linearly dependent over the reals"""


class Singular(QfisoError, ValueError):
    """A matrix that must be invertible is numerically singular"""


class NotStandard(QfisoError, ValueError):
    """Generators do not span a standard subspace"""

    def __init__(self, reason: NotStandardReason, detail: str = ''):
        self.reason = reason
        message = str(reason)
        if detail:
            message = f'{message}: {detail}'
        super().__init__(message)


class NonFactor(QfisoError, ValueError):
    """Operation needs a factor subspace but 1 is in the spectrum of delta"""


class SpectrumAtOne(NonFactor):
    """coth(log(delta)/4) is singular: 1 is in the spectrum of delta"""


class SpectrumHit(QfisoError, ValueError):
    """Resolvent requested too close to the spectrum"""


class NotPSD(QfisoError):
    """A structurally positive matrix has a clearly negative eigenvalue"""


class MismatchWithDagger(QfisoError):
    """R1 Q^-1 R2^-1 Q differs from Q^dagger Q beyond tolerance"""


class DimensionMismatch(QfisoError, ValueError):
    """Operands live in spaces of different dimension"""


class ModelMismatch(QfisoError, ValueError):
    """Two Galerkin models are not discretized identically"""


class MassNegative(QfisoError, ValueError):
    """Klein-Gordon mass must be >= 0"""


class QuadratureNotConverged(QfisoError):
    """Successive quadrature levels disagree beyond the requested tolerance"""

    def __init__(self, message: str, values=None):
        self.values = values
        super().__init__(message)


class ExplicitlyUnsupported(QfisoError, ValueError):
    """Request outside the range where the underlying estimates hold"""


class InvariantFailure(QfisoError):
    """An identity that must hold failed beyond tolerance"""


class ConfigError(QfisoError, ValueError):
    """Invalid configuration, spec file or CSV input"""


class SweepTruncated(QfisoError):
    """Sweep interrupted; records holds the points finished so far, in output order"""

    def __init__(self, records):
        self.records = list(records)
        super().__init__(f'sweep interrupted after {len(self.records)} points')
