"""Loading of subspace spec files through registered loader plugins"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from qfiso.errors import ConfigError
from qfiso.hilbert import ComplexSpace
from qfiso.logger import SUB_LOGGER
from qfiso.standard_subspace import StandardSubspace, from_real_span

LOGGER = SUB_LOGGER('loader')


def parse_complex(text: str) -> complex:
    """'a+bi', 'a-bj', '-i', '2.5' ... as accepted by complex(), with i for j"""
    cleaned = text.strip().replace(' ', '')
    if not cleaned:
        raise ValueError('empty complex number')
    if cleaned.endswith('i'):
        cleaned = cleaned[:-1] + 'j'
    if 'i' in cleaned:
        raise ValueError(f"bad complex number '{text.strip()}'")
    return complex(cleaned)


@dataclass(frozen=True, eq=False)
class SubspaceSpec:
    """Generators of a real subspace of C^dim, as columns"""
    dim: int
    vectors: np.ndarray
    source: str = ''

    def __post_init__(self):
        if self.dim < 1:
            raise ConfigError(f'{self.source}: dimension must be positive, got {self.dim}')
        if self.vectors.ndim != 2 or self.vectors.shape[0] != self.dim:
            raise ConfigError(f'{self.source}: vectors must have {self.dim} entries each')

    @property
    def count(self) -> int:
        """Number of generators"""
        return self.vectors.shape[1]

    def subspace(self, tol=None) -> StandardSubspace:
        """from_real_span of the generators; NotStandard if they do not span a standard subspace"""
        args = () if tol is None else (tol,)
        return from_real_span(ComplexSpace(self.dim), self.vectors, *args)


class Loader(ABC):
    """Generic spec file loader"""
    _registry = []
    _loader_types = {}

    @classmethod
    def loader_types(cls):
        """Return registered loader types"""
        return list(cls._loader_types.keys())

    @classmethod
    @abstractmethod
    def load(cls, file: str) -> SubspaceSpec:
        """Load a SubspaceSpec from given file"""

    def __init_subclass__(cls, registered_types: list[str] = None, **kwargs):
        super().__init_subclass__(**kwargs)
        Loader._registry.append(cls)
        for type_ in registered_types or []:
            Loader._loader_types[type_] = cls

    @staticmethod
    def _expand(file: str) -> str:
        path = Path(file).expanduser()
        if path.is_file():
            return str(path)
        LOGGER.warning("Expanded '%s' to '%s' but it isn't a file, using original.", file, path)
        return file

    @classmethod
    def load_spec(cls, file: str) -> SubspaceSpec:
        """Load with the loader named by a type: prefix, or with the first one that works.

        Raises ConfigError when no loader can read the file.
        """
        import qfiso.loaders  # pylint: disable=import-outside-toplevel, unused-import

        type_, sep, file_id = file.partition(':')
        if sep and type_ in Loader._loader_types:
            file_id = cls._expand(file_id)
            LOGGER.debug("Trying loader type=%s with id=%s", type_, file_id)
            try:
                spec = Loader._loader_types[type_].load(file_id)
            except (OSError, ValueError) as ex:
                LOGGER.debug("Loader type=%s doesn't work: %s", type_, ex)
                raise ConfigError(f"Loader {type_} can't read {file_id}: {ex}") from ex
            LOGGER.debug("Success: %s", spec)
            return spec

        LOGGER.debug("Brute-forcing loaders for %s", file)
        file = cls._expand(file)
        if not Path(file).is_file():
            raise ConfigError(f'No such spec file: {file}')
        errors = []
        for loader_cls in Loader._registry:
            LOGGER.debug("Trying loader class: %s", loader_cls)
            try:
                spec = loader_cls.load(file)
                LOGGER.debug("Success: %s", spec)
                return spec
            except (OSError, ValueError) as ex:
                LOGGER.debug("Loader type=%s doesn't work: %s", loader_cls, ex)
                errors.append(f'{loader_cls.__name__}: {ex}')

        raise ConfigError(f"No loader can take {file} as input ({'; '.join(errors)})")
