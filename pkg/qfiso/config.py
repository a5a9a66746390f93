"""Experiment configuration: an INI document with one property container per section"""

import configparser
import io
import os
from pathlib import Path
from typing import Dict, Optional, Type

from qfiso.common import DEFAULT_TOLERANCES, Tolerances
from qfiso.errors import ConfigError
from qfiso.galerkin import GridSpec
from qfiso.logger import SUB_LOGGER
from qfiso.properties import (BoolProperty, FloatListProperty, FloatProperty, GridListProperty,
                              IntListProperty, IntProperty, PropertyContainer, StringProperty)

LOGGER = SUB_LOGGER('config')

DEFAULT_MASSES = (1.0, 0.5, 0.25, 0.125, 0.0625)
CACHE_DIR_NAME = '.qfiso-cache'


class ModularSection(PropertyContainer):
    """[modular]"""
    spec_file = StringProperty(default='')


class SuiteSection(PropertyContainer):
    """[suite]"""
    seed = IntProperty(min_value=0, default=42)
    trials = IntProperty(min_value=1, default=100)


class SweepSection(PropertyContainer):
    """[sweep]"""
    dims = IntListProperty(min_value=1, max_value=4, default=(2,))
    masses = FloatListProperty(min_value=0.0, default=DEFAULT_MASSES)
    basis_sizes = IntListProperty(min_value=1, default=(4, 8))
    grids = GridListProperty(default=(GridSpec(128, 32.0), GridSpec(256, 64.0)))
    zero_mean = BoolProperty(default=False)
    workers = IntProperty(min_value=1, default=min(4, os.cpu_count() or 1))
    cache_dir = StringProperty(default='')
    trace_sizes = IntListProperty(min_value=1, default=(16, 32, 64))
    trace_mass = FloatProperty(min_value=0.0, default=1.0)


class KernelSection(PropertyContainer):
    """[kernel]"""
    dims = IntListProperty(min_value=1, max_value=4, default=(2,))
    masses = FloatListProperty(min_value=0.0, default=(1.0, 0.5, 0.25))
    radial_nodes = IntProperty(min_value=4, default=96)
    channels = IntProperty(min_value=4, default=128)
    radial_extent = FloatProperty(min_value=0.0, default=40.0)
    levels = IntProperty(min_value=2, default=2)
    rtol = FloatProperty(min_value=0.0, default=0.01)


class OutputSection(PropertyContainer):
    """[output]"""
    directory = StringProperty(default='qfiso-out')
    csv_name = StringProperty(default='sweep.csv')


class TolerancesSection(PropertyContainer):
    """[tolerances]"""
    real_orthonormal = FloatProperty(min_value=0.0, default=DEFAULT_TOLERANCES.real_orthonormal)
    involution = FloatProperty(min_value=0.0, default=DEFAULT_TOLERANCES.involution)
    eigen_one_scale = FloatProperty(min_value=0.0, default=DEFAULT_TOLERANCES.eigen_one_scale)
    psd_clip = FloatProperty(min_value=0.0, default=DEFAULT_TOLERANCES.psd_clip)
    identity = FloatProperty(min_value=0.0, default=DEFAULT_TOLERANCES.identity)
    conditioning = FloatProperty(min_value=1.0, default=DEFAULT_TOLERANCES.conditioning)


SECTIONS: Dict[str, Type[PropertyContainer]] = {
    'modular': ModularSection,
    'suite': SuiteSection,
    'sweep': SweepSection,
    'kernel': KernelSection,
    'output': OutputSection,
    'tolerances': TolerancesSection,
}


class ExperimentConfig:
    """All sections of an experiment; missing sections and keys take their defaults"""

    def __init__(self, **sections: PropertyContainer):
        unknown = set(sections) - set(SECTIONS)
        if unknown:
            raise ConfigError(f'unknown config sections {sorted(unknown)}')
        self.sections = {name: sections.get(name) or cls() for name, cls in SECTIONS.items()}

    def __getattr__(self, name):
        sections = self.__dict__.get('sections', {})
        if name in sections:
            return sections[name]
        raise AttributeError(name)

    def __eq__(self, other):
        return isinstance(other, ExperimentConfig) and self.sections == other.sections

    def __repr__(self):
        return f'ExperimentConfig({self.sections})'

    def tolerances(self) -> Tolerances:
        """Tolerances with the [tolerances] overrides applied"""
        overrides = self.sections['tolerances'].as_dict()
        return DEFAULT_TOLERANCES.override(**{k: v for k, v in overrides.items() if v is not None})

    def output_directory(self) -> Path:
        """[output] directory, user-expanded"""
        return Path(self.sections['output'].directory).expanduser()

    def cache_directory(self) -> Path:
        """[sweep] cache_dir, or .qfiso-cache under the output directory"""
        configured = self.sections['sweep'].cache_dir
        if configured:
            return Path(configured).expanduser()
        return self.output_directory() / CACHE_DIR_NAME

    def to_string(self) -> str:
        """INI text with every known key"""
        parser = configparser.ConfigParser(interpolation=None)
        for name, section in self.sections.items():
            parser[name] = {key: section.render(key) for key in section.property_names()}
        out = io.StringIO()
        parser.write(out)
        return out.getvalue()

    @classmethod
    def from_string(cls, text: str, source: str = '<string>') -> 'ExperimentConfig':
        """Parse INI text; ConfigError on unknown sections or keys and invalid values"""
        parser = configparser.ConfigParser(interpolation=None)
        try:
            parser.read_string(text, source=source)
        except configparser.Error as ex:
            raise ConfigError(f'{source}: {ex}') from ex
        sections = {}
        for name in parser.sections():
            if name not in SECTIONS:
                raise ConfigError(f'{source}: unknown section [{name}]')
            section = SECTIONS[name]()
            for key, value in parser[name].items():
                try:
                    section.parse(key, value)
                except AttributeError as ex:
                    raise ConfigError(f'{source}: unknown key {key!r} in [{name}]') from ex
                except (TypeError, ValueError) as ex:
                    raise ConfigError(f'{source}: [{name}] {key}: {ex}') from ex
            sections[name] = section
        config = cls(**sections)
        LOGGER.debug('loaded config from %s: %r', source, config)
        return config

    @classmethod
    def from_file(cls, path: Optional[str]) -> 'ExperimentConfig':
        """Defaults if path is None"""
        if path is None:
            return cls()
        with open(path, encoding='utf-8') as file:
            return cls.from_string(file.read(), source=str(path))
