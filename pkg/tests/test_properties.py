"""Tests for qfiso/properties.py."""

# pylint: disable=missing-class-docstring, missing-function-docstring

import unittest

from qfiso.errors import ConfigError
from qfiso.galerkin import GridSpec
from qfiso.properties import (BoolProperty, FloatListProperty, FloatProperty, GridListProperty,
                              IntListProperty, IntProperty, PropertyContainer, StringProperty)


class ProbeConfig(PropertyContainer):
    mass = FloatProperty(min_value=0.0, max_value=10.0, default=1.0)
    trials = IntProperty(min_value=1, default=100)
    zero_mean = BoolProperty(default=False)
    label = StringProperty(allowed_values=['coarse', 'fine'], default='coarse')
    sizes = IntListProperty(min_value=1, default=(4, 8))
    masses = FloatListProperty(min_value=0.0, default=(1.0, 0.5))
    grids = GridListProperty(default=(GridSpec(128, 32.0),))


class TestPropertyContainer(unittest.TestCase):

    def test_defaults(self):
        cfg = ProbeConfig()
        self.assertEqual(cfg.mass, 1.0)
        self.assertEqual(cfg.get('trials'), 100)
        self.assertEqual(cfg['sizes'], (4, 8))
        self.assertEqual(cfg.grids, (GridSpec(128, 32.0),))

    def test_basic_set_get(self):
        cfg = ProbeConfig(mass=0.25, trials=3, zero_mean=True, label='fine')
        self.assertEqual(cfg.mass, 0.25)
        self.assertTrue(cfg.zero_mean)
        self.assertEqual(cfg.label, 'fine')

    def test_invalid_type(self):
        cfg = ProbeConfig()
        with self.assertRaises(TypeError):
            cfg['trials'] = 'many'
        with self.assertRaises(TypeError):
            cfg['trials'] = True
        with self.assertRaises(TypeError):
            cfg['sizes'] = '4, 8'

    def test_bounds_validation(self):
        with self.assertRaises(ValueError):
            ProbeConfig(mass=-1.0)
        with self.assertRaises(ValueError):
            ProbeConfig(sizes=(4, 0))
        with self.assertRaises(ValueError):
            ProbeConfig(sizes=())

    def test_int_converts_to_float(self):
        cfg = ProbeConfig(mass=2)
        self.assertIsInstance(cfg.mass, float)

    def test_allowed_string_values(self):
        with self.assertRaises(ValueError):
            ProbeConfig(label='medium')

    def test_unknown_kwargs(self):
        with self.assertRaises(AttributeError):
            ProbeConfig(temperature=3.0)

    def test_get_unknown_property_raises(self):
        cfg = ProbeConfig()
        with self.assertRaises(AttributeError):
            cfg.get('not_a_prop')
        with self.assertRaises(AttributeError):
            cfg.set('not_a_prop', 5)
        with self.assertRaises(AttributeError):
            cfg.parse('not_a_prop', '5')

    def test_inheritance(self):
        class ExtendedConfig(ProbeConfig):
            workers = IntProperty(min_value=1, default=2)

        cfg = ExtendedConfig(workers=4)
        self.assertEqual(cfg.workers, 4)
        self.assertEqual(cfg.mass, 1.0)
        self.assertEqual(ExtendedConfig.property_names()[-1], 'workers')

    def test_prevent_property_override(self):
        with self.assertRaises(TypeError):
            class BadConfig(ProbeConfig):  # pylint: disable=unused-variable
                trials = IntProperty(min_value=99)

    def test_class_access_gives_descriptor(self):
        self.assertIsInstance(ProbeConfig.mass, FloatProperty)
        self.assertEqual(ProbeConfig.mass.name, 'mass')
        self.assertEqual(ProbeConfig.sizes.item.name, 'sizes[]')

    def test_equality(self):
        self.assertEqual(ProbeConfig(), ProbeConfig())
        self.assertNotEqual(ProbeConfig(), ProbeConfig(trials=5))


class TestTextForm(unittest.TestCase):

    def test_render(self):
        cfg = ProbeConfig(zero_mean=True)
        self.assertEqual(cfg.render('mass'), '1.0')
        self.assertEqual(cfg.render('zero_mean'), 'true')
        self.assertEqual(cfg.render('sizes'), '4, 8')
        self.assertEqual(cfg.render('grids'), '128:32')

    def test_parse(self):
        cfg = ProbeConfig()
        cfg.parse('masses', '1, 0.5 ,0.25')
        cfg.parse('zero_mean', 'Yes')
        cfg.parse('grids', '64:16, 128:32')
        self.assertEqual(cfg.masses, (1.0, 0.5, 0.25))
        self.assertTrue(cfg.zero_mean)
        self.assertEqual(cfg.grids, (GridSpec(64, 16.0), GridSpec(128, 32.0)))

    def test_empty_text_gives_default(self):
        cfg = ProbeConfig(trials=7)
        cfg.parse('trials', '  ')
        self.assertEqual(cfg.trials, 100)

    def test_parse_errors(self):
        cfg = ProbeConfig()
        with self.assertRaises(ValueError):
            cfg.parse('zero_mean', 'maybe')
        with self.assertRaises(ValueError):
            cfg.parse('trials', '1.5')
        with self.assertRaises(ValueError):
            cfg.parse('trials', '0')
        with self.assertRaises(ConfigError):
            cfg.parse('grids', '64')
        with self.assertRaises(ValueError):
            cfg.parse('sizes', '4,,8')

    def test_render_parse_agree(self):
        cfg = ProbeConfig(mass=0.1, masses=(0.0625,), label='fine')
        other = ProbeConfig()
        for name in ProbeConfig.property_names():
            other.parse(name, cfg.render(name))
        self.assertEqual(cfg, other)


if __name__ == "__main__":
    unittest.main()
